#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "jform/errors.hpp"
#include "jform/mpoly.hpp"
#include "jform/rational.hpp"

namespace jform {

// Truncated Fourier expansion sum a(n,l) q^(n/24) zeta^(l/2), indexed by the
// integer pair (n24, l2).  Coefficients with n24 < qtrunc are exact; nothing
// is known beyond.  C is the coefficient ring: Rational for concrete series,
// MPoly for series whose coefficients depend on the coordinates (a, b, c).
//
// weight2/index2 carry 2*(weight) and 2*(index) when known.  Arithmetic
// reconciles them: sums keep a tag only when both operands agree, products
// add tags only when both operands carry them.
template <class C>
class Series {
public:
    using Key = std::pair<long, long>;
    using CoeffMap = std::map<Key, C>;

    std::optional<int> weight2;
    std::optional<int> index2;

    Series() = default;
    explicit Series(long qtrunc) : qtrunc_(qtrunc) {}
    static Series zero(long qtrunc) { return Series(qtrunc); }
    static Series constant(const C& v, long qtrunc) {
        Series s(qtrunc);
        s.set(0, 0, v);
        return s;
    }

    long qtrunc() const { return qtrunc_; }
    const CoeffMap& coeffs() const { return coeffs_; }

    void set(long n24, long l2, const C& v) {
        if (n24 >= qtrunc_) throw std::logic_error("Series::set: beyond truncation");
        if (v.is_zero())
            coeffs_.erase(Key{n24, l2});
        else
            coeffs_[Key{n24, l2}] = v;
    }
    void add_to(long n24, long l2, const C& v) {
        if (n24 >= qtrunc_) throw std::logic_error("Series::add_to: beyond truncation");
        if (v.is_zero()) return;
        auto [it, fresh] = coeffs_.emplace(Key{n24, l2}, v);
        if (!fresh) {
            it->second = it->second + v;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    const C& coefficient(long n24, long l2) const {
        if (n24 >= qtrunc_)
            throw TruncationExceeded("Series: coefficient q^(" + std::to_string(n24) +
                                     "/24) is beyond the truncation window");
        auto it = coeffs_.find(Key{n24, l2});
        return it == coeffs_.end() ? zero_coeff() : it->second;
    }

    // All (l2 -> coefficient) entries of one q-slice.
    std::map<long, C> qslice(long n24) const {
        if (n24 >= qtrunc_)
            throw TruncationExceeded("Series: q-slice beyond the truncation window");
        std::map<long, C> out;
        for (auto it = coeffs_.lower_bound(Key{n24, LONG_MIN}); it != coeffs_.end() && it->first.first == n24; ++it)
            out[it->first.second] = it->second;
        return out;
    }

    // Smallest n24 carrying a nonzero coefficient; qtrunc when none is known.
    long minord() const { return coeffs_.empty() ? qtrunc_ : coeffs_.begin()->first.first; }

    bool is_zero_through(long n24max) const {
        if (n24max >= qtrunc_)
            throw InsufficientTruncation("Series: vanishing requested through q^(" +
                                         std::to_string(n24max) + "/24) but truncation is " +
                                         std::to_string(qtrunc_));
        return coeffs_.empty() || coeffs_.begin()->first.first > n24max;
    }

    std::optional<std::tuple<long, long, C>> first_nonzero() const {
        if (coeffs_.empty()) return std::nullopt;
        const auto& [key, v] = *coeffs_.begin();
        return std::tuple<long, long, C>{key.first, key.second, v};
    }

    Series operator-() const {
        Series r = *this;
        for (auto& [k, v] : r.coeffs_) v = -v;
        return r;
    }
    friend Series operator+(const Series& x, const Series& y) {
        Series r(std::min(x.qtrunc_, y.qtrunc_));
        r.weight2 = reconcile(x.weight2, y.weight2);
        r.index2 = reconcile(x.index2, y.index2);
        for (const auto& [k, v] : x.coeffs_)
            if (k.first < r.qtrunc_) r.coeffs_[k] = v;
        for (const auto& [k, v] : y.coeffs_)
            if (k.first < r.qtrunc_) r.add_raw(k, v);
        return r;
    }
    friend Series operator-(const Series& x, const Series& y) { return x + (-y); }
    friend Series operator*(const Series& x, const Series& y) {
        // The unknown tail of either factor first pollutes order minord(x)+qtrunc(y)
        // (resp. the mirror), so the product is reliable strictly below both.
        Series r(std::min(x.minord() + y.qtrunc_, y.minord() + x.qtrunc_));
        r.weight2 = add_tags(x.weight2, y.weight2);
        r.index2 = add_tags(x.index2, y.index2);
        for (const auto& [kx, vx] : x.coeffs_) {
            if (kx.first >= r.qtrunc_) break;
            for (const auto& [ky, vy] : y.coeffs_) {
                if (kx.first + ky.first >= r.qtrunc_) break;
                r.add_raw(Key{kx.first + ky.first, kx.second + ky.second}, vx * vy);
            }
        }
        return r;
    }

    Series scaled(const C& k) const {
        Series r(qtrunc_);
        r.weight2 = weight2;
        r.index2 = index2;
        if (k.is_zero()) return r;
        for (const auto& [key, v] : coeffs_) {
            C w = v * k;
            if (!w.is_zero()) r.coeffs_[key] = w;
        }
        return r;
    }

    // Forget everything from q^(new_trunc/24) on.
    Series clipped(long new_trunc) const {
        if (new_trunc > qtrunc_)
            throw InsufficientTruncation("Series: cannot extend truncation by clipping");
        Series r(new_trunc);
        r.weight2 = weight2;
        r.index2 = index2;
        for (const auto& [k, v] : coeffs_) {
            if (k.first >= new_trunc) break;
            r.coeffs_[k] = v;
        }
        return r;
    }

    // z -> s*z: l2 scales by s, the index picks up s^2.
    Series scale_z(long s) const {
        if (s == 0) throw std::domain_error("Series::scale_z: zero scale");
        Series r(qtrunc_);
        r.weight2 = weight2;
        if (index2) r.index2 = static_cast<int>(*index2 * s * s);
        for (const auto& [k, v] : coeffs_) r.coeffs_[Key{k.first, k.second * s}] = v;
        return r;
    }

    // z -> 0: collapse each q-slice; the result is a plain q-series.
    Series eval_z0() const {
        Series r(qtrunc_);
        r.weight2 = weight2;
        for (const auto& [k, v] : coeffs_) r.add_raw(Key{k.first, 0}, v);
        return r;
    }

    friend bool operator==(const Series& x, const Series& y) {
        return x.qtrunc_ == y.qtrunc_ && x.coeffs_ == y.coeffs_;
    }

private:
    static const C& zero_coeff() {
        static const C z{};
        return z;
    }
    static std::optional<int> reconcile(std::optional<int> a, std::optional<int> b) {
        if (a && b && *a == *b) return a;
        return std::nullopt;
    }
    static std::optional<int> add_tags(std::optional<int> a, std::optional<int> b) {
        if (a && b) return *a + *b;
        return std::nullopt;
    }
    void add_raw(const Key& k, const C& v) {
        auto [it, fresh] = coeffs_.emplace(k, v);
        if (!fresh) {
            it->second = it->second + v;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    CoeffMap coeffs_;
    long qtrunc_ = 0;
};

using FourierSeries = Series<Rational>;
using ParamSeries = Series<MPoly>;

// Exact quotient x / y, dividing q-slice by q-slice as Laurent polynomials in
// zeta^(1/2).  Throws NonExactDivision if any slice leaves a remainder.
FourierSeries div_exact(const FourierSeries& x, const FourierSeries& y);

ParamSeries to_param(const FourierSeries& x);

}  // namespace jform
