#include "jform/series.hpp"

#include <algorithm>

namespace jform {

namespace {

// Exact division of Laurent polynomials in zeta^(1/2) (maps l2 -> coeff).
// Returns the quotient; throws NonExactDivision on a nonzero remainder.
std::map<long, Rational> laurent_div(std::map<long, Rational> t, const std::map<long, Rational>& y) {
    std::map<long, Rational> q;
    if (t.empty()) return q;
    const long dmax = y.rbegin()->first;
    const Rational& dlead = y.rbegin()->second;
    while (!t.empty()) {
        const long tmax = t.rbegin()->first;
        const long tmin = t.begin()->first;
        const long ymin = y.begin()->first;
        // A remainder narrower than the divisor's span can never be cleared:
        // subtracting any multiple of y would push terms below tmin forever.
        if (tmax - tmin < dmax - ymin)
            throw NonExactDivision("div_exact: nonzero remainder in a q-slice");
        const long shift = tmax - dmax;
        const Rational f = t.rbegin()->second / dlead;
        q[shift] = f;
        for (const auto& [l, c] : y) {
            auto it = t.emplace(l + shift, Rational(0)).first;
            it->second -= f * c;
            if (it->second.is_zero()) t.erase(it);
        }
    }
    return q;
}

std::optional<int> sub_tags(std::optional<int> a, std::optional<int> b) {
    if (a && b) return *a - *b;
    return std::nullopt;
}

}  // namespace

FourierSeries div_exact(const FourierSeries& x, const FourierSeries& y) {
    if (y.coeffs().empty())
        throw NonExactDivision("div_exact: divisor has no known nonzero coefficient");
    const long ymin = y.minord();
    const long xmin = x.minord();
    const long rmin = xmin - ymin;
    // Computing the quotient at q-order n consumes x at n+ymin and y up to
    // n+ymin-rmin, which bounds the reliable window from both sides.
    const long rtrunc = std::min(x.qtrunc() - ymin, y.qtrunc() + rmin - ymin);

    FourierSeries r(rtrunc);
    r.weight2 = sub_tags(x.weight2, y.weight2);
    r.index2 = sub_tags(x.index2, y.index2);
    if (x.coeffs().empty()) return r;
    if (rtrunc <= rmin) {
        if (rtrunc <= 0 && x.qtrunc() > 0)
            throw InsufficientTruncation("div_exact: operands too short for any quotient term");
        return r;
    }

    const std::map<long, Rational> ylow = y.qslice(ymin);
    for (long n = rmin; n < rtrunc; ++n) {
        std::map<long, Rational> target = x.qslice(n + ymin);
        for (const auto& [ky, vy] : y.coeffs()) {
            const long m = n + ymin - ky.first;
            if (m >= n) continue;  // only earlier quotient slices contribute
            if (m < rmin) break;   // y keys ascend, so m only shrinks further
            for (const auto& [lr, cr] : r.qslice(m)) {
                auto it = target.emplace(lr + ky.second, Rational(0)).first;
                it->second -= cr * vy;
                if (it->second.is_zero()) target.erase(it);
            }
        }
        for (const auto& [l, c] : laurent_div(std::move(target), ylow)) r.set(n, l, c);
    }
    return r;
}

ParamSeries to_param(const FourierSeries& x) {
    ParamSeries r(x.qtrunc());
    r.weight2 = x.weight2;
    r.index2 = x.index2;
    for (const auto& [k, v] : x.coeffs()) r.set(k.first, k.second, MPoly(v));
    return r;
}

}  // namespace jform
