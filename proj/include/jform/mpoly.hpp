#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "jform/errors.hpp"
#include "jform/rational.hpp"

namespace jform {

// Exponent triple for the fixed coordinate variables (a, b, c).
struct Monomial {
    std::array<int, 3> e{0, 0, 0};
    int degree() const { return e[0] + e[1] + e[2]; }
    friend bool operator==(const Monomial& x, const Monomial& y) { return x.e == y.e; }
};

// Graded-lex with a > b > c; "greater" so that map iteration starts at the
// leading term.
struct MonomialGreater {
    bool operator()(const Monomial& x, const Monomial& y) const {
        if (x.degree() != y.degree()) return x.degree() > y.degree();
        return x.e > y.e;
    }
};

struct MPolyParts;

// Polynomial in (a, b, c) with exact rational coefficients.  Invariant: the
// term map never stores a zero coefficient.
class MPoly {
public:
    using TermMap = std::map<Monomial, Rational, MonomialGreater>;
    static constexpr std::array<const char*, 3> kVarNames{"a", "b", "c"};

    MPoly() = default;
    MPoly(const Rational& c) { if (!c.is_zero()) terms_[Monomial{}] = c; }  // NOLINT
    MPoly(long c) : MPoly(Rational(c)) {}                                   // NOLINT
    static MPoly variable(int i) {
        MPoly p;
        Monomial m;
        m.e[static_cast<size_t>(i)] = 1;
        p.terms_[m] = Rational(1);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
    }
    Rational constant_value() const {
        if (is_zero()) return Rational(0);
        if (!is_constant()) throw std::domain_error("MPoly: not a constant");
        return terms_.begin()->second;
    }
    int degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }
    bool is_homogeneous() const {
        for (const auto& [m, c] : terms_)
            if (m.degree() != degree()) return false;
        return true;
    }
    Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational leading_coeff() const {
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MPoly operator-() const {
        MPoly r;
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    MPoly& operator+=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MPoly operator+(MPoly x, const MPoly& y) { return x += y; }
    friend MPoly operator-(MPoly x, const MPoly& y) { return x -= y; }
    friend MPoly operator*(const MPoly& x, const MPoly& y) {
        MPoly r;
        for (const auto& [mx, cx] : x.terms_)
            for (const auto& [my, cy] : y.terms_) {
                Monomial m;
                for (int i = 0; i < 3; ++i) m.e[i] = mx.e[i] + my.e[i];
                r.add_term(m, cx * cy);
            }
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    MPoly& operator*=(const Rational& c) {
        if (c.is_zero()) { terms_.clear(); return *this; }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend MPoly operator*(MPoly x, const Rational& c) { return x *= c; }
    friend MPoly operator*(const Rational& c, MPoly x) { return x *= c; }
    friend bool operator==(const MPoly& x, const MPoly& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const MPoly& x, const MPoly& y) { return !(x == y); }

    MPoly pow(int n) const;
    Rational eval(const std::array<Rational, 3>& at) const;
    // Substitute polynomials for all three variables at once.
    MPoly compose(const std::array<MPoly, 3>& repl) const;
    MPoly substitute(int var, const MPoly& repl) const {
        std::array<MPoly, 3> repl3{variable(0), variable(1), variable(2)};
        repl3[static_cast<size_t>(var)] = repl;
        return compose(repl3);
    }

    // content * primitive == *this, with primitive having coprime integer
    // coefficients and positive leading coefficient (graded-lex a > b > c).
    MPolyParts primitive() const;

    std::string str() const;

private:
    TermMap terms_;
};

struct MPolyParts {
    Rational content;
    MPoly poly;
};

// Exact polynomial quotient num/den (graded-lex leading-term division);
// throws NonExactDivision when num is not a polynomial multiple of den.
MPoly divide_exact(const MPoly& num, const MPoly& den);

// Rational function num/den in (a, b, c).  Canonical shape: den is integer,
// primitive, with positive leading coefficient; zero is 0/1.  num and den are
// not reduced to lowest terms (no multivariate gcd); equality is tested by
// cross-multiplication.
class RatFun {
public:
    RatFun() : num_(), den_(1) {}
    RatFun(const Rational& c) : num_(c), den_(1) {}  // NOLINT
    RatFun(long c) : num_(Rational(c)), den_(1) {}   // NOLINT
    RatFun(const MPoly& p) : num_(p), den_(1) {}     // NOLINT
    RatFun(MPoly num, MPoly den) { assign(std::move(num), std::move(den)); }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RatFun operator-() const { return already_canonical(-num_, den_); }
    friend RatFun operator+(const RatFun& x, const RatFun& y) {
        return RatFun(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
    }
    friend RatFun operator-(const RatFun& x, const RatFun& y) {
        return RatFun(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
    }
    friend RatFun operator*(const RatFun& x, const RatFun& y) {
        return RatFun(x.num_ * y.num_, x.den_ * y.den_);
    }
    friend RatFun operator/(const RatFun& x, const RatFun& y) {
        if (y.is_zero()) throw std::domain_error("RatFun: division by zero");
        return RatFun(x.num_ * y.den_, x.den_ * y.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    friend bool operator==(const RatFun& x, const RatFun& y) {
        return x.num_ * y.den_ == y.num_ * x.den_;
    }
    friend bool operator!=(const RatFun& x, const RatFun& y) { return !(x == y); }

    // The exact constant this function equals, if it is one.
    std::optional<Rational> as_rational() const {
        if (num_.is_zero()) return Rational(0);
        Rational c = num_.leading_coeff() / den_.leading_coeff();
        if (num_ == den_ * c) return c;
        return std::nullopt;
    }

    Rational eval(const std::array<Rational, 3>& at) const {
        Rational d = den_.eval(at);
        if (d.is_zero()) throw std::domain_error("RatFun: denominator vanishes at point");
        return num_.eval(at) / d;
    }

    std::string str() const;

private:
    void assign(MPoly num, MPoly den);
    static RatFun already_canonical(MPoly num, MPoly den) {
        RatFun f;
        f.num_ = std::move(num);
        f.den_ = std::move(den);
        return f;
    }
    MPoly num_, den_;
};

}  // namespace jform
