#include "jform/mpoly.hpp"

#include <sstream>

namespace jform {

MPoly MPoly::pow(int n) const {
    if (n < 0) throw std::domain_error("MPoly: negative power");
    MPoly r(Rational(1)), base = *this;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

Rational MPoly::eval(const std::array<Rational, 3>& at) const {
    Rational r(0);
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < m.e[static_cast<size_t>(i)]; ++k) t *= at[static_cast<size_t>(i)];
        r += t;
    }
    return r;
}

MPoly MPoly::compose(const std::array<MPoly, 3>& repl) const {
    MPoly r;
    for (const auto& [m, c] : terms_) {
        MPoly t(c);
        for (size_t i = 0; i < 3; ++i)
            if (m.e[i] > 0) t *= repl[i].pow(m.e[i]);
        r += t;
    }
    return r;
}

MPoly divide_exact(const MPoly& num, const MPoly& den) {
    if (den.is_zero()) throw std::domain_error("divide_exact: zero divisor");
    const auto& [dm, dc] = *den.terms().begin();
    MPoly q, r = num;
    while (!r.is_zero()) {
        const auto& [rm, rc] = *r.terms().begin();
        Monomial m;
        for (size_t i = 0; i < 3; ++i) {
            m.e[i] = rm.e[i] - dm.e[i];
            if (m.e[i] < 0) throw NonExactDivision("divide_exact: nonzero remainder");
        }
        // A true multiple keeps its leading term divisible at every step, so
        // peeling it can never strand anything in a remainder.
        MPoly t;
        t.add_term(m, rc / dc);
        q += t;
        r -= t * den;
    }
    return q;
}

MPolyParts MPoly::primitive() const {
    if (is_zero()) return MPolyParts{Rational(0), MPoly()};
    Rational content(0);
    for (const auto& [m, c] : terms_) content = gcd(content, c);
    if (leading_coeff().sign() < 0) content = -content;
    MPolyParts out{content, MPoly()};
    for (const auto& [m, c] : terms_) out.poly.terms_[m] = c / content;
    return out;
}

std::string MPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational v = c;
        if (first) {
            if (v.sign() < 0) { os << "-"; v = -v; }
        } else {
            os << (v.sign() < 0 ? " - " : " + ");
            if (v.sign() < 0) v = -v;
        }
        first = false;
        bool unit = (v == Rational(1)) && m.degree() > 0;
        if (!unit) os << v.str();
        bool printed = !unit;
        for (size_t i = 0; i < 3; ++i) {
            if (m.e[i] == 0) continue;
            if (printed) os << "*";
            os << kVarNames[i];
            if (m.e[i] > 1) os << "^" << m.e[i];
            printed = true;
        }
    }
    return os.str();
}

void RatFun::assign(MPoly num, MPoly den) {
    if (den.is_zero()) throw std::domain_error("RatFun: zero denominator");
    if (num.is_zero()) {
        num_ = MPoly();
        den_ = MPoly(Rational(1));
        return;
    }
    auto pn = num.primitive();
    auto pd = den.primitive();
    num_ = (pn.content / pd.content) * pn.poly;
    den_ = pd.poly;
}

std::string RatFun::str() const {
    if (den_ == MPoly(Rational(1))) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
}

}  // namespace jform
