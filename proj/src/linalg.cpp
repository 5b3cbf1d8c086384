#include "jform/linalg.hpp"

#include <gmpxx.h>

namespace jform {

Rational det_fraction_free(std::vector<std::vector<Rational>> m) {
    const size_t n = m.size();
    for (const auto& r : m)
        if (r.size() != n) throw std::invalid_argument("det_fraction_free: not square");
    if (n == 0) return Rational(1);

    // Clear denominators row by row; track the accumulated scale.
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    mpq_class scale(1);
    for (size_t i = 0; i < n; ++i) {
        mpz_class l(1);
        for (size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m[i][j].den().get_mpz_t());
        scale *= mpq_class(l);
        for (size_t j = 0; j < n; ++j) {
            mpq_class v(m[i][j].num(), m[i][j].den());
            v *= mpq_class(l);
            a[i][j] = v.get_num();
        }
    }

    int sign = 1;
    mpz_class prev(1);
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t swap_row = n;
            for (size_t i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { swap_row = i; break; }
            if (swap_row == n) return Rational(0);
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                mpz_class t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    mpq_class det(a[n - 1][n - 1] * sign);
    det /= scale;
    return Rational(det);
}

}  // namespace jform
