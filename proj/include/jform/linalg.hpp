#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "jform/errors.hpp"
#include "jform/mpoly.hpp"
#include "jform/rational.hpp"

namespace jform {

enum class SolveKind { Unique, Parametric, Inconsistent };

template <class F>
struct LinearSolution {
    SolveKind kind = SolveKind::Inconsistent;
    std::vector<F> particular;           // one solution, free coordinates set to 0
    std::vector<std::vector<F>> kernel;  // homogeneous basis, first nonzero entry = 1
    std::vector<size_t> pivot_cols;
};

// Preference between admissible pivots; keeping rational-function pivots small
// slows intermediate expression growth.
template <class F>
inline long pivot_cost(const F&) { return 0; }
inline long pivot_cost(const RatFun& f) { return f.num().degree() + f.den().degree(); }

// Exact Gauss-Jordan over a field F (F = Rational or RatFun).  Solves m*x = rhs.
template <class F>
LinearSolution<F> solve_linear(std::vector<std::vector<F>> m, std::vector<F> rhs) {
    const size_t rows = m.size();
    const size_t cols = rows == 0 ? 0 : m[0].size();
    if (rhs.size() != rows) throw std::invalid_argument("solve_linear: shape mismatch");
    for (const auto& r : m)
        if (r.size() != cols) throw std::invalid_argument("solve_linear: ragged matrix");

    LinearSolution<F> out;
    const F one(1);
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t best = rows;
        for (size_t i = row; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            if (best == rows || pivot_cost(m[i][col]) < pivot_cost(m[best][col])) best = i;
        }
        if (best == rows) continue;
        std::swap(m[row], m[best]);
        std::swap(rhs[row], rhs[best]);
        F inv = one / m[row][col];
        for (size_t j = col; j < cols; ++j) m[row][j] = m[row][j] * inv;
        rhs[row] = rhs[row] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][col].is_zero()) continue;
            F f = m[i][col];
            for (size_t j = col; j < cols; ++j) m[i][j] = m[i][j] - f * m[row][j];
            rhs[i] = rhs[i] - f * rhs[row];
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    for (size_t i = row; i < rows; ++i)
        if (!rhs[i].is_zero()) {
            out.kind = SolveKind::Inconsistent;
            return out;
        }

    out.particular.assign(cols, F(0));
    for (size_t p = 0; p < out.pivot_cols.size(); ++p) out.particular[out.pivot_cols[p]] = rhs[p];

    std::vector<bool> is_pivot(cols, false);
    for (size_t c : out.pivot_cols) is_pivot[c] = true;
    for (size_t freec = 0; freec < cols; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<F> v(cols, F(0));
        v[freec] = one;
        for (size_t p = 0; p < out.pivot_cols.size(); ++p)
            v[out.pivot_cols[p]] = -m[p][freec];
        // normalize: first nonzero entry = 1
        for (const F& x : v)
            if (!x.is_zero()) {
                F s = one / x;
                for (F& y : v) y = y * s;
                break;
            }
        out.kernel.push_back(std::move(v));
    }
    out.kind = out.kernel.empty() ? SolveKind::Unique : SolveKind::Parametric;
    return out;
}

// A member of a parametric solution family with the coordinates listed in
// `fixed` pinned to the given values; nullopt when no member attains them.
template <class F>
std::optional<std::vector<F>> family_member(const LinearSolution<F>& sol,
                                            const std::vector<std::pair<size_t, F>>& fixed) {
    if (sol.kind == SolveKind::Inconsistent) return std::nullopt;
    const size_t k = sol.kernel.size();
    std::vector<std::vector<F>> m(fixed.size(), std::vector<F>(k, F(0)));
    std::vector<F> rhs;
    rhs.reserve(fixed.size());
    for (size_t r = 0; r < fixed.size(); ++r) {
        auto [idx, val] = fixed[r];
        for (size_t j = 0; j < k; ++j) m[r][j] = sol.kernel[j][idx];
        rhs.push_back(val - sol.particular[idx]);
    }
    auto inner = solve_linear(m, rhs);
    if (inner.kind == SolveKind::Inconsistent) return std::nullopt;
    std::vector<F> out = sol.particular;
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] + inner.particular[j] * sol.kernel[j][i];
    return out;
}

// Determinant of a square rational matrix by fraction-free (Bareiss)
// elimination over the integers after clearing row denominators.
Rational det_fraction_free(std::vector<std::vector<Rational>> m);

template <class T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace jform
