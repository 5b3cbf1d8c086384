#pragma once

#include <array>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "jform/forms.hpp"
#include "jform/linalg.hpp"
#include "jform/series.hpp"

namespace jform {

namespace detail {
// E2 (resp. a modular monomial) long enough that multiplying x by it keeps
// x's full truncation window, lifted into x's coefficient ring.
template <class C>
Series<C> lifted(const FourierSeries& f) {
    if constexpr (std::is_same_v<C, Rational>)
        return f;
    else
        return to_param(f);
}
template <class C>
Series<C> e2_for(const Series<C>& x) {
    const long need = x.qtrunc() - std::min(0L, x.minord());
    return lifted<C>(standard_series("E2", need));
}
template <class C>
Series<C> modular_for(const ModularMonomial& mon, const Series<C>& x) {
    const long need = x.qtrunc() - std::min(0L, x.minord());
    return lifted<C>(modular_series(mon, need));
}
}  // namespace detail

// q d/dq, acting on n24-graded coefficients as multiplication by n24/24.
template <class C>
Series<C> q_derivative(const Series<C>& x) {
    Series<C> r(x.qtrunc());
    r.index2 = x.index2;
    for (const auto& [k, v] : x.coeffs()) r.set(k.first, k.second, v * Rational(k.first, 24));
    return r;
}

// Index-m heat combination: coefficient a(n,l) picks up (3/m)(4nm-l^2)/4, i.e.
// (n24*m2 - 3*l2^2) / (2*m2) in stored units.  Needs a positive index tag.
template <class C>
Series<C> heat_raw(const Series<C>& x) {
    if (!x.index2 || *x.index2 <= 0)
        throw std::invalid_argument("heat_raw: operand needs a positive index tag");
    const int m2 = *x.index2;
    Series<C> r(x.qtrunc());
    r.index2 = m2;
    if (x.weight2) r.weight2 = *x.weight2 + 4;
    for (const auto& [k, v] : x.coeffs())
        r.set(k.first, k.second, v * Rational(k.first * m2 - 3 * k.second * k.second, 2 * m2));
    return r;
}

// Modified heat operator H_k = heat_raw - (2k-1)/2 * E2, weight k -> k+2.
template <class C>
Series<C> heat_k(int k, const Series<C>& x) {
    if (x.weight2 && *x.weight2 != 2 * k)
        throw std::invalid_argument("heat_k: weight tag mismatch");
    Series<C> r = heat_raw(x) - (detail::e2_for(x) * x).scaled(C(Rational(2 * k - 1, 2)));
    r.weight2 = 2 * k + 4;
    r.index2 = x.index2;
    return r;
}

// Iterated operator H_k^[n] = H_{k+2(n-1)} o ... o H_{k+2} o H_k.
template <class C>
Series<C> heat_iter(int k, int n, const Series<C>& x) {
    Series<C> r = x;
    for (int i = 0; i < n; ++i) r = heat_k(k + 2 * i, r);
    return r;
}

// Serre derivative D_k = q d/dq - (k/12) E2, weight k -> k+2.
template <class C>
Series<C> serre_derivative(int k, const Series<C>& x) {
    Series<C> r = q_derivative(x) - (detail::e2_for(x) * x).scaled(C(Rational(k, 12)));
    r.weight2 = 2 * k + 4;
    r.index2 = x.index2;
    return r;
}

// Smallest N >= 0 such that a weight-w index-(index2/2) weak Jacobi form
// vanishing to q-order N+1 must vanish identically (w - 12(N+1) < -2m).
int vanishing_bound(int w, int index2);

// Indicial weight of the q^0 class l under H: x_l = 3 l2^2/(2 m2) + (2k-1)/2.
Rational indicial_x(int k, int index2, long l2);
// mu_t(x) = prod_{i=0}^{t-1} -(x + 2i): the factor H^[t] applies to a q^0
// coefficient sitting in class l with x = x_l.
Rational indicial_mu(int t, const Rational& x);

struct Certificate {
    int checked_q_orders = 0;  // vanishing confirmed for all n <= this q-order
    int ambient_weight = 0;
    int index2 = 0;
    int vanishing_space_dim = 0;
};

struct CounterexampleCoefficient {
    long n24 = 0, l2 = 0;
    Rational value;
};

// Coefficients of one modular form over the canonical basis of M_weight.
struct ModularCoeff {
    int weight = 0;
    std::vector<Rational> coords;  // empty exactly when dim M_weight = 0
};

// f0 * H^[n] + sum_{t<n} f_{2(n-t)} * H^[t] annihilating a fixed form; slot
// coefficients are stored for t = order-1 down to 0.
struct MDE {
    int weight2 = 0;
    int index2 = 0;
    int order = 0;
    ModularCoeff leading;              // weight w0, first coordinate normalized to 1
    std::vector<ModularCoeff> coeffs;  // index i holds t = order-1-i
    std::optional<std::array<Rational, 3>> form_coords;  // paper-index3, when applicable
    std::optional<std::string> form_expr;
    std::optional<Certificate> certificate;

    // Slot values flattened in layout order (t descending, basis order inside);
    // this is the lambda_1..lambda_r numbering used throughout.
    std::vector<Rational> flat_slots() const;
};

// Static description of the unknowns of an order-n ansatz.
struct SlotLayout {
    int weight2 = 0, index2 = 0, order = 0, w0 = 0;
    int ambient_weight = 0;
    int bound = 0;  // vanishing_bound(ambient_weight, index2)
    std::vector<ModularMonomial> lead_mons;
    struct Slot {
        int t;
        ModularMonomial mon;
    };
    std::vector<Slot> slots;
    size_t lead_extra() const { return lead_mons.size() - 1; }
    size_t columns() const { return lead_extra() + slots.size(); }
};
SlotLayout mde_layout(int weight2, int index2, int order, int w0);

// Assemble an MDE from a joint coordinate vector (lead-extra coords first,
// then slot coords in layout order).
MDE mde_from_vector(const SlotLayout& layout, const std::vector<Rational>& joint);

enum class MdeSearch { Found, Family, NoSolution };

struct FindResult {
    MdeSearch kind = MdeSearch::NoSolution;
    SlotLayout layout;
    LinearSolution<Rational> solution;  // over the joint coordinate vector
    MDE mde;                            // particular solution (free coords 0)
};

// Search for an order-`order` equation annihilating x, with leading
// coefficient in M_w0 (first basis coordinate normalized to 1).
FindResult find_mde(const FourierSeries& x, int order, int w0 = 0);

struct NotFoundBelow : std::runtime_error {
    explicit NotFoundBelow(int max_order)
        : std::runtime_error("no modular differential equation of order <= " +
                             std::to_string(max_order)),
          max_order(max_order) {}
    int max_order;
};

struct MinMdeResult {
    int order = 0;
    FindResult result;
};
// Smallest order <= max_order admitting an equation; throws NotFoundBelow.
MinMdeResult min_mde(const FourierSeries& x, int max_order, int w0 = 0);

// Left-hand side of an MDE applied to x (generic in the coefficient ring).
template <class C>
Series<C> mde_lhs(const MDE& mde, const Series<C>& x) {
    if (x.weight2 && *x.weight2 != mde.weight2)
        throw std::invalid_argument("mde_lhs: weight tag mismatch");
    if (x.index2 && *x.index2 != mde.index2)
        throw std::invalid_argument("mde_lhs: index tag mismatch");
    const int k = mde.weight2 / 2;
    std::vector<Series<C>> iters{x};
    for (int i = 0; i < mde.order; ++i) iters.push_back(heat_k(k + 2 * i, iters.back()));

    Series<C> r = Series<C>::zero(x.qtrunc());
    auto accumulate = [&](const ModularCoeff& mc, const Series<C>& it) {
        const auto mons = modular_basis(mc.weight);
        if (mons.size() != mc.coords.size())
            throw std::invalid_argument("mde_lhs: coefficient vector does not match basis");
        for (size_t i = 0; i < mons.size(); ++i) {
            if (mc.coords[i].is_zero()) continue;
            r = r + (detail::modular_for(mons[i], it) * it).scaled(C(mc.coords[i]));
        }
    };
    accumulate(mde.leading, iters.back());
    for (int t = mde.order - 1; t >= 0; --t)
        accumulate(mde.coeffs[static_cast<size_t>(mde.order - 1 - t)], iters[static_cast<size_t>(t)]);
    return r;
}

// Residual of an MDE at x: identically zero through the window exactly when
// the equation annihilates x.
template <class C>
Series<C> residual(const MDE& mde, const Series<C>& x) {
    return mde_lhs(mde, x);
}

// Re-check an MDE against x: vanishing through the certified window yields a
// Certificate, otherwise the first offending coefficient.
std::variant<Certificate, CounterexampleCoefficient> verify_mde(const MDE& mde,
                                                                const FourierSeries& x);

// Order-(order+1) equation annihilating H_k(phi) for every solution phi of m:
// applying H once pushes slot t to f_{t-1} + 12 D(f_t) and keeps the lead.
MDE raise_order(const MDE& m);

}  // namespace jform
