#include "jform/heat.hpp"

#include <set>

namespace jform {

int vanishing_bound(int w, int index2) {
    if (index2 <= 0) throw std::invalid_argument("vanishing_bound: index must be positive");
    int n = 0;
    while (!(w - 12 * (n + 1) < -index2)) ++n;
    return n;
}

Rational indicial_x(int k, int index2, long l2) {
    return Rational(3 * l2 * l2, 2 * index2) + Rational(2 * k - 1, 2);
}

Rational indicial_mu(int t, const Rational& x) {
    Rational r(1);
    for (int i = 0; i < t; ++i) r *= -(x + Rational(2 * i));
    return r;
}

std::vector<Rational> MDE::flat_slots() const {
    std::vector<Rational> out;
    for (const auto& mc : coeffs) out.insert(out.end(), mc.coords.begin(), mc.coords.end());
    return out;
}

SlotLayout mde_layout(int weight2, int index2, int order, int w0) {
    if (order < 1) throw std::invalid_argument("mde_layout: order must be >= 1");
    if (weight2 % 2 != 0)
        throw std::invalid_argument("mde_layout: half-integer weights are unsupported");
    if (index2 <= 0) throw std::invalid_argument("mde_layout: index must be positive");
    SlotLayout L;
    L.weight2 = weight2;
    L.index2 = index2;
    L.order = order;
    L.w0 = w0;
    L.ambient_weight = w0 + weight2 / 2 + 2 * order;
    L.bound = vanishing_bound(L.ambient_weight, index2);
    L.lead_mons = modular_basis(w0);
    if (L.lead_mons.empty())
        throw std::invalid_argument("mde_layout: leading weight carries no modular forms");
    for (int t = order - 1; t >= 0; --t)
        for (const auto& mon : modular_basis(w0 + 2 * (order - t)))
            L.slots.push_back(SlotLayout::Slot{t, mon});
    return L;
}

MDE mde_from_vector(const SlotLayout& layout, const std::vector<Rational>& joint) {
    if (joint.size() != layout.columns())
        throw std::invalid_argument("mde_from_vector: coordinate count mismatch");
    MDE mde;
    mde.weight2 = layout.weight2;
    mde.index2 = layout.index2;
    mde.order = layout.order;
    mde.leading.weight = layout.w0;
    mde.leading.coords.push_back(Rational(1));
    for (size_t i = 0; i < layout.lead_extra(); ++i) mde.leading.coords.push_back(joint[i]);

    size_t at = layout.lead_extra();
    for (int t = layout.order - 1; t >= 0; --t) {
        ModularCoeff mc;
        mc.weight = layout.w0 + 2 * (layout.order - t);
        for (const auto& slot : layout.slots)
            if (slot.t == t) mc.coords.push_back(joint[at++]);
        mde.coeffs.push_back(std::move(mc));
    }
    return mde;
}

FindResult find_mde(const FourierSeries& x, int order, int w0) {
    if (!x.weight2) throw std::invalid_argument("find_mde: operand needs a weight tag");
    if (!x.index2 || *x.index2 <= 0)
        throw std::invalid_argument("find_mde: operand needs a positive index tag");

    FindResult out;
    out.layout = mde_layout(*x.weight2, *x.index2, order, w0);
    const SlotLayout& L = out.layout;
    const long need = 24 * L.bound;
    if (x.qtrunc() <= need)
        throw InsufficientTruncation("find_mde: operand truncation " + std::to_string(x.qtrunc()) +
                                     " cannot certify vanishing through q-order " +
                                     std::to_string(L.bound));

    const int k = L.weight2 / 2;
    std::vector<FourierSeries> iters{x};
    for (int i = 0; i < order; ++i) iters.push_back(heat_k(k + 2 * i, iters.back()));

    std::vector<FourierSeries> cols;
    for (size_t i = 1; i < L.lead_mons.size(); ++i)
        cols.push_back(detail::modular_for(L.lead_mons[i], iters.back()) * iters.back());
    for (const auto& slot : L.slots)
        cols.push_back(detail::modular_for(slot.mon, iters[static_cast<size_t>(slot.t)]) *
                       iters[static_cast<size_t>(slot.t)]);
    const FourierSeries rhs_series = detail::modular_for(L.lead_mons[0], iters.back()) * iters.back();

    std::set<FourierSeries::Key> keys;
    auto gather = [&](const FourierSeries& s) {
        for (const auto& [key, v] : s.coeffs()) {
            if (key.first > need) break;
            keys.insert(key);
        }
    };
    for (const auto& c : cols) gather(c);
    gather(rhs_series);

    std::vector<std::vector<Rational>> m;
    std::vector<Rational> rhs;
    for (const auto& key : keys) {
        std::vector<Rational> row;
        row.reserve(cols.size());
        for (const auto& c : cols) row.push_back(c.coefficient(key.first, key.second));
        m.push_back(std::move(row));
        rhs.push_back(-rhs_series.coefficient(key.first, key.second));
    }

    out.solution = solve_linear(std::move(m), std::move(rhs));
    switch (out.solution.kind) {
        case SolveKind::Inconsistent:
            out.kind = MdeSearch::NoSolution;
            return out;
        case SolveKind::Unique:
            out.kind = MdeSearch::Found;
            break;
        case SolveKind::Parametric:
            out.kind = MdeSearch::Family;
            break;
    }
    out.mde = mde_from_vector(L, out.solution.particular);
    out.mde.certificate = Certificate{L.bound, L.ambient_weight, L.index2, 0};
    return out;
}

MinMdeResult min_mde(const FourierSeries& x, int max_order, int w0) {
    for (int order = 1; order <= max_order; ++order) {
        FindResult res = find_mde(x, order, w0);
        if (res.kind != MdeSearch::NoSolution) return MinMdeResult{order, std::move(res)};
    }
    throw NotFoundBelow(max_order);
}

namespace {

// 12 * D_w of a modular coefficient vector, in M_{w+2} coordinates.
ModularCoeff serre12(const ModularCoeff& mc) {
    const int w = mc.weight;
    const auto mons = modular_basis(w);
    if (mons.size() != mc.coords.size())
        throw std::invalid_argument("raise_order: coefficient vector does not match basis");
    const long t = 24L * (static_cast<long>(modular_basis(w + 2).size()) + 1);
    FourierSeries f = FourierSeries::zero(t);
    for (size_t i = 0; i < mons.size(); ++i)
        if (!mc.coords[i].is_zero()) f = f + modular_series(mons[i], t).scaled(mc.coords[i]);
    const FourierSeries g = serre_derivative(w, f).scaled(Rational(12));
    return ModularCoeff{w + 2, modular_coordinates(g, w + 2)};
}

ModularCoeff mc_sum(const ModularCoeff& x, const ModularCoeff& y) {
    if (x.weight != y.weight || x.coords.size() != y.coords.size())
        throw std::invalid_argument("raise_order: weight mismatch in coefficient sum");
    ModularCoeff r = x;
    for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += y.coords[i];
    return r;
}

}  // namespace

MDE raise_order(const MDE& m) {
    if (m.order < 1) throw std::invalid_argument("raise_order: order must be >= 1");
    auto old_t = [&](int t) -> const ModularCoeff& {
        return m.coeffs[static_cast<size_t>(m.order - 1 - t)];
    };
    MDE r;
    r.weight2 = m.weight2;
    r.index2 = m.index2;
    r.order = m.order + 1;
    r.leading = m.leading;
    // Slot t of the raised equation is f_{t-1} + 12 D(f_t), reading the lead
    // as f_order and nothing as f_{-1}.
    r.coeffs.push_back(mc_sum(old_t(m.order - 1), serre12(m.leading)));
    for (int t = m.order - 1; t >= 1; --t)
        r.coeffs.push_back(mc_sum(old_t(t - 1), serre12(old_t(t))));
    r.coeffs.push_back(serre12(old_t(0)));
    return r;
}

std::variant<Certificate, CounterexampleCoefficient> verify_mde(const MDE& mde,
                                                                const FourierSeries& x) {
    const SlotLayout L = mde_layout(mde.weight2, mde.index2, mde.order, mde.leading.weight);
    const long need = 24 * L.bound;
    if (x.qtrunc() <= need)
        throw InsufficientTruncation("verify_mde: operand truncation too small for the bound");
    const FourierSeries lhs = mde_lhs(mde, x);
    for (const auto& [key, v] : lhs.coeffs()) {
        if (key.first > need) break;
        return CounterexampleCoefficient{key.first, key.second, v};
    }
    return Certificate{L.bound, L.ambient_weight, L.index2, 0};
}

}  // namespace jform
