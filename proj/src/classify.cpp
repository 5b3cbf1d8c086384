#include "jform/classify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jform/errors.hpp"
#include "jform/series.hpp"

namespace jform {

// ===========================================================================
// Symbolic engine: probe tables for the order-n ansatz on a*rho + b*psi + c*phi
// ===========================================================================

namespace {

constexpr long kTr = 96;
constexpr int kMinOrder = 3;
constexpr int kMaxOrder = 7;

// The q^0 rows (l2 = 6, 4, 2, 0) then the q^1 rows (l2 = 8, 6, 4, 2, 0).
const std::array<std::pair<long, long>, 9>& probe_keys() {
    static const std::array<std::pair<long, long>, 9> keys{
        {{0, 6}, {0, 4}, {0, 2}, {0, 0}, {24, 8}, {24, 6}, {24, 4}, {24, 2}, {24, 0}}};
    return keys;
}

std::array<Rational, 9> probe_series(const FourierSeries& s) {
    std::array<Rational, 9> out;
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = s.coefficient(probe_keys()[i].first, probe_keys()[i].second);
    return out;
}

// Basis of the ambient forms vanishing at q^0 (one Delta factor each); the
// residual of the elimination is expressed over these elements.
std::vector<FourierSeries> residual_basis_series(int order) {
    const auto g = [](const char* n) { return generator(n, kTr); };
    const auto s = [](const char* n) { return standard_series(n, kTr); };
    const FourierSeries del = s("Delta");
    const FourierSeries p21 = g("phi_-2_1");
    const FourierSeries p01 = g("phi_0_1");
    switch (order) {
        case 3:
            return {del * p21 * p21 * p21};
        case 4:
            return {del * p21 * p21 * p01};
        case 5:
            return {del * s("E4") * p21 * p21 * p21, del * p21 * g("phi_0_2")};
        case 6:
            return {del * g("rho_0_3"), del * g("psi_0_3"), del * g("phi_0_3")};
        case 7:
            return {del * s("E4") * p21 * p01 * p01, del * s("E6") * p21 * p21 * p01,
                    del * s("E4") * s("E4") * p21 * p21 * p21};
        default:
            throw std::invalid_argument("residual basis: order out of range");
    }
}

struct OrderTables {
    SlotLayout layout;
    // Probe values per generator: the order-n heat iterate and one column per slot.
    std::array<std::array<Rational, 9>, 3> rhs;
    std::array<std::vector<std::array<Rational, 9>>, 3> cols;
    std::vector<std::array<Rational, 5>> res_q1;   // q^1 slices of the residual basis
    std::vector<size_t> pivots;                    // independent q^1 rows
    std::vector<std::vector<Rational>> pivot_inv;  // inverse of the pivot square
};

struct Engine {
    std::array<std::vector<FourierSeries>, 3> iters;  // [generator][t], t = 0..kMaxOrder
    std::map<int, OrderTables> orders;
};

const Engine& engine() {
    static const Engine instance = [] {
        Engine en;
        const std::array<const char*, 3> names{"rho_0_3", "psi_0_3", "phi_0_3"};
        for (size_t g = 0; g < 3; ++g) {
            FourierSeries v = generator(names[g], kTr);
            en.iters[g].push_back(v);
            for (int t = 0; t < kMaxOrder; ++t) {
                v = heat_k(2 * t, v);
                en.iters[g].push_back(v);
            }
        }
        for (int order = kMinOrder; order <= kMaxOrder; ++order) {
            OrderTables tab;
            tab.layout = mde_layout(0, 6, order, 0);
            if (tab.layout.lead_extra() != 0)
                throw InternalCheckError("classification engine: unexpected leading freedom");
            for (size_t g = 0; g < 3; ++g) {
                tab.rhs[g] = probe_series(en.iters[g][static_cast<size_t>(order)]);
                for (const auto& slot : tab.layout.slots)
                    tab.cols[g].push_back(probe_series(modular_series(slot.mon, kTr) *
                                                       en.iters[g][static_cast<size_t>(slot.t)]));
            }
            for (const auto& el : residual_basis_series(order)) {
                std::array<Rational, 5> row;
                for (size_t i = 0; i < row.size(); ++i)
                    row[i] = el.coefficient(24, probe_keys()[4 + i].second);
                // index-3 forms stay within |l2| <= 6 at q^1 after the Delta shift
                if (!row[0].is_zero())
                    throw InternalCheckError("classification engine: residual basis reaches zeta^4");
                tab.res_q1.push_back(row);
            }
            const size_t nb = tab.res_q1.size();
            std::vector<std::vector<Rational>> reduced;
            for (size_t r = 0; r < 5 && tab.pivots.size() < nb; ++r) {
                std::vector<Rational> v(nb);
                for (size_t i = 0; i < nb; ++i) v[i] = tab.res_q1[i][r];
                for (const auto& w : reduced) {
                    size_t lead = 0;
                    while (lead < nb && w[lead].is_zero()) ++lead;
                    if (lead < nb && !v[lead].is_zero()) {
                        const Rational f = v[lead] / w[lead];
                        for (size_t i = 0; i < nb; ++i) v[i] -= f * w[i];
                    }
                }
                if (std::any_of(v.begin(), v.end(), [](const Rational& x) { return !x.is_zero(); })) {
                    tab.pivots.push_back(r);
                    reduced.push_back(std::move(v));
                }
            }
            if (tab.pivots.size() != nb)
                throw InternalCheckError("classification engine: dependent residual basis slices");
            std::vector<std::vector<Rational>> a(nb, std::vector<Rational>(nb));
            for (size_t i = 0; i < nb; ++i)
                for (size_t j = 0; j < nb; ++j) a[i][j] = tab.res_q1[j][tab.pivots[i]];
            tab.pivot_inv.assign(nb, std::vector<Rational>(nb));
            for (size_t col = 0; col < nb; ++col) {
                std::vector<Rational> rhs(nb, Rational(0));
                rhs[col] = Rational(1);
                auto sol = solve_linear(a, rhs);
                if (sol.kind != SolveKind::Unique)
                    throw InternalCheckError("classification engine: singular pivot matrix");
                for (size_t i = 0; i < nb; ++i) tab.pivot_inv[i][col] = sol.particular[i];
            }
            en.orders.emplace(order, std::move(tab));
        }
        return en;
    }();
    return instance;
}

const OrderTables& tables(int order) {
    const auto& en = engine();
    auto it = en.orders.find(order);
    if (it == en.orders.end())
        throw std::invalid_argument("classification engine: order must be between 3 and 7");
    return it->second;
}

}  // namespace

namespace classify_detail {

std::array<MPoly, 9> system_rows(int order, const std::array<MPoly, 3>& pt,
                                 const std::vector<Rational>& lambda) {
    const OrderTables& tab = tables(order);
    if (lambda.size() != tab.layout.slots.size())
        throw std::invalid_argument("system_rows: slot vector size mismatch");
    std::array<MPoly, 9> rows;
    for (size_t j = 0; j < rows.size(); ++j) {
        MPoly row;
        for (size_t g = 0; g < 3; ++g) {
            Rational v = tab.rhs[g][j];
            for (size_t s = 0; s < lambda.size(); ++s) v += lambda[s] * tab.cols[g][s][j];
            row += pt[g] * v;
        }
        rows[j] = row;
    }
    return rows;
}

std::vector<MPoly> residual_coords(int order, const std::array<MPoly, 9>& rows) {
    const OrderTables& tab = tables(order);
    for (size_t j = 0; j < 4; ++j)
        if (!rows[j].is_zero())
            throw InternalCheckError("residual_coords: q^0 obstruction did not vanish");
    const size_t nb = tab.res_q1.size();
    std::vector<MPoly> coords(nb);
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < nb; ++j)
            coords[i] += rows[4 + tab.pivots[j]] * tab.pivot_inv[i][j];
    for (size_t r = 0; r < 5; ++r) {
        MPoly expect;
        for (size_t i = 0; i < nb; ++i) expect += coords[i] * tab.res_q1[i][r];
        if (!(expect == rows[4 + r]))
            throw SymbolicEliminationFailure("residual_coords: q^1 rows leave the residual space");
    }
    return coords;
}

std::vector<std::array<Rational, 5>> residual_basis_q1(int order) { return tables(order).res_q1; }

std::vector<Rational> ladder_lambda(int order, const std::vector<long>& classes_l2,
                                    const std::vector<std::pair<size_t, Rational>>& fixed) {
    const SlotLayout& layout = tables(order).layout;
    std::map<size_t, Rational> pin(fixed.begin(), fixed.end());
    if (pin.size() != fixed.size())
        throw std::invalid_argument("ladder_lambda: duplicate fixed slot");
    for (const auto& [s, v] : pin)
        if (s >= layout.slots.size())
            throw std::invalid_argument("ladder_lambda: slot index out of range");
    std::vector<size_t> unknown;
    for (size_t s = 0; s < layout.slots.size(); ++s)
        if (layout.slots[s].mon.delta == 0 && pin.find(s) == pin.end()) unknown.push_back(s);
    if (unknown.size() != classes_l2.size())
        throw SymbolicEliminationFailure("ladder_lambda: class count differs from free q^0 slots");
    std::vector<std::vector<Rational>> m;
    std::vector<Rational> rhs;
    for (long l2 : classes_l2) {
        const Rational x = indicial_x(0, 6, l2);
        std::vector<Rational> row;
        for (size_t s : unknown) row.push_back(indicial_mu(layout.slots[s].t, x));
        Rational r = -indicial_mu(order, x);
        for (const auto& [s, v] : pin)
            if (layout.slots[s].mon.delta == 0) r -= v * indicial_mu(layout.slots[s].t, x);
        m.push_back(std::move(row));
        rhs.push_back(std::move(r));
    }
    auto sol = solve_linear(m, rhs);
    if (sol.kind != SolveKind::Unique)
        throw SymbolicEliminationFailure("ladder_lambda: q^0 system is not uniquely solvable");
    std::vector<Rational> out(layout.slots.size(), Rational(0));
    for (const auto& [s, v] : pin) out[s] = v;
    for (size_t i = 0; i < unknown.size(); ++i) out[unknown[i]] = sol.particular[i];
    return out;
}

std::array<Rational, 3> primitive_point(const std::array<Rational, 3>& v) {
    Rational g(0);
    for (const auto& x : v) g = gcd(g, x);
    if (g.is_zero()) throw std::invalid_argument("primitive_point: zero vector");
    std::array<Rational, 3> out;
    for (size_t i = 0; i < out.size(); ++i) out[i] = v[i] / g;
    for (const auto& x : out) {
        if (x.is_zero()) continue;
        if (x.sign() < 0)
            for (auto& y : out) y = -y;
        break;
    }
    return out;
}

}  // namespace classify_detail

// ===========================================================================
// Shared geometry of the coordinate divisors
// ===========================================================================

namespace {

using classify_detail::ladder_lambda;
using classify_detail::primitive_point;
using classify_detail::residual_coords;
using classify_detail::system_rows;

const std::array<const char*, 4> kFormNames{"a", "b", "c", "17a + 7b + c"};
const std::array<long, 4> kFormL2{6, 4, 2, 0};

std::array<Rational, 3> form_coeffs(int i) {
    switch (i) {
        case 0: return {Rational(1), Rational(0), Rational(0)};
        case 1: return {Rational(0), Rational(1), Rational(0)};
        case 2: return {Rational(0), Rational(0), Rational(1)};
        default: return {Rational(17), Rational(7), Rational(1)};
    }
}

std::string locus_of_line(int i) { return std::string(kFormNames[static_cast<size_t>(i)]) + " = 0"; }

struct LineDef {
    int uvar, vvar;               // ambient coordinates serving as parameters
    std::vector<long> classes;    // l2 of the nonzero q^0 classes on the line
};

const std::array<LineDef, 4>& line_defs() {
    static const std::array<LineDef, 4> defs{{{1, 2, {4, 2, 0}},
                                              {0, 2, {6, 2, 0}},
                                              {0, 1, {6, 4, 0}},
                                              {0, 1, {6, 4, 2}}}};
    return defs;
}

std::array<MPoly, 3> line_pt(int line) {
    const LineDef& d = line_defs()[static_cast<size_t>(line)];
    const MPoly u = MPoly::variable(d.uvar), v = MPoly::variable(d.vvar);
    switch (line) {
        case 0: return {MPoly(), u, v};
        case 1: return {u, MPoly(), v};
        case 2: return {u, v, MPoly()};
        default: return {u, v, u * Rational(-17) + v * Rational(-7)};
    }
}

std::array<Rational, 3> line_embed(int line, const Rational& u, const Rational& v) {
    switch (line) {
        case 0: return {Rational(0), u, v};
        case 1: return {u, Rational(0), v};
        case 2: return {u, v, Rational(0)};
        default: return {u, v, Rational(-17) * u + Rational(-7) * v};
    }
}

std::array<MPoly, 3> symbolic_point() {
    return {MPoly::variable(0), MPoly::variable(1), MPoly::variable(2)};
}

// (cu, cv) with f = cu*u + cv*v; rejects anything that is not such a form.
std::array<Rational, 2> linear_form_coeffs(const MPoly& f, int uvar, int vvar) {
    Monomial mu, mv;
    mu.e[static_cast<size_t>(uvar)] = 1;
    mv.e[static_cast<size_t>(vvar)] = 1;
    const Rational cu = f.coeff(mu), cv = f.coeff(mv);
    if (!(f == MPoly::variable(uvar) * cu + MPoly::variable(vvar) * cv))
        throw SymbolicEliminationFailure("expected a linear form in the line parameters");
    return {cu, cv};
}

bool lex_less(const std::array<Rational, 3>& x, const std::array<Rational, 3>& y) {
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == y[i]) continue;
        return x[i] < y[i];
    }
    return false;
}

std::string index3_expr(const std::array<Rational, 3>& coords) {
    static const std::array<const char*, 3> names{"rho_0_3", "psi_0_3", "phi_0_3"};
    std::string out;
    for (size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].is_zero()) continue;
        const Rational mag = coords[i].abs();
        if (out.empty())
            out += coords[i].sign() < 0 ? "-" : "";
        else
            out += coords[i].sign() < 0 ? " - " : " + ";
        if (!(mag == Rational(1))) out += mag.str() + "*";
        out += names[i];
    }
    return out.empty() ? "0" : out;
}

// Build a catalog entry: the symbolically derived slot values must coincide
// with the direct minimal-order search, and the equation must certify against
// a deep expansion of the form.
CatalogEntry make_checked_entry(std::string locus, const std::array<Rational, 3>& coords,
                                std::vector<Rational> lambda, int order) {
    const MinMdeResult mm = min_mde(index3_form(coords, 72), order);
    if (mm.order != order || mm.result.kind != MdeSearch::Found)
        throw InternalCheckError("catalog: direct search disagrees with the derivation at " +
                                 index3_expr(coords));
    if (!(mm.result.mde.flat_slots() == lambda))
        throw InternalCheckError("catalog: slot values disagree with the direct search at " +
                                 index3_expr(coords));
    MDE mde = mm.result.mde;
    mde.form_coords = coords;
    mde.form_expr = index3_expr(coords);
    auto ver = verify_mde(mde, index3_form(coords, 240));
    if (std::holds_alternative<CounterexampleCoefficient>(ver))
        throw InternalCheckError("catalog: verification failed at " + index3_expr(coords));
    mde.certificate = std::get<Certificate>(ver);
    return CatalogEntry{std::move(locus), coords, std::move(lambda), std::move(mde)};
}

}  // namespace

// ===========================================================================
// Plane cubics, Aronhold invariants, Weierstrass data
// ===========================================================================

PlaneCubic plane_cubic(const MPoly& p) {
    if (p.is_zero() || !p.is_homogeneous() || p.degree() != 3)
        throw std::invalid_argument("plane_cubic: need a nonzero homogeneous cubic");
    return PlaneCubic{p.primitive().poly};
}

namespace {

// Symmetric 3-tensor of a ternary cubic: entry (i <= j <= k) carries the
// monomial coefficient divided by the orbit size.
using Tensor = std::map<std::array<int, 3>, Rational>;

Tensor cubic_tensor(const MPoly& p) {
    Tensor t;
    for (const auto& [m, co] : p.terms()) {
        std::array<int, 3> idx{};
        size_t pos = 0;
        for (int v = 0; v < 3; ++v)
            for (int rep = 0; rep < m.e[static_cast<size_t>(v)]; ++rep)
                idx[pos++] = v;
        const bool distinct = m.e[0] == 1 && m.e[1] == 1 && m.e[2] == 1;
        const bool triple = m.e[0] == 3 || m.e[1] == 3 || m.e[2] == 3;
        t[idx] = co / Rational(distinct ? 6 : (triple ? 1 : 3));
    }
    return t;
}

Rational tget(const Tensor& t, int a, int b, int c) {
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    auto it = t.find(k);
    return it == t.end() ? Rational(0) : it->second;
}

struct Eps {
    std::array<int, 3> p;
    int s;
};

const std::array<Eps, 6>& eps_table() {
    static const std::array<Eps, 6> eps{{{{0, 1, 2}, 1},
                                         {{1, 2, 0}, 1},
                                         {{2, 0, 1}, 1},
                                         {{0, 2, 1}, -1},
                                         {{2, 1, 0}, -1},
                                         {{1, 0, 2}, -1}}};
    return eps;
}

Rational aronhold_s_raw(const Tensor& t) {
    Rational tot;
    for (const auto& e1 : eps_table())
        for (const auto& e2 : eps_table())
            for (const auto& e3 : eps_table())
                for (const auto& e4 : eps_table()) {
                    Rational v(e1.s * e2.s * e3.s * e4.s);
                    v *= tget(t, e2.p[0], e3.p[0], e4.p[0]);
                    if (v.is_zero()) continue;
                    v *= tget(t, e1.p[0], e3.p[1], e4.p[1]);
                    if (v.is_zero()) continue;
                    v *= tget(t, e1.p[1], e2.p[1], e4.p[2]);
                    if (v.is_zero()) continue;
                    v *= tget(t, e1.p[2], e2.p[2], e3.p[2]);
                    tot += v;
                }
    return tot;
}

Rational aronhold_t_raw(const Tensor& t) {
    Rational tot;
    const auto& eps = eps_table();
    std::array<const Eps*, 6> cs{};
    for (const auto& c0 : eps)
        for (const auto& c1 : eps)
            for (const auto& c2 : eps)
                for (const auto& c3 : eps)
                    for (const auto& c4 : eps)
                        for (const auto& c5 : eps) {
                            cs = {&c0, &c1, &c2, &c3, &c4, &c5};
                            Rational v(c0.s * c1.s * c2.s * c3.s * c4.s * c5.s);
                            for (size_t i = 0; i < 6 && !v.is_zero(); ++i)
                                v *= tget(t, cs[i]->p[2], cs[(i + 1) % 6]->p[1],
                                          cs[(i + 2) % 6]->p[0]);
                            tot += v;
                        }
    return tot;
}

struct AronCal {
    Rational ks, kt;
};

// Calibrate the raw invariants on y^2 z = x^3 + A x z^2 + B z^3 so that the
// invariant pair of that family is exactly (A, B); pinned by the Fermat
// cubic (g2 = 0), a nodal cubic (disc = 0), and a self-map check.
const AronCal& aron_cal() {
    static const AronCal cal = [] {
        const MPoly x = MPoly::variable(0), y = MPoly::variable(1), z = MPoly::variable(2);
        const auto fw = [&](const Rational& a, const Rational& b) {
            return y * y * z - x * x * x - x * z * z * a - z * z * z * b;
        };
        AronCal k;
        k.ks = aronhold_s_raw(cubic_tensor(fw(Rational(1), Rational(0))));
        k.kt = aronhold_t_raw(cubic_tensor(fw(Rational(0), Rational(1))));
        if (k.ks.is_zero() || k.kt.is_zero() ||
            !aronhold_t_raw(cubic_tensor(fw(Rational(1), Rational(0)))).is_zero() ||
            !aronhold_s_raw(cubic_tensor(fw(Rational(0), Rational(1)))).is_zero())
            throw InternalCheckError("invariant calibration: Weierstrass family degenerates");
        const Tensor fermat = cubic_tensor(x * x * x + y * y * y + z * z * z);
        if (!aronhold_s_raw(fermat).is_zero() || aronhold_t_raw(fermat).is_zero())
            throw InternalCheckError("invariant calibration: Fermat pin failed");
        const Tensor nodal = cubic_tensor(y * y * z - x * x * x - x * x * z);
        const Rational ng2 = aronhold_s_raw(nodal) / k.ks;
        const Rational ng3 = aronhold_t_raw(nodal) / k.kt;
        if (!(Rational(4) * ng2 * ng2 * ng2 + Rational(27) * ng3 * ng3).is_zero())
            throw InternalCheckError("invariant calibration: nodal pin failed");
        const Tensor self = cubic_tensor(fw(Rational(-1), Rational(1)));
        if (!(aronhold_s_raw(self) / k.ks == Rational(-1)) ||
            !(aronhold_t_raw(self) / k.kt == Rational(1)))
            throw InternalCheckError("invariant calibration: self-map pin failed");
        return k;
    }();
    return cal;
}

}  // namespace

CubicInvariants cubic_invariants(const PlaneCubic& c) {
    const AronCal& cal = aron_cal();
    const Tensor t = cubic_tensor(c.poly);
    CubicInvariants out;
    out.aronhold_s = aronhold_s_raw(t);
    out.aronhold_t = aronhold_t_raw(t);
    out.g2 = out.aronhold_s / cal.ks;
    out.g3 = out.aronhold_t / cal.kt;
    out.disc = -(Rational(4) * out.g2 * out.g2 * out.g2 + Rational(27) * out.g3 * out.g3);
    out.nonsingular = !out.disc.is_zero();
    return out;
}

Rational CubicInvariants::j() const {
    if (disc.is_zero()) throw std::domain_error("j-invariant: singular cubic");
    return Rational(6912) * g2 * g2 * g2 / (-disc);
}

std::optional<Rational> rational_nth_root(const Rational& x, int n) {
    if (n <= 0) throw std::invalid_argument("rational_nth_root: n must be positive");
    if (n == 1) return x;
    if (x.is_zero()) return Rational(0);
    const bool neg = x.sign() < 0;
    if (neg && n % 2 == 0) return std::nullopt;
    const mpz_class an = abs(x.num());
    mpz_class rn, rd;
    const bool en = mpz_root(rn.get_mpz_t(), an.get_mpz_t(), static_cast<unsigned long>(n)) != 0;
    const bool ed =
        mpz_root(rd.get_mpz_t(), x.den().get_mpz_t(), static_cast<unsigned long>(n)) != 0;
    if (!en || !ed) return std::nullopt;
    const Rational r(rn, rd);
    return neg ? -r : r;
}

std::optional<std::array<Rational, 2>> quadratic_rational_roots(const Rational& a,
                                                                const Rational& b,
                                                                const Rational& c) {
    if (a.is_zero()) throw std::invalid_argument("quadratic_rational_roots: leading zero");
    const Rational disc = b * b - Rational(4) * a * c;
    const auto s = rational_nth_root(disc, 2);
    if (!s) return std::nullopt;
    const Rational r1 = (-b - *s) / (Rational(2) * a);
    const Rational r2 = (-b + *s) / (Rational(2) * a);
    if (r2 < r1) return std::array<Rational, 2>{r2, r1};
    return std::array<Rational, 2>{r1, r2};
}

bool weierstrass_equiv(const std::array<Rational, 2>& p1, const std::array<Rational, 2>& p2) {
    const bool d1 = p1[0].is_zero() && p1[1].is_zero();
    const bool d2 = p2[0].is_zero() && p2[1].is_zero();
    if (d1 && d2) throw std::domain_error("weierstrass_equiv: both pairs are (0, 0)");
    if (d1 || d2) return false;
    if (p1[0].is_zero() != p2[0].is_zero() || p1[1].is_zero() != p2[1].is_zero()) return false;
    if (p1[0].is_zero()) return rational_nth_root(p2[1] / p1[1], 6).has_value();
    if (p1[1].is_zero()) return rational_nth_root(p2[0] / p1[0], 4).has_value();
    const Rational r4 = p2[0] / p1[0];
    const Rational v = (p2[1] / p1[1]) / r4;  // u^2 for any witness u
    return v * v == r4 && rational_nth_root(v, 2).has_value();
}

// ===========================================================================
// One-parameter families
// ===========================================================================

std::vector<Rational> AffineFamily::at(const Rational& t) const {
    std::vector<Rational> out(base.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = base[i] + t * slope[i];
    return out;
}

AffineFamily affine_family(const LinearSolution<Rational>& sol, size_t parameter) {
    if (sol.kind != SolveKind::Parametric || sol.kernel.size() != 1)
        throw SymbolicEliminationFailure("affine_family: not a one-parameter family");
    const auto at0 = family_member(sol, {{parameter, Rational(0)}});
    const auto at1 = family_member(sol, {{parameter, Rational(1)}});
    if (!at0 || !at1)
        throw SymbolicEliminationFailure("affine_family: coordinate is not free in the family");
    AffineFamily f;
    f.parameter = parameter;
    f.base = *at0;
    f.slope.resize(at1->size());
    for (size_t i = 0; i < f.slope.size(); ++i) f.slope[i] = (*at1)[i] - (*at0)[i];
    return f;
}

// ===========================================================================
// Catalogs of minimal order 4 and 5
// ===========================================================================

const std::vector<CatalogEntry>& order4_catalog() {
    static const std::vector<CatalogEntry> catalog = [] {
        std::vector<CatalogEntry> out;
        // One vanishing class: the q^1 residual restricted to the line is a
        // single linear form, whose kernel is the distinguished point.
        for (int line = 0; line < 4; ++line) {
            const LineDef& d = line_defs()[static_cast<size_t>(line)];
            const auto lam = ladder_lambda(4, d.classes, {});
            const auto rc = residual_coords(4, system_rows(4, line_pt(line), lam));
            if (rc.size() != 1)
                throw InternalCheckError("order-4 catalog: unexpected residual dimension");
            const auto [cu, cv] = linear_form_coeffs(rc[0], d.uvar, d.vvar);
            if (cu.is_zero() && cv.is_zero())
                throw SymbolicEliminationFailure("order-4 catalog: residual vanishes on a line");
            const auto coords = primitive_point(line_embed(line, cv, -cu));
            out.push_back(make_checked_entry(locus_of_line(line), coords, lam, 4));
        }
        // Two vanishing classes: the point is pinned; the residual moves
        // affinely with the one remaining slot degree of freedom.
        const std::array<std::array<int, 2>, 6> pairs{
            {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}}};
        for (const auto& pr : pairs) {
            std::vector<std::vector<Rational>> m;
            for (int i : pr) {
                const auto f = form_coeffs(i);
                m.push_back({f[0], f[1], f[2]});
            }
            auto sol = solve_linear(m, std::vector<Rational>(2, Rational(0)));
            if (sol.kind != SolveKind::Parametric || sol.kernel.size() != 1)
                throw InternalCheckError("order-4 catalog: vanishing pattern is not a point");
            const auto coords =
                primitive_point({sol.kernel[0][0], sol.kernel[0][1], sol.kernel[0][2]});
            std::vector<long> classes;
            for (int i = 0; i < 4; ++i)
                if (i != pr[0] && i != pr[1]) classes.push_back(kFormL2[static_cast<size_t>(i)]);
            const auto m0 = ladder_lambda(4, classes, {{0, Rational(0)}});
            const auto m1 = ladder_lambda(4, classes, {{0, Rational(1)}});
            const std::array<MPoly, 3> pt{MPoly(coords[0]), MPoly(coords[1]), MPoly(coords[2])};
            const Rational r0 = residual_coords(4, system_rows(4, pt, m0))[0].constant_value();
            const Rational r1 = residual_coords(4, system_rows(4, pt, m1))[0].constant_value();
            if (r0 == r1)
                throw SymbolicEliminationFailure("order-4 catalog: residual is slot-independent");
            const Rational t = -r0 / (r1 - r0);
            std::vector<Rational> lam(m0.size());
            for (size_t s = 0; s < lam.size(); ++s) lam[s] = m0[s] + t * (m1[s] - m0[s]);
            const std::string locus = locus_of_line(pr[0]) + ", " + locus_of_line(pr[1]);
            out.push_back(make_checked_entry(locus, coords, lam, 4));
        }
        return out;
    }();
    return catalog;
}

const std::vector<CatalogEntry>& order5_catalog() {
    static const std::vector<CatalogEntry> catalog = [] {
        std::vector<CatalogEntry> out;
        // Generic point: all four q^0 classes fix the slots; the two residual
        // coordinates are linear forms whose common kernel is one point.
        const std::vector<long> all4{6, 4, 2, 0};
        const auto lam = ladder_lambda(5, all4, {});
        const auto rc = residual_coords(5, system_rows(5, symbolic_point(), lam));
        if (rc.size() != 2)
            throw InternalCheckError("order-5 catalog: unexpected residual dimension");
        std::vector<std::vector<Rational>> m(2, std::vector<Rational>(3));
        for (size_t i = 0; i < 2; ++i) {
            MPoly rebuilt;
            for (int v = 0; v < 3; ++v) {
                Monomial mon;
                mon.e[static_cast<size_t>(v)] = 1;
                m[i][static_cast<size_t>(v)] = rc[i].coeff(mon);
                rebuilt += MPoly::variable(v) * m[i][static_cast<size_t>(v)];
            }
            if (!(rebuilt == rc[i]))
                throw SymbolicEliminationFailure("order-5 catalog: residual is not linear");
        }
        auto sol = solve_linear(m, std::vector<Rational>(2, Rational(0)));
        if (sol.kind != SolveKind::Parametric || sol.kernel.size() != 1)
            throw SymbolicEliminationFailure("order-5 catalog: residual kernel is not a point");
        const auto xi = primitive_point({sol.kernel[0][0], sol.kernel[0][1], sol.kernel[0][2]});
        out.push_back(make_checked_entry("all four q^0 classes nonzero", xi, lam, 5));
        // One vanishing class: three classes leave one slot free; the 2x2
        // residual system degenerates at finitely many slot values.
        for (int line = 0; line < 4; ++line) {
            const LineDef& d = line_defs()[static_cast<size_t>(line)];
            const auto m0 = ladder_lambda(5, d.classes, {{0, Rational(0)}});
            const auto m1 = ladder_lambda(5, d.classes, {{0, Rational(1)}});
            const auto r0 = residual_coords(5, system_rows(5, line_pt(line), m0));
            const auto r1 = residual_coords(5, system_rows(5, line_pt(line), m1));
            std::array<std::array<Rational, 2>, 2> base, slope;
            for (size_t i = 0; i < 2; ++i) {
                base[i] = linear_form_coeffs(r0[i], d.uvar, d.vvar);
                const auto s1 = linear_form_coeffs(r1[i], d.uvar, d.vvar);
                slope[i] = {s1[0] - base[i][0], s1[1] - base[i][1]};
            }
            // det of the 2x2 residual matrix as a quadratic in the slot value
            const Rational qa = slope[0][0] * slope[1][1] - slope[1][0] * slope[0][1];
            const Rational qb = base[0][0] * slope[1][1] + slope[0][0] * base[1][1] -
                                base[1][0] * slope[0][1] - slope[1][0] * base[0][1];
            const Rational qc = base[0][0] * base[1][1] - base[1][0] * base[0][1];
            std::vector<Rational> roots;
            if (qa.is_zero()) {
                if (qb.is_zero())
                    throw SymbolicEliminationFailure("order-5 catalog: degenerate determinant");
                roots.push_back(-qc / qb);
            } else {
                const auto rr = quadratic_rational_roots(qa, qb, qc);
                if (!rr)
                    throw SymbolicEliminationFailure("order-5 catalog: irrational degeneracy");
                roots.assign(rr->begin(), rr->end());
            }
            std::vector<std::pair<Rational, std::array<Rational, 3>>> found;
            for (const Rational& t : roots) {
                const Rational a1 = base[0][0] + t * slope[0][0];
                const Rational b1 = base[0][1] + t * slope[0][1];
                const Rational a2 = base[1][0] + t * slope[1][0];
                const Rational b2 = base[1][1] + t * slope[1][1];
                Rational u, v;
                if (!a1.is_zero() || !b1.is_zero()) {
                    u = b1;
                    v = -a1;
                } else if (!a2.is_zero() || !b2.is_zero()) {
                    u = b2;
                    v = -a2;
                } else {
                    throw SymbolicEliminationFailure("order-5 catalog: residual system vanishes");
                }
                const auto pt = primitive_point(line_embed(line, u, v));
                if (pt == order4_catalog()[static_cast<size_t>(line)].coords) continue;
                found.emplace_back(t, pt);
            }
            if (found.size() != 1)
                throw InternalCheckError("order-5 catalog: expected one new point per line");
            const auto& [t, pt] = found.front();
            std::vector<Rational> lamline(m0.size());
            for (size_t s = 0; s < lamline.size(); ++s)
                lamline[s] = m0[s] + t * (m1[s] - m0[s]);
            out.push_back(make_checked_entry(locus_of_line(line), pt, lamline, 5));
        }
        return out;
    }();
    return catalog;
}

// ===========================================================================
// The cubic Q, the order-6 divisor families, and the order-7 formulas
// ===========================================================================

namespace {

// Residual of the order-6 ansatz at a symbolic point, affine in the two slot
// values that the q^0 ladder leaves free (slot 0 and the Delta slot 5).
struct GammaCtx {
    std::vector<Rational> v00, v10, v01;
    std::array<MPoly, 3> g0, gl1, gl6;
};

const GammaCtx& gamma_ctx() {
    static const GammaCtx ctx = [] {
        GammaCtx c;
        const std::vector<long> cl{6, 4, 2, 0};
        c.v00 = ladder_lambda(6, cl, {{0, Rational(0)}, {5, Rational(0)}});
        c.v10 = ladder_lambda(6, cl, {{0, Rational(1)}, {5, Rational(0)}});
        c.v01 = ladder_lambda(6, cl, {{0, Rational(0)}, {5, Rational(1)}});
        for (size_t j = 1; j <= 4; ++j)
            if (!(c.v01[j] == c.v00[j]))
                throw InternalCheckError("order-6 residual: Delta slot leaks into q^0");
        const auto r00 = residual_coords(6, system_rows(6, symbolic_point(), c.v00));
        const auto r10 = residual_coords(6, system_rows(6, symbolic_point(), c.v10));
        const auto r01 = residual_coords(6, system_rows(6, symbolic_point(), c.v01));
        for (size_t i = 0; i < 3; ++i) {
            c.g0[i] = r00[i];
            c.gl1[i] = r10[i] - r00[i];
            c.gl6[i] = r01[i] - r00[i];
        }
        return c;
    }();
    return ctx;
}

}  // namespace

const CubicDerivation& derive_cubic_Q() {
    static const CubicDerivation derivation = [] {
        const GammaCtx& c = gamma_ctx();
        std::array<std::array<MPoly, 3>, 3> m;
        for (size_t i = 0; i < 3; ++i) m[i] = {c.gl1[i], c.gl6[i], c.g0[i]};
        CubicDerivation out;
        out.determinant = det3(m);
        out.cubic = plane_cubic(out.determinant);
        return out;
    }();
    return derivation;
}

const std::vector<DivisorFamily>& order6_divisor_families() {
    static const std::vector<DivisorFamily> families = [] {
        std::vector<DivisorFamily> out;
        const GammaCtx& c = gamma_ctx();
        // --- the cubic Q: two residual rows determine (slot0, slot5) ---
        {
            DivisorFamily f;
            f.locus = "Q = 0";
            const MPoly d2 = c.gl1[0] * c.gl6[1] - c.gl1[1] * c.gl6[0];
            const RatFun l1(c.g0[1] * c.gl6[0] - c.g0[0] * c.gl6[1], d2);
            const RatFun l6(c.gl1[1] * c.g0[0] - c.gl1[0] * c.g0[1], d2);
            f.lambda[0] = l1;
            for (size_t j = 1; j <= 4; ++j)
                f.lambda[j] = RatFun(c.v00[j]) + RatFun(c.v10[j] - c.v00[j]) * l1;
            f.lambda[5] = l6;
            // the third row reproduces the defining cubic on the nose
            const RatFun row3 = RatFun(c.g0[2]) + RatFun(c.gl1[2]) * l1 + RatFun(c.gl6[2]) * l6;
            const RatFun expect(derive_cubic_Q().determinant, d2);
            if (!(row3 == expect))
                throw InternalCheckError("order-6 family on Q: third residual row mismatch");
            f.solvability = l1.den();
            f.note =
                "The denominator conic meets Q, among rational points, only at the four "
                "minimal-order-4 points, where the order-6 equation exists but is not unique.";
            out.push_back(std::move(f));
        }
        // --- the four lines: three residual rows determine three slots ---
        for (int line = 0; line < 4; ++line) {
            const LineDef& d = line_defs()[static_cast<size_t>(line)];
            DivisorFamily f;
            f.locus = locus_of_line(line);
            f.line_vars = {d.uvar, d.vvar};
            const auto v000 =
                ladder_lambda(6, d.classes, {{0, Rational(0)}, {1, Rational(0)}, {5, Rational(0)}});
            const auto v100 =
                ladder_lambda(6, d.classes, {{0, Rational(1)}, {1, Rational(0)}, {5, Rational(0)}});
            const auto v010 =
                ladder_lambda(6, d.classes, {{0, Rational(0)}, {1, Rational(1)}, {5, Rational(0)}});
            const auto v001 =
                ladder_lambda(6, d.classes, {{0, Rational(0)}, {1, Rational(0)}, {5, Rational(1)}});
            for (size_t j = 2; j <= 4; ++j)
                if (!(v001[j] == v000[j]))
                    throw InternalCheckError("order-6 line family: Delta slot leaks into q^0");
            const auto r000 = residual_coords(6, system_rows(6, line_pt(line), v000));
            const auto r100 = residual_coords(6, system_rows(6, line_pt(line), v100));
            const auto r010 = residual_coords(6, system_rows(6, line_pt(line), v010));
            const auto r001 = residual_coords(6, system_rows(6, line_pt(line), v001));
            std::array<std::array<MPoly, 3>, 3> a;
            std::array<MPoly, 3> rhs;
            for (size_t i = 0; i < 3; ++i) {
                a[i] = {r100[i] - r000[i], r010[i] - r000[i], r001[i] - r000[i]};
                rhs[i] = -r000[i];
            }
            const MPoly deta = det3(a);
            const auto& fpt = order4_catalog()[static_cast<size_t>(line)].coords;
            const MPoly linf =
                (MPoly::variable(d.uvar) * fpt[static_cast<size_t>(d.vvar)] -
                 MPoly::variable(d.vvar) * fpt[static_cast<size_t>(d.uvar)])
                    .primitive()
                    .poly;
            const MPoly den2 = divide_exact(deta, linf);
            const auto cram = [&](size_t col) {
                auto mm = a;
                for (size_t i = 0; i < 3; ++i) mm[i][col] = rhs[i];
                return divide_exact(det3(mm), linf);
            };
            const RatFun l1(cram(0), den2);
            const RatFun l2(cram(1), den2);
            const RatFun l6(cram(2), den2);
            f.lambda[0] = l1;
            f.lambda[1] = l2;
            for (size_t j = 2; j <= 4; ++j)
                f.lambda[j] = RatFun(v000[j]) + RatFun(v100[j] - v000[j]) * l1 +
                              RatFun(v010[j] - v000[j]) * l2;
            f.lambda[5] = l6;
            f.solvability = deta.primitive().poly;
            // rational roots of the residual-determinant quadratic, if any,
            // are candidate points without an order-6 equation
            Monomial m20, m11, m02;
            m20.e[static_cast<size_t>(d.uvar)] = 2;
            m11.e[static_cast<size_t>(d.uvar)] = 1;
            m11.e[static_cast<size_t>(d.vvar)] = 1;
            m02.e[static_cast<size_t>(d.vvar)] = 2;
            const Rational qa = den2.coeff(m20), qb = den2.coeff(m11), qc = den2.coeff(m02);
            if (qa.is_zero())
                throw SymbolicEliminationFailure("order-6 line family: degenerate denominator");
            if (const auto roots = quadratic_rational_roots(qa, qb, qc)) {
                for (const Rational& t : *roots) {
                    const Rational u(t.num(), mpz_class(1));
                    const Rational v(t.den(), mpz_class(1));
                    std::array<Rational, 3> at{Rational(0), Rational(0), Rational(0)};
                    at[static_cast<size_t>(d.uvar)] = u;
                    at[static_cast<size_t>(d.vvar)] = v;
                    std::vector<std::vector<Rational>> num(3, std::vector<Rational>(3));
                    std::vector<Rational> nrhs(3);
                    for (size_t i = 0; i < 3; ++i) {
                        for (size_t j = 0; j < 3; ++j) num[i][j] = a[i][j].eval(at);
                        nrhs[i] = rhs[i].eval(at);
                    }
                    if (solve_linear(num, nrhs).kind != SolveKind::Inconsistent) continue;
                    ExceptionalPoint ex;
                    ex.coords = primitive_point(line_embed(line, u, v));
                    const auto fr = find_mde(index3_form(ex.coords, 72), 7);
                    if (fr.kind != MdeSearch::Family)
                        throw InternalCheckError(
                            "order-6 line family: exceptional point lacks an order-7 family");
                    ex.order7 = affine_family(fr.solution, 0);
                    f.exceptional.push_back(std::move(ex));
                }
            }
            std::sort(f.exceptional.begin(), f.exceptional.end(),
                      [](const ExceptionalPoint& x, const ExceptionalPoint& y) {
                          return lex_less(x.coords, y.coords);
                      });
            f.note = f.exceptional.empty()
                         ? "The solve degenerates only at the line's minimal-order-4 point and "
                           "at irrational points."
                         : "The two exceptional points admit no order-6 equation; each carries "
                           "a one-parameter family of order-7 equations.";
            out.push_back(std::move(f));
        }
        return out;
    }();
    return families;
}

const Order7Generic& derive_order7_lambdas() {
    static const Order7Generic generic = [] {
        const std::vector<long> cl{6, 4, 2, 0};
        const auto base =
            ladder_lambda(7, cl, {{0, Rational(0)}, {5, Rational(0)}, {6, Rational(0)}});
        const auto e1 =
            ladder_lambda(7, cl, {{0, Rational(1)}, {5, Rational(0)}, {6, Rational(0)}});
        const auto e6 =
            ladder_lambda(7, cl, {{0, Rational(0)}, {5, Rational(1)}, {6, Rational(0)}});
        const auto e7 =
            ladder_lambda(7, cl, {{0, Rational(0)}, {5, Rational(0)}, {6, Rational(1)}});
        for (size_t j = 1; j <= 4; ++j)
            if (!(e6[j] == base[j]))
                throw InternalCheckError("order-7 formulas: Delta slot leaks into q^0");
        const auto r0 = residual_coords(7, system_rows(7, symbolic_point(), base));
        const auto r1 = residual_coords(7, system_rows(7, symbolic_point(), e1));
        const auto r6 = residual_coords(7, system_rows(7, symbolic_point(), e6));
        const auto r7 = residual_coords(7, system_rows(7, symbolic_point(), e7));
        std::array<std::array<MPoly, 3>, 3> a;
        std::array<MPoly, 3> rhs;
        for (size_t i = 0; i < 3; ++i) {
            a[i] = {r1[i] - r0[i], r6[i] - r0[i], r7[i] - r0[i]};
            rhs[i] = -r0[i];
        }
        const MPoly d = det3(a);
        const auto cram = [&](size_t col) {
            auto mm = a;
            for (size_t i = 0; i < 3; ++i) mm[i][col] = rhs[i];
            return det3(mm);
        };
        Order7Generic out;
        out.denominator = plane_cubic(d);
        const RatFun l1(cram(0), d);
        const RatFun l6(cram(1), d);
        const RatFun l7(cram(2), d);
        if (!(l1.den() == out.denominator.poly))
            throw InternalCheckError("order-7 formulas: denominator failed to normalize");
        out.lambda[0] = l1;
        for (size_t j = 1; j <= 4; ++j)
            out.lambda[j] = RatFun(base[j]) + RatFun(e1[j] - base[j]) * l1 +
                            RatFun(e7[j] - base[j]) * l7;
        out.lambda[5] = l6;
        out.lambda[6] = l7;
        return out;
    }();
    return generic;
}

// ===========================================================================
// Point classification
// ===========================================================================

ClassifiedPoint classify_point(const std::array<Rational, 3>& coords) {
    if (coords[0].is_zero() && coords[1].is_zero() && coords[2].is_zero())
        throw std::invalid_argument("classify_point: zero point");
    ClassifiedPoint cp;
    Rational lead;
    for (const auto& x : coords)
        if (!x.is_zero()) {
            lead = x;
            break;
        }
    for (size_t i = 0; i < 3; ++i) cp.coords[i] = coords[i] / lead;
    const auto prim = classify_detail::primitive_point(coords);
    for (int i = 0; i < 4; ++i) {
        const auto f = form_coeffs(i);
        cp.on_line[static_cast<size_t>(i)] =
            (f[0] * prim[0] + f[1] * prim[1] + f[2] * prim[2]).is_zero();
    }
    cp.on_Q = derive_cubic_Q().cubic.eval(prim).is_zero();
    cp.on_S = derive_order7_lambdas().denominator.eval(prim).is_zero();

    int predicted = 7;
    std::string note = "generic point: a unique order-7 equation, rational over the "
                       "denominator cubic";
    const auto in_catalog = [&](const std::vector<CatalogEntry>& cat) {
        return std::any_of(cat.begin(), cat.end(),
                           [&](const CatalogEntry& e) { return e.coords == prim; });
    };
    if (in_catalog(order4_catalog())) {
        predicted = 4;
        note = "minimal-order-4 point of the catalog";
    } else if (in_catalog(order5_catalog())) {
        predicted = 5;
        note = "minimal-order-5 point of the catalog";
    } else if (cp.on_line[0] || cp.on_line[1] || cp.on_line[2] || cp.on_line[3]) {
        predicted = 6;
        note = "on a vanishing-class line: carries the order-6 divisor family";
        for (const auto& fam : order6_divisor_families())
            for (const auto& ex : fam.exceptional)
                if (ex.coords == prim) {
                    predicted = 7;
                    note = "exceptional line point: no order-6 equation; the order-7 "
                           "equations form a one-parameter family";
                }
    } else if (cp.on_Q) {
        predicted = 6;
        note = "on the cubic Q: carries the order-6 divisor family";
    } else if (cp.on_S) {
        predicted = 8;
        note = "on the order-7 denominator cubic: orders up to 7 are ruled out exactly; "
               "an order-8 family exists (generic minimality on this locus is an "
               "empirical pattern, confirmed here for this point)";
    }
    cp.predicted_order = predicted;
    try {
        const MinMdeResult mm = min_mde(index3_form(prim, 72), 8);
        cp.minimal_order = mm.order;
        cp.search = mm.result;
        cp.order_label = std::to_string(mm.order);
    } catch (const NotFoundBelow&) {
        cp.minimal_order = 0;
        cp.order_label = "no equation through order 8 (search capped)";
    }
    if (cp.minimal_order != predicted)
        throw InternalCheckError("classify_point: divisor prediction " +
                                 std::to_string(predicted) + " disagrees with the search (" +
                                 cp.order_label + ") at " + index3_expr(prim));
    cp.note = std::move(note);
    return cp;
}

// ===========================================================================
// q^0 feasibility for order-3 equations, and Calabi-Yau candidates
// ===========================================================================

namespace {

Rational q0_at(const std::map<long, Rational>& q0, long l2) {
    const auto it = q0.find(l2);
    return it == q0.end() ? Rational(0) : it->second;
}

std::array<Rational, 2> indicial_lambda_pair(const Rational& x1, const Rational& x2) {
    // two roots of x^3 + 6x^2 + (8 + s1)x - s2 determine (s1, s2)
    const Rational s1 = -(x1 * x1 + x1 * x2 + x2 * x2 + Rational(6) * (x1 + x2) + Rational(8));
    const Rational s2 = -x1 * x2 * (x1 + x2 + Rational(6));
    return {s1, s2};
}

}  // namespace

FeasibilityReport q0_mde3_feasibility(int k, int index2, const std::map<long, Rational>& q0) {
    if (index2 <= 0) throw std::invalid_argument("q0_mde3_feasibility: index must be positive");
    const bool odd = k % 2 != 0;
    for (const auto& [l2, v] : q0) {
        if (v.is_zero()) continue;
        if ((l2 < 0 ? -l2 : l2) > index2)
            throw std::invalid_argument("q0_mde3_feasibility: support exceeds the index");
        const Rational mirror = q0_at(q0, -l2);
        if (!(mirror == (odd ? -v : v)))
            throw std::invalid_argument("q0_mde3_feasibility: weight symmetry violated");
    }
    FeasibilityReport rep;
    // classes at l >= 0, with the l = 0 coefficient halved so that weighted
    // sums over classes equal half the symmetric sums over all l
    std::vector<std::pair<long, Rational>> cls;
    for (const auto& [l2, v] : q0) {
        if (l2 < 0 || v.is_zero()) continue;
        cls.emplace_back(l2, l2 == 0 ? v / Rational(2) : v);
    }
    std::sort(cls.begin(), cls.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    rep.class_count = static_cast<int>(cls.size());

    const auto exclude = [&](std::string why) {
        rep.allowed = false;
        rep.reason = std::move(why);
        return rep;
    };
    const auto allow = [&](std::string why) {
        rep.allowed = true;
        rep.reason = std::move(why);
        return rep;
    };
    const auto lam_from_top = [&]() {
        const Rational x1 = indicial_x(k, index2, cls[0].first);
        const Rational x2 = indicial_x(k, index2, cls[1].first);
        rep.lambda = indicial_lambda_pair(x1, x2);
    };

    if (cls.empty()) {
        if (k <= 6)
            return exclude("q^0 vanishes identically: dividing by Delta lands below weight -5 "
                           "before a nonzero q^0 appears");
        rep.notes.push_back("q^0 vanishes; the conditions apply to the Delta-reduced form");
        return allow("no obstruction visible at q^0");
    }
    if (k < -5)
        return exclude("weight below -5: the vanishing order at z = 0 of a weak form cannot "
                       "reach " + std::to_string(-k));
    if (cls.size() > 3)
        return exclude("more than three q^0 classes: the indicial cubic cannot vanish on all "
                       "of them");

    Rational sc, scl, scl2, scl3;
    long sumsq = 0;
    for (const auto& [l2, cv] : cls) {
        const Rational l(l2);
        sc += cv;
        scl += cv * l;
        scl2 += cv * l * l;
        scl3 += cv * l * l * l;
        sumsq += l2 * l2;
    }

    if (cls.size() == 3) {
        const long want = -static_cast<long>(2 * k + 3) * index2;
        if (sumsq != want)
            return exclude("indicial trace mismatch: sum of l2^2 over the classes must be "
                           "-(2k+3)*2m = " + std::to_string(want));
        if (!odd) {
            if (!sc.is_zero())
                return exclude("even weight: the halved q^0 class sum must vanish");
            if (k == -4 && !scl2.is_zero())
                return exclude("weight -4: the l^2-weighted class sum must vanish");
            if (k == -2 && scl2.is_zero())
                rep.notes.push_back("l^2-weighted sum vanishes as well: the vanishing order at "
                                    "z = 0 exceeds the weight bound");
        } else {
            if (!scl.is_zero())
                return exclude("odd weight: the l-weighted class sum must vanish");
            if (k == -5 && !scl3.is_zero())
                return exclude("weight -5: the l^3-weighted class sum must vanish");
            if (k == -3 && scl3.is_zero())
                rep.notes.push_back("l^3-weighted sum vanishes as well: the vanishing order at "
                                    "z = 0 exceeds the weight bound");
        }
        lam_from_top();
        return allow("three classes fit the order-3 indicial cubic");
    }

    if (cls.size() == 2) {
        if (k == 0) {
            const long hi = cls[0].first, lo = cls[1].first;
            const Rational chi = cls[0].second;
            bool holds;
            if (lo == 0) {
                // index2 * a(0,0) == 2 * (3*hi^2 - index2) * a(0, hi), halved form
                holds = Rational(index2) * cls[1].second ==
                        Rational(3 * hi * hi - index2) * chi;
            } else {
                holds = Rational(3 * lo * lo - index2) * cls[1].second ==
                        -(Rational(3 * hi * hi - index2) * chi);
            }
            if (!holds) return exclude("weight-0 two-class coefficient relation fails");
            lam_from_top();
            return allow("two classes satisfy the weight-0 coefficient relation");
        }
        if (k > 0) {
            lam_from_top();
            return allow("two classes, positive weight: no q^0 obstruction");
        }
        if (!odd) {
            if (!sc.is_zero())
                return exclude("negative even weight: the halved q^0 class sum must vanish");
            if (k != -2)
                return exclude("two classes with even negative weight force weight -2");
            lam_from_top();
            return allow("two classes at even negative weight -2");
        }
        if (scl.is_zero()) {
            if (k != -3)
                return exclude("vanishing l-weighted sum forces weight -3 for two odd classes");
        } else if (k != -1) {
            return exclude("two classes with odd negative weight force weight -1");
        }
        lam_from_top();
        return allow("two classes at odd negative weight");
    }

    // single class
    const long l2 = cls[0].first;
    if (k == 0) {
        if (l2 > 0 && index2 == 3 * l2 * l2) {
            rep.notes.push_back("theta-quotient locus: the order-0 slot vanishes and the "
                                "order-1 slot stays free");
            return allow("single class with index matching 6*l^2");
        }
        return exclude("a single weight-0 class requires index = 6*l^2 with l > 0");
    }
    if (k > 0) {
        rep.notes.push_back("one class pins only one root of the indicial cubic");
        return allow("single class, positive weight: no q^0 obstruction");
    }
    if (!odd) return exclude("negative even weight cannot live on a single class");
    if (k != -1) return exclude("a single class with odd negative weight forces weight -1");
    rep.notes.push_back("one class pins only one root of the indicial cubic");
    return allow("single class at weight -1");
}

std::vector<CyCandidate> cy_mde3_euler(long m) {
    if (m <= 0) throw std::invalid_argument("cy_mde3_euler: the half-dimension must be positive");
    std::vector<CyCandidate> out;
    for (long l = 0; l < m; ++l) {
        const long den = m - 6 * l * l;
        if (den == 0) continue;
        const Rational coeff = Rational(2 * m * (6 * m - 1), den);
        if (!coeff.is_integer()) continue;
        CyCandidate c;
        c.l = l;
        c.coeff = coeff;
        c.euler = Rational(4) + Rational(2) * coeff;
        out.push_back(std::move(c));
    }
    return out;
}

// ===========================================================================
// The intersection of S and Q
// ===========================================================================

namespace {

// Coefficients of p viewed as a polynomial in c, ascending.
std::vector<MPoly> univariate_in_c(const MPoly& p) {
    int d = 0;
    for (const auto& [m, co] : p.terms()) d = std::max(d, m.e[2]);
    std::vector<MPoly> out(static_cast<size_t>(d) + 1);
    for (const auto& [m, co] : p.terms()) {
        Monomial q = m;
        q.e[2] = 0;
        out[static_cast<size_t>(m.e[2])].add_term(q, co);
    }
    return out;
}

std::vector<std::vector<MPoly>> sylvester(const std::vector<MPoly>& u,
                                          const std::vector<MPoly>& v) {
    const size_t du = u.size() - 1, dv = v.size() - 1;
    const size_t n = du + dv;
    std::vector<std::vector<MPoly>> m(n, std::vector<MPoly>(n));
    for (size_t i = 0; i < dv; ++i)
        for (size_t j = 0; j <= du; ++j) m[i][i + j] = u[du - j];
    for (size_t i = 0; i < du; ++i)
        for (size_t j = 0; j <= dv; ++j) m[dv + i][i + j] = v[dv - j];
    return m;
}

// Fraction-free determinant; exact divisions stay polynomial throughout.
MPoly bareiss_det(std::vector<std::vector<MPoly>> m) {
    const size_t n = m.size();
    if (n == 0) return MPoly(Rational(1));
    MPoly prev(Rational(1));
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t sw = k + 1;
            while (sw < n && m[sw][k].is_zero()) ++sw;
            if (sw == n) return MPoly();
            std::swap(m[k], m[sw]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = divide_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
        prev = m[k][k];
    }
    return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

bool is_prime_ul(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

unsigned long next_prime_after(unsigned long n) {
    unsigned long p = n + 1;
    while (!is_prime_ul(p)) ++p;
    return p;
}

// Roots in F_p of the integer polynomial with the given descending coefficients.
std::vector<unsigned long> roots_mod_p(const std::vector<mpz_class>& desc, unsigned long p) {
    std::vector<unsigned long> cs;
    for (const auto& z : desc) cs.push_back(mpz_fdiv_ui(z.get_mpz_t(), p));
    std::vector<unsigned long> roots;
    for (unsigned long t = 0; t < p; ++t) {
        unsigned long acc = 0;
        for (unsigned long c : cs) acc = (acc * t + c) % p;
        if (acc == 0) roots.push_back(t);
    }
    return roots;
}

// u/v congruent to x mod m with |u|, |v| <= sqrt(m/2), when one exists.
std::optional<Rational> rational_reconstruct(const mpz_class& x, const mpz_class& m) {
    mpz_class bound;
    const mpz_class half = (m - 1) / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    mpz_class r0 = m, r1 = ((x % m) + m) % m, t0 = 0, t1 = 1;
    while (r1 > bound) {
        const mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        mpz_class t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    return Rational(r1, t1);
}

// Descending integer coefficients of a homogeneous form in (a, b), dehomogenized
// at b = 1; the form is made primitive first.
std::vector<mpz_class> descending_int_coeffs(const MPoly& homog, int deg) {
    const MPoly p = homog.primitive().poly;
    std::vector<mpz_class> out;
    for (int i = 0; i <= deg; ++i) {
        Monomial m;
        m.e[0] = deg - i;
        m.e[1] = i;
        const Rational co = p.coeff(m);
        if (!co.is_integer())
            throw InternalCheckError("root scan: primitive form has a non-integer coefficient");
        out.push_back(co.num());
    }
    return out;
}

// All rational roots t = a/b of a homogeneous form, via a three-prime modular
// scan with rational reconstruction and exact verification.
std::vector<Rational> rational_roots_homog(const MPoly& homog, int deg) {
    const auto cs = descending_int_coeffs(homog, deg);
    if (cs.front() == 0)
        throw InternalCheckError("root scan: the form vanishes at infinity");
    std::array<unsigned long, 3> ps{};
    unsigned long p = 65520;
    for (auto& slot : ps) {
        do {
            p = next_prime_after(p);
        } while (mpz_fdiv_ui(cs.front().get_mpz_t(), p) == 0);
        slot = p;
    }
    std::array<std::vector<unsigned long>, 3> roots;
    for (size_t i = 0; i < 3; ++i) {
        roots[i] = roots_mod_p(cs, ps[i]);
        if (roots[i].empty()) return {};
    }
    const mpz_class m1(static_cast<unsigned long>(ps[0])), m2(static_cast<unsigned long>(ps[1])),
        m3(static_cast<unsigned long>(ps[2]));
    const mpz_class m = m1 * m2 * m3;
    const auto eval_exact = [&](const Rational& t) {
        Rational acc;
        for (const auto& z : cs) acc = acc * t + Rational(z, mpz_class(1));
        return acc;
    };
    std::set<std::string> seen;
    std::vector<Rational> out;
    for (unsigned long r1 : roots[0])
        for (unsigned long r2 : roots[1])
            for (unsigned long r3 : roots[2]) {
                // CRT over the three primes
                mpz_class x(0), mod(1);
                const std::array<std::pair<mpz_class, unsigned long>, 3> parts{
                    {{m1, r1}, {m2, r2}, {m3, r3}}};
                for (const auto& [pi, ri] : parts) {
                    mpz_class inv;
                    if (mpz_invert(inv.get_mpz_t(), mod.get_mpz_t(), pi.get_mpz_t()) == 0)
                        throw InternalCheckError("root scan: CRT moduli are not coprime");
                    const mpz_class target = ((mpz_class(ri) - x) % pi + pi) % pi;
                    x += mod * ((target * inv) % pi);
                    mod *= pi;
                }
                const auto cand = rational_reconstruct(x, m);
                if (!cand) continue;
                if (!eval_exact(*cand).is_zero()) continue;
                if (seen.insert(cand->str()).second) out.push_back(*cand);
            }
    return out;
}

// Smallest prime (above the scan window) at which the form has no root,
// certifying the absence of rational roots.
unsigned long no_root_prime(const MPoly& homog, int deg) {
    const auto cs = descending_int_coeffs(homog, deg);
    if (cs.front() == 0)
        throw InternalCheckError("root certificate: the form vanishes at infinity");
    unsigned long p = 65520;
    for (int attempts = 0; attempts < 64; ++attempts) {
        p = next_prime_after(p);
        if (mpz_fdiv_ui(cs.front().get_mpz_t(), p) == 0) continue;
        if (roots_mod_p(cs, p).empty()) return p;
    }
    throw InternalCheckError("root certificate: no certifying prime found");
}

int poly_deg(const std::vector<Rational>& p) {
    for (size_t i = p.size(); i > 0; --i)
        if (!p[i - 1].is_zero()) return static_cast<int>(i) - 1;
    return -1;
}

std::vector<Rational> poly_rem(std::vector<Rational> a, const std::vector<Rational>& b) {
    const int db = poly_deg(b);
    for (int da = poly_deg(a); da >= db; da = poly_deg(a)) {
        const Rational f = a[static_cast<size_t>(da)] / b[static_cast<size_t>(db)];
        for (int i = 0; i <= db; ++i)
            a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
    }
    return a;
}

// Monic gcd of two univariate rational polynomials (ascending coefficients).
std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    while (poly_deg(b) >= 0) {
        auto r = poly_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    const int d = poly_deg(a);
    if (d < 0) throw InternalCheckError("poly_gcd: both polynomials vanish");
    const Rational lead = a[static_cast<size_t>(d)];
    a.resize(static_cast<size_t>(d) + 1);
    for (auto& co : a) co /= lead;
    return a;
}

}  // namespace

const SQIntersection& sq_intersection() {
    static const SQIntersection inter = [] {
        SQIntersection out;
        const MPoly& s = derive_order7_lambdas().denominator.poly;
        const MPoly& q = derive_cubic_Q().cubic.poly;
        out.resultant = bareiss_det(sylvester(univariate_in_c(s), univariate_in_c(q)));
        if (!out.resultant.is_homogeneous() || out.resultant.degree() != 9)
            throw InternalCheckError("S/Q intersection: resultant degree is not 9");
        // the five catalog points on both cubics account for five projections
        std::vector<std::array<Rational, 3>> pts;
        for (size_t i = 0; i < 4; ++i) pts.push_back(order4_catalog()[i].coords);
        pts.push_back(order5_catalog()[0].coords);
        MPoly rem = out.resultant;
        for (const auto& p : pts) {
            const MPoly lin =
                (MPoly::variable(0) * p[1] - MPoly::variable(1) * p[0]).primitive().poly;
            rem = divide_exact(rem, lin);
        }
        const auto roots = rational_roots_homog(rem, 4);
        if (roots.size() != 1)
            throw InternalCheckError("S/Q intersection: expected exactly one extra projection");
        const Rational u(roots.front().num(), mpz_class(1));
        const Rational v(roots.front().den(), mpz_class(1));
        rem = divide_exact(
            rem, (MPoly::variable(0) * v - MPoly::variable(1) * u).primitive().poly);
        out.residual_factor = rem.primitive().poly;
        if (!out.residual_factor.is_homogeneous() || out.residual_factor.degree() != 3)
            throw InternalCheckError("S/Q intersection: leftover factor is not a cubic");
        out.certificate_prime = no_root_prime(out.residual_factor, 3);
        // lift the new projection to the unique common point above it
        const auto at_uv = [&](const MPoly& poly) {
            std::vector<Rational> coeffs;
            for (const auto& co : univariate_in_c(poly))
                coeffs.push_back(co.eval({u, v, Rational(0)}));
            return coeffs;
        };
        const auto g = poly_gcd(at_uv(s), at_uv(q));
        if (poly_deg(g) != 1)
            throw InternalCheckError("S/Q intersection: projection does not lift uniquely");
        const Rational c0 = -g[0] / g[1];
        const std::array<Rational, 3> lifted{u, v, c0};
        if (!s.eval(lifted).is_zero() || !q.eval(lifted).is_zero())
            throw InternalCheckError("S/Q intersection: lifted point misses a cubic");
        pts.push_back(classify_detail::primitive_point(lifted));
        out.points = std::move(pts);
        return out;
    }();
    return inter;
}

}  // namespace jform
