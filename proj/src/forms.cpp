#include "jform/forms.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "jform/heat.hpp"

namespace jform {

namespace {

long sigma_sum(long n, int k) {
    long s = 0;
    for (long d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        long p = 1;
        for (int i = 0; i < k; ++i) p *= d;
        s += p;
    }
    return s;
}

FourierSeries eisenstein(int k, long tr) {
    FourierSeries s(tr);
    s.weight2 = (k == 2) ? 4 : 2 * k;  // E2 occupies the weight-2 slot
    s.index2 = 0;
    s.set(0, 0, Rational(1));
    const long mul = (k == 2) ? -24 : (k == 4 ? 240 : -504);
    for (long n = 1; 24 * n < tr; ++n) s.set(24 * n, 0, Rational(mul * sigma_sum(n, k - 1)));
    return s;
}

// eta = q^{1/24} prod(1-q^n) = sum_{k in Z} (-1)^k q^{(6k+1)^2/24}
FourierSeries eta_base(long tr) {
    FourierSeries s(tr);
    s.weight2 = 1;
    s.index2 = 0;
    for (long k = 0;; ++k) {
        bool hit = false;
        for (long kk : {k, -k}) {
            if (kk == -k && k == 0) continue;
            const long e = (6 * kk + 1) * (6 * kk + 1);
            if (e < tr) {
                s.set(e, 0, Rational((k % 2 == 0) ? 1 : -1));
                hit = true;
            }
        }
        if (!hit && k > 0) break;
    }
    return s;
}

// eta^3 = sum_{k>=0} (-1)^k (2k+1) q^{(2k+1)^2/8}
FourierSeries eta_cubed(long tr) {
    FourierSeries s(tr);
    s.weight2 = 3;
    s.index2 = 0;
    for (long k = 0; 3 * (2 * k + 1) * (2 * k + 1) < tr; ++k)
        s.set(3 * (2 * k + 1) * (2 * k + 1), 0, Rational((k % 2 == 0) ? (2 * k + 1) : -(2 * k + 1)));
    return s;
}

// theta = sum_{n in Z} (-1)^n q^{(2n+1)^2/8} zeta^{(2n+1)/2}
FourierSeries theta_series(long tr) {
    FourierSeries s(tr);
    s.weight2 = 1;
    s.index2 = 1;
    for (long n = 0; 3 * (2 * n + 1) * (2 * n + 1) < tr; ++n) {
        const long e = 3 * (2 * n + 1) * (2 * n + 1);
        const long sign = (n % 2 == 0) ? 1 : -1;
        s.set(e, 2 * n + 1, Rational(sign));
        s.set(e, -(2 * n + 1), Rational(-sign));
    }
    return s;
}

FourierSeries clip_exact(const FourierSeries& s, long tr) {
    if (s.qtrunc() < tr)
        throw InternalCheckError("forms: construction produced a shorter window than promised");
    return s.clipped(tr);
}

struct Fingerprint {
    int w2, m2;
    long lo_ord, nx_ord;
    std::vector<std::pair<long, long>> lo, nx;  // (l2, coefficient)
};

const std::map<std::string, Fingerprint>& fingerprints() {
    static const std::map<std::string, Fingerprint> table = {
        {"phi_-2_1", {-4, 2, 0, 24, {{-2, 1}, {0, -2}, {2, 1}}, {{-4, -2}, {-2, 8}, {0, -12}, {2, 8}, {4, -2}}}},
        {"phi_0_1", {0, 2, 0, 24, {{-2, 1}, {0, 10}, {2, 1}}, {{-4, 10}, {-2, -64}, {0, 108}, {2, -64}, {4, 10}}}},
        {"phi_-1_1/2", {-2, 1, 0, 24, {{-1, -1}, {1, 1}}, {{-3, 1}, {-1, -3}, {1, 3}, {3, -1}}}},
        {"phi_-1_2", {-2, 4, 0, 24, {{-2, -1}, {2, 1}}, {{-6, 1}, {-2, -3}, {2, 3}, {6, -1}}}},
        {"phi_0_3/2", {0, 3, 0, 24, {{-1, 1}, {1, 1}}, {{-5, -1}, {-1, 1}, {1, 1}, {5, -1}}}},
        {"phi_0_2",
         {0, 4, 0, 24, {{-2, 1}, {0, 4}, {2, 1}}, {{-6, 1}, {-4, -8}, {-2, -1}, {0, 16}, {2, -1}, {4, -8}, {6, 1}}}},
        {"phi_0_4",
         {0, 8, 0, 24, {{-2, 1}, {0, 1}, {2, 1}}, {{-8, -1}, {-6, -1}, {-2, 1}, {0, 2}, {2, 1}, {6, -1}, {8, -1}}}},
        {"psi_0_2", {0, 4, 0, 24, {{-4, 1}, {0, 22}, {4, 1}}, {{-4, 232}, {-2, -1024}, {0, 1584}, {2, -1024}, {4, 232}}}},
        {"rho_0_2",
         {0, 4, 0, 24, {{-4, 2}, {-2, -11}, {2, -11}, {4, 2}},
          {{-6, -11}, {-4, 552}, {-2, -2037}, {0, 2992}, {2, -2037}, {4, 552}, {6, -11}}}},
        {"omega_0_2",
         {0, 4, 0, 24, {{-4, 5}, {-2, -308}, {0, -1122}, {2, -308}, {4, 5}},
          {{-6, -308}, {-4, 3624}, {-2, -4812}, {0, 2992}, {2, -4812}, {4, 3624}, {6, -308}}}},
        {"rho_0_3",
         {0, 6, 0, 24, {{-6, 1}, {0, 34}, {6, 1}},
          {{-6, -186}, {-4, 2430}, {-2, -8262}, {0, 12036}, {2, -8262}, {4, 2430}, {6, -186}}}},
        {"psi_0_3",
         {0, 6, 0, 24, {{-4, 1}, {0, 14}, {4, 1}},
          {{-8, 1}, {-6, 40}, {-4, -76}, {-2, -168}, {0, 406}, {2, -168}, {4, -76}, {6, 40}, {8, 1}}}},
        {"phi_0_3",
         {0, 6, 0, 24, {{-2, 1}, {0, 2}, {2, 1}},
          {{-6, -2}, {-4, -2}, {-2, 2}, {0, 4}, {2, 2}, {4, -2}, {6, -2}}}},
    };
    return table;
}

void check_fingerprint(const std::string& name, const FourierSeries& s) {
    auto it = fingerprints().find(name);
    if (it == fingerprints().end()) return;
    const Fingerprint& fp = it->second;
    auto fail = [&](const std::string& what) {
        throw InternalCheckError("generator " + name + ": " + what);
    };
    if (!s.weight2 || *s.weight2 != fp.w2) fail("weight tag does not match its fingerprint");
    if (!s.index2 || *s.index2 != fp.m2) fail("index tag does not match its fingerprint");
    auto check_slice = [&](long ord, const std::vector<std::pair<long, long>>& want) {
        if (ord >= s.qtrunc()) return;  // window too short to check this slice
        auto got = s.qslice(ord);
        if (got.size() != want.size()) fail("q-slice support does not match its fingerprint");
        for (const auto& [l2, c] : want)
            if (got.count(l2) == 0 || got.at(l2) != Rational(c)) fail("q-slice value does not match its fingerprint");
    };
    check_slice(fp.lo_ord, fp.lo);
    check_slice(fp.nx_ord, fp.nx);
}

FourierSeries build_generator(const std::string& name, long tr) {
    const long t3 = tr * 3;  // headroom for quotient constructions
    if (name == "phi_-2_1") {
        FourierSeries th = theta_series(t3), e3 = eta_cubed(t3);
        return clip_exact(div_exact(th * th, e3 * e3), tr);
    }
    if (name == "phi_0_1") return heat_k(-2, generator("phi_-2_1", tr)).scaled(Rational(-2));
    if (name == "phi_-1_1/2") return clip_exact(div_exact(theta_series(t3), eta_cubed(t3)), tr);
    if (name == "phi_-1_2") return clip_exact(div_exact(theta_series(t3).scale_z(2), eta_cubed(t3)), tr);
    if (name == "phi_0_3/2") {
        FourierSeries th = theta_series(t3);
        return clip_exact(div_exact(th.scale_z(2), th), tr);
    }
    if (name == "phi_0_4") {
        FourierSeries th = theta_series(t3);
        return clip_exact(div_exact(th.scale_z(3), th), tr);
    }
    if (name == "phi_0_2") {
        FourierSeries p01 = generator("phi_0_1", tr), p21 = generator("phi_-2_1", tr);
        FourierSeries e4 = standard_series("E4", tr);
        return (p01 * p01 - e4 * p21 * p21).scaled(Rational(1, 24));
    }
    if (name == "phi_0_3") {
        FourierSeries h = generator("phi_0_3/2", tr);
        return h * h;
    }
    if (name == "psi_0_3")
        return generator("phi_0_1", tr) * generator("phi_0_2", tr) -
               generator("phi_0_3", tr).scaled(Rational(14));
    if (name == "rho_0_3") {
        FourierSeries p01 = generator("phi_0_1", tr);
        return p01 * p01 * p01 - generator("psi_0_3", tr).scaled(Rational(30)) -
               generator("phi_0_3", tr).scaled(Rational(303));
    }
    if (name == "psi_0_2" || name == "rho_0_2" || name == "omega_0_2") {
        FourierSeries p01 = generator("phi_0_1", tr), p21 = generator("phi_-2_1", tr);
        FourierSeries A = p01 * p01, B = standard_series("E4", tr) * p21 * p21;
        // q^0 targets on the zeta^{+-2} and zeta^{+-1} classes; the constant
        // class is then forced and re-checked by the fingerprint.
        std::map<long, Rational> tgt;
        if (name == "psi_0_2") tgt = {{4, Rational(1)}, {2, Rational(0)}};
        if (name == "rho_0_2") tgt = {{4, Rational(2)}, {2, Rational(-11)}};
        if (name == "omega_0_2") tgt = {{4, Rational(5)}, {2, Rational(-308)}};
        auto a0 = A.qslice(0), b0 = B.qslice(0);
        Rational det = a0[4] * b0[2] - a0[2] * b0[4];
        Rational xc = (tgt[4] * b0[2] - tgt[2] * b0[4]) / det;
        Rational yc = (a0[4] * tgt[2] - a0[2] * tgt[4]) / det;
        return A.scaled(xc) + B.scaled(yc);
    }
    throw std::invalid_argument("generator: unknown name \"" + name + "\"");
}

std::mutex cache_mutex;
std::map<std::pair<std::string, long>, FourierSeries>& cache() {
    static std::map<std::pair<std::string, long>, FourierSeries> c;
    return c;
}

template <class Builder>
FourierSeries cached(const std::string& key, long tr, Builder&& build) {
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache().find({key, tr});
        if (it != cache().end()) return it->second;
    }
    FourierSeries s = build();
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache().emplace(std::make_pair(key, tr), std::move(s)).first->second;
}

}  // namespace

std::string ModularMonomial::str() const {
    if (e4 == 0 && e6 == 0 && delta == 0) return "1";
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const char* sym, int p) {
        if (p == 0) return;
        if (!first) os << "*";
        os << sym;
        if (p > 1) os << "^" << p;
        first = false;
    };
    emit("E4", e4);
    emit("E6", e6);
    emit("Delta", delta);
    return os.str();
}

std::vector<ModularMonomial> modular_basis(int w) {
    if (w < 0 || w % 2 != 0) throw std::domain_error("modular_basis: weight must be even and non-negative");
    std::vector<ModularMonomial> out;
    for (int d = 0; 12 * d <= w; ++d)
        for (int b = 0; b <= 1; ++b) {
            const int rem = w - 12 * d - 6 * b;
            if (rem >= 0 && rem % 4 == 0) out.push_back(ModularMonomial{rem / 4, b, d});
        }
    return out;
}

FourierSeries standard_series(const std::string& name, long qtrunc) {
    if (qtrunc <= 0) throw std::invalid_argument("standard_series: qtrunc must be positive");
    return cached("std:" + name, qtrunc, [&]() -> FourierSeries {
        if (name == "E2") return eisenstein(2, qtrunc);
        if (name == "E4") return eisenstein(4, qtrunc);
        if (name == "E6") return eisenstein(6, qtrunc);
        if (name == "Delta") {
            FourierSeries e4 = standard_series("E4", qtrunc), e6 = standard_series("E6", qtrunc);
            return (e4 * e4 * e4 - e6 * e6).scaled(Rational(1, 1728));
        }
        if (name == "theta") return theta_series(qtrunc);
        if (name == "j") {
            FourierSeries e4 = standard_series("E4", qtrunc + 72);
            FourierSeries dl = standard_series("Delta", qtrunc + 72);
            return clip_exact(div_exact(e4 * e4 * e4, dl), qtrunc);
        }
        throw std::invalid_argument("standard_series: unknown name \"" + name + "\"");
    });
}

FourierSeries eta_pow(int r, long qtrunc) {
    if (qtrunc <= 0) throw std::invalid_argument("eta_pow: qtrunc must be positive");
    return cached("eta^" + std::to_string(r), qtrunc, [&]() -> FourierSeries {
        if (r == 0) return FourierSeries::constant(Rational(1), qtrunc);
        const int ar = r > 0 ? r : -r;
        const long t = qtrunc + 2 * ar + 2;
        FourierSeries p = FourierSeries::constant(Rational(1), t);
        p.weight2 = 0;
        p.index2 = 0;
        FourierSeries base = (ar % 3 == 0) ? eta_cubed(t) : eta_base(t);
        const int reps = (ar % 3 == 0) ? ar / 3 : ar;
        for (int i = 0; i < reps; ++i) p = p * base;
        if (r < 0) {
            FourierSeries one = FourierSeries::constant(Rational(1), t);
            one.weight2 = 0;
            one.index2 = 0;
            p = div_exact(one, p);
        }
        return clip_exact(p, qtrunc);
    });
}

FourierSeries modular_series(const ModularMonomial& mon, long qtrunc) {
    return cached("mon:" + mon.str(), qtrunc, [&]() -> FourierSeries {
        FourierSeries r = FourierSeries::constant(Rational(1), qtrunc);
        r.weight2 = 0;
        r.index2 = 0;
        for (int i = 0; i < mon.e4; ++i) r = r * standard_series("E4", qtrunc);
        for (int i = 0; i < mon.e6; ++i) r = r * standard_series("E6", qtrunc);
        for (int i = 0; i < mon.delta; ++i) r = r * standard_series("Delta", qtrunc);
        return r;
    });
}

std::vector<Rational> modular_coordinates(const FourierSeries& f, int w) {
    const auto basis = modular_basis(w);
    for (const auto& [key, v] : f.coeffs())
        if (key.second != 0)
            throw std::invalid_argument("modular_coordinates: series depends on zeta");
    if (!basis.empty() && f.qtrunc() <= 24 * basis.back().delta)
        throw InsufficientTruncation("modular_coordinates: truncation does not reach q^" +
                                     std::to_string(basis.back().delta));
    // The basis is triangular in the Delta-power with unit leading coefficient,
    // so the coordinates peel off one q-order at a time.
    FourierSeries rest = f;
    std::vector<Rational> out;
    for (const auto& mon : basis) {
        const Rational c = rest.coefficient(24L * mon.delta, 0);
        out.push_back(c);
        if (!c.is_zero()) rest = rest - modular_series(mon, f.qtrunc()).scaled(c);
    }
    if (rest.first_nonzero())
        throw std::invalid_argument("modular_coordinates: series is not modular of weight " +
                                    std::to_string(w));
    return out;
}

const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names = {
        "phi_-2_1", "phi_0_1", "phi_-1_1/2", "phi_-1_2", "phi_0_3/2", "phi_0_2", "phi_0_4",
        "psi_0_2",  "rho_0_2", "omega_0_2",  "rho_0_3",  "psi_0_3",   "phi_0_3"};
    return names;
}

FourierSeries generator(const std::string& name, long qtrunc) {
    if (qtrunc <= 0) throw std::invalid_argument("generator: qtrunc must be positive");
    return cached("gen:" + name, qtrunc, [&]() -> FourierSeries {
        FourierSeries s = build_generator(name, qtrunc);
        check_fingerprint(name, s);
        return s;
    });
}

std::string JacobiBasisElement::str() const {
    std::ostringstream os;
    bool first = true;
    if (!(mon.e4 == 0 && mon.e6 == 0 && mon.delta == 0)) {
        os << mon.str();
        first = false;
    }
    auto emit = [&](const char* sym, int p) {
        if (p == 0) return;
        if (!first) os << "*";
        os << sym;
        if (p > 1) os << "^" << p;
        first = false;
    };
    emit("phi_-2_1", phi21_pow);
    emit("phi_0_1", phi01_pow);
    if (first) os << "1";
    return os.str();
}

std::vector<JacobiBasisElement> jacobi_basis(int k, int m) {
    if (k % 2 != 0) throw std::domain_error("jacobi_basis: weight must be even");
    if (m < 0) throw std::domain_error("jacobi_basis: index must be non-negative");
    std::vector<JacobiBasisElement> out;
    for (int c = 0; c <= m; ++c) {
        const int w = k + 2 * c;
        if (w < 0) continue;
        for (const auto& mon : modular_basis(w)) out.push_back(JacobiBasisElement{mon, c, m - c});
    }
    return out;
}

FourierSeries jacobi_series(const JacobiBasisElement& el, long qtrunc) {
    FourierSeries r = modular_series(el.mon, qtrunc);
    for (int i = 0; i < el.phi21_pow; ++i) r = r * generator("phi_-2_1", qtrunc);
    for (int i = 0; i < el.phi01_pow; ++i) r = r * generator("phi_0_1", qtrunc);
    return r;
}

std::vector<FourierSeries> jacobi_q_subspace(int k, int m, int j, long qtrunc) {
    if (j < 0) throw std::domain_error("jacobi_q_subspace: q-order must be non-negative");
    std::vector<FourierSeries> out;
    FourierSeries dpow = FourierSeries::constant(Rational(1), qtrunc + 24 * j);
    dpow.weight2 = 0;
    dpow.index2 = 0;
    for (int i = 0; i < j; ++i) dpow = dpow * standard_series("Delta", qtrunc + 24 * j);
    for (const auto& el : jacobi_basis(k - 12 * j, m))
        out.push_back(clip_exact(dpow * jacobi_series(el, qtrunc), qtrunc));
    return out;
}

FourierSeries index3_form(const std::array<Rational, 3>& coords, long qtrunc) {
    return generator("rho_0_3", qtrunc).scaled(coords[0]) +
           generator("psi_0_3", qtrunc).scaled(coords[1]) +
           generator("phi_0_3", qtrunc).scaled(coords[2]);
}

ParamSeries index3_param_form(long qtrunc) {
    return to_param(generator("rho_0_3", qtrunc)).scaled(MPoly::variable(0)) +
           to_param(generator("psi_0_3", qtrunc)).scaled(MPoly::variable(1)) +
           to_param(generator("phi_0_3", qtrunc)).scaled(MPoly::variable(2));
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"K3",      "CY3",      "CY5",       "CY4_psi",
                                                   "CY4_rho", "Hilb3K3",  "Kum3A",     "OG6",
                                                   "CY6_2rho", "CY6_alpha", "CY6_beta", "CY6_order5"};
    return names;
}

Preset elliptic_genus_preset(const std::string& name, long qtrunc, std::optional<Rational> euler) {
    auto index3 = [&](long a, long b, long c) {
        std::array<Rational, 3> coords{Rational(a), Rational(b), Rational(c)};
        return Preset{index3_form(coords, qtrunc), coords};
    };
    if (name == "K3") return Preset{generator("phi_0_1", qtrunc).scaled(Rational(2)), std::nullopt};
    if (name == "CY3" || name == "CY5") {
        if (!euler) throw std::invalid_argument("elliptic_genus_preset: " + name + " needs an Euler number");
        if (name == "CY3")
            return Preset{generator("phi_0_3/2", qtrunc).scaled(*euler / Rational(2)), std::nullopt};
        return Preset{(generator("phi_0_1", qtrunc) * generator("phi_0_3/2", qtrunc))
                          .scaled(*euler / Rational(24)),
                      std::nullopt};
    }
    if (name == "CY4_psi") return Preset{generator("psi_0_2", qtrunc).scaled(Rational(2)), std::nullopt};
    if (name == "CY4_rho") return Preset{generator("rho_0_2", qtrunc), std::nullopt};
    if (name == "Hilb3K3") return index3(4, 64, 508);
    if (name == "Kum3A") return index3(4, 8, 44);
    if (name == "OG6") return index3(4, 24, 348);
    if (name == "CY6_2rho") return index3(2, 0, 0);
    if (name == "CY6_alpha") return index3(2, 0, -34);
    if (name == "CY6_beta") return index3(2, 0, 2430);
    if (name == "CY6_order5") return index3(2, 0, 1734);
    throw std::invalid_argument("elliptic_genus_preset: unknown name \"" + name + "\"");
}

}  // namespace jform
