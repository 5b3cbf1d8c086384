#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "jform/series.hpp"

namespace jform {

// Monomial E4^e4 * E6^e6 * Delta^delta in the canonical basis of M_w.
struct ModularMonomial {
    int e4 = 0, e6 = 0, delta = 0;
    int weight() const { return 4 * e4 + 6 * e6 + 12 * delta; }
    std::string str() const;
    friend bool operator==(const ModularMonomial& x, const ModularMonomial& y) {
        return x.e4 == y.e4 && x.e6 == y.e6 && x.delta == y.delta;
    }
};

// Canonical ordered monomial basis of M_w: {E4^a E6^b Delta^d}, 4a+6b+12d = w,
// b in {0,1}, ordered by ascending Delta-power.  Throws on odd/negative w.
std::vector<ModularMonomial> modular_basis(int w);

// One-variable series by name: E2, E4, E6, Delta, theta, j.
// (eta powers have their own entry point below.)
FourierSeries standard_series(const std::string& name, long qtrunc);

// eta^r for any integer r (negative r through exact division).
FourierSeries eta_pow(int r, long qtrunc);

FourierSeries modular_series(const ModularMonomial& mon, long qtrunc);

// Coordinates of a one-variable (zeta-free) expansion over modular_basis(w).
// The combination must match exactly through the truncation window.
std::vector<Rational> modular_coordinates(const FourierSeries& f, int w);

// Weak Jacobi generators and derived forms by stable name:
//   phi_-2_1, phi_0_1, phi_-1_1/2, phi_-1_2, phi_0_3/2, phi_0_2, phi_0_4,
//   psi_0_2, rho_0_2, omega_0_2, rho_0_3, psi_0_3, phi_0_3
// Each construction is cross-checked against its q^0/q^1 fingerprint before
// being handed out; a mismatch throws InternalCheckError.
FourierSeries generator(const std::string& name, long qtrunc);

const std::vector<std::string>& generator_names();

// Monomial spanning set of J^w_{k,m}: E4^a E6^b Delta^d phi_-2_1^c phi_0_1^(m-c)
// with (a,b,d) running over modular_basis(k + 2c), c = 0..m.
struct JacobiBasisElement {
    ModularMonomial mon;
    int phi21_pow = 0;
    int phi01_pow = 0;
    std::string str() const;
};
std::vector<JacobiBasisElement> jacobi_basis(int k, int m);
FourierSeries jacobi_series(const JacobiBasisElement& el, long qtrunc);

// Basis of the subspace of J^w_{k,m} vanishing to q-order j: Delta^j times the
// basis of J^w_{k-12j, m}.
std::vector<FourierSeries> jacobi_q_subspace(int k, int m, int j, long qtrunc);

// Weight-0 index-3 form a*rho + b*psi + c*phi, the coordinate system used by
// the classification module ("paper-index3" basis).
FourierSeries index3_form(const std::array<Rational, 3>& coords, long qtrunc);
ParamSeries index3_param_form(long qtrunc);  // coords left symbolic as (a, b, c)

struct Preset {
    FourierSeries series;
    std::optional<std::array<Rational, 3>> index3_coords;
};
// Elliptic-genus presets: K3, CY3, CY5 (these two take the Euler number e),
// CY4_psi, CY4_rho, Hilb3K3, Kum3A, OG6, CY6_2rho, CY6_alpha, CY6_beta,
// CY6_order5.
Preset elliptic_genus_preset(const std::string& name, long qtrunc,
                             std::optional<Rational> euler = std::nullopt);

const std::vector<std::string>& preset_names();

}  // namespace jform
