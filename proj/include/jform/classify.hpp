#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jform/forms.hpp"
#include "jform/heat.hpp"
#include "jform/linalg.hpp"
#include "jform/mpoly.hpp"

namespace jform {

// ---------------------------------------------------------------------------
// Plane cubics and their invariants
// ---------------------------------------------------------------------------

// Homogeneous degree-3 polynomial in (a, b, c) with coprime integer
// coefficients and positive leading coefficient (graded-lex).
struct PlaneCubic {
    MPoly poly;
    Rational eval(const std::array<Rational, 3>& at) const { return poly.eval(at); }
};
// Normalize a nonzero homogeneous cubic into the PlaneCubic shape.
PlaneCubic plane_cubic(const MPoly& p);

struct CubicInvariants {
    Rational aronhold_s;  // raw degree-4 invariant of the ternary cubic
    Rational aronhold_t;  // raw degree-6 invariant
    Rational g2, g3;      // model y^2 = x^3 + g2 x + g3
    Rational disc;        // -(4 g2^3 + 27 g3^2)
    bool nonsingular = false;
    Rational j() const;  // 6912 g2^3 / (4 g2^3 + 27 g3^2); needs disc != 0
};
CubicInvariants cubic_invariants(const PlaneCubic& c);

// True iff some rational u != 0 has g2' = u^4 g2 and g3' = u^6 g3.  Throws
// std::domain_error when both pairs are (0, 0) (no curve to compare).
bool weierstrass_equiv(const std::array<Rational, 2>& p1, const std::array<Rational, 2>& p2);

// Exact n-th root of a rational, when it exists in Q.
std::optional<Rational> rational_nth_root(const Rational& x, int n);
// Roots of A t^2 + B t + C (A != 0), ascending; nullopt unless both rational.
std::optional<std::array<Rational, 2>> quadratic_rational_roots(const Rational& A,
                                                                const Rational& B,
                                                                const Rational& C);

// ---------------------------------------------------------------------------
// The weight-0 index-3 landscape over the coordinates (a, b, c)
// ---------------------------------------------------------------------------
// Throughout, a point (a, b, c) stands for the form a*rho + b*psi + c*phi,
// whose q^0 classes l = 3, 2, 1, 0 carry a, b, c, 2(17a + 7b + c).

struct CatalogEntry {
    std::string locus;               // vanishing pattern singling the point out
    std::array<Rational, 3> coords;  // primitive integers, first nonzero positive
    std::vector<Rational> lambda;    // slot coordinates in layout order
    MDE mde;
};
// The ten forms with an order-4 equation: the four one-class-vanishing lines,
// then the six two-class-vanishing points.  Each entry is re-derived
// symbolically and cross-checked against the direct order-4 search.
const std::vector<CatalogEntry>& order4_catalog();
// The five forms of minimal order 5: the generic solve, then one per line.
const std::vector<CatalogEntry>& order5_catalog();

struct CubicDerivation {
    MPoly determinant;  // raw determinant of the augmented q^1 system
    PlaneCubic cubic;   // its primitive part: the cubic Q
};
const CubicDerivation& derive_cubic_Q();

struct Order7Generic {
    std::array<RatFun, 7> lambda;  // common canonical denominator
    PlaneCubic denominator;        // the cubic S
};
const Order7Generic& derive_order7_lambdas();

// One-parameter family v(t) = base + t * slope, t being the value of the
// flat coordinate `parameter`.
struct AffineFamily {
    size_t parameter = 0;
    std::vector<Rational> base;
    std::vector<Rational> slope;
    std::vector<Rational> at(const Rational& t) const;
};
// View a one-dimensional solution family as affine in one free coordinate.
AffineFamily affine_family(const LinearSolution<Rational>& sol, size_t parameter);

struct ExceptionalPoint {
    std::array<Rational, 3> coords;
    AffineFamily order7;  // the one-parameter order-7 family at the point
};

struct DivisorFamily {
    std::string locus;
    // Ambient coordinates serving as the divisor's parameters ({-1,-1} for Q,
    // which is parametrized by (a, b, c) restricted to Q = 0).
    std::array<int, 2> line_vars{-1, -1};
    std::array<RatFun, 6> lambda;  // order-6 slot values over the divisor
    MPoly solvability;             // the solve is determinate where this is nonzero
    std::vector<ExceptionalPoint> exceptional;  // rational points with no order-6 equation
    std::string note;
};
// The five order-6 divisors: the cubic Q, then the lines a, b, c, 17a+7b+c.
const std::vector<DivisorFamily>& order6_divisor_families();

struct ClassifiedPoint {
    std::array<Rational, 3> coords;  // first nonzero coordinate scaled to 1
    std::array<bool, 4> on_line{};   // a = 0, b = 0, c = 0, 17a+7b+c = 0
    bool on_Q = false;
    bool on_S = false;
    int predicted_order = 0;  // from the divisor pattern and the catalogs
    int minimal_order = 0;    // 0 when the capped search finds nothing
    std::string order_label;
    FindResult search;  // result at the minimal order
    std::string note;
};
// Classify a nonzero point: memberships, exact capped search, and the
// consistency of the two.  A prediction/search mismatch is an internal error.
ClassifiedPoint classify_point(const std::array<Rational, 3>& coords);

// ---------------------------------------------------------------------------
// q^0 necessary conditions for order-3 equations, and their CY consequences
// ---------------------------------------------------------------------------

struct FeasibilityReport {
    bool allowed = false;
    std::string reason;
    int class_count = 0;  // distinct |l| with nonzero a(0, l)
    // (lambda1, lambda2) pinned by the two largest classes, when determined.
    std::optional<std::array<Rational, 2>> lambda;
    std::vector<std::string> notes;
};
// Necessary conditions on the q^0 part of a weight-k index-(index2/2) weak
// Jacobi form satisfying an order-3 equation; q0 maps l2 -> a(0, l).
// Throws std::invalid_argument when q0 lacks the weight-k symmetry.
FeasibilityReport q0_mde3_feasibility(int k, int index2, const std::map<long, Rational>& q0);

struct CyCandidate {
    long l = 0;
    Rational coeff;  // a(0, l) = 2m(6m-1)/(m-6l^2)
    Rational euler;  // (24m^2 - 24l^2)/(m - 6l^2)
};
// Candidates (l, Euler number) for a strict Calabi-Yau 2m-fold whose elliptic
// genus satisfies an order-3 equation.
std::vector<CyCandidate> cy_mde3_euler(long m);

// ---------------------------------------------------------------------------
// The intersection S = Q = 0
// ---------------------------------------------------------------------------

struct SQIntersection {
    MPoly resultant;                              // Res_c(S, Q), degree 9 in (a, b)
    std::vector<std::array<Rational, 3>> points;  // every rational point of S n Q
    MPoly residual_factor;  // cubic factor of the resultant with no rational root
    unsigned long certificate_prime = 0;  // residual_factor has no root mod this prime
};
const SQIntersection& sq_intersection();

// ---------------------------------------------------------------------------
// Symbolic engine primitives (exposed for white-box checks)
// ---------------------------------------------------------------------------
namespace classify_detail {

// Rows of the q^0/q^1 coefficient system of the order-n ansatz applied to
// a*rho + b*psi + c*phi with coordinates substituted from pt and numeric slot
// values lambda.  Row order: q^0 at l2 = 6, 4, 2, 0, then q^1 at l2 = 8, 6,
// 4, 2, 0.
std::array<MPoly, 9> system_rows(int order, const std::array<MPoly, 3>& pt,
                                 const std::vector<Rational>& lambda);

// Coordinates of the q^1 rows over the canonical basis of the subspace of
// ambient forms vanishing at q^0.  The q^0 rows must vanish identically
// (InternalCheckError otherwise); rows outside the basis span raise
// SymbolicEliminationFailure.
std::vector<MPoly> residual_coords(int order, const std::array<MPoly, 9>& rows);

// q^1 slices (l2 = 8, 6, 4, 2, 0) of the canonical residual basis elements.
std::vector<std::array<Rational, 5>> residual_basis_q1(int order);

// Solve the q^0 indicial system for the slot vector: classes_l2 lists the l2
// of the nonzero q^0 classes; `fixed` pins slots by flat index.  Slots whose
// monomial contains Delta never enter the q^0 system; unset ones stay 0.
// Requires as many unknowns as classes and a unique solution.
std::vector<Rational> ladder_lambda(int order, const std::vector<long>& classes_l2,
                                    const std::vector<std::pair<size_t, Rational>>& fixed);

// Primitive integer representative with positive first nonzero coordinate.
std::array<Rational, 3> primitive_point(const std::array<Rational, 3>& v);

}  // namespace classify_detail

}  // namespace jform
