#pragma once

#include <cstdint>
#include <string>

#include "qdist/core.hpp"

namespace qdist::opt {

// Two-Kraus normal form for rank-<=2 two-qubit states: K1 diagonal from
// (r1 cos a, r2 cos b), K2 antidiagonal from (r2 sin b, r1 sin a).
struct NormalFormParams {
    double alpha = 0.0;  // radians
    double beta = 0.0;
    double r1 = 1.0;  // in [0, 1]
    double r2 = 1.0;
};

DensityMatrix normal_form_state(const NormalFormParams& params);

// overlap with Phi+ implied by the parameters: (r1 cos a + r2 cos b)^2 / (2(r1^2+r2^2))
double normal_form_overlap(const NormalFormParams& params);

struct CurvePoint {
    double p = 0.0;
    double value = 0.0;
    bool feasible = false;
    double residual = 0.0;  // max constraint/certificate residual of the minimizer
    std::size_t restarts = 0;
    std::uint64_t seed = 0;
    std::string note;
};

// min I(A>B) over degradable states with <Phi+|rho|Phi+> = 1-p, searched in
// the qubit normal form; exact 0 in the antidegradable regime p >= 1/4 and
// exact 1 at p = 0.
CurvePoint phi_g_qubit_depolarizing(double p, std::size_t restarts, std::uint64_t seed);

// qutrit analogue via a penalized search over 9x9 states with the
// transfer-matrix degradability conditions; exact log2(3) at p = 0 and 0 for
// p >= 1/3.
CurvePoint phi_g_qutrit_depolarizing(double p, std::size_t restarts, std::uint64_t seed);

// coherent information of the Bell-ladder MC state achieving the isotropic
// two-way bound; equals log d - (1-f) log(d-1) - h(f) for f >= 1/d, else 0
double two_way_iso_value(std::size_t d, double f);

// coherent information of (1-p) Psi+ + p Psi-; equals 1 - h(p) for p >= 1/2
double two_way_werner_value(std::size_t d, double p);

// Lower convex envelope over the feasible points (monotone chain), evaluated
// back at every input parameter. Requires at least two feasible points with
// distinct p.
std::vector<CurvePoint> convex_hull_1d(const std::vector<CurvePoint>& points);

}  // namespace qdist::opt
