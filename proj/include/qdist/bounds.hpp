#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qdist/bell.hpp"
#include "qdist/core.hpp"
#include "qdist/sdp.hpp"

namespace qdist::bounds {

// max(I(A>B), I(B>A), 0): the one-way distillation rate certified by hashing.
double hashing_lower(const DensityMatrix& rho);

// I(A>B) + 4*delta*log|E| + 2(1+delta)h(delta/(1+delta)), |E| = rank(rho).
// The caller supplies delta (typically the dg SDP value) so the formula and
// the solver stay independently testable.
double approx_deg_upper(const DensityMatrix& rho, double delta);

enum class Rank2Verdict { degradable, antidegradable, both, undecided };

struct Rank2Class {
    Rank2Verdict verdict = Rank2Verdict::undecided;
    double dg_value = 0.0;
    double adeg_value = 0.0;
};

// SDP-based dichotomy for rank-2 two-qubit states.
Rank2Class classify_rank2(const DensityMatrix& rho, double class_tol = 1e-5,
                          const sdp::SolverOptions& opts = {});

// Sufficient-only degradability certificate via the transfer-matrix route:
// T(D) = T(rho_AE) T(rho_AB)^{-1}, then a CP/TP check on the induced map.
struct TransferCheck {
    bool is_degradable = false;
    bool undetermined = false;  // singular transfer and no certificate
    QuantumMap map;
    double residual = 0.0;  // ||T(rho_AE) - T(D) T(rho_AB)||_F
    double cp_defect = 0.0;
    double tp_defect = 0.0;
};
TransferCheck transfer_degradability_check(const DensityMatrix& rho);
// Same machinery in the other direction: a map E -> B with A(rho_AE) = rho_AB.
TransferCheck transfer_antidegradability_check(const DensityMatrix& rho);

struct EdaResult {
    double value = 0.0;
    bool verified = false;          // best decomposition re-checked with the dg SDP
    std::size_t valid_candidates = 0;
    std::string note;
};

// Upper bound on one-way distillable entanglement for 2-qubit states via
// pure decompositions of size 2k paired into rank-2 terms; minimized over
// unitaries with a multi-start simplex search. pair_terms = false keeps the
// pure terms unpaired (the entanglement-of-formation-style endpoint), which
// by convexity can never beat the paired bound at the same unitary.
EdaResult e_da_two_qubit(const DensityMatrix& rho, std::size_t k, std::size_t restarts,
                         std::uint64_t seed, bool pair_terms = true);

// log d - (1-f) log(d-1) - h(f) for f >= 1/d, else 0
double ppt_ree_isotropic(std::size_t d, double f);

// 1 - h(p) for p >= 1/2, else 0
double ppt_ree_werner(std::size_t d, double p);

// piecewise bound: 0, then 1 - h(p), then log((d-2)/d) + p log((d+2)/(d-2));
// d = 2 stays on the middle branch through p = 1.
double rains_werner(std::size_t d, double p);

// (1-p) * I(A>B) of the block MC component
double e_mp_block(const bell::MCBlock& block, const ComplexMatrix& alpha, double p);

struct BoundEntry {
    double value = 0.0;
    double gap = 0.0;
    double residual = 0.0;
    std::string note;
};

struct BoundReport {
    std::string state_label;
    double lower_hashing = 0.0;
    std::map<std::string, BoundEntry> upper;
};

}  // namespace qdist::bounds
