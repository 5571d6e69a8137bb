#pragma once

#include <iosfwd>

#include "qdist/core.hpp"

namespace qdist::sdp {

// One real equality constraint Re(sum_k coeff_k * X_{block_k}(r_k, c_k)) = rhs.
// Assembled internally into a Hermitian pairing <A, X> = rhs.
struct ConstraintTerm {
    std::size_t block;
    std::size_t r, c;
    cplx coeff;
};

struct LinearConstraint {
    std::vector<ConstraintTerm> terms;
    double rhs = 0.0;
};

// Standard form: minimize sum_b tr(C_b X_b) over Hermitian PSD blocks X_b
// subject to the listed real equality constraints.
struct SdpProblem {
    std::vector<std::size_t> block_dims;
    std::vector<ComplexMatrix> cost;  // Hermitian, one per block
    std::vector<LinearConstraint> constraints;

    std::size_t add_block(std::size_t dim);
    void add_cost(std::size_t block, std::size_t r, std::size_t c, cplx v);  // Hermitian-completes
    // constraint Re(expr) = rhs, and optionally Im(expr) = im_rhs
    void add_re_constraint(std::vector<ConstraintTerm> terms, double rhs);
    void add_complex_constraint(std::vector<ConstraintTerm> terms, cplx rhs);

    // Debugging text form, line-oriented:
    //   blocks <count>
    //   dim <block> <side>
    //   C <block> <row> <col> <re> <im>          (nonzero cost entries)
    //   constraint <rhs>                          (followed by its terms)
    //   term <block> <row> <col> <re> <im>
    // Not a stable interchange format.
    void dump(std::ostream& os) const;
};

struct SolverOptions {
    double gap_tol = 1e-7;
    double feas_tol = 1e-7;
    std::size_t max_iter = 50000;
    double mu0 = 1.0;          // initial augmented-Lagrangian weight
    double relaxation = 1.0;   // multiplier step scale in (0, 1]
    std::size_t adapt_every = 100;
};

enum class SolveStatus { optimal, max_iter, infeasible };

struct SdpSolution {
    std::vector<ComplexMatrix> X;
    double objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;  // relative
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
};

SdpSolution solve(const SdpProblem& problem, const SolverOptions& opts = {});

// --- problem builders -------------------------------------------------------

// ||M||_1 via the 2x2-block SDP; rectangular inputs are zero-padded square.
double trace_norm_sdp(const ComplexMatrix& M, const SolverOptions& opts = {});

struct DegradingResult {
    double value = 0.0;  // 1/2 trace distance at the optimum
    QuantumMap map;      // the optimizing CPTP map (Choi block of the solution)
    SdpSolution sol;
};

// dg(rho) = min_D 1/2 || rho_AE - D(rho_AB) ||_1 over CPTP D: B -> E, with
// rho_AE from the minimal purification. The conjugate flag targets the
// entrywise conjugate of rho_AE instead.
DegradingResult dg(const DensityMatrix& rho, bool conjugate = false, const SolverOptions& opts = {});

// adeg(rho) = min_A 1/2 || rho_AB - A(rho_AE) ||_1 over CPTP A: E -> B.
DegradingResult adeg(const DensityMatrix& rho, const SolverOptions& opts = {});

struct EwdResult {
    double value = 0.0;  // log2 of the SDP optimum
    SdpSolution sol;
};

// max tr(rho R) with R >= 0 and -1 <= R^Gamma <= 1 (operator interval),
// reported as its log2.
EwdResult e_wd(const DensityMatrix& rho, const SolverOptions& opts = {});

double log_negativity(const DensityMatrix& rho);

struct OverlapResult {
    double primal = 0.0;      // SDP route
    double eigenvalue = 0.0;  // largest eigenvalue of the averaged projector pair
    SdpSolution sol;
};

// Maximal overlap of an antidegradable state with Phi+; closed form (1+d)/(2d).
OverlapResult antideg_overlap_max(std::size_t d, const SolverOptions& opts = {});

}  // namespace qdist::sdp
