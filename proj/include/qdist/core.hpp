#pragma once

#include <optional>
#include <vector>

#include "qdist/complex_matrix.hpp"
#include "qdist/kernels.hpp"

namespace qdist {

// Validation tolerances shared by DensityMatrix and QuantumMap checks.
struct ValidationTolerances {
    double hermiticity = 1e-10;
    double min_eigenvalue = 1e-9;  // eigenvalues down to -min_eigenvalue pass
    double trace = 1e-9;
};

struct ValidationIssue {
    std::string what;  // names the violated invariant, with the offending number
};

// Hermitian, PSD, trace-1 operator with an explicit subsystem split.
struct DensityMatrix {
    std::vector<std::size_t> dims;  // e.g. {dA, dB} or {dA, dB, dE}
    ComplexMatrix mat;

    std::size_t total_dim() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
    // throws std::invalid_argument naming the failed invariant
    void validate(const ValidationTolerances& tol = {}) const;
    std::optional<ValidationIssue> check(const ValidationTolerances& tol = {}) const;
};

// Completely positive map held as its unnormalized Choi operator on
// (input x output); trace equals dim_in for trace-preserving maps.
struct QuantumMap {
    std::size_t dim_in = 0;
    std::size_t dim_out = 0;
    ComplexMatrix choi;  // side dim_in * dim_out

    double cp_defect() const;  // |most negative Choi eigenvalue|, 0 when CP
    double tp_defect() const;  // max-abs of (tr_out choi - identity_in)
};

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // columns
};

Spectrum spectrum(const ComplexMatrix& hermitian);

DensityMatrix make_state(std::vector<std::size_t> dims, ComplexMatrix m,
                         const ValidationTolerances& tol = {});

// --- marginals and transforms -------------------------------------------

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem);

// Minimal purification: |E| = numerical rank at eigenvalue cutoff 1e-10.
// Returns the pure state vector on A x B x E (original dims extended by |E|).
struct Purification {
    std::vector<std::size_t> dims;  // original dims + {dE}
    std::vector<cplx> vec;
    std::size_t env_dim;
};
Purification purify(const DensityMatrix& rho);

// rho_AE = tr_B |phi><phi| for the minimal purification of a bipartite rho.
DensityMatrix complementary_state(const DensityMatrix& rho);

// --- entropic functionals (base-2 throughout) ----------------------------

double von_neumann_entropy(const DensityMatrix& rho);
double shannon_entropy(const std::vector<double>& p);
double binary_entropy(double p);

// I(A>B) = S(B) - S(AB) for bipartite rho
double coherent_information(const DensityMatrix& rho);
// coherent information after swapping the two subsystems: I(B>A)
double coherent_information_reverse(const DensityMatrix& rho);

// D(rho||sigma); +infinity when rho has support outside sigma's
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double trace_norm(const ComplexMatrix& m);

bool is_ppt(const DensityMatrix& rho, double tol);

// <Phi+|rho|Phi+> for equal local dimensions
double mes_overlap(const DensityMatrix& rho);

DensityMatrix swap_subsystems(const DensityMatrix& rho);

std::vector<cplx> max_entangled_vector(std::size_t d);
ComplexMatrix projector(const std::vector<cplx>& v);

// --- channel plumbing ------------------------------------------------------

// (id (x) map) applied to the second factor of rho on dims {dA, map.dim_in}.
DensityMatrix apply_to_second(const QuantumMap& map, const DensityMatrix& rho);

QuantumMap compose(const QuantumMap& after, const QuantumMap& before);

// Entry permutation <ij|T|kl> = <lj|choi|ki>; a linear involution that turns
// map composition into matrix multiplication.
ComplexMatrix transfer_matrix(const QuantumMap& map);
ComplexMatrix transfer_of_choi(const ComplexMatrix& choi, std::size_t dim_in, std::size_t dim_out);
ComplexMatrix choi_of_transfer(const ComplexMatrix& t, std::size_t dim_in, std::size_t dim_out);

QuantumMap identity_map(std::size_t d);

}  // namespace qdist
