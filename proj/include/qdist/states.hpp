#pragma once

#include "qdist/bell.hpp"
#include "qdist/core.hpp"
#include "qdist/rng.hpp"

namespace qdist::states {

struct IsotropicParams {
    std::size_t d = 2;
    double f = 1.0;  // fidelity with Phi+, in [0, 1]
};

struct WernerParams {
    std::size_t d = 2;
    double p = 0.0;  // antisymmetric weight, in [0, 1]
};

// f Phi+ + (1-f)/(d^2-1) (1 - Phi+)
DensityMatrix isotropic(std::size_t d, double f);

// (1-p)/(d^2+d) (1 + F) + p/(d^2-d) (1 - F)
DensityMatrix werner(std::size_t d, double p);

ComplexMatrix swap_operator(std::size_t d);

// Choi state of the qudit depolarizing channel, built from the Bell
// projector sum; equals isotropic(d, 1-p).
DensityMatrix depolarizing_choi(std::size_t d, double p);

// The 3x3-system PPT entangled family, normalized by 1/(8a+1).
DensityMatrix horodecki_state(double a);

// (1-p) * block MC state + p * horodecki_state(1/2); d = 3 blocks only
DensityMatrix block_mixture_state(const bell::MCBlock& block, const ComplexMatrix& alpha, double p);

// the two alpha matrices used with block {1, 6, 8}
ComplexMatrix theta_alpha(int k);

// Ginibre factor G (dim x rank), rho = G G^dag / tr: Hilbert-Schmidt-induced
// measure at full rank, uniform pure states at rank 1.
DensityMatrix random_density(const std::vector<std::size_t>& dims, std::size_t rank, CounterRng& rng);

ComplexMatrix random_mc_matrix(std::size_t size, CounterRng& rng);

// QR of a complex Ginibre matrix with the R diagonal phase fixed
ComplexMatrix random_unitary(std::size_t d, CounterRng& rng);

std::vector<cplx> random_pure_vector(std::size_t dim, CounterRng& rng);

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, CounterRng& rng);

}  // namespace qdist::states
