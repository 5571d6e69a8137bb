#pragma once

#include "qdist/complex_matrix.hpp"

namespace qdist::kernels {

// Dense kernels come in two flavours: a plain serial reference and an
// OpenMP version. The un-suffixed entry points dispatch on problem size;
// the serial versions stay around as the ground truth for tests and for
// the kernel benchmark.

ComplexMatrix matmul_serial(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix matmul_omp(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix matmul(const ComplexMatrix& A, const ComplexMatrix& B);

ComplexMatrix kron_serial(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix kron_omp(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

// C = V diag(w) V† for V with orthonormal columns (n x r). Used by entropy
// evaluation and by the PSD cone projection inside the SDP solver.
ComplexMatrix herm_reconstruct_serial(const ComplexMatrix& V, const std::vector<double>& w);
ComplexMatrix herm_reconstruct_omp(const ComplexMatrix& V, const std::vector<double>& w);
ComplexMatrix herm_reconstruct(const ComplexMatrix& V, const std::vector<double>& w);

struct EigResult {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // columns, same order
};

// Cyclic complex Jacobi for Hermitian input (symmetrized internally).
// Reconstruction error is ~1e-14 * ||A|| at the sides used here.
EigResult eig_hermitian(const ComplexMatrix& A);

// Eigenvalues only, descending.
std::vector<double> eigvals_hermitian(const ComplexMatrix& A);

struct SvdResult {
    ComplexMatrix U;               // m x r
    std::vector<double> singular;  // descending, length r = min(m,n)
    ComplexMatrix V;               // n x r, M = U diag(s) V†
};

// SVD via the Hermitian eigendecomposition of M†M (or MM† when wider than
// tall). Adequate at side <= ~100 and the 1e-5-ish tolerances in play.
SvdResult svd(const ComplexMatrix& M);

std::vector<double> singular_values(const ComplexMatrix& M);

// Moore-Penrose pseudo-inverse; singular values below cutoff are dropped.
ComplexMatrix pinv(const ComplexMatrix& M, double cutoff = 1e-9);

}  // namespace qdist::kernels

namespace qdist {
inline ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B) {
    return kernels::matmul(A, B);
}
}  // namespace qdist
