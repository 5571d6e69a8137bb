#pragma once

#include "qdist/core.hpp"

namespace qdist::bell {

// Generalized Bell index (n, m) at dimension d, with the linear numbering
// k = n*d + m + 1 in [1, d^2].
struct BellIndex {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t d = 2;

    std::size_t linear() const { return n * d + m + 1; }
    static BellIndex from_linear(std::size_t k, std::size_t d) {
        return BellIndex{(k - 1) / d, (k - 1) % d, d};
    }
};

struct MCBlock {
    std::size_t d = 2;
    std::vector<BellIndex> indices;  // ascending linear index
};

// Shift and clock operators. Z carries conjugate phases (Z|k> = w^{-k}|k>,
// w = exp(2*pi*i/d)) so that the matrix identity XZ = wZX holds exactly.
struct PauliPair {
    ComplexMatrix X;
    ComplexMatrix Z;
};
PauliPair gen_pauli(std::size_t d);

// (1 (x) X^m Z^n) |Phi+>, unit norm, orthonormal across (n, m)
std::vector<cplx> bell_state(std::size_t d, std::size_t n, std::size_t m);

// op(psi) = sum_ij lambda_ij |i><j| for psi = sum_ij lambda_ij |ij>
ComplexMatrix op_of_vec(const std::vector<cplx>& psi, std::size_t da, std::size_t db);

// Simultaneous Schmidt decomposability: X Y^dag Z = Z Y^dag X over all
// ordered triples from the family, up to tol on the max entry.
bool is_ssd(const std::vector<std::vector<cplx>>& vectors, std::size_t da, std::size_t db,
            double tol = 1e-9);

// Congruence test m_a(n_c - n_b) - n_c m_b = n_a(m_c - m_b) - m_c n_b (mod d)
// over all ordered triples. Inputs with more than d indices are rejected.
bool block_is_mc(std::size_t d, const std::vector<BellIndex>& indices);

// All size-d blocks passing block_is_mc, sorted lexicographically by linear
// indices. Guard range 2 <= d <= 6.
std::vector<MCBlock> enumerate_mc_blocks(std::size_t d);

// Checks alpha is PSD (within 1e-9) with trace 1 (within 1e-9); throws otherwise.
void validate_mc_matrix(const ComplexMatrix& alpha);

// omega = sum_{i,j in B} alpha_ij |Phi_i><Phi_j|
DensityMatrix mc_state_from_block(const MCBlock& block, const ComplexMatrix& alpha);

// Joint local bases diagonalizing all Bell vectors of an MC block: the
// vectors become sum_k diag(a, k) |colA_k> (x) |colB_k>.
struct SsdBasis {
    ComplexMatrix basis_a;  // d x d unitary, columns
    ComplexMatrix basis_b;
    ComplexMatrix diag;  // block size x d, row per block member
};
SsdBasis mc_block_ssd_basis(const MCBlock& block);

// The computational-form MC matrix of the block state: the (alpha_ij) of the
// representation sum alpha_ij |ii><jj| in the block's SSD bases.
ComplexMatrix mc_alpha_computational(const MCBlock& block, const ComplexMatrix& alpha);

// H(diag alpha) - S(alpha): coherent information of the MC state with
// computational-form matrix alpha.
double mc_coherent_information(const ComplexMatrix& alpha);

// For input sum alpha_ij |ii><jj| returns sum alpha_kk |kk><kk|. Off-pattern
// Frobenius mass above 1e-9 is rejected.
DensityMatrix dephase_mc(const DensityMatrix& omega);

// Dephased counterpart of a block state, expressed in the block's SSD bases.
DensityMatrix dephased_mc_block_state(const MCBlock& block, const ComplexMatrix& alpha);

}  // namespace qdist::bell
