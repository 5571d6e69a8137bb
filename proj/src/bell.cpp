#include "qdist/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdist::bell {

namespace {

cplx root_of_unity(std::size_t d, long long power) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(power) / static_cast<double>(d);
    return cplx(std::cos(ang), std::sin(ang));
}

}  // namespace

PauliPair gen_pauli(std::size_t d) {
    if (d < 2) throw std::invalid_argument("gen_pauli: d must be at least 2");
    PauliPair p{ComplexMatrix(d, d), ComplexMatrix(d, d)};
    for (std::size_t k = 0; k < d; ++k) {
        p.X((k + 1) % d, k) = 1.0;
        p.Z(k, k) = root_of_unity(d, -static_cast<long long>(k));
    }
    return p;
}

std::vector<cplx> bell_state(std::size_t d, std::size_t n, std::size_t m) {
    if (n >= d || m >= d) throw std::invalid_argument("bell_state: indices out of range");
    std::vector<cplx> v(d * d, cplx(0.0, 0.0));
    const double w = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i)
        v[i * d + (i + m) % d] = w * root_of_unity(d, -static_cast<long long>(n * i));
    return v;
}

ComplexMatrix op_of_vec(const std::vector<cplx>& psi, std::size_t da, std::size_t db) {
    if (psi.size() != da * db) throw std::invalid_argument("op_of_vec: length does not factor as declared dims");
    ComplexMatrix out(da, db);
    out.a = psi;
    return out;
}

bool is_ssd(const std::vector<std::vector<cplx>>& vectors, std::size_t da, std::size_t db, double tol) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(vectors.size());
    for (const auto& v : vectors) ops.push_back(op_of_vec(v, da, db));
    for (const auto& X : ops)
        for (const auto& Y : ops) {
            const ComplexMatrix Yd = adjoint(Y);
            const ComplexMatrix XYd = X * Yd;
            const ComplexMatrix YdX = Yd * X;
            for (const auto& Z : ops)
                if (max_abs(XYd * Z - Z * YdX) > tol) return false;
        }
    return true;
}

namespace {

bool congruence_ok(std::size_t d, const BellIndex& a, const BellIndex& b, const BellIndex& c) {
    const long long na = static_cast<long long>(a.n), ma = static_cast<long long>(a.m);
    const long long nb = static_cast<long long>(b.n), mb = static_cast<long long>(b.m);
    const long long nc = static_cast<long long>(c.n), mc = static_cast<long long>(c.m);
    const long long lhs = ma * (nc - nb) - nc * mb;
    const long long rhs = na * (mc - mb) - mc * nb;
    const long long dd = static_cast<long long>(d);
    return ((lhs - rhs) % dd + dd) % dd == 0;
}

// triples that involve the candidate index, against a partial block
bool congruence_ok_incremental(std::size_t d, const std::vector<BellIndex>& s, const BellIndex& c) {
    std::vector<const BellIndex*> all;
    all.reserve(s.size() + 1);
    for (const auto& x : s) all.push_back(&x);
    all.push_back(&c);
    const std::size_t l = all.size(), last = l - 1;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t k = 0; k < l; ++k) {
                if (i != last && j != last && k != last) continue;
                if (!congruence_ok(d, *all[i], *all[j], *all[k])) return false;
            }
    return true;
}

void extend_blocks(std::size_t d, std::vector<BellIndex>& cur, std::size_t next_k,
                   std::vector<MCBlock>& out) {
    if (cur.size() == d) {
        out.push_back(MCBlock{d, cur});
        return;
    }
    const std::size_t remaining = d - cur.size();
    for (std::size_t k = next_k; k + remaining <= d * d + 1; ++k) {
        BellIndex cand = BellIndex::from_linear(k, d);
        if (!congruence_ok_incremental(d, cur, cand)) continue;
        cur.push_back(cand);
        extend_blocks(d, cur, k + 1, out);
        cur.pop_back();
    }
}

}  // namespace

bool block_is_mc(std::size_t d, const std::vector<BellIndex>& indices) {
    if (indices.size() > d)
        throw std::invalid_argument("block_is_mc: more than d indices is outside the test's domain");
    for (const auto& x : indices)
        for (const auto& y : indices)
            if (&x != &y && x.n == y.n && x.m == y.m)
                throw std::invalid_argument("block_is_mc: duplicate index");
    for (const auto& a : indices)
        for (const auto& b : indices)
            for (const auto& c : indices)
                if (!congruence_ok(d, a, b, c)) return false;
    return true;
}

std::vector<MCBlock> enumerate_mc_blocks(std::size_t d) {
    if (d < 2 || d > 6) throw std::invalid_argument("enumerate_mc_blocks: d outside guard range [2,6]");
    const std::size_t n2 = d * d;
    std::vector<std::vector<MCBlock>> per_first(n2 + 1);
#pragma omp parallel for schedule(dynamic)
    for (long long k1 = 1; k1 <= static_cast<long long>(n2 - d + 1); ++k1) {
        std::vector<BellIndex> cur{BellIndex::from_linear(static_cast<std::size_t>(k1), d)};
        extend_blocks(d, cur, static_cast<std::size_t>(k1) + 1, per_first[static_cast<std::size_t>(k1)]);
    }
    std::vector<MCBlock> out;
    for (auto& v : per_first)
        for (auto& b : v) out.push_back(std::move(b));
    return out;  // already lexicographic: ascending first index, recursion ascending
}

void validate_mc_matrix(const ComplexMatrix& alpha) {
    if (!alpha.square()) throw std::invalid_argument("mc matrix: not square");
    if (hermiticity_defect(alpha) > 1e-9) throw std::invalid_argument("mc matrix: not Hermitian");
    if (std::abs(trace(alpha) - cplx(1.0)) > 1e-9) throw std::invalid_argument("mc matrix: trace differs from 1");
    const auto ev = kernels::eigvals_hermitian(alpha);
    if (!ev.empty() && ev.back() < -1e-9) throw std::invalid_argument("mc matrix: not PSD");
}

DensityMatrix mc_state_from_block(const MCBlock& block, const ComplexMatrix& alpha) {
    if (alpha.rows != block.indices.size())
        throw std::invalid_argument("mc_state_from_block: alpha side does not match block size");
    validate_mc_matrix(alpha);
    if (!block_is_mc(block.d, block.indices))
        throw std::invalid_argument("mc_state_from_block: block fails the congruence test");
    const std::size_t d = block.d, n = d * d, l = block.indices.size();
    std::vector<std::vector<cplx>> vecs(l);
    for (std::size_t a = 0; a < l; ++a)
        vecs[a] = bell_state(d, block.indices[a].n, block.indices[a].m);
    ComplexMatrix out(n, n);
    for (std::size_t a = 0; a < l; ++a)
        for (std::size_t b = 0; b < l; ++b) {
            const cplx w = alpha(a, b);
            if (w == cplx(0.0, 0.0)) continue;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out(i, j) += w * vecs[a][i] * std::conj(vecs[b][j]);
        }
    return DensityMatrix{{d, d}, std::move(out)};
}

SsdBasis mc_block_ssd_basis(const MCBlock& block) {
    const std::size_t d = block.d, l = block.indices.size();
    std::vector<ComplexMatrix> ops(l);
    for (std::size_t a = 0; a < l; ++a)
        ops[a] = op_of_vec(bell_state(d, block.indices[a].n, block.indices[a].m), d, d);

    // A generic linear combination of the block operators shares the joint
    // singular bases; retry the (deterministic) coefficient draw if it lands
    // on degenerate or vanishing singular values.
    std::uint64_t lcg = 0x243F6A8885A308D3ull;
    for (auto idx : block.indices) lcg ^= idx.linear() * 0x9E3779B97F4A7C15ull;
    for (int attempt = 0; attempt < 64; ++attempt) {
        ComplexMatrix M(d, d);
        for (std::size_t a = 0; a < l; ++a) {
            lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
            const double re = 2.0 * (static_cast<double>(lcg >> 11) * 0x1p-53) - 1.0;
            lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
            const double im = 2.0 * (static_cast<double>(lcg >> 11) * 0x1p-53) - 1.0;
            const cplx c(re, im);
            for (std::size_t i = 0; i < M.size(); ++i) M.a[i] += c * ops[a].a[i];
        }
        auto sv = kernels::svd(M);
        bool good = sv.singular.back() > 1e-8;
        for (std::size_t k = 0; k + 1 < d && good; ++k)
            if (sv.singular[k] - sv.singular[k + 1] < 1e-8) good = false;
        if (!good) continue;

        SsdBasis basis;
        basis.basis_a = sv.U;
        basis.basis_b = conj(sv.V);
        basis.diag = ComplexMatrix(l, d);
        const ComplexMatrix Ud = adjoint(sv.U);
        bool diagonal = true;
        for (std::size_t a = 0; a < l && diagonal; ++a) {
            const ComplexMatrix t = Ud * ops[a] * sv.V;
            for (std::size_t i = 0; i < d && diagonal; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    if (i == j) continue;
                    if (std::abs(t(i, j)) > 1e-8) {
                        diagonal = false;
                        break;
                    }
                }
            for (std::size_t k = 0; k < d; ++k) basis.diag(a, k) = t(k, k);
        }
        if (diagonal) return basis;
    }
    throw std::runtime_error("mc_block_ssd_basis: no joint diagonalization found (block not SSD?)");
}

ComplexMatrix mc_alpha_computational(const MCBlock& block, const ComplexMatrix& alpha) {
    const SsdBasis basis = mc_block_ssd_basis(block);
    const std::size_t d = block.d, l = block.indices.size();
    ComplexMatrix out(d, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t k2 = 0; k2 < d; ++k2) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < l; ++a)
                for (std::size_t b = 0; b < l; ++b)
                    s += alpha(a, b) * basis.diag(a, k) * std::conj(basis.diag(b, k2));
            out(k, k2) = s;
        }
    return out;
}

double mc_coherent_information(const ComplexMatrix& alpha) {
    validate_mc_matrix(alpha);
    std::vector<double> diag(alpha.rows);
    for (std::size_t k = 0; k < alpha.rows; ++k) diag[k] = std::max(0.0, alpha(k, k).real());
    return shannon_entropy(diag) - shannon_entropy(kernels::eigvals_hermitian(alpha));
}

DensityMatrix dephase_mc(const DensityMatrix& omega) {
    if (omega.dims.size() != 2 || omega.dims[0] != omega.dims[1])
        throw std::invalid_argument("dephase_mc: state not of d x d form");
    const std::size_t d = omega.dims[0], n = d * d;
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t ll = 0; ll < d; ++ll) {
                    if (i == j && k == ll) continue;
                    off += std::norm(omega.mat(i * d + j, k * d + ll));
                }
    if (std::sqrt(off) > 1e-9)
        throw std::invalid_argument("dephase_mc: input is not in MC computational form (off-pattern mass " +
                                    std::to_string(std::sqrt(off)) + ")");
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < d; ++k) out(k * d + k, k * d + k) = omega.mat(k * d + k, k * d + k).real();
    return DensityMatrix{{d, d}, std::move(out)};
}

DensityMatrix dephased_mc_block_state(const MCBlock& block, const ComplexMatrix& alpha) {
    const SsdBasis basis = mc_block_ssd_basis(block);
    const ComplexMatrix at = mc_alpha_computational(block, alpha);
    const std::size_t d = block.d, n = d * d;
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < d; ++k) {
        const double w = std::max(0.0, at(k, k).real());
        if (w == 0.0) continue;
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) v[i * d + j] = basis.basis_a(i, k) * basis.basis_b(j, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += w * v[i] * std::conj(v[j]);
    }
    return DensityMatrix{{d, d}, std::move(out)};
}

}  // namespace qdist::bell
