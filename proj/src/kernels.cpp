#include "qdist/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdist::kernels {

namespace {

// Flop-count threshold below which the OpenMP versions are not worth the
// fork/join overhead.
bool use_parallel(std::size_t work) {
#ifdef _OPENMP
    return work >= 200000 && omp_get_max_threads() > 1;
#else
    (void)work;
    return false;
#endif
}

}  // namespace

ComplexMatrix matmul_serial(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: inner dimensions differ");
    ComplexMatrix C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const cplx* arow = &A.a[i * A.cols];
        cplx* crow = &C.a[i * C.cols];
        for (std::size_t k = 0; k < A.cols; ++k) {
            const cplx av = arow[k];
            if (av == cplx(0.0, 0.0)) continue;
            const cplx* brow = &B.a[k * B.cols];
            for (std::size_t j = 0; j < B.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return C;
}

ComplexMatrix matmul_omp(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: inner dimensions differ");
    ComplexMatrix C(A.rows, B.cols);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(A.rows); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const cplx* arow = &A.a[i * A.cols];
        cplx* crow = &C.a[i * C.cols];
        for (std::size_t k = 0; k < A.cols; ++k) {
            const cplx av = arow[k];
            if (av == cplx(0.0, 0.0)) continue;
            const cplx* brow = &B.a[k * B.cols];
            for (std::size_t j = 0; j < B.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return C;
}

ComplexMatrix matmul(const ComplexMatrix& A, const ComplexMatrix& B) {
    return use_parallel(A.rows * A.cols * B.cols) ? matmul_omp(A, B) : matmul_serial(A, B);
}

ComplexMatrix kron_serial(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix C(A.rows * B.rows, A.cols * B.cols);
    for (std::size_t ar = 0; ar < A.rows; ++ar)
        for (std::size_t ac = 0; ac < A.cols; ++ac) {
            const cplx av = A(ar, ac);
            if (av == cplx(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < B.rows; ++br)
                for (std::size_t bc = 0; bc < B.cols; ++bc)
                    C(ar * B.rows + br, ac * B.cols + bc) = av * B(br, bc);
        }
    return C;
}

ComplexMatrix kron_omp(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix C(A.rows * B.rows, A.cols * B.cols);
#pragma omp parallel for collapse(2) schedule(static)
    for (long long ar = 0; ar < static_cast<long long>(A.rows); ++ar)
        for (long long br = 0; br < static_cast<long long>(B.rows); ++br) {
            for (std::size_t ac = 0; ac < A.cols; ++ac) {
                const cplx av = A(static_cast<std::size_t>(ar), ac);
                if (av == cplx(0.0, 0.0)) continue;
                for (std::size_t bc = 0; bc < B.cols; ++bc)
                    C(static_cast<std::size_t>(ar) * B.rows + static_cast<std::size_t>(br),
                      ac * B.cols + bc) = av * B(static_cast<std::size_t>(br), bc);
            }
        }
    return C;
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    return use_parallel(A.size() * B.size()) ? kron_omp(A, B) : kron_serial(A, B);
}

ComplexMatrix herm_reconstruct_serial(const ComplexMatrix& V, const std::vector<double>& w) {
    const std::size_t n = V.rows, r = V.cols;
    ComplexMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            const cplx lv = w[k] * V(i, k);
            if (lv == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) C(i, j) += lv * std::conj(V(j, k));
        }
    return C;
}

ComplexMatrix herm_reconstruct_omp(const ComplexMatrix& V, const std::vector<double>& w) {
    const std::size_t n = V.rows, r = V.cols;
    ComplexMatrix C(n, n);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t k = 0; k < r; ++k) {
            const cplx lv = w[k] * V(i, k);
            if (lv == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) C(i, j) += lv * std::conj(V(j, k));
        }
    }
    return C;
}

ComplexMatrix herm_reconstruct(const ComplexMatrix& V, const std::vector<double>& w) {
    return use_parallel(V.rows * V.rows * V.cols) ? herm_reconstruct_omp(V, w)
                                                  : herm_reconstruct_serial(V, w);
}

namespace {

// One exact 2x2 diagonalization applied at pivot (p, q). Zeroes A(p,q) and
// keeps the rotation angle small so the sweep converges monotonically.
//
// With g = A(p,q) = |g| e^{i phi}, the unitary R = [[c, -conj(s)], [s, c]]
// with s = t*c*e^{-i phi} kills the pivot when t solves
// t^2 - 2*tau*t - 1 = 0, tau = (A(q,q) - A(p,p)) / (2|g|); the small root
// keeps |t| <= 1.
void jacobi_rotate(ComplexMatrix& A, ComplexMatrix& V, std::size_t p, std::size_t q) {
    const cplx apq = A(p, q);
    const double g = std::abs(apq);
    if (g == 0.0) return;
    const cplx phase = apq / g;
    const double tau = (A(q, q).real() - A(p, p).real()) / (2.0 * g);
    const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const cplx s = t * c * std::conj(phase);
    const cplx sc = std::conj(s);

    const std::size_t n = A.rows;
    for (std::size_t k = 0; k < n; ++k) {  // A <- R^dag A
        const cplx arp = A(p, k), arq = A(q, k);
        A(p, k) = c * arp + sc * arq;
        A(q, k) = -s * arp + c * arq;
    }
    for (std::size_t k = 0; k < n; ++k) {  // A <- A R
        const cplx acp = A(k, p), acq = A(k, q);
        A(k, p) = c * acp + s * acq;
        A(k, q) = -sc * acp + c * acq;
    }
    for (std::size_t k = 0; k < V.rows; ++k) {
        const cplx vkp = V(k, p), vkq = V(k, q);
        V(k, p) = c * vkp + s * vkq;
        V(k, q) = -sc * vkp + c * vkq;
    }
    A(p, q) = 0.0;
    A(q, p) = 0.0;
    A(p, p) = cplx(A(p, p).real(), 0.0);
    A(q, q) = cplx(A(q, q).real(), 0.0);
}

double off_norm(const ComplexMatrix& A) {
    double s = 0.0;
    for (std::size_t r = 0; r < A.rows; ++r)
        for (std::size_t c = r + 1; c < A.cols; ++c) s += std::norm(A(r, c));
    return std::sqrt(2.0 * s);
}

// Columns of B paired with zero singular values come out as zero vectors;
// replace them with an orthonormal completion so B stays unitary.
void orthonormalize_null_columns(ComplexMatrix& B, const std::vector<double>& sing) {
    const std::size_t n = B.rows, r = B.cols;
    std::size_t seed = 0;
    for (std::size_t k = 0; k < r; ++k) {
        if (sing[k] > 1e-300) continue;
        for (int attempt = 0; attempt < static_cast<int>(n) + 1; ++attempt) {
            std::vector<cplx> v(n, cplx(0.0, 0.0));
            v[(seed + static_cast<std::size_t>(attempt)) % n] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < r; ++j) {
                    if (j == k || (sing[j] <= 1e-300 && j > k)) continue;
                    cplx ip = 0.0;
                    for (std::size_t i = 0; i < n; ++i) ip += std::conj(B(i, j)) * v[i];
                    for (std::size_t i = 0; i < n; ++i) v[i] -= ip * B(i, j);
                }
            }
            double nrm = 0.0;
            for (const auto& z : v) nrm += std::norm(z);
            nrm = std::sqrt(nrm);
            if (nrm > 1e-6) {
                for (std::size_t i = 0; i < n; ++i) B(i, k) = v[i] / nrm;
                break;
            }
        }
        ++seed;
    }
}

}  // namespace

EigResult eig_hermitian(const ComplexMatrix& Ain) {
    if (!Ain.square()) throw std::invalid_argument("eig_hermitian: matrix not square");
    const std::size_t n = Ain.rows;
    ComplexMatrix A = hermitize(Ain);
    ComplexMatrix V = ComplexMatrix::identity(n);
    const double scale = std::max(frobenius_norm(A), 1e-300);
    const double tol = 1e-15 * scale;
    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm(A) > tol; ++sweep) {
        const double thresh = (sweep < 3) ? 0.1 * off_norm(A) / static_cast<double>(n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(A(p, q)) > thresh) jacobi_rotate(A, V, p, q);
    }
    EigResult out;
    out.values.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return A(x, x).real() > A(y, y).real(); });
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = A(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = V(r, order[k]);
    }
    return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& A) { return eig_hermitian(A).values; }

SvdResult svd(const ComplexMatrix& M) {
    const bool wide = M.cols > M.rows;
    // Work with the smaller Gram matrix side.
    const ComplexMatrix Mh = adjoint(M);
    const ComplexMatrix gram = wide ? matmul(M, Mh) : matmul(Mh, M);  // side r0
    EigResult eg = eig_hermitian(gram);
    const std::size_t r0 = gram.rows;
    SvdResult out;
    out.singular.resize(r0);
    for (std::size_t k = 0; k < r0; ++k) out.singular[k] = std::sqrt(std::max(0.0, eg.values[k]));
    if (!wide) {
        out.V = eg.vectors;  // n x r0
        out.U = ComplexMatrix(M.rows, r0);
        ComplexMatrix MV = matmul(M, eg.vectors);
        for (std::size_t k = 0; k < r0; ++k) {
            double s = out.singular[k];
            if (s > 1e-300) {
                for (std::size_t r = 0; r < M.rows; ++r) out.U(r, k) = MV(r, k) / s;
            }
        }
        orthonormalize_null_columns(out.U, out.singular);
    } else {
        out.U = eg.vectors;  // m x r0
        out.V = ComplexMatrix(M.cols, r0);
        ComplexMatrix MhU = matmul(Mh, eg.vectors);
        for (std::size_t k = 0; k < r0; ++k) {
            double s = out.singular[k];
            if (s > 1e-300) {
                for (std::size_t r = 0; r < M.cols; ++r) out.V(r, k) = MhU(r, k) / s;
            }
        }
        orthonormalize_null_columns(out.V, out.singular);
    }
    return out;
}

std::vector<double> singular_values(const ComplexMatrix& M) {
    const ComplexMatrix Mh = adjoint(M);
    const ComplexMatrix gram = (M.cols > M.rows) ? matmul(M, Mh) : matmul(Mh, M);
    std::vector<double> vals = eigvals_hermitian(gram);
    for (auto& v : vals) v = std::sqrt(std::max(0.0, v));
    return vals;
}

ComplexMatrix pinv(const ComplexMatrix& M, double cutoff) {
    SvdResult s = svd(M);
    // pinv = V diag(1/s) U†
    const std::size_t r = s.singular.size();
    ComplexMatrix out(M.cols, M.rows);
    for (std::size_t k = 0; k < r; ++k) {
        if (s.singular[k] <= cutoff) continue;
        const double inv = 1.0 / s.singular[k];
        for (std::size_t i = 0; i < M.cols; ++i) {
            const cplx vi = s.V(i, k) * inv;
            for (std::size_t j = 0; j < M.rows; ++j) out(i, j) += vi * std::conj(s.U(j, k));
        }
    }
    return out;
}

}  // namespace qdist::kernels
