#include "qdist/states.hpp"

#include <cmath>

namespace qdist {

double CounterRng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(ang);
    has_spare_ = true;
    return r * std::cos(ang);
}

}  // namespace qdist

namespace qdist::states {

DensityMatrix isotropic(std::size_t d, double f) {
    if (d < 2) throw std::invalid_argument("isotropic: d must be at least 2");
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("isotropic: f outside [0,1]");
    const std::size_t n = d * d;
    const ComplexMatrix phi = projector(max_entangled_vector(d));
    const double rest = (1.0 - f) / static_cast<double>(n - 1);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = (f - rest) * phi(i, j);
            if (i == j) m(i, j) += rest;
        }
    return DensityMatrix{{d, d}, std::move(m)};
}

ComplexMatrix swap_operator(std::size_t d) {
    ComplexMatrix f(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
    return f;
}

DensityMatrix werner(std::size_t d, double p) {
    if (d < 2) throw std::invalid_argument("werner: d must be at least 2");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("werner: p outside [0,1]");
    const std::size_t n = d * d;
    const ComplexMatrix f = swap_operator(d);
    const double cs = (1.0 - p) / static_cast<double>(n + d);
    const double ca = p / static_cast<double>(n - d);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = (cs - ca) * f(i, j);
            if (i == j) m(i, j) += cs + ca;
        }
    return DensityMatrix{{d, d}, std::move(m)};
}

DensityMatrix depolarizing_choi(std::size_t d, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing_choi: p outside [0,1]");
    const std::size_t n = d * d;
    ComplexMatrix m = projector(max_entangled_vector(d));
    for (auto& z : m.a) z *= (1.0 - p);
    const double w = p / static_cast<double>(n - 1);
    for (std::size_t nn = 0; nn < d; ++nn)
        for (std::size_t mm = 0; mm < d; ++mm) {
            if (nn == 0 && mm == 0) continue;
            const auto v = bell::bell_state(d, nn, mm);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) += w * v[i] * std::conj(v[j]);
        }
    return DensityMatrix{{d, d}, std::move(m)};
}

DensityMatrix horodecki_state(double a) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("horodecki_state: a outside [0,1]");
    ComplexMatrix m(9, 9);
    for (int i : {0, 1, 2, 3, 4, 5, 7}) m(i, i) = a;
    m(6, 6) = (1.0 + a) / 2.0;
    m(8, 8) = (1.0 + a) / 2.0;
    m(0, 4) = m(4, 0) = a;
    m(0, 8) = m(8, 0) = a;
    m(4, 8) = m(8, 4) = a;
    m(6, 8) = m(8, 6) = std::sqrt(1.0 - a * a) / 2.0;
    const double norm = 1.0 / (8.0 * a + 1.0);
    for (auto& z : m.a) z *= norm;
    return DensityMatrix{{3, 3}, std::move(m)};
}

DensityMatrix block_mixture_state(const bell::MCBlock& block, const ComplexMatrix& alpha, double p) {
    if (block.d != 3) throw std::invalid_argument("block_mixture_state: only d = 3 blocks are supported");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("block_mixture_state: p outside [0,1]");
    const DensityMatrix omega = bell::mc_state_from_block(block, alpha);
    const DensityMatrix tau = horodecki_state(0.5);
    ComplexMatrix m(9, 9);
    for (std::size_t i = 0; i < m.size(); ++i) m.a[i] = (1.0 - p) * omega.mat.a[i] + p * tau.mat.a[i];
    return DensityMatrix{{3, 3}, std::move(m)};
}

ComplexMatrix theta_alpha(int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("theta_alpha: k must be 1 or 2");
    const double third = 1.0 / 3.0;
    ComplexMatrix psi(3, 3);  // |psi><psi| with psi uniform
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) psi(i, j) = third;
    if (k == 2) return psi;
    ComplexMatrix out(3, 3);
    for (std::size_t i = 0; i < 9; ++i) out.a[i] = 0.5 * psi.a[i];
    out(0, 0) += 0.5;
    return out;
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, CounterRng& rng) {
    ComplexMatrix g(rows, cols);
    for (auto& z : g.a) {
        const double re = rng.next_gaussian();
        const double im = rng.next_gaussian();
        z = cplx(re, im);
    }
    return g;
}

DensityMatrix random_density(const std::vector<std::size_t>& dims, std::size_t rank, CounterRng& rng) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    if (rank == 0 || rank > n) throw std::invalid_argument("random_density: rank outside [1, dim]");
    const ComplexMatrix g = ginibre(n, rank, rng);
    ComplexMatrix m = g * adjoint(g);
    const double tr = trace(m).real();
    for (auto& z : m.a) z /= tr;
    return DensityMatrix{dims, std::move(m)};
}

ComplexMatrix random_mc_matrix(std::size_t size, CounterRng& rng) {
    if (size < 1) throw std::invalid_argument("random_mc_matrix: size must be at least 1");
    const ComplexMatrix g = ginibre(size, size, rng);
    ComplexMatrix m = g * adjoint(g);
    const double tr = trace(m).real();
    for (auto& z : m.a) z /= tr;
    return m;
}

ComplexMatrix random_unitary(std::size_t d, CounterRng& rng) {
    ComplexMatrix g = ginibre(d, d, rng);
    // Two-pass modified Gram-Schmidt. The residual norms make the R diagonal
    // real positive, the normalization under which Ginibre QR is Haar.
    ComplexMatrix q(d, d);
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<cplx> v(d);
        for (std::size_t r = 0; r < d; ++r) v[r] = g(r, c);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t c2 = 0; c2 < c; ++c2) {
                cplx ip = 0.0;
                for (std::size_t r = 0; r < d; ++r) ip += std::conj(q(r, c2)) * v[r];
                for (std::size_t r = 0; r < d; ++r) v[r] -= ip * q(r, c2);
            }
        double nrm = 0.0;
        for (const auto& z : v) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        for (std::size_t r = 0; r < d; ++r) q(r, c) = v[r] / nrm;
    }
    return q;
}

std::vector<cplx> random_pure_vector(std::size_t dim, CounterRng& rng) {
    std::vector<cplx> v(dim);
    double nrm = 0.0;
    for (auto& z : v) {
        z = cplx(rng.next_gaussian(), rng.next_gaussian());
        nrm += std::norm(z);
    }
    nrm = std::sqrt(nrm);
    for (auto& z : v) z /= nrm;
    return v;
}

}  // namespace qdist::states
