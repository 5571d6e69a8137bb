#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdist {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. The workhorse container for operators,
// Choi matrices and SDP blocks. Sides stay below ~100 in every workload,
// so there is no sparse path.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx(0.0, 0.0)) {}

    cplx& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    bool square() const { return rows == cols; }
    std::size_t size() const { return a.size(); }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix zeros(std::size_t r, std::size_t c) { return ComplexMatrix(r, c); }
};

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out(c, r) = std::conj(m(r, c));
    return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out(c, r) = m(r, c);
    return out;
}

inline ComplexMatrix conj(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.size(); ++i) out.a[i] = std::conj(m.a[i]);
    return out;
}

inline cplx trace(const ComplexMatrix& m) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < m.rows && i < m.cols; ++i) t += m(i, i);
    return t;
}

inline ComplexMatrix operator+(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch in +");
    ComplexMatrix out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.a[i] += y.a[i];
    return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch in -");
    ComplexMatrix out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.a[i] -= y.a[i];
    return out;
}

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& x) {
    ComplexMatrix out = x;
    for (auto& v : out.a) v *= s;
    return out;
}

inline ComplexMatrix& operator+=(ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch in +=");
    for (std::size_t i = 0; i < x.size(); ++i) x.a[i] += y.a[i];
    return x;
}

inline double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (const auto& z : m.a) v = std::max(v, std::abs(z));
    return v;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.a) s += std::norm(z);
    return std::sqrt(s);
}

// max_{rc} |M - M†|
inline double hermiticity_defect(const ComplexMatrix& m) {
    if (!m.square()) return std::numeric_limits<double>::infinity();
    double v = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = r; c < m.cols; ++c) v = std::max(v, std::abs(m(r, c) - std::conj(m(c, r))));
    return v;
}

// (M + M†)/2, used to scrub arithmetic noise before eigensolves
inline ComplexMatrix hermitize(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    return out;
}

}  // namespace qdist
