#include "qdist/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdist {

namespace {

constexpr double kEntropyCutoff = 1e-12;   // eigenvalues below this are dropped
constexpr double kNegativityFloor = 1e-9;  // more negative than this is a validity error
constexpr double kRankCutoff = 1e-10;      // purification / support cutoff

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t j = dims.size(); j-- > 1;) s[j - 1] = s[j] * dims[j];
    return s;
}

}  // namespace

std::optional<ValidationIssue> DensityMatrix::check(const ValidationTolerances& tol) const {
    std::ostringstream msg;
    if (dims.empty() || mat.rows != total_dim() || !mat.square()) {
        msg << "dimension mismatch: matrix side " << mat.rows << " vs dims product " << total_dim();
        return ValidationIssue{msg.str()};
    }
    for (const auto& z : mat.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return ValidationIssue{"non-finite entry"};
    const double herm = hermiticity_defect(mat);
    if (herm > tol.hermiticity) {
        msg << "not Hermitian: max |M - M^dagger| = " << herm;
        return ValidationIssue{msg.str()};
    }
    const double tr_err = std::abs(trace(mat) - cplx(1.0, 0.0));
    if (tr_err > tol.trace) {
        msg << "trace differs from 1 by " << tr_err;
        return ValidationIssue{msg.str()};
    }
    const auto ev = kernels::eigvals_hermitian(mat);
    if (!ev.empty() && ev.back() < -tol.min_eigenvalue) {
        msg << "not positive semidefinite: min eigenvalue = " << ev.back();
        return ValidationIssue{msg.str()};
    }
    return std::nullopt;
}

void DensityMatrix::validate(const ValidationTolerances& tol) const {
    if (auto issue = check(tol)) throw std::invalid_argument("invalid density matrix: " + issue->what);
}

DensityMatrix make_state(std::vector<std::size_t> dims, ComplexMatrix m, const ValidationTolerances& tol) {
    DensityMatrix rho{std::move(dims), std::move(m)};
    rho.validate(tol);
    return rho;
}

Spectrum spectrum(const ComplexMatrix& hermitian) {
    auto eg = kernels::eig_hermitian(hermitian);
    return Spectrum{std::move(eg.values), std::move(eg.vectors)};
}

double QuantumMap::cp_defect() const {
    const auto ev = kernels::eigvals_hermitian(choi);
    return ev.empty() ? 0.0 : std::max(0.0, -ev.back());
}

double QuantumMap::tp_defect() const {
    double v = 0.0;
    for (std::size_t x = 0; x < dim_in; ++x)
        for (std::size_t y = 0; y < dim_in; ++y) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < dim_out; ++k) s += choi(x * dim_out + k, y * dim_out + k);
            v = std::max(v, std::abs(s - (x == y ? cplx(1.0) : cplx(0.0))));
        }
    return v;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    const auto& dims = rho.dims;
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: subsystem index out of range");
        kept[k] = true;
    }
    std::vector<std::size_t> out_dims, out_subs, tr_subs;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (kept[j]) {
            out_dims.push_back(dims[j]);
            out_subs.push_back(j);
        } else {
            tr_subs.push_back(j);
        }
    }

    const auto strides = strides_of(dims);
    std::size_t nk = 1, nt = 1;
    for (auto j : out_subs) nk *= dims[j];
    for (auto j : tr_subs) nt *= dims[j];

    // flat kept index -> base offset in the full index space
    auto offsets_of = [&](const std::vector<std::size_t>& subs, std::size_t count) {
        std::vector<std::size_t> off(count, 0);
        for (std::size_t flat = 0; flat < count; ++flat) {
            std::size_t rem = flat, o = 0;
            for (std::size_t jj = subs.size(); jj-- > 0;) {
                const std::size_t d = dims[subs[jj]];
                o += (rem % d) * strides[subs[jj]];
                rem /= d;
            }
            off[flat] = o;
        }
        return off;
    };
    const auto koff = offsets_of(out_subs, nk);
    const auto toff = offsets_of(tr_subs, nt);

    ComplexMatrix out(nk, nk);
    const std::size_t n = rho.mat.rows;
    for (std::size_t r = 0; r < nk; ++r)
        for (std::size_t c = 0; c < nk; ++c) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < nt; ++t) s += rho.mat.a[(koff[r] + toff[t]) * n + (koff[c] + toff[t])];
            out(r, c) = s;
        }
    return DensityMatrix{std::move(out_dims), std::move(out)};
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
    const auto& dims = rho.dims;
    if (subsystem >= dims.size()) throw std::invalid_argument("partial_transpose: subsystem index out of range");
    const auto strides = strides_of(dims);
    const std::size_t n = rho.mat.rows, ds = dims[subsystem], st = strides[subsystem];
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t rs = (r / st) % ds;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t cs = (c / st) % ds;
            const std::size_t r2 = r + (cs - rs) * st;
            const std::size_t c2 = c + (rs - cs) * st;
            out(r2, c2) = rho.mat(r, c);
        }
    }
    return out;
}

Purification purify(const DensityMatrix& rho) {
    auto eg = kernels::eig_hermitian(rho.mat);
    const std::size_t n = rho.mat.rows;
    std::size_t r = 0;
    for (; r < eg.values.size() && eg.values[r] > kRankCutoff; ++r) {}
    if (r == 0) throw std::invalid_argument("purify: zero operator");
    Purification out;
    out.env_dim = r;
    out.dims = rho.dims;
    out.dims.push_back(r);
    out.vec.assign(n * r, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < r; ++k) {
        const double w = std::sqrt(eg.values[k]);
        for (std::size_t i = 0; i < n; ++i) out.vec[i * r + k] = w * eg.vectors(i, k);
    }
    return out;
}

DensityMatrix complementary_state(const DensityMatrix& rho) {
    if (rho.dims.size() != 2) throw std::invalid_argument("complementary_state: state not bipartite");
    const Purification phi = purify(rho);
    DensityMatrix full{phi.dims, projector(phi.vec)};
    return partial_trace(full, {0, 2});
}

double shannon_entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p)
        if (v > kEntropyCutoff) s -= v * std::log2(v);
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    auto ev = kernels::eigvals_hermitian(rho.mat);
    for (double v : ev)
        if (v < -kNegativityFloor)
            throw std::invalid_argument("von_neumann_entropy: eigenvalue " + std::to_string(v) +
                                        " below the -1e-9 clipping floor");
    return shannon_entropy(ev);
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    double s = 0.0;
    if (p > 0.0) s -= p * std::log2(p);
    if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
    return s;
}

DensityMatrix swap_subsystems(const DensityMatrix& rho) {
    if (rho.dims.size() != 2) throw std::invalid_argument("swap_subsystems: state not bipartite");
    const std::size_t da = rho.dims[0], db = rho.dims[1], n = da * db;
    ComplexMatrix out(n, n);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t b = 0; b < db; ++b)
            for (std::size_t a2 = 0; a2 < da; ++a2)
                for (std::size_t b2 = 0; b2 < db; ++b2)
                    out(b * da + a, b2 * da + a2) = rho.mat(a * db + b, a2 * db + b2);
    return DensityMatrix{{db, da}, std::move(out)};
}

double coherent_information(const DensityMatrix& rho) {
    if (rho.dims.size() != 2) throw std::invalid_argument("coherent_information: state not bipartite");
    return von_neumann_entropy(partial_trace(rho, {1})) - von_neumann_entropy(rho);
}

double coherent_information_reverse(const DensityMatrix& rho) {
    return coherent_information(swap_subsystems(rho));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.mat.rows != sigma.mat.rows) throw std::invalid_argument("relative_entropy: dimension mismatch");
    const auto sg = kernels::eig_hermitian(sigma.mat);
    const std::size_t n = rho.mat.rows;
    double leak = 0.0, cross = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // <v_k| rho |v_k>
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += rho.mat(i, j) * sg.vectors(j, k);
            acc += std::conj(sg.vectors(i, k)) * row;
        }
        const double w = std::max(0.0, acc.real());
        if (sg.values[k] > kRankCutoff)
            cross += w * std::log2(sg.values[k]);
        else
            leak += w;
    }
    if (leak > 1e-9) return std::numeric_limits<double>::infinity();
    const double d = -von_neumann_entropy(rho) - cross;
    return (d < 0.0 && d > -1e-8) ? 0.0 : d;
}

double trace_norm(const ComplexMatrix& m) {
    // Hermitian inputs (partial transposes, differences of states) go through
    // the eigenvalue route, which does not square the condition number.
    if (m.square() && hermiticity_defect(m) <= 1e-12) {
        double s = 0.0;
        for (double v : kernels::eigvals_hermitian(m)) s += std::abs(v);
        return s;
    }
    const auto sv = kernels::singular_values(m);
    double s = 0.0;
    for (double v : sv) s += v;
    return s;
}

bool is_ppt(const DensityMatrix& rho, double tol) {
    if (rho.dims.size() != 2) throw std::invalid_argument("is_ppt: state not bipartite");
    const auto ev = kernels::eigvals_hermitian(partial_transpose(rho, 1));
    return ev.empty() || ev.back() >= -tol;
}

std::vector<cplx> max_entangled_vector(std::size_t d) {
    std::vector<cplx> v(d * d, cplx(0.0, 0.0));
    const double w = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = w;
    return v;
}

ComplexMatrix projector(const std::vector<cplx>& v) {
    ComplexMatrix out(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = v[i] * std::conj(v[j]);
    return out;
}

double mes_overlap(const DensityMatrix& rho) {
    if (rho.dims.size() != 2 || rho.dims[0] != rho.dims[1])
        throw std::invalid_argument("mes_overlap: unequal local dimensions");
    const std::size_t d = rho.dims[0];
    cplx s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s += rho.mat(i * d + i, j * d + j);
    return s.real() / static_cast<double>(d);
}

DensityMatrix apply_to_second(const QuantumMap& map, const DensityMatrix& rho) {
    if (rho.dims.size() != 2 || rho.dims[1] != map.dim_in)
        throw std::invalid_argument("apply_to_second: dimension mismatch");
    const std::size_t da = rho.dims[0], di = map.dim_in, dk = map.dim_out;
    ComplexMatrix out(da * dk, da * dk);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t a2 = 0; a2 < da; ++a2)
            for (std::size_t i = 0; i < di; ++i)
                for (std::size_t j = 0; j < di; ++j) {
                    const cplx r = rho.mat(a * di + i, a2 * di + j);
                    if (r == cplx(0.0, 0.0)) continue;
                    for (std::size_t k = 0; k < dk; ++k)
                        for (std::size_t l = 0; l < dk; ++l)
                            out(a * dk + k, a2 * dk + l) += r * map.choi(i * dk + k, j * dk + l);
                }
    return DensityMatrix{{da, dk}, std::move(out)};
}

QuantumMap compose(const QuantumMap& after, const QuantumMap& before) {
    if (before.dim_out != after.dim_in) throw std::invalid_argument("compose: dimension mismatch");
    // Same contraction as apply_to_second performed on the unnormalized Choi.
    DensityMatrix tmp{{before.dim_in, before.dim_out}, before.choi};
    DensityMatrix res = apply_to_second(after, tmp);
    return QuantumMap{before.dim_in, after.dim_out, std::move(res.mat)};
}

ComplexMatrix transfer_of_choi(const ComplexMatrix& choi, std::size_t din, std::size_t dout) {
    ComplexMatrix t(dout * dout, din * din);
    for (std::size_t i = 0; i < dout; ++i)
        for (std::size_t j = 0; j < dout; ++j)
            for (std::size_t k = 0; k < din; ++k)
                for (std::size_t l = 0; l < din; ++l)
                    t(i * dout + j, k * din + l) = choi(l * dout + j, k * dout + i);
    return t;
}

ComplexMatrix choi_of_transfer(const ComplexMatrix& t, std::size_t din, std::size_t dout) {
    ComplexMatrix choi(din * dout, din * dout);
    for (std::size_t i = 0; i < dout; ++i)
        for (std::size_t j = 0; j < dout; ++j)
            for (std::size_t k = 0; k < din; ++k)
                for (std::size_t l = 0; l < din; ++l)
                    choi(l * dout + j, k * dout + i) = t(i * dout + j, k * din + l);
    return choi;
}

ComplexMatrix transfer_matrix(const QuantumMap& map) {
    return transfer_of_choi(map.choi, map.dim_in, map.dim_out);
}

QuantumMap identity_map(std::size_t d) {
    ComplexMatrix choi(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) choi(i * d + i, j * d + j) = 1.0;
    return QuantumMap{d, d, std::move(choi)};
}

}  // namespace qdist
