#include "qdist/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace qdist::sdp {

std::size_t SdpProblem::add_block(std::size_t dim) {
    block_dims.push_back(dim);
    cost.emplace_back(dim, dim);
    return block_dims.size() - 1;
}

void SdpProblem::add_cost(std::size_t block, std::size_t r, std::size_t c, cplx v) {
    cost[block](r, c) += 0.5 * v;
    cost[block](c, r) += 0.5 * std::conj(v);
}

void SdpProblem::add_re_constraint(std::vector<ConstraintTerm> terms, double rhs) {
    constraints.push_back(LinearConstraint{std::move(terms), rhs});
}

void SdpProblem::add_complex_constraint(std::vector<ConstraintTerm> terms, cplx rhs) {
    add_re_constraint(terms, rhs.real());
    for (auto& t : terms) t.coeff *= cplx(0.0, -1.0);  // Im(z) = Re(-i z)
    add_re_constraint(std::move(terms), rhs.imag());
}

void SdpProblem::dump(std::ostream& os) const {
    os << "blocks " << block_dims.size() << "\n";
    for (std::size_t b = 0; b < block_dims.size(); ++b) {
        os << "dim " << b << " " << block_dims[b] << "\n";
        for (std::size_t r = 0; r < block_dims[b]; ++r)
            for (std::size_t c = 0; c < block_dims[b]; ++c) {
                const cplx v = cost[b](r, c);
                if (v != cplx(0.0, 0.0))
                    os << "C " << b << " " << r << " " << c << " " << v.real() << " " << v.imag() << "\n";
            }
    }
    for (const auto& con : constraints) {
        os << "constraint " << con.rhs << "\n";
        for (const auto& t : con.terms)
            os << "term " << t.block << " " << t.r << " " << t.c << " " << t.coeff.real() << " "
               << t.coeff.imag() << "\n";
    }
}

namespace {

struct Entry {
    std::size_t pos;  // flat index: block_offset + r * dim + c
    cplx v;           // Hermitian matrix entry A(r, c)
};

struct Assembled {
    std::vector<std::vector<Entry>> rows;  // Hermitian A_i as entry lists
    std::vector<double> rhs;
    std::vector<std::size_t> offset;  // flat offset per block
    std::size_t total = 0;
};

// Hermitian assembly of Re(sum coeff * X_{rc}) = rhs:
// A(c, r) += coeff/2 and A(r, c) += conj(coeff)/2.
Assembled assemble(const SdpProblem& p) {
    Assembled as;
    as.offset.resize(p.block_dims.size());
    std::size_t off = 0;
    for (std::size_t b = 0; b < p.block_dims.size(); ++b) {
        as.offset[b] = off;
        off += p.block_dims[b] * p.block_dims[b];
    }
    as.total = off;
    as.rows.resize(p.constraints.size());
    as.rhs.resize(p.constraints.size());
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        std::map<std::size_t, cplx> acc;
        for (const auto& t : p.constraints[i].terms) {
            const std::size_t d = p.block_dims[t.block];
            acc[as.offset[t.block] + t.c * d + t.r] += 0.5 * t.coeff;
            acc[as.offset[t.block] + t.r * d + t.c] += 0.5 * std::conj(t.coeff);
        }
        double nrm = 0.0;
        for (const auto& [pos, v] : acc) nrm += std::norm(v);
        nrm = std::sqrt(std::max(nrm, 1e-300));
        auto& row = as.rows[i];
        row.reserve(acc.size());
        for (const auto& [pos, v] : acc)
            if (v != cplx(0.0, 0.0)) row.push_back(Entry{pos, v / nrm});
        as.rhs[i] = p.constraints[i].rhs / nrm;
    }
    return as;
}

double dot_row(const std::vector<Entry>& row, const std::vector<cplx>& x) {
    // tr(A X) with both Hermitian: sum over entries of A(r,c) * X(c,r)
    // equals the real Frobenius pairing sum conj(A_rc) X_rc; entries are
    // stored flat so the transpose pairing is done via conj.
    double s = 0.0;
    for (const auto& e : row) s += (std::conj(e.v) * x[e.pos]).real();
    return s;
}

// Dense Cholesky with a relative ridge fallback for rank-deficient A A^T.
struct Cholesky {
    std::size_t n = 0;
    std::vector<double> L;  // row-major lower triangle

    bool factor(std::vector<double> M, std::size_t n_) {
        n = n_;
        L.assign(n * n, 0.0);
        double maxd = 0.0;
        for (std::size_t i = 0; i < n; ++i) maxd = std::max(maxd, M[i * n + i]);
        double ridge = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            bool ok = true;
            std::vector<double> A = M;
            if (ridge > 0.0)
                for (std::size_t i = 0; i < n; ++i) A[i * n + i] += ridge;
            for (std::size_t i = 0; i < n && ok; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    double s = A[i * n + j];
                    for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
                    if (i == j) {
                        if (s <= 0.0) {
                            ok = false;
                            break;
                        }
                        L[i * n + i] = std::sqrt(s);
                    } else {
                        L[i * n + j] = s / L[j * n + j];
                    }
                }
            }
            if (ok) return true;
            ridge = (ridge == 0.0) ? 1e-12 * std::max(maxd, 1.0) : ridge * 100.0;
        }
        return false;
    }

    void solve(std::vector<double>& x) const {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];
            for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * x[k];
            x[i] = s / L[i * n + i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= L[k * n + ii] * x[k];
            x[ii] = s / L[ii * n + ii];
        }
    }
};

}  // namespace

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) {
    const Assembled as = assemble(p);
    const std::size_t m = as.rows.size();
    const std::size_t nb = p.block_dims.size();

    // Gram matrix A A^T, built by grouping entries per flat position.
    std::vector<double> gram(m * m, 0.0);
    {
        std::vector<std::vector<std::pair<std::size_t, cplx>>> by_pos(as.total);
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& e : as.rows[i]) by_pos[e.pos].push_back({i, e.v});
        for (const auto& lst : by_pos)
            for (const auto& [i, vi] : lst)
                for (const auto& [j, vj] : lst)
                    if (j <= i) gram[i * m + j] += (vi * std::conj(vj)).real();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) gram[i * m + j] = gram[j * m + i];
    }
    Cholesky chol;
    if (m > 0 && !chol.factor(std::move(gram), m))
        throw std::runtime_error("sdp::solve: constraint Gram matrix not factorizable");

    // flat state vectors across blocks
    std::vector<cplx> C(as.total, cplx(0.0, 0.0));
    for (std::size_t b = 0; b < nb; ++b)
        std::copy(p.cost[b].a.begin(), p.cost[b].a.end(), C.begin() + as.offset[b]);
    std::vector<cplx> X(as.total, cplx(0.0, 0.0)), S(as.total, cplx(0.0, 0.0)), V(as.total), W(as.total);
    std::vector<double> y(m, 0.0), ax(m, 0.0), rhsbuf(m, 0.0);

    double bnorm = 0.0, cnorm = 0.0;
    for (double v : as.rhs) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    for (const auto& z : C) cnorm += std::norm(z);
    cnorm = std::sqrt(cnorm);

    double mu = opts.mu0;
    SdpSolution out;
    out.X.resize(nb);
    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_age = 0;

    const auto apply_A = [&](const std::vector<cplx>& x, std::vector<double>& r) {
        for (std::size_t i = 0; i < m; ++i) r[i] = dot_row(as.rows[i], x);
    };
    const auto add_At = [&](const std::vector<double>& yy, std::vector<cplx>& x, double scale) {
        for (std::size_t i = 0; i < m; ++i) {
            const double w = yy[i] * scale;
            if (w == 0.0) continue;
            for (const auto& e : as.rows[i]) x[e.pos] += w * e.v;
        }
    };

    std::size_t it = 0;
    double rp = 0.0, rd = 0.0, relgap = 0.0;
    for (it = 1; it <= opts.max_iter; ++it) {
        // y-step: (A A^T) y = (b - A(X)) / mu + A(C - S)
        apply_A(X, ax);
        for (std::size_t i = 0; i < as.total; ++i) W[i] = C[i] - S[i];
        apply_A(W, rhsbuf);
        for (std::size_t i = 0; i < m; ++i) rhsbuf[i] += (as.rhs[i] - ax[i]) / mu;
        y = rhsbuf;
        if (m > 0) chol.solve(y);

        // V = C - A^T y - X / mu, then split into PSD parts per block
        for (std::size_t i = 0; i < as.total; ++i) V[i] = C[i] - X[i] / mu;
        add_At(y, V, -1.0);

        double dx2 = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t d = p.block_dims[b], off = as.offset[b];
            ComplexMatrix vb(d, d);
            std::copy(V.begin() + off, V.begin() + off + d * d, vb.a.begin());
            auto eg = kernels::eig_hermitian(vb);
            std::vector<double> pos(d), neg(d);
            for (std::size_t k = 0; k < d; ++k) {
                pos[k] = std::max(0.0, eg.values[k]);
                neg[k] = std::min(0.0, eg.values[k]);
            }
            const ComplexMatrix sb = kernels::herm_reconstruct(eg.vectors, pos);
            ComplexMatrix xb = kernels::herm_reconstruct(eg.vectors, neg);
            for (auto& z : xb.a) z *= -mu;
            for (std::size_t i2 = 0; i2 < d * d; ++i2) {
                S[off + i2] = sb.a[i2];
                const cplx nx = (1.0 - opts.relaxation) * X[off + i2] + opts.relaxation * xb.a[i2];
                dx2 += std::norm(nx - X[off + i2]);
                X[off + i2] = nx;
            }
        }

        // residuals and gap
        apply_A(X, ax);
        double pr2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) pr2 += (ax[i] - as.rhs[i]) * (ax[i] - as.rhs[i]);
        rp = std::sqrt(pr2) / (1.0 + bnorm);
        rd = std::sqrt(dx2) / mu / (1.0 + cnorm);
        double obj = 0.0, dobj = 0.0;
        for (std::size_t i = 0; i < as.total; ++i) obj += (std::conj(C[i]) * X[i]).real();
        for (std::size_t i = 0; i < m; ++i) dobj += as.rhs[i] * y[i];
        relgap = std::abs(obj - dobj) / (1.0 + std::abs(obj) + std::abs(dobj));

        if (rp <= opts.feas_tol && rd <= opts.feas_tol && relgap <= opts.gap_tol) {
            out.status = SolveStatus::optimal;
            break;
        }
        double xn = 0.0;
        for (const auto& z : X) xn += std::norm(z);
        if (!std::isfinite(xn) || xn > 1e24) {
            out.status = SolveStatus::infeasible;
            break;
        }

        const double score = std::max({rp, rd, relgap});
        if (score < 0.5 * best_score) {
            best_score = score;
            best_age = it;
        } else if (it - best_age > 5000) {  // stalled: restart the penalty weight
            mu = opts.mu0;
            best_age = it;
        }
        if (it % opts.adapt_every == 0) {
            if (rp > 10.0 * rd)
                mu = std::max(mu * 0.5, 1e-6);
            else if (rd > 10.0 * rp)
                mu = std::min(mu * 2.0, 1e6);
        }
    }
    out.iterations = std::min(it, opts.max_iter);

    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t d = p.block_dims[b], off = as.offset[b];
        out.X[b] = ComplexMatrix(d, d);
        std::copy(X.begin() + off, X.begin() + off + d * d, out.X[b].a.begin());
    }
    double obj = 0.0, dobj = 0.0;
    for (std::size_t i = 0; i < as.total; ++i) obj += (std::conj(C[i]) * X[i]).real();
    for (std::size_t i = 0; i < m; ++i) dobj += as.rhs[i] * y[i];
    out.objective = obj;
    out.dual_objective = dobj;
    out.gap = relgap;
    out.primal_residual = rp;
    out.dual_residual = rd;
    return out;
}

// --- builders ----------------------------------------------------------------

double trace_norm_sdp(const ComplexMatrix& M, const SolverOptions& opts) {
    const std::size_t n = std::max(M.rows, M.cols);
    ComplexMatrix pad(n, n);
    for (std::size_t r = 0; r < M.rows; ++r)
        for (std::size_t c = 0; c < M.cols; ++c) pad(r, c) = M(r, c);

    SdpProblem p;
    const std::size_t blk = p.add_block(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) p.add_cost(blk, i, i, 0.5);
    // upper-right block pinned to -M^dagger
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            p.add_complex_constraint({{blk, r, n + c, cplx(1.0)}}, -std::conj(pad(c, r)));
    SdpSolution sol = solve(p, opts);
    return sol.objective;
}

namespace {

// Shared builder: min over CPTP maps D: Y -> Z of 1/2 || target_XZ - (id (x) D)(source_XY) ||_1.
DegradingResult approx_degrading(const DensityMatrix& target_xz, const DensityMatrix& source_xy,
                                 const SolverOptions& opts) {
    const std::size_t dx = source_xy.dims[0], dy = source_xy.dims[1], dz = target_xz.dims[1];
    const std::size_t nxz = dx * dz;
    SdpProblem p;
    const std::size_t blk_m = p.add_block(2 * nxz);     // [[X, Z - rho],[..., Y]]
    const std::size_t blk_tau = p.add_block(dy * dz);   // Choi of the map
    for (std::size_t i = 0; i < 2 * nxz; ++i) p.add_cost(blk_m, i, i, 0.25);

    // (id (x) D)(source)[(x,z),(x2,z2)] = sum_{i,j} source[(x,i),(x2,j)] tau[(i,z),(j,z2)]
    for (std::size_t x = 0; x < dx; ++x)
        for (std::size_t z = 0; z < dz; ++z)
            for (std::size_t x2 = 0; x2 < dx; ++x2)
                for (std::size_t z2 = 0; z2 < dz; ++z2) {
                    const std::size_t pr = x * dz + z, pc = x2 * dz + z2;
                    std::vector<ConstraintTerm> terms;
                    terms.push_back({blk_m, pr, nxz + pc, cplx(1.0)});
                    for (std::size_t i = 0; i < dy; ++i)
                        for (std::size_t j = 0; j < dy; ++j) {
                            const cplx s = source_xy.mat(x * dy + i, x2 * dy + j);
                            if (s != cplx(0.0, 0.0))
                                terms.push_back({blk_tau, i * dz + z, j * dz + z2, -s});
                        }
                    p.add_complex_constraint(std::move(terms), -target_xz.mat(pr, pc));
                }
    // trace preservation: tr_Z tau = identity on Y
    for (std::size_t b = 0; b < dy; ++b)
        for (std::size_t b2 = b; b2 < dy; ++b2) {
            std::vector<ConstraintTerm> terms;
            for (std::size_t z = 0; z < dz; ++z) terms.push_back({blk_tau, b * dz + z, b2 * dz + z, cplx(1.0)});
            if (b == b2)
                p.add_re_constraint(std::move(terms), 1.0);
            else
                p.add_complex_constraint(std::move(terms), cplx(0.0));
        }

    DegradingResult out;
    out.sol = solve(p, opts);
    out.value = std::clamp(out.sol.objective, 0.0, 1.0);
    out.map = QuantumMap{dy, dz, out.sol.X[blk_tau]};
    return out;
}

}  // namespace

DegradingResult dg(const DensityMatrix& rho, bool conjugate, const SolverOptions& opts) {
    if (rho.dims.size() != 2) throw std::invalid_argument("dg: state not bipartite");
    DensityMatrix rho_ae = complementary_state(rho);
    if (conjugate) rho_ae.mat = conj(rho_ae.mat);
    return approx_degrading(rho_ae, rho, opts);
}

DegradingResult adeg(const DensityMatrix& rho, const SolverOptions& opts) {
    if (rho.dims.size() != 2) throw std::invalid_argument("adeg: state not bipartite");
    const DensityMatrix rho_ae = complementary_state(rho);
    return approx_degrading(rho, rho_ae, opts);
}

EwdResult e_wd(const DensityMatrix& rho, const SolverOptions& opts) {
    if (rho.dims.size() != 2) throw std::invalid_argument("e_wd: state not bipartite");
    const std::size_t da = rho.dims[0], db = rho.dims[1], n = da * db;
    SdpProblem p;
    const std::size_t blk_r = p.add_block(n);
    const std::size_t blk_p = p.add_block(n);  // 1 - R^Gamma
    const std::size_t blk_q = p.add_block(n);  // 1 + R^Gamma
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rho.mat(i, j) != cplx(0.0, 0.0)) p.add_cost(blk_r, i, j, -rho.mat(i, j));

    const auto gamma_row = [&](std::size_t a, std::size_t b, std::size_t a2, std::size_t b2) {
        // (R^Gamma)[(a,b),(a2,b2)] = R[(a,b2),(a2,b)]
        return std::pair<std::size_t, std::size_t>{a * db + b2, a2 * db + b};
    };
    for (std::size_t pr = 0; pr < n; ++pr)
        for (std::size_t pc = pr; pc < n; ++pc) {
            const std::size_t a = pr / db, b = pr % db, a2 = pc / db, b2 = pc % db;
            const auto [gr, gc] = gamma_row(a, b, a2, b2);
            const double diag = (pr == pc) ? 1.0 : 0.0;
            std::vector<ConstraintTerm> t1{{blk_p, pr, pc, cplx(1.0)}, {blk_r, gr, gc, cplx(1.0)}};
            std::vector<ConstraintTerm> t2{{blk_q, pr, pc, cplx(1.0)}, {blk_r, gr, gc, cplx(-1.0)}};
            if (pr == pc) {
                p.add_re_constraint(std::move(t1), diag);
                p.add_re_constraint(std::move(t2), diag);
            } else {
                p.add_complex_constraint(std::move(t1), diag);
                p.add_complex_constraint(std::move(t2), diag);
            }
        }
    EwdResult out;
    out.sol = solve(p, opts);
    const double w = std::max(-out.sol.objective, 1e-300);
    out.value = std::max(0.0, std::log2(w));
    return out;
}

double log_negativity(const DensityMatrix& rho) {
    return std::log2(trace_norm(partial_transpose(rho, 1)));
}

OverlapResult antideg_overlap_max(std::size_t d, const SolverOptions& opts) {
    if (d < 2) throw std::invalid_argument("antideg_overlap_max: d must be at least 2");
    const std::size_t n = d * d * d;  // A (x) B (x) B'
    const ComplexMatrix phi = projector(max_entangled_vector(d));
    ComplexMatrix H(n, n);
    const auto idx = [&](std::size_t a, std::size_t b, std::size_t bp) { return (a * d + b) * d + bp; };
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t bp = 0; bp < d; ++bp)
                for (std::size_t a2 = 0; a2 < d; ++a2)
                    for (std::size_t b2 = 0; b2 < d; ++b2)
                        for (std::size_t bp2 = 0; bp2 < d; ++bp2) {
                            cplx v = 0.0;
                            if (bp == bp2) v += 0.5 * phi(a * d + b, a2 * d + b2);
                            if (b == b2) v += 0.5 * phi(a * d + bp, a2 * d + bp2);
                            if (v != cplx(0.0, 0.0)) H(idx(a, b, bp), idx(a2, b2, bp2)) = v;
                        }

    SdpProblem p;
    const std::size_t blk = p.add_block(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (H(i, j) != cplx(0.0, 0.0)) p.add_cost(blk, i, j, -H(i, j));
    std::vector<ConstraintTerm> tr_terms;
    for (std::size_t i = 0; i < n; ++i) tr_terms.push_back({blk, i, i, cplx(1.0)});
    p.add_re_constraint(std::move(tr_terms), 1.0);

    OverlapResult out;
    out.sol = solve(p, opts);
    out.primal = -out.sol.objective;
    out.eigenvalue = kernels::eigvals_hermitian(H).front();
    return out;
}

}  // namespace qdist::sdp
