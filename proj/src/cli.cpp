#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdist/bell.hpp"
#include "qdist/bounds.hpp"
#include "qdist/io.hpp"
#include "qdist/optimizer.hpp"
#include "qdist/sdp.hpp"
#include "qdist/states.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdist::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct OutputSink {
    std::string path;  // empty: stdout

    void write(const std::vector<std::string>& header, const std::vector<std::string>& rows) const {
        if (path.empty()) {
            for (const auto& l : header) std::cout << l << "\n";
            for (const auto& l : rows) std::cout << l << "\n";
            return;
        }
        std::ofstream out(path, std::ios::binary);  // LF endings everywhere
        if (!out) throw std::invalid_argument("cannot write " + path);
        for (const auto& l : header) out << l << "\n";
        for (const auto& l : rows) out << l << "\n";
    }
};

std::string join_args(const std::vector<std::string>& args) {
    std::string s = "qdist";
    for (const auto& a : args) {
        s += " ";
        s += a;
    }
    return s;
}

void set_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

double wall_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- mc-blocks ---------------------------------------------------------------

int cmd_mc_blocks(std::size_t d, const OutputSink& sink, io::RunManifest manifest,
                  Clock::time_point t0) {
    const auto blocks = bell::enumerate_mc_blocks(d);
    std::vector<std::string> rows;
    std::string head = "d,block_id";
    for (std::size_t i = 1; i <= d; ++i) head += ",k" + std::to_string(i);
    rows.push_back(head);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::string line = std::to_string(d) + "," + std::to_string(b + 1);
        for (const auto& idx : blocks[b].indices) line += "," + std::to_string(idx.linear());
        rows.push_back(std::move(line));
    }
    manifest.wall_seconds = wall_since(t0);
    sink.write(manifest.csv_header(), rows);
    return kExitOk;
}

// ---- iso-bounds / werner-bounds ----------------------------------------------

int cmd_family_bounds(bool iso, std::size_t d, double x, bool with_ewd, io::RunManifest manifest,
                      Clock::time_point t0) {
    json out;
    DensityMatrix rho = iso ? states::isotropic(d, x) : states::werner(d, x);
    std::ostringstream label;
    label << (iso ? "isotropic(d=" : "werner(d=") << d << (iso ? ",f=" : ",p=") << io::fmt(x) << ")";
    out["state"] = label.str();
    out["lower_hashing"] = bounds::hashing_lower(rho);
    json upper;
    if (iso) {
        upper["ppt_ree"] = bounds::ppt_ree_isotropic(d, x);
        upper["two_way_achieving_state"] = opt::two_way_iso_value(d, x);
    } else {
        upper["ppt_ree"] = bounds::ppt_ree_werner(d, x);
        upper["rains"] = bounds::rains_werner(d, x);
        upper["two_way_achieving_state"] = opt::two_way_werner_value(d, x);
    }
    upper["log_neg"] = sdp::log_negativity(rho);
    json solver;
    if (with_ewd) {
        auto ewd = sdp::e_wd(rho);
        upper["e_wd"] = ewd.value;
        solver["e_wd"] = {{"gap", ewd.sol.gap},
                          {"primal_residual", ewd.sol.primal_residual},
                          {"iterations", ewd.sol.iterations}};
    }
    out["upper"] = std::move(upper);
    out["solver"] = std::move(solver);
    manifest.wall_seconds = wall_since(t0);
    out["manifest"] = json::parse(manifest.json());
    std::cout << out.dump(1) << "\n";
    return kExitOk;
}

// ---- depol-capacity ------------------------------------------------------------

bool parse_grid(const std::string& spec, std::vector<double>& grid) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
        return false;
    for (double p = start; p <= stop + 1e-12; p += step) grid.push_back(std::min(p, stop));
    return !grid.empty();
}

int cmd_depol_capacity(std::size_t d, const std::string& grid_spec, std::size_t restarts,
                       std::uint64_t seed, const OutputSink& sink, io::RunManifest manifest,
                       Clock::time_point t0) {
    std::vector<double> grid;
    if (!parse_grid(grid_spec, grid)) {
        std::cerr << "qdist: bad --p-grid, expected start:stop:step\n";
        return kExitUsage;
    }
    for (double p : grid)
        if (p < 0.0 || p > 1.0) {
            std::cerr << "qdist: grid point outside [0,1]\n";
            return kExitValidation;
        }
    if (restarts == 0) restarts = (d == 2) ? 32 : 64;

    std::vector<opt::CurvePoint> pts;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::cerr << "depol-capacity d=" << d << " p=" << io::fmt(grid[i]) << " (" << (i + 1) << "/"
                  << grid.size() << ")\n";
        opt::CurvePoint pt;
        try {
            pt = (d == 2) ? opt::phi_g_qubit_depolarizing(grid[i], restarts, seed + i)
                          : opt::phi_g_qutrit_depolarizing(grid[i], restarts, seed + i);
        } catch (const std::exception& e) {
            pt.p = grid[i];
            pt.feasible = false;
            pt.note = e.what();
        }
        if (!pt.feasible) ++failures;
        pts.push_back(std::move(pt));
    }
    if (failures == grid.size()) return kExitSolver;

    std::vector<opt::CurvePoint> hull;
    bool have_hull = true;
    try {
        hull = opt::convex_hull_1d(pts);
    } catch (const std::exception&) {
        have_hull = false;
    }

    std::vector<std::string> rows;
    rows.push_back("p,value,feasible,residual,restarts,seed,coh_lower,hull");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& pt = pts[i];
        const double coh = coherent_information(states::depolarizing_choi(d, pt.p));
        std::string line = io::fmt(pt.p) + "," + io::fmt(pt.value) + "," + (pt.feasible ? "1" : "0") +
                           "," + io::fmt(pt.residual) + "," + std::to_string(pt.restarts) + "," +
                           std::to_string(pt.seed) + "," + io::fmt(coh) + "," +
                           (have_hull ? io::fmt(hull[i].value) : std::string("nan"));
        rows.push_back(std::move(line));
    }
    manifest.wall_seconds = wall_since(t0);
    sink.write(manifest.csv_header(), rows);
    return kExitOk;
}

// ---- benchmark-random ----------------------------------------------------------

int cmd_benchmark_random(double p, std::size_t n, std::uint64_t seed, bool with_theta,
                         const OutputSink& sink, io::RunManifest manifest, Clock::time_point t0) {
    const auto blocks = bell::enumerate_mc_blocks(3);
    struct Row {
        std::size_t idx;
        std::string block_id;
        double e_mp = 0.0, e_wd = 0.0;
        bool failed = false;
    };
    std::vector<Row> rows(n);

#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const std::size_t bi = static_cast<std::size_t>(rng.next_u64() % blocks.size());
        const ComplexMatrix alpha = states::random_mc_matrix(3, rng);
        Row row;
        row.idx = static_cast<std::size_t>(i) + 1;
        row.block_id = std::to_string(bi + 1);
        try {
            row.e_mp = bounds::e_mp_block(blocks[bi], alpha, p);
            const DensityMatrix rho = states::block_mixture_state(blocks[bi], alpha, p);
            auto ewd = sdp::e_wd(rho);
            row.e_wd = ewd.value;
            row.failed = ewd.sol.status == sdp::SolveStatus::infeasible ||
                         ewd.sol.primal_residual > 1e-4;
        } catch (const std::exception&) {
            row.failed = true;
        }
        rows[static_cast<std::size_t>(i)] = std::move(row);
#pragma omp critical
        std::cerr << "benchmark-random row " << (i + 1) << "/" << n << " done\n";
    }

    std::vector<Row> extra;
    if (with_theta) {
        bell::MCBlock block{3, {bell::BellIndex::from_linear(1, 3), bell::BellIndex::from_linear(6, 3),
                                bell::BellIndex::from_linear(8, 3)}};
        for (int k = 1; k <= 2; ++k) {
            Row row;
            row.idx = n + static_cast<std::size_t>(k);
            row.block_id = "theta" + std::to_string(k);
            const ComplexMatrix alpha = states::theta_alpha(k);
            row.e_mp = bounds::e_mp_block(block, alpha, p);
            row.e_wd = sdp::e_wd(states::block_mixture_state(block, alpha, p)).value;
            extra.push_back(std::move(row));
        }
    }

    std::size_t failures = 0;
    std::vector<std::string> lines;
    lines.push_back("idx,block_id,e_mp,e_wd,gap");
    const auto emit = [&](const Row& r) {
        if (r.failed) {
            ++failures;
            lines.push_back(std::to_string(r.idx) + "," + r.block_id + ",nan,nan,nan");
            return;
        }
        lines.push_back(std::to_string(r.idx) + "," + r.block_id + "," + io::fmt(r.e_mp) + "," +
                        io::fmt(r.e_wd) + "," + io::fmt(r.e_wd - r.e_mp));
    };
    for (const auto& r : rows) emit(r);
    for (const auto& r : extra) emit(r);
    if (n > 0 && failures == rows.size()) return kExitSolver;
    manifest.wall_seconds = wall_since(t0);
    sink.write(manifest.csv_header(), lines);
    return kExitOk;
}

// ---- state-bound ----------------------------------------------------------------

int cmd_state_bound(const std::string& in_path, const std::vector<std::string>& names, double tol,
                    io::RunManifest manifest, Clock::time_point t0) {
    ValidationTolerances vt;
    if (tol > 0.0) vt = ValidationTolerances{tol, tol, tol};
    DensityMatrix rho = io::read_state(in_path, vt);

    bounds::BoundReport report;
    report.state_label = in_path;
    report.lower_hashing = bounds::hashing_lower(rho);
    double dg_cache = -1.0;
    const auto sdp_entry = [](double value, const sdp::SdpSolution& sol) {
        return bounds::BoundEntry{value, sol.gap, sol.primal_residual, ""};
    };
    for (const auto& name : names) {
        if (name == "hashing") continue;  // always reported as the lower bound
        if (name == "log_neg") {
            report.upper[name] = bounds::BoundEntry{sdp::log_negativity(rho), 0.0, 0.0, ""};
        } else if (name == "e_wd") {
            const auto r = sdp::e_wd(rho);
            report.upper[name] = sdp_entry(r.value, r.sol);
        } else if (name == "dg") {
            const auto r = sdp::dg(rho);
            dg_cache = r.value;
            report.upper[name] = sdp_entry(r.value, r.sol);
        } else if (name == "adeg") {
            const auto r = sdp::adeg(rho);
            report.upper[name] = sdp_entry(r.value, r.sol);
        } else if (name == "approx_deg") {
            if (dg_cache < 0.0) dg_cache = sdp::dg(rho).value;
            report.upper[name] =
                bounds::BoundEntry{bounds::approx_deg_upper(rho, dg_cache), 0.0, 0.0,
                                   "dg = " + io::fmt(dg_cache)};
        } else if (name == "e_da_2q") {
            if (rho.dims != std::vector<std::size_t>{2, 2}) {
                std::cerr << "qdist: e_da_2q needs a 2-qubit state, skipping\n";
                report.upper[name] = bounds::BoundEntry{0.0, 0.0, 0.0, "skipped: state is not 2-qubit"};
                continue;
            }
            const auto r = bounds::e_da_two_qubit(rho, 2, 16, manifest.seed);
            report.upper[name] = bounds::BoundEntry{
                r.value, 0.0, 0.0, r.note.empty() ? (r.verified ? "verified" : "") : r.note};
        } else {
            std::cerr << "qdist: unknown bound \"" << name << "\"\n";
            return kExitUsage;
        }
    }
    manifest.wall_seconds = wall_since(t0);
    std::cout << io::bound_report_json(report, manifest) << "\n";
    return kExitOk;
}

// ---- ssd-check --------------------------------------------------------------------

int cmd_ssd_check(const std::string& in_path) {
    const io::VectorFile vf = io::read_vectors(in_path);
    if (vf.dims.size() != 2) throw std::invalid_argument("ssd-check: vectors must be bipartite");
    const bool ok = bell::is_ssd(vf.vectors, vf.dims[0], vf.dims[1]);
    json out;
    out["ssd"] = ok;
    out["dims"] = vf.dims;
    out["count"] = vf.vectors.size();
    std::cout << out.dump(1) << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"bounds on one-way and two-way distillable entanglement"};
    app.require_subcommand(1);
    app.fallthrough();

    io::RunManifest manifest;
    manifest.command_line = join_args(args);
    const auto t0 = Clock::now();

    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (default: logical cores)");

    // mc-blocks
    auto* mc = app.add_subcommand("mc-blocks", "emit the MC block table as CSV");
    std::size_t mc_d = 2;
    std::string mc_out;
    mc->add_option("--d", mc_d, "dimension")->required()->check(CLI::Range(2, 6));
    mc->add_option("--out", mc_out, "output path (default: stdout)");

    // iso-bounds / werner-bounds
    auto* iso = app.add_subcommand("iso-bounds", "bound report for an isotropic state");
    std::size_t iso_d = 2;
    double iso_f = 1.0;
    bool iso_ewd = false;
    iso->add_option("--d", iso_d, "dimension")->required()->check(CLI::Range(2, 6));
    iso->add_option("--f", iso_f, "fidelity")->required()->check(CLI::Range(0.0, 1.0));
    iso->add_flag("--with-ewd", iso_ewd, "also solve the E_WD SDP");

    auto* wer = app.add_subcommand("werner-bounds", "bound report for a Werner state");
    std::size_t wer_d = 2;
    double wer_p = 0.0;
    bool wer_ewd = false;
    wer->add_option("--d", wer_d, "dimension")->required()->check(CLI::Range(2, 6));
    wer->add_option("--p", wer_p, "antisymmetric weight")->required()->check(CLI::Range(0.0, 1.0));
    wer->add_flag("--with-ewd", wer_ewd, "also solve the E_WD SDP");

    // depol-capacity
    auto* depol = app.add_subcommand("depol-capacity", "capacity upper-bound curve for the depolarizing channel");
    std::size_t depol_d = 2;
    std::string depol_grid, depol_out;
    std::size_t depol_restarts = 0;
    std::uint64_t depol_seed = 1;
    depol->add_option("--d", depol_d, "dimension (2 or 3)")->required()->check(CLI::IsMember({2, 3}));
    depol->add_option("--p-grid", depol_grid, "start:stop:step")->required();
    depol->add_option("--restarts", depol_restarts, "search restarts per grid point");
    depol->add_option("--seed", depol_seed, "base seed");
    depol->add_option("--out", depol_out, "output path")->required();

    // benchmark-random
    auto* bench = app.add_subcommand("benchmark-random", "E_MP vs E_WD on random block mixtures");
    std::size_t bench_d = 3, bench_n = 0;
    double bench_p = 0.0;
    std::uint64_t bench_seed = 1;
    std::string bench_out;
    bool bench_theta = false;
    bench->add_option("--d", bench_d, "dimension (3)")->check(CLI::IsMember({3}));
    bench->add_option("--p", bench_p, "mixture weight")->required()->check(CLI::Range(0.0, 1.0));
    bench->add_option("--n", bench_n, "number of rows")->required()->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "base seed");
    bench->add_option("--out", bench_out, "output path")->required();
    bench->add_flag("--with-theta", bench_theta, "append the two theta example rows");

    // state-bound
    auto* sb = app.add_subcommand("state-bound", "bound report for a state file");
    std::string sb_in, sb_bounds;
    double sb_tol = 0.0;
    sb->add_option("--in", sb_in, "state JSON file")->required();
    sb->add_option("--bounds", sb_bounds, "comma-separated bound names")->required();
    sb->add_option("--tol", sb_tol, "validation tolerance override");

    // ssd-check
    auto* ssd = app.add_subcommand("ssd-check", "simultaneous Schmidt decomposability of a vector family");
    std::string ssd_in;
    ssd->add_option("--in", ssd_in, "vectors JSON file")->required();

    std::vector<std::string> argv_copy = args;
    std::reverse(argv_copy.begin(), argv_copy.end());  // CLI11 parses reversed vectors
    try {
        app.parse(argv_copy);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    set_jobs(jobs);
    try {
        if (mc->parsed()) return cmd_mc_blocks(mc_d, OutputSink{mc_out}, manifest, t0);
        if (iso->parsed()) return cmd_family_bounds(true, iso_d, iso_f, iso_ewd, manifest, t0);
        if (wer->parsed()) return cmd_family_bounds(false, wer_d, wer_p, wer_ewd, manifest, t0);
        if (depol->parsed()) {
            manifest.seed = depol_seed;
            return cmd_depol_capacity(depol_d, depol_grid, depol_restarts, depol_seed,
                                      OutputSink{depol_out}, manifest, t0);
        }
        if (bench->parsed()) {
            manifest.seed = bench_seed;
            return cmd_benchmark_random(bench_p, bench_n, bench_seed, bench_theta,
                                        OutputSink{bench_out}, manifest, t0);
        }
        if (sb->parsed()) {
            std::vector<std::string> names;
            std::istringstream in(sb_bounds);
            std::string tok;
            while (std::getline(in, tok, ','))
                if (!tok.empty()) names.push_back(tok);
            return cmd_state_bound(sb_in, names, sb_tol, manifest, t0);
        }
        if (ssd->parsed()) return cmd_ssd_check(ssd_in);
    } catch (const std::invalid_argument& e) {
        std::cerr << "qdist: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "qdist: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}

}  // namespace qdist::cli
