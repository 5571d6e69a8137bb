#include "qdist/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qdist/bounds.hpp"

namespace qdist::io {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> RunManifest::csv_header() const {
    std::vector<std::string> lines;
    lines.push_back(std::string("# ") + version);
    lines.push_back("# command: " + command_line);
    lines.push_back("# seed: " + std::to_string(seed));
    lines.push_back("# gap_tol: " + fmt(gap_tol) + " feas_tol: " + fmt(feas_tol));
    lines.push_back("# wall_seconds: " + fmt(wall_seconds));
    return lines;
}

std::string RunManifest::json() const {
    nlohmann::json j;
    j["version"] = version;
    j["command"] = command_line;
    j["seed"] = seed;
    j["gap_tol"] = gap_tol;
    j["feas_tol"] = feas_tol;
    j["wall_seconds"] = wall_seconds;
    return j.dump();
}

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return j;
}

std::vector<std::size_t> parse_dims(const json& j) {
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
        throw std::invalid_argument("missing or empty \"dims\"");
    std::vector<std::size_t> dims;
    for (const auto& v : j["dims"]) {
        const long long d = v.get<long long>();
        if (d < 1) throw std::invalid_argument("nonpositive dimension in \"dims\"");
        dims.push_back(static_cast<std::size_t>(d));
    }
    return dims;
}

std::vector<cplx> parse_vector(const json& j, std::size_t expect) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != expect || im.size() != expect)
        throw std::invalid_argument("vector length does not match dims product");
    std::vector<cplx> v(expect);
    for (std::size_t i = 0; i < expect; ++i) v[i] = cplx(re[i].get<double>(), im[i].get<double>());
    return v;
}

}  // namespace

DensityMatrix read_state(const std::string& path, const ValidationTolerances& tol) {
    const json j = load_json(path);
    const auto dims = parse_dims(j);
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != n || im.size() != n)
        throw std::invalid_argument("matrix row count does not match dims product");
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (re[r].size() != n || im[r].size() != n)
            throw std::invalid_argument("matrix is not square with side equal to dims product");
        for (std::size_t c = 0; c < n; ++c)
            m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
    }
    DensityMatrix rho{dims, std::move(m)};
    if (auto issue = rho.check(tol)) throw std::invalid_argument(issue->what);
    return rho;
}

void write_state(const std::string& path, const DensityMatrix& rho) {
    json j;
    j["dims"] = rho.dims;
    const std::size_t n = rho.mat.rows;
    json re = json::array(), im = json::array();
    for (std::size_t r = 0; r < n; ++r) {
        json rr = json::array(), ri = json::array();
        for (std::size_t c = 0; c < n; ++c) {
            rr.push_back(rho.mat(r, c).real());
            ri.push_back(rho.mat(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(1) << "\n";
}

VectorFile read_vectors(const std::string& path) {
    const json j = load_json(path);
    VectorFile vf;
    const auto read_one = [&](const json& obj) {
        const auto dims = parse_dims(obj);
        if (vf.dims.empty())
            vf.dims = dims;
        else if (vf.dims != dims)
            throw std::invalid_argument("vectors carry inconsistent dims");
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        vf.vectors.push_back(parse_vector(obj, n));
    };
    if (j.is_array())
        for (const auto& obj : j) read_one(obj);
    else
        read_one(j);
    if (vf.vectors.empty()) throw std::invalid_argument("no vectors in " + path);
    return vf;
}

std::string bound_report_json(const bounds::BoundReport& report, const RunManifest& manifest) {
    json j;
    j["state"] = report.state_label;
    j["lower_hashing"] = report.lower_hashing;
    json upper = json::object(), solver = json::object();
    for (const auto& [name, entry] : report.upper) {
        upper[name] = entry.value;
        json diag;
        if (entry.gap != 0.0) diag["gap"] = entry.gap;
        if (entry.residual != 0.0) diag["residual"] = entry.residual;
        if (!entry.note.empty()) diag["note"] = entry.note;
        if (!diag.empty()) solver[name] = std::move(diag);
    }
    j["upper"] = std::move(upper);
    j["solver"] = std::move(solver);
    j["manifest"] = json::parse(manifest.json());
    return j.dump(1);
}

void write_vectors(const std::string& path, const VectorFile& vf) {
    json arr = json::array();
    for (const auto& v : vf.vectors) {
        json obj;
        obj["dims"] = vf.dims;
        json re = json::array(), im = json::array();
        for (const auto& z : v) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        obj["re"] = std::move(re);
        obj["im"] = std::move(im);
        arr.push_back(std::move(obj));
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << arr.dump(1) << "\n";
}

}  // namespace qdist::io
