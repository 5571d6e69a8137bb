#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdist/core.hpp"

namespace qdist::io {

inline constexpr const char* kVersion = "qdist 0.1.0";

// Reproducibility header embedded verbatim at the top of every output file.
struct RunManifest {
    std::string command_line;
    std::uint64_t seed = 0;
    double gap_tol = 1e-7;
    double feas_tol = 1e-7;
    std::string version = kVersion;
    double wall_seconds = 0.0;

    std::vector<std::string> csv_header() const;  // "# key: value" lines
    std::string json() const;                     // object body, for embedding
};

std::string fmt(double v);  // 12 significant digits

// State file: {"dims": [dA, dB], "re": [[...]], "im": [[...]]}, row-major.
DensityMatrix read_state(const std::string& path, const ValidationTolerances& tol = {});
void write_state(const std::string& path, const DensityMatrix& rho);

// Vector files hold {"dims": [...], "re": [...], "im": [...]} objects, either
// a single object or an array of them.
struct VectorFile {
    std::vector<std::size_t> dims;
    std::vector<std::vector<cplx>> vectors;
};
VectorFile read_vectors(const std::string& path);
void write_vectors(const std::string& path, const VectorFile& vf);

}  // namespace qdist::io

namespace qdist::bounds {
struct BoundReport;
}

namespace qdist::io {
// {"state": ..., "lower_hashing": ..., "upper": {name: value},
//  "solver": {name: diagnostics}, "manifest": {...}}
std::string bound_report_json(const bounds::BoundReport& report, const RunManifest& manifest);
}  // namespace qdist::io

namespace qdist::cli {
// argv-style entry point used by both the binary and the tests;
// returns the process exit code (0 ok, 1 usage, 2 validation, 3 solver).
int run(const std::vector<std::string>& args);
}  // namespace qdist::cli
