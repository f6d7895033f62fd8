#ifndef CAPDDP_ARTIFACTS_HPP
#define CAPDDP_ARTIFACTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "capddp/benchmark.hpp"
#include "capddp/diagnostics.hpp"
#include "capddp/experiments.hpp"
#include "capddp/run_config.hpp"

namespace capddp {

/// %.17g; parses back to the identical double.
std::string format_double(double v);

/// Rows of a delimited file with a header; fields are unquoted strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// group_<j>.csv with header `group,index,value`, 1-based group and index.
std::vector<std::filesystem::path> write_group_csvs(const Dataset& data,
                                                    const std::filesystem::path& dir);

/// Values of `group` (1-based) from a trace_predictive.csv, in sweep order.
std::vector<double> read_predictive_trace(const std::filesystem::path& path, std::size_t group);

/// Output root: explicit value, else $CAPDDP_OUTPUT_ROOT, else "runs".
std::filesystem::path resolve_output_root(const std::string& explicit_root);

/// New directory <root>/run-<UTC timestamp>-seed<seed>[-<n>]; never reuses one.
std::filesystem::path fresh_run_directory(const std::filesystem::path& root, std::uint64_t seed);

/// Writes trace_distances.csv, trace_tv.csv (CAPDDP only),
/// trace_predictive.csv, trace_clusters.csv, trace_selection.csv and
/// summary.json into `dir`.
void write_run_artifacts(const RunArtifacts& art, const RunConfigFile& cfg,
                         const std::filesystem::path& dir);

std::string summary_json(const RunArtifacts& art, const RunConfigFile& cfg);
std::string benchmark_json(const BenchmarkReport& report, const RunConfigFile& cfg);
std::string diagnostics_json(const BatchDiagnostics& d, const std::string& reference);

/// Build identifier baked in at configure time; may be empty.
const char* build_id();

}  // namespace capddp

#endif  // CAPDDP_ARTIFACTS_HPP
