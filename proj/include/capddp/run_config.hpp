#ifndef CAPDDP_RUN_CONFIG_HPP
#define CAPDDP_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "capddp/experiments.hpp"
#include "capddp/model.hpp"

namespace capddp {

/// Flat JSON run configuration. Recognized keys:
///
///   m, c, s, eps, dirichlet_hyper (m x m nested array), seed,
///   variant ("capddp" | "pddp"),
///   generator ("example1" | "example2-large" | "example2-small" | "real-file"),
///   sizes, data_file, data_delimiter, real_id_column, real_time_column,
///   real_status_column, real_value_column, real_status_codes,
///   sweeps, burn_in, thin, output_dir, benchmark_sweeps, benchmark_warmup
///
/// Anything else is rejected.
struct RunConfigFile {
    ModelConfig model;
    ExperimentSpec experiment;
    std::string output_dir;
    std::size_t benchmark_sweeps = 500;
    std::size_t benchmark_warmup = 50;
    std::string canonical;     // normalized JSON echo of the parsed document
    std::uint64_t hash = 0;    // FNV-1a of `canonical`
};

RunConfigFile parse_run_config(const std::string& text, const std::string& origin = "<config>");
RunConfigFile load_run_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace capddp

#endif  // CAPDDP_RUN_CONFIG_HPP
