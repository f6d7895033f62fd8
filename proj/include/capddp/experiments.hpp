#ifndef CAPDDP_EXPERIMENTS_HPP
#define CAPDDP_EXPERIMENTS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "capddp/distances.hpp"
#include "capddp/gibbs.hpp"
#include "capddp/model.hpp"

namespace capddp {

enum class Generator { Example1, Example2Large, Example2Small, RealFile };

std::string to_string(Generator g);
Generator generator_from_string(const std::string& name);

/// Group sizes used when a config does not give any.
std::vector<std::size_t> default_sizes(Generator g);

// Example 1: f1 = Ga(2 - x | 2, 1), f2 = N(0, variance 2), f3 = Ga(x + 2 | 2, 1).
Dataset generate_example1(std::span<const std::size_t> sizes, Rng& rng);
double example1_density(std::size_t group, double x);

// Example 2: equal-weight unit-variance normal 3-mixtures.
inline constexpr std::array<std::array<double, 3>, 3> kExample2Means{{
    {-10.0, -20.0, 20.0},
    {-20.0, 0.0, 30.0},
    {20.0, 30.0, 10.0},
}};
Dataset generate_example2(std::span<const std::size_t> sizes, Rng& rng);
double example2_density(std::size_t group, double x);

/// Column layout of the longitudinal SGOT file. `status_codes[g]` is the
/// status value that sends a subject to group g + 1 (dead, transplanted,
/// alive). Defaults follow the pbcseq coding.
struct RealDataOptions {
    char delimiter = ',';
    std::string id_column = "id";
    std::string time_column = "day";
    std::string status_column = "status";
    std::string value_column = "sgot";
    std::array<long, 3> status_codes{2, 1, 0};
};

/// Keeps each subject's latest visit (ties: last occurrence in the file),
/// splits by status and centers every group at zero.
Dataset ingest_real(const std::filesystem::path& file, const RealDataOptions& options = {});

/// One draw of x_{j, n_j + 1}: mixture row l ~ p_j, component k ~ w_jl
/// (extending sticks and atoms from the prior locally when the draw lands
/// in the unrealized tail), then x ~ K(. | theta).
double predictive_sample(const GibbsState& state, std::size_t j, Rng& rng);

struct ExperimentSpec {
    Generator generator = Generator::Example1;
    std::vector<std::size_t> sizes;  // empty: default_sizes(generator)
    std::string data_file;
    RealDataOptions real;
    std::size_t sweeps = 12000;
    std::size_t burn_in = 2000;
    std::size_t thin = 1;
};

void validate_spec(const ExperimentSpec& spec);

/// Number of sweeps recorded after burn-in.
std::size_t recorded_count(const ExperimentSpec& spec);

Dataset make_dataset(const ExperimentSpec& spec, Rng& rng);

struct RunArtifacts {
    ModelConfig config;
    ExperimentSpec spec;
    Dataset data;

    // One entry per recorded sweep.
    std::vector<std::uint64_t> record_sweeps;
    std::vector<std::vector<double>> predictive;           // [record][group]
    std::vector<std::size_t> clusters;                      // [record]
    std::vector<std::vector<std::size_t>> group_clusters;   // [record][group]
    std::vector<std::vector<double>> selection;             // [record][m*m]
    DistanceTrace distances;                                // empty under PDDP

    // One entry per sweep, burn-in included.
    std::vector<double> sweep_seconds;
    std::vector<std::size_t> n_star;
    std::vector<std::size_t> max_occupied;

    double mean_clusters() const;
    std::vector<double> mean_group_clusters() const;
    std::vector<double> mean_selection() const;  // m*m, row-major
    std::vector<double> mean_predictive() const;
    std::vector<double> predictive_series(std::size_t group) const;
};

RunArtifacts run_experiment(const ValidatedConfig& cfg, const ExperimentSpec& spec);

}  // namespace capddp

#endif  // CAPDDP_EXPERIMENTS_HPP
