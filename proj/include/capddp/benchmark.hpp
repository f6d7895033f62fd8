#ifndef CAPDDP_BENCHMARK_HPP
#define CAPDDP_BENCHMARK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "capddp/model.hpp"

namespace capddp {

struct VariantTiming {
    Variant variant = Variant::CommonAtoms;
    std::vector<double> sweep_seconds;  // post-warmup sweeps only
    std::vector<std::size_t> n_star;    // every sweep, warmup included
    double median_seconds = 0.0;
    double mean_seconds = 0.0;
    double mean_n_star = 0.0;
};

/// Side-by-side sweep cost of the two variants on the same data and seed.
/// `predicted_multiplier` is m(m+1)/2 - 1, the factor by which PDDP's extra
/// per-sweep work scales N* * sum_j n_j.
struct BenchmarkReport {
    std::size_t m = 0;
    std::size_t total_observations = 0;
    std::size_t sweeps = 0;
    std::size_t warmup = 0;
    std::size_t predicted_multiplier = 0;
    VariantTiming common;
    VariantTiming uncommon;
    double median_difference = 0.0;  // PDDP - CAPDDP
    double mean_difference = 0.0;
};

std::size_t predicted_delta_t_multiplier(std::size_t m);

double median(std::span<const double> values);

/// Runs `sweeps` sweeps of each variant; the first `warmup` are timed but
/// excluded from the summary statistics.
BenchmarkReport benchmark_delta_t(const ValidatedConfig& cfg, const Dataset& data,
                                  std::size_t sweeps, std::size_t warmup = 50);

}  // namespace capddp

#endif  // CAPDDP_BENCHMARK_HPP
