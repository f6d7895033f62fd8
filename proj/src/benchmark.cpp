#include "capddp/benchmark.hpp"

#include <algorithm>

#include "capddp/error.hpp"
#include "capddp/gibbs.hpp"

namespace capddp {

std::size_t predicted_delta_t_multiplier(std::size_t m) { return pair_count(m) - 1; }

double median(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty series");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

namespace {

VariantTiming time_variant(ModelConfig mc, Variant variant, const Dataset& data, std::size_t sweeps,
                           std::size_t warmup) {
    mc.variant = variant;
    const ValidatedConfig cfg = validate_config(std::move(mc));
    Rng rng(cfg->seed);
    GibbsState state = init_state(cfg, data, rng);

    VariantTiming t;
    t.variant = variant;
    t.n_star.reserve(sweeps);
    double n_star_sum = 0.0;
    for (std::size_t s = 0; s < sweeps; ++s) {
        const SweepReport rep = sweep(state, rng);
        t.n_star.push_back(rep.n_star);
        if (s < warmup) continue;
        t.sweep_seconds.push_back(rep.wall_seconds);
        n_star_sum += static_cast<double>(rep.n_star);
    }
    t.median_seconds = median(t.sweep_seconds);
    double sum = 0.0;
    for (double v : t.sweep_seconds) sum += v;
    t.mean_seconds = sum / static_cast<double>(t.sweep_seconds.size());
    t.mean_n_star = n_star_sum / static_cast<double>(t.sweep_seconds.size());
    return t;
}

}  // namespace

BenchmarkReport benchmark_delta_t(const ValidatedConfig& cfg, const Dataset& data, std::size_t sweeps,
                                  std::size_t warmup) {
    if (sweeps <= warmup) throw Error(ErrorCode::Config, "benchmark sweeps must exceed warmup");
    BenchmarkReport r;
    r.m = cfg->m;
    r.total_observations = data.total_size();
    r.sweeps = sweeps;
    r.warmup = warmup;
    r.predicted_multiplier = predicted_delta_t_multiplier(cfg->m);
    r.common = time_variant(cfg.get(), Variant::CommonAtoms, data, sweeps, warmup);
    r.uncommon = time_variant(cfg.get(), Variant::UncommonAtoms, data, sweeps, warmup);
    r.median_difference = r.uncommon.median_seconds - r.common.median_seconds;
    r.mean_difference = r.uncommon.mean_seconds - r.common.mean_seconds;
    return r;
}

}  // namespace capddp
