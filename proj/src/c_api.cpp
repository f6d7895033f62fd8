#include "capddp/capddp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "capddp/artifacts.hpp"
#include "capddp/benchmark.hpp"
#include "capddp/diagnostics.hpp"
#include "capddp/distances.hpp"
#include "capddp/error.hpp"
#include "capddp/experiments.hpp"
#include "capddp/gibbs.hpp"
#include "capddp/run_config.hpp"

struct capddp_sampler {
    capddp::GibbsState state;
    capddp::Rng rng;
};

namespace {

thread_local std::string g_last_error;

capddp_status to_status(capddp::ErrorCode code) {
    switch (code) {
        case capddp::ErrorCode::InvalidArgument: return CAPDDP_ERR_INVALID_ARGUMENT;
        case capddp::ErrorCode::Config: return CAPDDP_ERR_CONFIG;
        case capddp::ErrorCode::Io: return CAPDDP_ERR_IO;
        case capddp::ErrorCode::Numerical: return CAPDDP_ERR_NUMERICAL;
        case capddp::ErrorCode::State: return CAPDDP_ERR_STATE;
    }
    return CAPDDP_ERR_INTERNAL;
}

template <typename F>
capddp_status guarded(F&& body) noexcept {
    g_last_error.clear();
    try {
        body();
        return CAPDDP_OK;
    } catch (const capddp::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CAPDDP_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CAPDDP_ERR_INTERNAL;
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw capddp::Error(capddp::ErrorCode::InvalidArgument, what);
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

capddp::Variant to_variant(capddp_variant v) {
    switch (v) {
        case CAPDDP_VARIANT_COMMON_ATOMS: return capddp::Variant::CommonAtoms;
        case CAPDDP_VARIANT_UNCOMMON_ATOMS: return capddp::Variant::UncommonAtoms;
    }
    throw capddp::Error(capddp::ErrorCode::InvalidArgument, "unknown variant " + std::to_string(static_cast<int>(v)));
}

capddp::RunConfigFile load_with_overrides(const char* path, const capddp_overrides* ov) {
    require(path != nullptr, "config path is NULL");
    capddp::RunConfigFile cfg = capddp::load_run_config(path);
    if (ov != nullptr) {
        if (ov->has_seed) cfg.model.seed = ov->seed;
        if (ov->has_variant) cfg.model.variant = to_variant(ov->variant);
        if (ov->output_root != nullptr) cfg.output_dir = ov->output_root;
    }
    return cfg;
}

void check_group(const capddp_sampler* s, std::size_t group) {
    require(s != nullptr, "sampler is NULL");
    require(group < s->state.m(), "group index out of range");
}

void fill_info(const capddp::GibbsState& st, capddp_sweep_info* info, double wall) {
    info->sweep = st.sweep;
    info->max_occupied = st.max_occupied;
    info->n_star = st.n_star;
    info->clusters = capddp::cluster_count(st);
    info->wall_seconds = wall;
}

}  // namespace

extern "C" {

const char* capddp_version(void) { return "1.0.0"; }

const char* capddp_last_error(void) { return g_last_error.c_str(); }

void capddp_free_string(char* s) { std::free(s); }

capddp_status capddp_sampler_create(const capddp_model_params* params, const double* const* groups,
                                    const size_t* group_sizes, capddp_sampler** out) {
    return guarded([&] {
        require(params != nullptr && groups != nullptr && group_sizes != nullptr && out != nullptr,
                "NULL argument to capddp_sampler_create");
        *out = nullptr;
        capddp::ModelConfig mc;
        mc.m = params->m;
        mc.c = params->c;
        mc.s = params->s;
        mc.eps = params->eps;
        mc.seed = params->seed;
        mc.variant = to_variant(params->variant);
        if (params->dirichlet_hyper != nullptr) {
            mc.dirichlet_hyper.assign(params->dirichlet_hyper, params->dirichlet_hyper + mc.m * mc.m);
        }
        const capddp::ValidatedConfig cfg = capddp::validate_config(std::move(mc));
        capddp::Dataset data;
        data.groups.resize(cfg->m);
        for (std::size_t j = 0; j < cfg->m; ++j) {
            require(groups[j] != nullptr || group_sizes[j] == 0, "NULL group pointer");
            if (group_sizes[j] > 0) data.groups[j].assign(groups[j], groups[j] + group_sizes[j]);
        }
        auto sampler = std::make_unique<capddp_sampler>();
        sampler->rng.seed(cfg->seed);
        sampler->state = capddp::init_state(cfg, std::move(data), sampler->rng);
        *out = sampler.release();
    });
}

void capddp_sampler_destroy(capddp_sampler* sampler) { delete sampler; }

capddp_status capddp_sampler_sweep(capddp_sampler* sampler, capddp_sweep_info* info) {
    return guarded([&] {
        require(sampler != nullptr, "sampler is NULL");
        const capddp::SweepReport rep = capddp::sweep(sampler->state, sampler->rng);
        if (info != nullptr) fill_info(sampler->state, info, rep.wall_seconds);
    });
}

capddp_status capddp_sampler_info(const capddp_sampler* sampler, capddp_sweep_info* info) {
    return guarded([&] {
        require(sampler != nullptr && info != nullptr, "NULL argument to capddp_sampler_info");
        fill_info(sampler->state, info, 0.0);
    });
}

capddp_status capddp_sampler_selection_probs(const capddp_sampler* sampler, double* out, size_t len) {
    return guarded([&] {
        require(sampler != nullptr && out != nullptr, "NULL argument to capddp_sampler_selection_probs");
        const std::size_t m = sampler->state.m();
        require(len >= m * m, "output buffer smaller than m*m");
        for (std::size_t j = 0; j < m; ++j) {
            const auto row = sampler->state.probs.row(j);
            std::copy(row.begin(), row.end(), out + j * m);
        }
    });
}

capddp_status capddp_sampler_composite_weights(const capddp_sampler* sampler, size_t group, double* out,
                                               size_t capacity, size_t* length, double* tail_mass) {
    return guarded([&] {
        check_group(sampler, group);
        require(length != nullptr, "length is NULL");
        const capddp::CompositeWeights cw = capddp::composite_weights(sampler->state);
        const auto& g = cw.groups[group];
        *length = g.w.size();
        if (tail_mass != nullptr) *tail_mass = g.tail_mass;
        require(capacity >= g.w.size() && (out != nullptr || g.w.empty()), "output buffer smaller than N*");
        std::copy(g.w.begin(), g.w.end(), out);
    });
}

capddp_status capddp_sampler_l2_distance(const capddp_sampler* sampler, size_t a, size_t b, double* out) {
    return guarded([&] {
        check_group(sampler, a);
        check_group(sampler, b);
        require(out != nullptr, "out is NULL");
        const capddp::CompositeWeights cw = capddp::composite_weights(sampler->state);
        *out = capddp::l2_conditional(cw.groups[a].w, cw.groups[b].w);
    });
}

capddp_status capddp_sampler_tv_distance(const capddp_sampler* sampler, size_t a, size_t b, double* out) {
    return guarded([&] {
        check_group(sampler, a);
        check_group(sampler, b);
        require(out != nullptr, "out is NULL");
        const capddp::CompositeWeights cw = capddp::composite_weights(sampler->state);
        *out = capddp::tv_distance(cw.groups[a], cw.groups[b]);
    });
}

capddp_status capddp_sampler_predictive(capddp_sampler* sampler, size_t group, double* out) {
    return guarded([&] {
        check_group(sampler, group);
        require(out != nullptr, "out is NULL");
        *out = capddp::predictive_sample(sampler->state, group, sampler->rng);
    });
}

capddp_status capddp_ad_two_sample(const double* x, size_t nx, const double* y, size_t ny,
                                   double* statistic, double* p_value) {
    return guarded([&] {
        require(x != nullptr && y != nullptr, "NULL sample");
        const capddp::AdResult r = capddp::ad_two_sample({x, nx}, {y, ny});
        if (statistic != nullptr) *statistic = r.statistic;
        if (p_value != nullptr) *p_value = r.p_value;
    });
}

capddp_status capddp_ad_one_sample_normal(const double* x, size_t n, double mean, double variance,
                                          double* statistic, double* p_value) {
    return guarded([&] {
        require(x != nullptr, "NULL sample");
        const capddp::AdResult r = capddp::ad_one_sample_normal({x, n}, mean, variance);
        if (statistic != nullptr) *statistic = r.statistic;
        if (p_value != nullptr) *p_value = r.p_value;
    });
}

capddp_status capddp_simulate_data(const char* generator, const size_t* sizes, size_t n_groups,
                                   uint64_t seed, const char* out_dir) {
    return guarded([&] {
        require(generator != nullptr && out_dir != nullptr, "NULL argument to capddp_simulate_data");
        const capddp::Generator g = capddp::generator_from_string(generator);
        if (g == capddp::Generator::RealFile) {
            throw capddp::Error(capddp::ErrorCode::Config, "real-file is not a simulator");
        }
        capddp::ExperimentSpec spec;
        spec.generator = g;
        if (sizes != nullptr && n_groups > 0) spec.sizes.assign(sizes, sizes + n_groups);
        capddp::Rng rng(seed);
        capddp::write_group_csvs(capddp::make_dataset(spec, rng), out_dir);
    });
}

capddp_status capddp_check_config(const char* config_path) {
    return guarded([&] { load_with_overrides(config_path, nullptr); });
}

capddp_status capddp_run(const char* config_path, const capddp_overrides* overrides, char** run_dir) {
    return guarded([&] {
        require(run_dir != nullptr, "run_dir is NULL");
        *run_dir = nullptr;
        const capddp::RunConfigFile cfg = load_with_overrides(config_path, overrides);
        const capddp::ValidatedConfig model = capddp::validate_config(cfg.model);
        const capddp::RunArtifacts art = capddp::run_experiment(model, cfg.experiment);
        const auto dir = capddp::fresh_run_directory(capddp::resolve_output_root(cfg.output_dir),
                                                     cfg.model.seed);
        capddp::write_run_artifacts(art, cfg, dir);
        *run_dir = duplicate(dir.string());
    });
}

capddp_status capddp_benchmark(const char* config_path, const capddp_overrides* overrides,
                               char** report_json) {
    return guarded([&] {
        require(report_json != nullptr, "report_json is NULL");
        *report_json = nullptr;
        const capddp::RunConfigFile cfg = load_with_overrides(config_path, overrides);
        const capddp::ValidatedConfig model = capddp::validate_config(cfg.model);
        capddp::Rng rng(cfg.model.seed);
        const capddp::Dataset data = capddp::make_dataset(cfg.experiment, rng);
        const capddp::BenchmarkReport rep =
            capddp::benchmark_delta_t(model, data, cfg.benchmark_sweeps, cfg.benchmark_warmup);
        *report_json = duplicate(capddp::benchmark_json(rep, cfg));
    });
}

capddp_status capddp_diagnostics(const char* predictive_csv, size_t group, const char* reference,
                                 size_t batch_size, char** report_json) {
    return guarded([&] {
        require(predictive_csv != nullptr && reference != nullptr && report_json != nullptr,
                "NULL argument to capddp_diagnostics");
        *report_json = nullptr;
        const std::vector<double> values = capddp::read_predictive_trace(predictive_csv, group);
        const std::string ref = reference;
        capddp::BatchDiagnostics d;
        if (ref.rfind("normal:", 0) == 0) {
            const auto rest = ref.substr(7);
            const auto colon = rest.find(':');
            if (colon == std::string::npos) {
                throw capddp::Error(capddp::ErrorCode::InvalidArgument,
                                    "reference must look like normal:<mean>:<variance>");
            }
            char* end = nullptr;
            const std::string mean_text = rest.substr(0, colon);
            const std::string var_text = rest.substr(colon + 1);
            const double mean = std::strtod(mean_text.c_str(), &end);
            require(end != mean_text.c_str() && *end == '\0', "bad mean in reference");
            const double var = std::strtod(var_text.c_str(), &end);
            require(end != var_text.c_str() && *end == '\0', "bad variance in reference");
            d = capddp::batch_ad_one_sample(values, mean, var, batch_size);
        } else if (ref.rfind("trace:", 0) == 0) {
            const std::vector<double> other = capddp::read_predictive_trace(ref.substr(6), group);
            d = capddp::batch_ad_two_sample(values, other, batch_size);
        } else {
            throw capddp::Error(capddp::ErrorCode::InvalidArgument,
                                "reference must start with normal: or trace:");
        }
        *report_json = duplicate(capddp::diagnostics_json(d, ref));
    });
}

}  // extern "C"
