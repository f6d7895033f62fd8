// capddp_cli: simulate-data, run, benchmark and diagnostics on top of the C API.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capddp/capddp.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code(capddp_status st) {
    switch (st) {
        case CAPDDP_OK: return 0;
        case CAPDDP_ERR_INVALID_ARGUMENT:
        case CAPDDP_ERR_CONFIG: return kExitUsage;
        case CAPDDP_ERR_IO: return kExitIo;
        default: return kExitFailure;
    }
}

int report(capddp_status st) {
    if (st != CAPDDP_OK) std::cerr << "capddp: error: " << capddp_last_error() << '\n';
    return exit_code(st);
}

// Takes ownership of a library string.
std::string adopt(char* s) {
    std::string out = s != nullptr ? s : "";
    capddp_free_string(s);
    return out;
}

int emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << '\n';
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    f << text << '\n';
    if (!f) {
        std::cerr << "capddp: error: cannot write " << path << '\n';
        return kExitIo;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Common-atoms pairwise-dependent DP mixture sampler"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(capddp_version()));

    // simulate-data
    auto* sim = app.add_subcommand("simulate-data", "write one CSV per group from a synthetic generator");
    std::string generator;
    std::vector<std::size_t> sizes;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    sim->add_option("--generator", generator, "example1 | example2-large | example2-small")
        ->required()
        ->check(CLI::IsMember({"example1", "example2-large", "example2-small"}));
    sim->add_option("--sizes", sizes, "group sizes (default depends on generator)")->delimiter(',');
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "output directory")->required();

    // run
    auto* run = app.add_subcommand("run", "run the sampler and write traces into a fresh directory");
    std::string run_config;
    std::string run_out;
    std::string run_variant;
    std::uint64_t run_seed = 0;
    run->add_option("--config", run_config, "JSON run config")->required()->check(CLI::ExistingFile);
    auto* run_seed_opt = run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--out", run_out, "output root (default: config, then $CAPDDP_OUTPUT_ROOT, then ./runs)");
    run->add_option("--variant", run_variant, "override the model variant")
        ->check(CLI::IsMember({"capddp", "pddp"}));

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "time CAPDDP and PDDP sweeps on the configured data");
    std::string bench_config;
    std::string bench_out;
    std::uint64_t bench_seed = 0;
    bench->add_option("--config", bench_config, "JSON run config")->required()->check(CLI::ExistingFile);
    auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "override the config seed");
    bench->add_option("--out", bench_out, "write the JSON report here instead of stdout");

    // diagnostics
    auto* diag = app.add_subcommand("diagnostics", "batched Anderson-Darling tests on a predictive trace");
    std::string predictive;
    std::size_t group = 1;
    std::string reference;
    std::size_t batch = 100;
    std::string diag_out;
    diag->add_option("--predictive", predictive, "trace_predictive.csv")->required();
    diag->add_option("--group", group, "group, 1-based")->check(CLI::PositiveNumber);
    diag->add_option("--reference", reference, "normal:<mean>:<variance> or trace:<path>")->required();
    diag->add_option("--batch", batch, "batch size")->check(CLI::PositiveNumber);
    diag->add_option("--out", diag_out, "write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (*sim) {
        const capddp_status st = capddp_simulate_data(generator.c_str(), sizes.empty() ? nullptr : sizes.data(),
                                                      sizes.size(), sim_seed, sim_out.c_str());
        return report(st);
    }

    if (*run) {
        capddp_overrides ov{};
        if (*run_seed_opt) {
            ov.has_seed = 1;
            ov.seed = run_seed;
        }
        if (!run_variant.empty()) {
            ov.has_variant = 1;
            ov.variant = run_variant == "pddp" ? CAPDDP_VARIANT_UNCOMMON_ATOMS : CAPDDP_VARIANT_COMMON_ATOMS;
        }
        if (!run_out.empty()) ov.output_root = run_out.c_str();
        char* dir = nullptr;
        const capddp_status st = capddp_run(run_config.c_str(), &ov, &dir);
        if (st != CAPDDP_OK) return report(st);
        std::cout << adopt(dir) << '\n';
        return 0;
    }

    if (*bench) {
        capddp_overrides ov{};
        if (*bench_seed_opt) {
            ov.has_seed = 1;
            ov.seed = bench_seed;
        }
        char* json = nullptr;
        const capddp_status st = capddp_benchmark(bench_config.c_str(), &ov, &json);
        if (st != CAPDDP_OK) return report(st);
        return emit(adopt(json), bench_out);
    }

    char* json = nullptr;
    const capddp_status st = capddp_diagnostics(predictive.c_str(), group, reference.c_str(), batch, &json);
    if (st != CAPDDP_OK) return report(st);
    return emit(adopt(json), diag_out);
}
