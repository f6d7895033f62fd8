#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "capddp/artifacts.hpp"
#include "capddp/error.hpp"
#include "doctest.h"

using namespace capddp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "capddp_artifacts_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunArtifacts small_run(Variant v, RunConfigFile& cfg) {
    cfg = parse_run_config(R"({"sizes": [8, 4, 8], "sweeps": 40, "burn_in": 10, "thin": 2, "seed": 9})");
    cfg.model.variant = v;
    return run_experiment(validate_config(cfg.model), cfg.experiment);
}

}  // namespace

TEST_CASE("doubles round-trip through text") {
    Rng rng(1);
    const double fixed[] = {0.1, -1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308, -0.0, 123456789.0};
    for (double x : fixed) CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    for (int i = 0; i < 10000; ++i) {
        const double x = sample_normal(rng, 0.0, 1.0) * std::pow(10.0, sample_uniform(rng, -30.0, 30.0));
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("group CSVs round-trip") {
    const fs::path dir = scratch("groups");
    Rng rng(2);
    const Dataset d = generate_example1(std::vector<std::size_t>{7, 3, 5}, rng);
    const auto files = write_group_csvs(d, dir);
    REQUIRE(files.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        const CsvTable t = read_csv(files[j]);
        CHECK(t.header == std::vector<std::string>{"group", "index", "value"});
        REQUIRE(t.rows.size() == d.groups[j].size());
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            CHECK(t.rows[i][0] == std::to_string(j + 1));
            CHECK(t.rows[i][1] == std::to_string(i + 1));
            CHECK(std::strtod(t.rows[i][2].c_str(), nullptr) == d.groups[j][i]);
        }
    }
}

TEST_CASE("csv reader errors") {
    const fs::path dir = scratch("csv");
    std::ofstream(dir / "ragged.csv") << "a,b\n1,2\n3\n";
    try {
        read_csv(dir / "ragged.csv");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
        CHECK(std::string(e.what()).find("ragged.csv:3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_csv(dir / "missing.csv"), Error);
    std::ofstream(dir / "ok.csv") << "a,b\n1,2\n";
    CHECK_THROWS_AS(read_csv(dir / "ok.csv").column("c"), Error);
}

TEST_CASE("output root resolution") {
    CHECK(resolve_output_root("explicit") == fs::path("explicit"));
    ::setenv("CAPDDP_OUTPUT_ROOT", "/tmp/from-env", 1);
    CHECK(resolve_output_root("") == fs::path("/tmp/from-env"));
    CHECK(resolve_output_root("x") == fs::path("x"));
    ::unsetenv("CAPDDP_OUTPUT_ROOT");
    CHECK(resolve_output_root("") == fs::path("runs"));
}

TEST_CASE("fresh run directories never collide") {
    const fs::path root = scratch("runs");
    std::set<fs::path> seen;
    for (int i = 0; i < 5; ++i) {
        const fs::path d = fresh_run_directory(root, 42);
        CHECK(fs::is_directory(d));
        CHECK(d.filename().string().find("seed42") != std::string::npos);
        CHECK(seen.insert(d).second);
    }
}

TEST_CASE("run artifacts under CAPDDP") {
    RunConfigFile cfg;
    const RunArtifacts art = small_run(Variant::CommonAtoms, cfg);
    const fs::path dir = scratch("capddp_run");
    write_run_artifacts(art, cfg, dir);
    for (const char* f : {"summary.json", "trace_distances.csv", "trace_tv.csv", "trace_predictive.csv",
                          "trace_clusters.csv", "trace_selection.csv"}) {
        CHECK_MESSAGE(fs::exists(dir / f), f);
    }
    const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(s["seed"] == 9);
    CHECK(s["config_hash"].get<std::string>().size() == 16);
    CHECK(s["build_id"] == std::string(build_id()));
    CHECK(s["variant"] == "capddp");
    CHECK(s["records"] == 15);
    CHECK(s["distances"]["l2_running_mean"].size() == 3);
    CHECK(s["distances"]["tv_running_mean"].contains("1-3"));
    CHECK(s["selection_mean"].size() == 3);
    CHECK(s["timing"]["total_sweep_seconds"].get<double>() > 0.0);

    const auto pred = read_predictive_trace(dir / "trace_predictive.csv", 2);
    CHECK(pred == art.predictive_series(1));
    const CsvTable dist = read_csv(dir / "trace_distances.csv");
    CHECK(dist.rows.size() == 45);
    CHECK(std::strtod(dist.rows.back()[3].c_str(), nullptr) == art.distances.l2_mean.back()[2]);
    CHECK(read_csv(dir / "trace_selection.csv").rows.size() == 15 * 9);
    CHECK(read_csv(dir / "trace_clusters.csv").header.size() == 6);
}

TEST_CASE("run artifacts under PDDP") {
    RunConfigFile cfg;
    const RunArtifacts art = small_run(Variant::UncommonAtoms, cfg);
    const fs::path dir = scratch("pddp_run");
    write_run_artifacts(art, cfg, dir);
    CHECK_FALSE(fs::exists(dir / "trace_distances.csv"));
    CHECK_FALSE(fs::exists(dir / "trace_tv.csv"));
    CHECK(fs::exists(dir / "trace_predictive.csv"));
    const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK_FALSE(s.contains("distances"));
    CHECK(s["variant"] == "pddp");
    CHECK(s["timing"].contains("median_sweep_seconds"));
}

TEST_CASE("summary is identical for identical runs apart from timing") {
    RunConfigFile c1, c2;
    auto a = nlohmann::json::parse(summary_json(small_run(Variant::CommonAtoms, c1), c1));
    auto b = nlohmann::json::parse(summary_json(small_run(Variant::CommonAtoms, c2), c2));
    a.erase("timing");
    b.erase("timing");
    CHECK(a == b);
}

TEST_CASE("batch diagnostics") {
    Rng rng(3);
    std::vector<double> x(99);
    for (double& v : x) v = sample_normal(rng, 0.0, 1.0);
    try {
        batch_ad_one_sample(x, 0.0, 1.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("insufficient samples") != std::string::npos);
    }
    x.resize(70050);
    for (double& v : x) v = sample_normal(rng, 0.0, 1.0);
    const BatchDiagnostics d = batch_ad_one_sample(x, 0.0, 1.0);
    CHECK(d.batches.size() == 700);
    CHECK(d.rejection_rate == doctest::Approx(0.05).epsilon(0.5));

    std::vector<double> y(250);
    for (double& v : y) v = sample_normal(rng, 0.0, 1.0);
    const BatchDiagnostics t = batch_ad_two_sample(x, y, 100);
    CHECK(t.batches.size() == 2);
    CHECK_THROWS_AS(batch_ad_two_sample(x, y, 1), Error);

    const auto j = nlohmann::json::parse(diagnostics_json(d, "normal:0:1"));
    CHECK(j["batches"] == 700);
    CHECK(j["p_values"].size() == 700);
    CHECK(j["reference"] == "normal:0:1");
}

TEST_CASE("benchmark json") {
    RunConfigFile cfg = parse_run_config(R"({"sizes": [5, 5, 5], "seed": 11})");
    Rng rng(11);
    const Dataset d = make_dataset(cfg.experiment, rng);
    const BenchmarkReport r = benchmark_delta_t(validate_config(cfg.model), d, 30, 5);
    const auto j = nlohmann::json::parse(benchmark_json(r, cfg));
    CHECK(j["predicted_multiplier"] == 5);
    CHECK(j["capddp"]["sweep_seconds"].size() == 25);
    CHECK(j["pddp"]["n_star_trace"].size() == 30);
    CHECK(j["seed"] == 11);
}
