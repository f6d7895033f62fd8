#include "capddp/artifacts.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "capddp/error.hpp"

#ifndef CAPDDP_BUILD_ID
#define CAPDDP_BUILD_ID ""
#endif

namespace capddp {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const char* build_id() { return CAPDDP_BUILD_ID; }

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return c;
    }
    throw Error(ErrorCode::Io, "CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

std::string pair_label(std::size_t a, std::size_t b) {
    return std::to_string(a + 1) + "-" + std::to_string(b + 1);
}

double parse_double_field(const std::string& s, const fs::path& path, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw Error(ErrorCode::Io, path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, path.string() + " is empty");
    t.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        t.rows.push_back(split_csv_line(line));
        if (t.rows.back().size() != t.header.size()) {
            throw Error(ErrorCode::Io, path.string() + ":" + std::to_string(t.rows.size() + 1) +
                                           ": wrong number of fields");
        }
    }
    return t;
}

std::vector<fs::path> write_group_csvs(const Dataset& data, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<fs::path> files;
    for (std::size_t j = 0; j < data.m(); ++j) {
        const fs::path p = dir / ("group_" + std::to_string(j + 1) + ".csv");
        auto out = open_out(p);
        out << "group,index,value\n";
        for (std::size_t i = 0; i < data.groups[j].size(); ++i) {
            out << j + 1 << ',' << i + 1 << ',' << format_double(data.groups[j][i]) << '\n';
        }
        files.push_back(p);
    }
    return files;
}

std::vector<double> read_predictive_trace(const fs::path& path, std::size_t group) {
    const CsvTable t = read_csv(path);
    const std::size_t cg = t.column("group");
    const std::size_t cv = t.column("value");
    const std::string want = std::to_string(group);
    std::vector<double> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r][cg] != want) continue;
        out.push_back(parse_double_field(t.rows[r][cv], path, r + 2));
    }
    return out;
}

fs::path resolve_output_root(const std::string& explicit_root) {
    if (!explicit_root.empty()) return explicit_root;
    if (const char* env = std::getenv("CAPDDP_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
    return "runs";
}

fs::path fresh_run_directory(const fs::path& root, std::uint64_t seed) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
    const std::string base = std::string("run-") + stamp + "-seed" + std::to_string(seed);

    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + root.string() + ": " + ec.message());
    for (int n = 0; n < 10000; ++n) {
        const fs::path dir = root / (n == 0 ? base : base + "-" + std::to_string(n));
        if (fs::create_directory(dir, ec)) return dir;
        if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    }
    throw Error(ErrorCode::Io, "could not find a fresh run directory under " + root.string());
}

std::string summary_json(const RunArtifacts& art, const RunConfigFile& cfg) {
    const std::size_t m = art.data.m();
    ordered_json s;
    s["seed"] = art.config.seed;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash));
    s["config_hash"] = hash;
    s["build_id"] = build_id();
    s["variant"] = to_string(art.config.variant);
    s["config"] = json::parse(cfg.canonical);

    std::vector<std::size_t> sizes;
    for (const auto& g : art.data.groups) sizes.push_back(g.size());
    s["data"] = {{"generator", to_string(art.spec.generator)}, {"sizes", sizes}};
    s["sweeps"] = art.spec.sweeps;
    s["burn_in"] = art.spec.burn_in;
    s["thin"] = art.spec.thin;
    s["records"] = art.record_sweeps.size();

    if (art.config.variant == Variant::CommonAtoms && art.distances.size() > 0) {
        ordered_json l2, tv;
        std::size_t p = 0;
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a + 1; b < m; ++b, ++p) {
                l2[pair_label(a, b)] = art.distances.l2_mean.back()[p];
                tv[pair_label(a, b)] = art.distances.tv_mean.back()[p];
            }
        }
        s["distances"] = {{"l2_running_mean", l2}, {"tv_running_mean", tv}};
    }

    s["clusters"] = {{"mean", art.mean_clusters()}, {"mean_per_group", art.mean_group_clusters()}};
    const auto sel = art.mean_selection();
    std::vector<std::vector<double>> sel_rows(m);
    for (std::size_t j = 0; j < m; ++j) {
        sel_rows[j].assign(sel.begin() + static_cast<std::ptrdiff_t>(j * m),
                           sel.begin() + static_cast<std::ptrdiff_t>((j + 1) * m));
    }
    s["selection_mean"] = sel_rows;
    s["predictive_mean"] = art.mean_predictive();

    double n_star_mean = 0.0;
    for (std::size_t n : art.n_star) n_star_mean += static_cast<double>(n);
    s["mean_n_star"] = n_star_mean / static_cast<double>(std::max<std::size_t>(1, art.n_star.size()));

    double total = 0.0;
    for (double t : art.sweep_seconds) total += t;
    s["timing"] = {{"total_sweep_seconds", total},
                   {"mean_sweep_seconds", total / static_cast<double>(std::max<std::size_t>(1, art.sweep_seconds.size()))},
                   {"median_sweep_seconds", art.sweep_seconds.empty() ? 0.0 : median(art.sweep_seconds)}};
    return s.dump(2) + "\n";
}

void write_run_artifacts(const RunArtifacts& art, const RunConfigFile& cfg, const fs::path& dir) {
    const std::size_t m = art.data.m();
    if (art.config.variant == Variant::CommonAtoms) {
        auto l2 = open_out(dir / "trace_distances.csv");
        auto tv = open_out(dir / "trace_tv.csv");
        l2 << "sweep,pair,value,running_mean\n";
        tv << "sweep,pair,value,running_mean\n";
        const auto& d = art.distances;
        for (std::size_t r = 0; r < d.size(); ++r) {
            std::size_t p = 0;
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t b = a + 1; b < m; ++b, ++p) {
                    l2 << d.sweeps[r] << ',' << pair_label(a, b) << ',' << format_double(d.l2[r][p]) << ','
                       << format_double(d.l2_mean[r][p]) << '\n';
                    tv << d.sweeps[r] << ',' << pair_label(a, b) << ',' << format_double(d.tv[r][p]) << ','
                       << format_double(d.tv_mean[r][p]) << '\n';
                }
            }
        }
    }
    {
        auto out = open_out(dir / "trace_predictive.csv");
        out << "sweep,group,value\n";
        for (std::size_t r = 0; r < art.predictive.size(); ++r) {
            for (std::size_t j = 0; j < m; ++j) {
                out << art.record_sweeps[r] << ',' << j + 1 << ',' << format_double(art.predictive[r][j]) << '\n';
            }
        }
    }
    {
        auto out = open_out(dir / "trace_clusters.csv");
        out << "sweep,clusters,running_mean";
        for (std::size_t j = 0; j < m; ++j) out << ",group_" << j + 1;
        out << '\n';
        double sum = 0.0;
        for (std::size_t r = 0; r < art.clusters.size(); ++r) {
            sum += static_cast<double>(art.clusters[r]);
            out << art.record_sweeps[r] << ',' << art.clusters[r] << ','
                << format_double(sum / static_cast<double>(r + 1));
            for (std::size_t j = 0; j < m; ++j) out << ',' << art.group_clusters[r][j];
            out << '\n';
        }
    }
    {
        auto out = open_out(dir / "trace_selection.csv");
        out << "sweep,row,column,value\n";
        for (std::size_t r = 0; r < art.selection.size(); ++r) {
            for (std::size_t j = 0; j < m; ++j) {
                for (std::size_t l = 0; l < m; ++l) {
                    out << art.record_sweeps[r] << ',' << j + 1 << ',' << l + 1 << ','
                        << format_double(art.selection[r][j * m + l]) << '\n';
                }
            }
        }
    }
    auto out = open_out(dir / "summary.json");
    out << summary_json(art, cfg);
}

std::string benchmark_json(const BenchmarkReport& r, const RunConfigFile& cfg) {
    auto variant_json = [](const VariantTiming& t) {
        return ordered_json{{"variant", to_string(t.variant)},
                            {"median_sweep_seconds", t.median_seconds},
                            {"mean_sweep_seconds", t.mean_seconds},
                            {"mean_n_star", t.mean_n_star},
                            {"n_star_trace", t.n_star},
                            {"sweep_seconds", t.sweep_seconds}};
    };
    ordered_json j;
    j["seed"] = cfg.model.seed;
    j["build_id"] = build_id();
    j["m"] = r.m;
    j["total_observations"] = r.total_observations;
    j["sweeps"] = r.sweeps;
    j["warmup"] = r.warmup;
    j["predicted_multiplier"] = r.predicted_multiplier;
    j["median_difference_seconds"] = r.median_difference;
    j["mean_difference_seconds"] = r.mean_difference;
    j["capddp"] = variant_json(r.common);
    j["pddp"] = variant_json(r.uncommon);
    return j.dump(2) + "\n";
}

std::string diagnostics_json(const BatchDiagnostics& d, const std::string& reference) {
    std::vector<double> p, stat;
    for (const auto& b : d.batches) {
        p.push_back(b.p_value);
        stat.push_back(b.statistic);
    }
    ordered_json j;
    j["reference"] = reference;
    j["batch_size"] = d.batch_size;
    j["batches"] = d.batches.size();
    j["alpha"] = d.alpha;
    j["rejections"] = d.rejections;
    j["rejection_rate"] = d.rejection_rate;
    j["p_values"] = p;
    j["statistics"] = stat;
    return j.dump(2) + "\n";
}

}  // namespace capddp
