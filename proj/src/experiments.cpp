#include "capddp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "capddp/error.hpp"

namespace capddp {

std::string to_string(Generator g) {
    switch (g) {
        case Generator::Example1: return "example1";
        case Generator::Example2Large: return "example2-large";
        case Generator::Example2Small: return "example2-small";
        case Generator::RealFile: return "real-file";
    }
    return "unknown";
}

Generator generator_from_string(const std::string& name) {
    if (name == "example1") return Generator::Example1;
    if (name == "example2-large") return Generator::Example2Large;
    if (name == "example2-small") return Generator::Example2Small;
    if (name == "real-file") return Generator::RealFile;
    throw Error(ErrorCode::Config, "unknown generator '" + name +
                                       "' (expected example1, example2-large, example2-small or real-file)");
}

std::vector<std::size_t> default_sizes(Generator g) {
    switch (g) {
        case Generator::Example1: return {80, 30, 80};
        case Generator::Example2Large: return {300, 300, 300};
        case Generator::Example2Small: return {120, 60, 120};
        case Generator::RealFile: return {};
    }
    return {};
}

namespace {

void require_three(std::span<const std::size_t> sizes) {
    if (sizes.size() != 3) throw Error(ErrorCode::InvalidArgument, "generator needs exactly 3 group sizes");
    for (std::size_t n : sizes) {
        if (n == 0) throw Error(ErrorCode::InvalidArgument, "group sizes must be at least 1");
    }
}

double gamma_shape2_density(double y) { return y > 0.0 ? y * std::exp(-y) : 0.0; }

double normal_density(double x, double mean, double variance) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

}  // namespace

Dataset generate_example1(std::span<const std::size_t> sizes, Rng& rng) {
    require_three(sizes);
    Dataset out;
    out.groups.resize(3);
    for (std::size_t i = 0; i < sizes[0]; ++i) out.groups[0].push_back(2.0 - sample_gamma(rng, 2.0, 1.0));
    for (std::size_t i = 0; i < sizes[1]; ++i) out.groups[1].push_back(sample_normal(rng, 0.0, std::sqrt(2.0)));
    for (std::size_t i = 0; i < sizes[2]; ++i) out.groups[2].push_back(sample_gamma(rng, 2.0, 1.0) - 2.0);
    return out;
}

double example1_density(std::size_t group, double x) {
    switch (group) {
        case 0: return gamma_shape2_density(2.0 - x);
        case 1: return normal_density(x, 0.0, 2.0);
        case 2: return gamma_shape2_density(x + 2.0);
        default: throw Error(ErrorCode::InvalidArgument, "example 1 has groups 0..2");
    }
}

Dataset generate_example2(std::span<const std::size_t> sizes, Rng& rng) {
    require_three(sizes);
    Dataset out;
    out.groups.resize(3);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < sizes[j]; ++i) {
            const std::size_t comp = std::min<std::size_t>(2, static_cast<std::size_t>(sample_uniform(rng) * 3.0));
            out.groups[j].push_back(sample_normal(rng, kExample2Means[j][comp], 1.0));
        }
    }
    return out;
}

double example2_density(std::size_t group, double x) {
    if (group > 2) throw Error(ErrorCode::InvalidArgument, "example 2 has groups 0..2");
    double f = 0.0;
    for (double mu : kExample2Means[group]) f += normal_density(x, mu, 1.0);
    return f / 3.0;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    if (delimiter == ' ') {
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) out.push_back(tok);
        return out;
    }
    std::string cur;
    for (char ch : line) {
        if (ch == delimiter) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        const auto b = f.find_first_not_of(" \t\"");
        const auto e = f.find_last_not_of(" \t\"");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return out;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars for double is available in libstdc++ 11.
        const auto r = std::from_chars(text.data(), text.data() + text.size(), out);
        return r.ec == std::errc() && r.ptr == text.data() + text.size() && std::isfinite(out);
    } else {
        const auto r = std::from_chars(text.data(), text.data() + text.size(), out);
        return r.ec == std::errc() && r.ptr == text.data() + text.size();
    }
}

}  // namespace

Dataset ingest_real(const std::filesystem::path& file, const RealDataOptions& opt) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::Io, "cannot open data file " + file.string());

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        header = split_fields(line, opt.delimiter);
        break;
    }
    if (header.empty()) throw Error(ErrorCode::Io, "data file " + file.string() + " has no header row");

    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorCode::Io, "data file is missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_id = column(opt.id_column);
    const std::size_t c_time = column(opt.time_column);
    const std::size_t c_status = column(opt.status_column);
    const std::size_t c_value = column(opt.value_column);
    const std::size_t needed = std::max({c_id, c_time, c_status, c_value}) + 1;

    struct Visit {
        double time;
        long status;
        double value;
    };
    std::map<long, Visit> latest;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_fields(line, opt.delimiter);
        auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::Io, file.string() + ":" + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() < needed) fail("expected at least " + std::to_string(needed) + " fields");
        long id = 0, status = 0;
        double time = 0.0, value = 0.0;
        if (!parse_number(fields[c_id], id)) fail("unparsable id '" + fields[c_id] + "'");
        if (!parse_number(fields[c_time], time)) fail("unparsable time '" + fields[c_time] + "'");
        if (!parse_number(fields[c_status], status)) fail("unparsable status '" + fields[c_status] + "'");
        if (!parse_number(fields[c_value], value)) fail("unparsable value '" + fields[c_value] + "'");
        auto it = latest.find(id);
        if (it == latest.end() || time >= it->second.time) latest[id] = {time, status, value};
    }

    Dataset out;
    out.groups.resize(3);
    for (const auto& [id, v] : latest) {
        for (std::size_t g = 0; g < 3; ++g) {
            if (v.status == opt.status_codes[g]) {
                out.groups[g].push_back(v.value);
                break;
            }
        }
    }
    for (std::size_t g = 0; g < 3; ++g) {
        auto& xs = out.groups[g];
        if (xs.empty()) throw Error(ErrorCode::Io, "status group " + std::to_string(g + 1) + " is empty");
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        for (double& x : xs) x -= mean;
    }
    return out;
}

double predictive_sample(const GibbsState& st, std::size_t j, Rng& rng) {
    const std::size_t l = sample_categorical(rng, st.probs.row(j));
    const StickSequence& seq = st.sticks.at(j, l);
    const auto w = seq.weights();
    const double v = sample_uniform(rng);

    auto draw_from = [&rng](const Atom& a) { return sample_normal(rng, a.mu, 1.0 / std::sqrt(a.lambda)); };

    double cum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        cum += w[k];
        if (v < cum) return draw_from(st.atom(j, l, k));
    }
    // v fell in the unrealized tail: continue the stick sequence from the
    // prior without touching the chain state.
    double tail = seq.tail_mass();
    const PriorP0 prior = st.config.prior();
    for (std::size_t extra = 0;; ++extra) {
        const double z = sample_beta(rng, 1.0, st.config.c);
        cum += tail * z;
        tail *= 1.0 - z;
        if (v < cum || tail < 1e-300 || extra >= kMaxSticks) {
            return draw_from(sample_prior_atom(prior, rng));
        }
    }
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.thin == 0) throw Error(ErrorCode::Config, "thin must be at least 1");
    if (spec.burn_in >= spec.sweeps) throw Error(ErrorCode::Config, "burn_in must be smaller than sweeps");
    if (recorded_count(spec) == 0) throw Error(ErrorCode::Config, "no sweeps would be recorded after burn-in");
    if (spec.generator == Generator::RealFile && spec.data_file.empty()) {
        throw Error(ErrorCode::Config, "generator real-file needs data_file");
    }
}

std::size_t recorded_count(const ExperimentSpec& spec) {
    if (spec.sweeps <= spec.burn_in || spec.thin == 0) return 0;
    return (spec.sweeps - spec.burn_in) / spec.thin;
}

Dataset make_dataset(const ExperimentSpec& spec, Rng& rng) {
    std::vector<std::size_t> sizes = spec.sizes.empty() ? default_sizes(spec.generator) : spec.sizes;
    switch (spec.generator) {
        case Generator::Example1: return generate_example1(sizes, rng);
        case Generator::Example2Large:
        case Generator::Example2Small: return generate_example2(sizes, rng);
        case Generator::RealFile: return ingest_real(spec.data_file, spec.real);
    }
    throw Error(ErrorCode::Config, "unknown generator");
}

RunArtifacts run_experiment(const ValidatedConfig& cfg, const ExperimentSpec& spec) {
    validate_spec(spec);
    Rng rng(cfg->seed);
    RunArtifacts art;
    art.config = cfg.get();
    art.spec = spec;
    art.data = make_dataset(spec, rng);
    GibbsState state = init_state(cfg, art.data, rng);

    const std::size_t m = state.m();
    const std::size_t records = recorded_count(spec);
    art.record_sweeps.reserve(records);
    art.predictive.reserve(records);
    art.sweep_seconds.reserve(spec.sweeps);

    for (std::size_t t = 1; t <= spec.sweeps; ++t) {
        const SweepReport rep = sweep(state, rng);
        art.sweep_seconds.push_back(rep.wall_seconds);
        art.n_star.push_back(rep.n_star);
        art.max_occupied.push_back(rep.max_occupied);
        if (t <= spec.burn_in || (t - spec.burn_in) % spec.thin != 0) continue;

        art.record_sweeps.push_back(state.sweep);
        std::vector<double> pred(m);
        std::vector<std::size_t> gc(m);
        for (std::size_t j = 0; j < m; ++j) {
            pred[j] = predictive_sample(state, j, rng);
            gc[j] = cluster_count_group(state, j);
        }
        art.predictive.push_back(std::move(pred));
        art.group_clusters.push_back(std::move(gc));
        art.clusters.push_back(rep.clusters);
        std::vector<double> sel;
        sel.reserve(m * m);
        for (std::size_t j = 0; j < m; ++j) {
            const auto row = state.probs.row(j);
            sel.insert(sel.end(), row.begin(), row.end());
        }
        art.selection.push_back(std::move(sel));
        if (state.common_atoms()) art.distances.record(state);
    }
    return art;
}

double RunArtifacts::mean_clusters() const {
    if (clusters.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t c : clusters) s += static_cast<double>(c);
    return s / static_cast<double>(clusters.size());
}

std::vector<double> RunArtifacts::mean_group_clusters() const {
    std::vector<double> out(data.m(), 0.0);
    for (const auto& row : group_clusters) {
        for (std::size_t j = 0; j < row.size(); ++j) out[j] += static_cast<double>(row[j]);
    }
    for (double& v : out) v /= std::max<double>(1.0, static_cast<double>(group_clusters.size()));
    return out;
}

std::vector<double> RunArtifacts::mean_selection() const {
    const std::size_t m = data.m();
    std::vector<double> out(m * m, 0.0);
    for (const auto& row : selection) {
        for (std::size_t q = 0; q < row.size(); ++q) out[q] += row[q];
    }
    for (double& v : out) v /= std::max<double>(1.0, static_cast<double>(selection.size()));
    return out;
}

std::vector<double> RunArtifacts::mean_predictive() const {
    std::vector<double> out(data.m(), 0.0);
    for (const auto& row : predictive) {
        for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
    }
    for (double& v : out) v /= std::max<double>(1.0, static_cast<double>(predictive.size()));
    return out;
}

std::vector<double> RunArtifacts::predictive_series(std::size_t group) const {
    std::vector<double> out;
    out.reserve(predictive.size());
    for (const auto& row : predictive) out.push_back(row.at(group));
    return out;
}

}  // namespace capddp
