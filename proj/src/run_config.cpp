#include "capddp/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "capddp/error.hpp"

namespace capddp {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "m", "c", "s", "eps", "dirichlet_hyper", "seed", "variant", "generator", "sizes",
        "data_file", "data_delimiter", "real_id_column", "real_time_column", "real_status_column",
        "real_value_column", "real_status_codes", "sweeps", "burn_in", "thin", "output_dir",
        "benchmark_sweeps", "benchmark_warmup"};
    return keys;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void field_error(const std::string& origin, const std::string& key, const std::string& why) {
    throw Error(ErrorCode::Config, origin + ": field '" + key + "': " + why);
}

template <typename T>
T get_field(const json& doc, const std::string& origin, const std::string& key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        field_error(origin, key, e.what());
    }
}

std::size_t get_count(const json& doc, const std::string& origin, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) field_error(origin, key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

double get_real(const json& doc, const std::string& origin, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number()) field_error(origin, key, "expected a number");
    return v.get<double>();
}

}  // namespace

RunConfigFile parse_run_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorCode::Config, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                           ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::Config, origin + ": top level must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys().count(key)) field_error(origin, key, "unknown key");
    }

    RunConfigFile out;
    ModelConfig& mc = out.model;
    ExperimentSpec& ex = out.experiment;

    if (doc.contains("m")) mc.m = get_count(doc, origin, "m");
    if (doc.contains("c")) mc.c = get_real(doc, origin, "c");
    if (doc.contains("s")) mc.s = get_real(doc, origin, "s");
    if (doc.contains("eps")) mc.eps = get_real(doc, origin, "eps");
    if (doc.contains("seed")) {
        const json& v = doc.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            field_error(origin, "seed", "expected an unsigned integer");
        }
        mc.seed = v.get<std::uint64_t>();
    }
    if (doc.contains("variant")) mc.variant = variant_from_string(get_field<std::string>(doc, origin, "variant"));
    if (doc.contains("dirichlet_hyper")) {
        const auto rows = get_field<std::vector<std::vector<double>>>(doc, origin, "dirichlet_hyper");
        if (rows.size() != mc.m) field_error(origin, "dirichlet_hyper", "expected " + std::to_string(mc.m) + " rows");
        mc.dirichlet_hyper.clear();
        for (const auto& r : rows) {
            if (r.size() != mc.m) field_error(origin, "dirichlet_hyper", "every row needs " + std::to_string(mc.m) + " entries");
            mc.dirichlet_hyper.insert(mc.dirichlet_hyper.end(), r.begin(), r.end());
        }
    }

    if (doc.contains("generator")) ex.generator = generator_from_string(get_field<std::string>(doc, origin, "generator"));
    if (doc.contains("sizes")) ex.sizes = get_field<std::vector<std::size_t>>(doc, origin, "sizes");
    if (doc.contains("data_file")) ex.data_file = get_field<std::string>(doc, origin, "data_file");
    if (doc.contains("data_delimiter")) {
        const auto d = get_field<std::string>(doc, origin, "data_delimiter");
        if (d.size() != 1) field_error(origin, "data_delimiter", "expected a single character");
        ex.real.delimiter = d[0];
    }
    if (doc.contains("real_id_column")) ex.real.id_column = get_field<std::string>(doc, origin, "real_id_column");
    if (doc.contains("real_time_column")) ex.real.time_column = get_field<std::string>(doc, origin, "real_time_column");
    if (doc.contains("real_status_column")) ex.real.status_column = get_field<std::string>(doc, origin, "real_status_column");
    if (doc.contains("real_value_column")) ex.real.value_column = get_field<std::string>(doc, origin, "real_value_column");
    if (doc.contains("real_status_codes")) {
        const auto codes = get_field<std::vector<long>>(doc, origin, "real_status_codes");
        if (codes.size() != 3) field_error(origin, "real_status_codes", "expected 3 codes");
        std::copy(codes.begin(), codes.end(), ex.real.status_codes.begin());
    }
    if (doc.contains("sweeps")) ex.sweeps = get_count(doc, origin, "sweeps");
    if (doc.contains("burn_in")) ex.burn_in = get_count(doc, origin, "burn_in");
    if (doc.contains("thin")) ex.thin = get_count(doc, origin, "thin");
    if (doc.contains("output_dir")) out.output_dir = get_field<std::string>(doc, origin, "output_dir");
    if (doc.contains("benchmark_sweeps")) out.benchmark_sweeps = get_count(doc, origin, "benchmark_sweeps");
    if (doc.contains("benchmark_warmup")) out.benchmark_warmup = get_count(doc, origin, "benchmark_warmup");

    if (ex.generator != Generator::RealFile) {
        const std::size_t groups = ex.sizes.empty() ? default_sizes(ex.generator).size() : ex.sizes.size();
        if (groups != mc.m) field_error(origin, "sizes", "generator produces " + std::to_string(groups) +
                                                            " groups but m = " + std::to_string(mc.m));
    } else if (mc.m != 3) {
        field_error(origin, "m", "real-file data has 3 status groups");
    }
    try {
        validate_config(mc);
        validate_spec(ex);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, origin + ": " + e.what());
    }

    out.canonical = doc.dump();
    out.hash = fnv1a64(out.canonical);
    return out;
}

RunConfigFile load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.string());
}

}  // namespace capddp
