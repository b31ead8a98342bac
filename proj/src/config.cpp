#include "zap/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "zap/errors.hpp"

namespace zap {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError("key '" + std::string(key) + "': cannot parse '" + std::string(v) + "'");
    return out;
}

double parse_real(std::string_view key, std::string_view v) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    return parse_number<double>(key, v);
}

std::vector<Algorithm> parse_algorithms(std::string_view v) {
    std::vector<Algorithm> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (!item.empty()) out.push_back(Algorithm::parse(item));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ConfigError("key 'algorithms': empty list");
    return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view key, std::string_view)>;

template <typename T>
Setter count(T ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, std::string_view k, std::string_view v) {
        c.*field = parse_number<T>(k, v);
    };
}

Setter real(double ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, std::string_view k, std::string_view v) {
        c.*field = parse_real(k, v);
    };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"L", count(&ExperimentConfig::L)},
        {"n_samples", count(&ExperimentConfig::n_samples)},
        {"snr_db", real(&ExperimentConfig::snr_db)},
        {"mu", real(&ExperimentConfig::mu)},
        {"algorithms",
         [](ExperimentConfig& c, std::string_view, std::string_view v) { c.algorithms = parse_algorithms(v); }},
        {"active_taps", count(&ExperimentConfig::active_taps)},
        {"scenario",
         [](ExperimentConfig& c, std::string_view, std::string_view v) { c.scenario = parse_scenario(v); }},
        {"switch_at", count(&ExperimentConfig::switch_at)},
        {"beta", real(&ExperimentConfig::beta)},
        {"sigma", real(&ExperimentConfig::sigma)},
        {"kappa0_l1", real(&ExperimentConfig::kappa0_l1)},
        {"kappa0_l0", real(&ExperimentConfig::kappa0_l0)},
        {"you_kappa0_l1", real(&ExperimentConfig::you_kappa0_l1)},
        {"you_kappa0_l0", real(&ExperimentConfig::you_kappa0_l0)},
        {"eta", real(&ExperimentConfig::eta)},
        {"kappa_min_l1", real(&ExperimentConfig::kappa_min_l1)},
        {"kappa_min_l0", real(&ExperimentConfig::kappa_min_l0)},
        {"conv_short", count(&ExperimentConfig::conv_short)},
        {"conv_long", count(&ExperimentConfig::conv_long)},
        {"conv_ratio", real(&ExperimentConfig::conv_ratio)},
        {"lambda", real(&ExperimentConfig::lambda)},
        {"alpha", real(&ExperimentConfig::alpha)},
        {"vss_kappa0", real(&ExperimentConfig::vss_kappa0)},
        {"gamma_vss1_l1", real(&ExperimentConfig::gamma_vss1_l1)},
        {"gamma_vss1_l0", real(&ExperimentConfig::gamma_vss1_l0)},
        {"gamma_vss2_l1", real(&ExperimentConfig::gamma_vss2_l1)},
        {"gamma_vss2_l0", real(&ExperimentConfig::gamma_vss2_l0)},
        {"runs", count(&ExperimentConfig::runs)},
        {"seed", count(&ExperimentConfig::seed)},
        {"threads", count(&ExperimentConfig::threads)},
        {"misalign_convention",
         [](ExperimentConfig& c, std::string_view, std::string_view v) {
             c.misalign_convention = parse_convention(v);
         }},
        {"out_dir",
         [](ExperimentConfig& c, std::string_view, std::string_view v) { c.out_dir = std::string(v); }},
    };
    return table;
}

}  // namespace

void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
    for (const auto& [name, setter] : setters()) {
        if (name == key) {
            setter(config, key, value);
            return;
        }
    }
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(where + "empty key or value");
        if (!seen.insert(std::string(key)).second)
            throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
        try {
            set_config_value(base, key, value);
        } catch (const Error& e) {
            throw ConfigError(where + e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace zap
