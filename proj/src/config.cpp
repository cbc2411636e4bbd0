#include "veriblock/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace veriblock {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a non-negative integer: '" + v + "'");
    }
}

}  // namespace

void Config::apply_key(const std::string& key, const std::string& value) {
    if (key == "ledger.block_interval_s") {
        block_interval_s = static_cast<SimTime>(to_u64(key, value));
    } else if (key == "ledger.block_capacity") {
        block_capacity = to_u64(key, value);
    } else if (key == "verification.radius_m") {
        verification.radius_m = to_double(key, value);
    } else if (key == "verification.time_window_s") {
        verification.time_window_s = to_double(key, value);
    } else if (key == "verification.heading_tol_deg") {
        verification.heading_tol_deg = to_double(key, value);
    } else if (key == "trust.threshold") {
        threshold = to_double(key, value);
    } else if (key == "trust.w_filtered") {
        w_filtered = to_double(key, value);
    } else if (key == "trust.w_unfiltered") {
        w_unfiltered = to_double(key, value);
    } else if (key == "trust.algorithms") {
        algorithms = split(value, ',');
    } else if (key == "dedup.radius_m") {
        dedup.radius_m = to_double(key, value);
    } else if (key == "dedup.time_window_s") {
        dedup.time_window_s = to_double(key, value);
    } else if (key == "experiment.p_good") {
        p_good.clear();
        for (const auto& item : split(value, ',')) p_good.push_back(to_double(key, item));
    } else if (key == "experiment.total") {
        total = to_u64(key, value);
    } else if (key == "experiment.step") {
        step = to_u64(key, value);
    } else if (key == "experiment.seeds") {
        seeds.clear();
        for (const auto& item : split(value, ',')) seeds.push_back(to_u64(key, item));
    } else if (key == "experiment.p_pass_filter") {
        p_pass_filter = to_double(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        cfg.apply_key(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

void Config::apply_env_overrides() {
    // VERIBLOCK_TRUST_THRESHOLD=0.6 overrides trust.threshold, etc.
    static const char* keys[] = {
        "ledger.block_interval_s", "ledger.block_capacity",
        "verification.radius_m",   "verification.time_window_s",
        "verification.heading_tol_deg",
        "trust.threshold",         "trust.w_filtered",
        "trust.w_unfiltered",      "trust.algorithms",
        "dedup.radius_m",          "dedup.time_window_s",
        "experiment.p_good",       "experiment.total",
        "experiment.step",         "experiment.seeds",
        "experiment.p_pass_filter",
    };
    for (const char* key : keys) {
        std::string env = "VERIBLOCK_";
        for (char c : std::string(key))
            env.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(c)));
        if (const char* v = std::getenv(env.c_str())) apply_key(key, v);
    }
    validate();
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Config cfg = parse(buf.str());
    cfg.apply_env_overrides();
    return cfg;
}

void Config::validate() const {
    if (block_interval_s <= 0) throw ConfigError("ledger.block_interval_s must be positive");
    if (block_capacity == 0) throw ConfigError("ledger.block_capacity must be positive");
    if (!verification.valid())
        throw ConfigError("verification parameters out of range (radius/window > 0, tol in (0,180])");
    if (threshold < 0.0 || threshold > 1.0) throw ConfigError("trust.threshold must be in [0,1]");
    if (w_filtered < 0.0 || w_unfiltered < 0.0 || std::fabs(w_filtered + w_unfiltered - 1.0) > 1e-12)
        throw ConfigError("trust weights must be non-negative and sum to 1");
    for (const auto& alg : algorithms)
        if (alg != "simple" && alg != "filtered-average" && alg != "weighted")
            throw ConfigError("unknown algorithm id '" + alg + "'");
    if (dedup.radius_m <= 0.0 || dedup.time_window_s <= 0.0)
        throw ConfigError("dedup parameters must be positive");
    for (double p : p_good)
        if (p < 0.0 || p > 1.0) throw ConfigError("experiment.p_good values must be in [0,1]");
    if (total == 0 || step == 0 || total % step != 0)
        throw ConfigError("experiment.step must divide experiment.total");
    if (p_pass_filter < 0.0 || p_pass_filter > 1.0)
        throw ConfigError("experiment.p_pass_filter must be in [0,1]");
}

}  // namespace veriblock
