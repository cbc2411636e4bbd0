#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veriblock/contracts.hpp"
#include "veriblock/evidence.hpp"

namespace veriblock {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One flat key-value file (`section.key = value`) carrying every tunable
/// default. Unknown keys are rejected; any key can be overridden through the
/// VERIBLOCK_SECTION_KEY environment variables.
struct Config {
    // ledger
    SimTime block_interval_s = 12;
    std::uint64_t block_capacity = 200;
    // verification
    VerificationParams verification;
    // trust
    double threshold = 0.5;
    double w_filtered = 0.7;
    double w_unfiltered = 0.3;
    std::vector<std::string> algorithms = {"simple", "filtered-average", "weighted"};
    // dedup
    DedupParams dedup;
    // experiment
    std::vector<double> p_good = {0.5, 0.6, 0.7, 0.8};
    std::uint64_t total = 1000;
    std::uint64_t step = 10;
    std::vector<std::uint64_t> seeds = {42};
    double p_pass_filter = 0.7;

    /// Parses file content. Throws ConfigError naming the offending key.
    static Config parse(const std::string& text);
    static Config load(const std::string& path);  // file + environment overrides
    void apply_key(const std::string& key, const std::string& value);
    void apply_env_overrides();
    void validate() const;
};

}  // namespace veriblock
