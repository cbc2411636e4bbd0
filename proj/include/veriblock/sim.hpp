#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "veriblock/contracts.hpp"
#include "veriblock/evidence.hpp"
#include "veriblock/node.hpp"
#include "veriblock/trust.hpp"

namespace veriblock {

enum class ScenarioKind { AllSupporting, AllOpposing, RandomSplit };

const char* scenario_kind_name(ScenarioKind k);
ScenarioKind parse_scenario_kind(const std::string& name);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::AllSupporting;
    std::uint64_t n_transactions = 11;  // 1 incident + n-1 reviews
    std::uint64_t seed = 42;
    Position incident_location{0.0, 0.0};
    double incident_heading = 90.0;
    Classification classification = "Accident";
    double p_pass_filter = 0.7;
    VerificationParams params;
    double mean_interarrival_s = 1.0;
};

struct TimedCall {
    AccountId sender;
    ContractCall call;
    SimTime sim_time = 0;
};

/// Deterministic seeded call sequence: one incident submission followed by
/// n-1 reviews whose verdicts follow the scenario kind and whose geometry
/// lands inside the filter with probability p_pass_filter.
std::vector<TimedCall> generate_scenario(const ScenarioSpec& spec);

struct ExperimentRow {
    std::uint64_t n_evidence = 0;
    double score_alg1 = 0.0;
    double score_alg2 = 0.0;
    double score_alg3 = 0.0;
};

struct ExperimentSeries {
    double p_good = 0.0;
    std::uint64_t seed = 0;
    std::vector<ExperimentRow> rows;

    std::string to_csv() const;  // header n,alg1,alg2,alg3
};

struct ExperimentConfig {
    /// Observer invoked for every generated review before it enters the
    /// pipeline; lets a harness tally verdicts independently of the scoring
    /// path.
    std::function<void(const struct SubmitReviewCall&)> on_review;
    std::uint64_t total = 1000;
    std::uint64_t step = 10;
    std::uint64_t seed = 42;
    double p_pass_filter = 0.7;
    VerificationParams params;
    double threshold = 0.5;
    double w_filtered = 0.7;
    double w_unfiltered = 0.3;
    SimTime block_interval_s = 12;
};

/// The incremental-evidence experiment: rounds of `step` reviews, each
/// positive with probability p_good, rescoring the cumulative evidence set
/// after every round. Runs through the full ledger/contracts/trust pipeline.
ExperimentSeries run_incremental_experiment(double p_good, const ExperimentConfig& cfg);

/// Wrapper over run_incremental_experiment drawing p_good uniformly at random.
ExperimentSeries run_random_percentage_experiment(const ExperimentConfig& cfg);

/// Deterministic uniform double in [0, 1); portable across libstdc++ versions.
double uniform01(std::mt19937_64& rng);

}  // namespace veriblock
