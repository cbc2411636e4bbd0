#pragma once

#include <map>
#include <string>
#include <vector>

#include "veriblock/domain.hpp"
#include "veriblock/evidence.hpp"
#include "veriblock/ledger.hpp"
#include "veriblock/types.hpp"

namespace veriblock {

struct ScoreResult {
    double score = 0.0;  // in [0, 1]
    bool trusted = false;
    std::uint64_t total = 0;     // reviews considered
    std::uint64_t verified = 0;  // reviews passing the filter
    std::string algorithm_id;
};

inline constexpr const char* kAlgSimple = "simple";
inline constexpr const char* kAlgFilteredAverage = "filtered-average";
inline constexpr const char* kAlgWeighted = "weighted";

/// Algorithm 1: positive fraction over every review, no filtering.
ScoreResult score_simple(const std::vector<Review>& reviews, double threshold);

/// Algorithm 2: mean of the unfiltered and filtered positive fractions. An
/// empty filtered set falls back to the unfiltered fraction.
ScoreResult score_filtered_average(const Incident& incident, const std::vector<Review>& reviews,
                                   const VerificationParams& params, double threshold);

/// Algorithm 3: w_filtered * f + w_unfiltered * u; weights must sum to 1.
ScoreResult score_weighted(const Incident& incident, const std::vector<Review>& reviews,
                           const VerificationParams& params, double w_filtered,
                           double w_unfiltered, double threshold);

/// Per-provider growing copy of the universal evidence set, rebuilt purely
/// from the ledger's event list.
class EvidenceDB {
public:
    void ingest_events(const std::vector<LedgerEvent>& events);

    EventSeq cursor() const { return cursor_; }
    const std::map<IncidentId, Incident>& incidents() const { return incidents_; }
    const std::vector<Review>& reviews_for(IncidentId id) const;
    std::uint64_t review_count() const;

    std::string export_csv() const;

    bool operator==(const EvidenceDB&) const = default;

private:
    EventSeq cursor_ = 0;
    std::map<IncidentId, Incident> incidents_;
    std::map<IncidentId, std::vector<Review>> reviews_;
};

struct TrustAlgorithm {
    std::string id = kAlgSimple;
    double w_filtered = 0.7;
    double w_unfiltered = 0.3;  // weighted variant only
};

/// One independent trust provider: owns an EvidenceDB and a chosen algorithm,
/// answers open requests with a deliverable record.
class TrustProvider {
public:
    TrustProvider(AccountId account, TrustAlgorithm algorithm, VerificationParams params,
                  double threshold)
        : account_(std::move(account)),
          algorithm_(std::move(algorithm)),
          params_(params),
          threshold_(threshold) {}

    const AccountId& account() const { return account_; }
    EvidenceDB& db() { return db_; }
    const EvidenceDB& db() const { return db_; }

    void ingest(const std::vector<LedgerEvent>& events) { db_.ingest_events(events); }

    TrustScoreRecord serve_request(const TrustRequest& request, SimTime sim_time) const;

    /// Scores an arbitrary scope against the current DB (request-independent).
    ScoreResult score_scope(const TrustScope& scope) const;

private:
    AccountId account_;
    TrustAlgorithm algorithm_;
    VerificationParams params_;
    double threshold_;
    EvidenceDB db_;
};

}  // namespace veriblock
