#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "veriblock/bytes.hpp"
#include "veriblock/domain.hpp"
#include "veriblock/ledger.hpp"
#include "veriblock/types.hpp"

namespace veriblock {

/// Spatio-temporal dedup buffer: a repeated same-classification submission
/// inside (radius, window) of an open incident becomes a positive review of it.
struct DedupParams {
    double radius_m = 200.0;
    double time_window_s = 900.0;
};

struct ContractParams {
    DedupParams dedup;
    SimTime refund_timeout_s = 3600;
};

// --- contract call payloads (canonical binary, JSON mirror for debugging) ---

struct SubmitIncidentCall {
    Position location;
    double heading = 0.0;
    Classification classification;
};

struct SubmitReviewCall {
    IncidentId incident_id = 0;
    Verdict verdict = Verdict::Positive;
    Position location;
    double heading = 0.0;
};

struct RequestTrustScoreCall {
    TrustScope scope;
    Credits payment = 0;
};

struct DeliverTrustScoreCall {
    RequestId request_id = 0;
    std::string algorithm_id;
    double score = 0.0;
    bool trusted = false;
    std::uint64_t total_reviews = 0;
    std::uint64_t verified_feedback = 0;
};

struct RefundRequestCall {
    RequestId request_id = 0;
};

using ContractCall = std::variant<SubmitIncidentCall, SubmitReviewCall, RequestTrustScoreCall,
                                  DeliverTrustScoreCall, RefundRequestCall>;

Bytes encode_call(const ContractCall& call);
ContractCall decode_call(std::span<const std::uint8_t> payload);
std::string call_to_json(const ContractCall& call);

/// Result of submit_incident: either a fresh incident or a redirect into a
/// positive review of the already-open duplicate.
struct SubmitIncidentResult {
    bool deduplicated = false;
    IncidentId incident_id = 0;  // the stored (new or existing) incident
    ReviewId review_id = 0;      // set when deduplicated
};

/// The three contract state machines applied in ledger order. Mutating calls
/// return the events the ledger should emit.
class ContractEngine {
public:
    explicit ContractEngine(ContractParams params = {}) : params_(params) {}

    void set_balance(const AccountId& account, Credits amount);
    Credits balance(const AccountId& account) const;
    Credits escrow_total() const { return escrow_total_; }
    Credits total_credits() const;

    SubmitIncidentResult submit_incident(const AccountId& provider, Position location,
                                         double heading, SimTime sim_time,
                                         const Classification& classification,
                                         std::vector<Ledger::PendingEvent>* out_events);

    ReviewId submit_review(const AccountId& reviewer, IncidentId incident_id, Verdict verdict,
                           Position location, double heading, SimTime sim_time,
                           std::vector<Ledger::PendingEvent>* out_events);

    RequestId request_trust_score(const AccountId& consumer, const TrustScope& scope,
                                  Credits payment, SimTime sim_time,
                                  std::vector<Ledger::PendingEvent>* out_events);

    void deliver_trust_score(const AccountId& trust_provider, RequestId request_id,
                             TrustScoreRecord record, SimTime sim_time,
                             std::vector<Ledger::PendingEvent>* out_events);

    void refund_request(RequestId request_id, SimTime sim_time);

    /// Ledger applier entry point: decodes the payload and dispatches.
    std::vector<Ledger::PendingEvent> apply(const Transaction& tx);

    const Incident* find_incident(IncidentId id) const;
    const Review* find_review(ReviewId id) const;
    const TrustRequest* find_request(RequestId id) const;
    const TrustScoreRecord* find_record(RequestId request_id) const;

    const std::map<IncidentId, Incident>& incidents() const { return incidents_; }
    /// Universal evidence set: every stored review, visible to every reader.
    const std::map<ReviewId, Review>& reviews() const { return reviews_; }
    std::vector<Review> reviews_for(IncidentId id) const;
    std::vector<IncidentId> incidents_by(const AccountId& provider) const;

    const ContractParams& params() const { return params_; }

    std::string balances_csv() const;

private:
    const Incident* dedup_match(const Position& location, SimTime sim_time,
                                const Classification& classification) const;
    Review& upsert_review(const AccountId& reviewer, IncidentId incident_id, Verdict verdict,
                          Position location, double heading, SimTime sim_time);

    ContractParams params_;
    std::map<AccountId, Credits> balances_;
    Credits escrow_total_ = 0;

    std::map<IncidentId, Incident> incidents_;
    std::map<ReviewId, Review> reviews_;
    std::map<IncidentId, std::vector<ReviewId>> reviews_by_incident_;
    std::map<RequestId, TrustRequest> requests_;
    std::map<RequestId, TrustScoreRecord> records_;

    IncidentId next_incident_id_ = 1;
    ReviewId next_review_id_ = 1;
    RequestId next_request_id_ = 1;
};

}  // namespace veriblock
