#pragma once

#include <cstdint>
#include <string>

#include "veriblock/types.hpp"

namespace veriblock {

/// Incident classification is an open set; the simulator carries it as a tag.
using Classification = std::string;

struct Incident {
    IncidentId incident_id = 0;
    AccountId provider;
    Position location;
    double heading = 0.0;  // degrees, kept in [0, 360)
    SimTime reported_at = 0;
    Classification classification;

    bool operator==(const Incident&) const = default;
};

struct Review {
    ReviewId review_id = 0;
    AccountId reviewer;
    IncidentId incident_id = 0;
    Verdict verdict = Verdict::Positive;
    Position location;
    double heading = 0.0;
    SimTime observed_at = 0;

    bool operator==(const Review&) const = default;
};

enum class RequestState : std::uint8_t { Open = 0, Fulfilled = 1, Refunded = 2 };

enum class ScopeKind : std::uint8_t { Incident = 0, Provider = 1 };

struct TrustScope {
    ScopeKind kind = ScopeKind::Incident;
    IncidentId incident_id = 0;  // valid when kind == Incident
    AccountId provider;          // valid when kind == Provider

    static TrustScope of_incident(IncidentId id) { return {ScopeKind::Incident, id, {}}; }
    static TrustScope of_provider(AccountId acct) {
        return {ScopeKind::Provider, 0, std::move(acct)};
    }
    bool operator==(const TrustScope&) const = default;
};

struct TrustRequest {
    RequestId request_id = 0;
    AccountId consumer;
    TrustScope scope;
    Credits payment = 0;
    RequestState state = RequestState::Open;
    SimTime created_at = 0;

    bool operator==(const TrustRequest&) const = default;
};

struct TrustScoreRecord {
    RequestId request_id = 0;
    std::string algorithm_id;
    double score = 0.0;  // in [0, 1]
    bool trusted = false;
    std::uint64_t total_reviews = 0;
    std::uint64_t verified_feedback = 0;
    SimTime delivered_at = 0;

    bool operator==(const TrustScoreRecord&) const = default;
};

inline const char* verdict_name(Verdict v) {
    return v == Verdict::Positive ? "positive" : "negative";
}

}  // namespace veriblock
