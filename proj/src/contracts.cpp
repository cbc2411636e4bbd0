#include "veriblock/contracts.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "veriblock/evidence.hpp"

namespace veriblock {

namespace {

enum CallTag : std::uint8_t {
    kTagSubmitIncident = 1,
    kTagSubmitReview = 2,
    kTagRequestTrustScore = 3,
    kTagDeliverTrustScore = 4,
    kTagRefundRequest = 5,
};

void check_geometry(const Position& p, double heading) {
    if (!p.finite() || !std::isfinite(heading))
        throw Error(Errc::InvalidGeometry, "non-finite coordinates or heading");
}

}  // namespace

Bytes encode_call(const ContractCall& call) {
    ByteWriter w;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SubmitIncidentCall>) {
                w.u8(kTagSubmitIncident);
                w.f64(c.location.x);
                w.f64(c.location.y);
                w.f64(c.heading);
                w.str(c.classification);
            } else if constexpr (std::is_same_v<T, SubmitReviewCall>) {
                w.u8(kTagSubmitReview);
                w.u64(c.incident_id);
                w.u8(static_cast<std::uint8_t>(c.verdict));
                w.f64(c.location.x);
                w.f64(c.location.y);
                w.f64(c.heading);
            } else if constexpr (std::is_same_v<T, RequestTrustScoreCall>) {
                w.u8(kTagRequestTrustScore);
                w.u8(static_cast<std::uint8_t>(c.scope.kind));
                w.u64(c.scope.incident_id);
                w.str(c.scope.provider);
                w.i64(c.payment);
            } else if constexpr (std::is_same_v<T, DeliverTrustScoreCall>) {
                w.u8(kTagDeliverTrustScore);
                w.u64(c.request_id);
                w.str(c.algorithm_id);
                w.f64(c.score);
                w.u8(c.trusted ? 1 : 0);
                w.u64(c.total_reviews);
                w.u64(c.verified_feedback);
            } else if constexpr (std::is_same_v<T, RefundRequestCall>) {
                w.u8(kTagRefundRequest);
                w.u64(c.request_id);
            }
        },
        call);
    return w.take();
}

ContractCall decode_call(std::span<const std::uint8_t> payload) {
    ByteReader r(payload);
    std::uint8_t tag = r.u8();
    ContractCall call;
    switch (tag) {
        case kTagSubmitIncident: {
            SubmitIncidentCall c;
            c.location.x = r.f64();
            c.location.y = r.f64();
            c.heading = r.f64();
            c.classification = r.str();
            call = std::move(c);
            break;
        }
        case kTagSubmitReview: {
            SubmitReviewCall c;
            c.incident_id = r.u64();
            c.verdict = static_cast<Verdict>(r.u8());
            c.location.x = r.f64();
            c.location.y = r.f64();
            c.heading = r.f64();
            call = c;
            break;
        }
        case kTagRequestTrustScore: {
            RequestTrustScoreCall c;
            c.scope.kind = static_cast<ScopeKind>(r.u8());
            c.scope.incident_id = r.u64();
            c.scope.provider = r.str();
            c.payment = r.i64();
            call = std::move(c);
            break;
        }
        case kTagDeliverTrustScore: {
            DeliverTrustScoreCall c;
            c.request_id = r.u64();
            c.algorithm_id = r.str();
            c.score = r.f64();
            c.trusted = r.u8() != 0;
            c.total_reviews = r.u64();
            c.verified_feedback = r.u64();
            call = std::move(c);
            break;
        }
        case kTagRefundRequest: {
            RefundRequestCall c;
            c.request_id = r.u64();
            call = c;
            break;
        }
        default:
            throw Error(Errc::MalformedPayload, "unknown contract call tag");
    }
    if (!r.exhausted()) throw Error(Errc::MalformedPayload, "trailing bytes in contract call");
    return call;
}

std::string call_to_json(const ContractCall& call) {
    nlohmann::json j;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SubmitIncidentCall>) {
                j["call"] = "submit_incident";
                j["x"] = c.location.x;
                j["y"] = c.location.y;
                j["heading"] = c.heading;
                j["classification"] = c.classification;
            } else if constexpr (std::is_same_v<T, SubmitReviewCall>) {
                j["call"] = "submit_review";
                j["incident_id"] = c.incident_id;
                j["verdict"] = verdict_name(c.verdict);
                j["x"] = c.location.x;
                j["y"] = c.location.y;
                j["heading"] = c.heading;
            } else if constexpr (std::is_same_v<T, RequestTrustScoreCall>) {
                j["call"] = "request_trust_score";
                j["scope"] = c.scope.kind == ScopeKind::Incident ? "incident" : "provider";
                if (c.scope.kind == ScopeKind::Incident)
                    j["incident_id"] = c.scope.incident_id;
                else
                    j["provider"] = c.scope.provider;
                j["payment"] = c.payment;
            } else if constexpr (std::is_same_v<T, DeliverTrustScoreCall>) {
                j["call"] = "deliver_trust_score";
                j["request_id"] = c.request_id;
                j["algorithm_id"] = c.algorithm_id;
                j["score"] = c.score;
                j["trusted"] = c.trusted;
                j["total_reviews"] = c.total_reviews;
                j["verified_feedback"] = c.verified_feedback;
            } else if constexpr (std::is_same_v<T, RefundRequestCall>) {
                j["call"] = "refund_request";
                j["request_id"] = c.request_id;
            }
        },
        call);
    return j.dump();
}

void ContractEngine::set_balance(const AccountId& account, Credits amount) {
    balances_[account] = amount;
}

Credits ContractEngine::balance(const AccountId& account) const {
    auto it = balances_.find(account);
    return it == balances_.end() ? 0 : it->second;
}

Credits ContractEngine::total_credits() const {
    Credits total = escrow_total_;
    for (const auto& [acct, bal] : balances_) total += bal;
    return total;
}

const Incident* ContractEngine::dedup_match(const Position& location, SimTime sim_time,
                                            const Classification& classification) const {
    for (const auto& [id, inc] : incidents_) {
        if (inc.classification != classification) continue;
        if (distance(inc.location, location) > params_.dedup.radius_m) continue;
        if (std::fabs(static_cast<double>(sim_time - inc.reported_at)) >
            params_.dedup.time_window_s)
            continue;
        return &inc;
    }
    return nullptr;
}

Review& ContractEngine::upsert_review(const AccountId& reviewer, IncidentId incident_id,
                                      Verdict verdict, Position location, double heading,
                                      SimTime sim_time) {
    // One review per (reviewer, incident): a later submission replaces the
    // earlier one in place, keeping its review_id and list position.
    for (ReviewId rid : reviews_by_incident_[incident_id]) {
        Review& existing = reviews_.at(rid);
        if (existing.reviewer == reviewer) {
            existing.verdict = verdict;
            existing.location = location;
            existing.heading = heading;
            existing.observed_at = sim_time;
            return existing;
        }
    }
    Review r;
    r.review_id = next_review_id_++;
    r.reviewer = reviewer;
    r.incident_id = incident_id;
    r.verdict = verdict;
    r.location = location;
    r.heading = normalize_heading(heading);
    r.observed_at = sim_time;
    auto [it, _] = reviews_.emplace(r.review_id, std::move(r));
    reviews_by_incident_[incident_id].push_back(it->first);
    return it->second;
}

SubmitIncidentResult ContractEngine::submit_incident(const AccountId& provider, Position location,
                                                     double heading, SimTime sim_time,
                                                     const Classification& classification,
                                                     std::vector<Ledger::PendingEvent>* out_events) {
    check_geometry(location, heading);
    if (const Incident* open = dedup_match(location, sim_time, classification)) {
        // The Car-B path: the duplicate becomes a positive review of the
        // already-open incident. A provider re-reporting its own incident is
        // absorbed without a review (self-reviews are forbidden).
        if (open->provider == provider) return {true, open->incident_id, 0};
        Review& rev = upsert_review(provider, open->incident_id, Verdict::Positive, location,
                                    heading, sim_time);
        if (out_events)
            out_events->push_back({EventKind::EvidenceSubmitted, rev.review_id, rev});
        return {true, open->incident_id, rev.review_id};
    }
    Incident inc;
    inc.incident_id = next_incident_id_++;
    inc.provider = provider;
    inc.location = location;
    inc.heading = normalize_heading(heading);
    inc.reported_at = sim_time;
    inc.classification = classification;
    auto [it, _] = incidents_.emplace(inc.incident_id, std::move(inc));
    if (out_events)
        out_events->push_back({EventKind::IncidentReported, it->first, it->second});
    return {false, it->first, 0};
}

ReviewId ContractEngine::submit_review(const AccountId& reviewer, IncidentId incident_id,
                                       Verdict verdict, Position location, double heading,
                                       SimTime sim_time,
                                       std::vector<Ledger::PendingEvent>* out_events) {
    check_geometry(location, heading);
    auto it = incidents_.find(incident_id);
    if (it == incidents_.end()) throw Error(Errc::UnknownIncident, "no such incident");
    if (it->second.provider == reviewer)
        throw Error(Errc::SelfReview, "provider may not review its own incident");
    Review& rev = upsert_review(reviewer, incident_id, verdict, location, heading, sim_time);
    if (out_events) out_events->push_back({EventKind::EvidenceSubmitted, rev.review_id, rev});
    return rev.review_id;
}

RequestId ContractEngine::request_trust_score(const AccountId& consumer, const TrustScope& scope,
                                              Credits payment, SimTime sim_time,
                                              std::vector<Ledger::PendingEvent>* out_events) {
    if (payment < 0) throw Error(Errc::InsufficientBalance, "negative payment");
    if (scope.kind == ScopeKind::Incident) {
        if (!incidents_.count(scope.incident_id))
            throw Error(Errc::UnknownScopeTarget, "no such incident");
    } else {
        if (incidents_by(scope.provider).empty())
            throw Error(Errc::UnknownScopeTarget, "provider has no incidents");
    }
    if (balance(consumer) < payment)
        throw Error(Errc::InsufficientBalance, "consumer balance below payment");

    balances_[consumer] -= payment;
    escrow_total_ += payment;

    TrustRequest req;
    req.request_id = next_request_id_++;
    req.consumer = consumer;
    req.scope = scope;
    req.payment = payment;
    req.state = RequestState::Open;
    req.created_at = sim_time;
    auto [it, _] = requests_.emplace(req.request_id, std::move(req));
    if (out_events)
        out_events->push_back({EventKind::TrustScoreRequested, it->first, it->second});
    return it->first;
}

void ContractEngine::deliver_trust_score(const AccountId& trust_provider, RequestId request_id,
                                         TrustScoreRecord record, SimTime sim_time,
                                         std::vector<Ledger::PendingEvent>* out_events) {
    auto it = requests_.find(request_id);
    if (it == requests_.end()) throw Error(Errc::UnknownRequest, "no such request");
    if (it->second.state != RequestState::Open)
        throw Error(Errc::AlreadyFulfilled, "request already settled");
    if (!(record.score >= 0.0 && record.score <= 1.0))
        throw Error(Errc::InvalidRecord, "score outside [0,1]");
    if (record.verified_feedback > record.total_reviews)
        throw Error(Errc::InvalidRecord, "verified count exceeds total");

    record.request_id = request_id;
    record.delivered_at = sim_time;
    it->second.state = RequestState::Fulfilled;
    escrow_total_ -= it->second.payment;
    balances_[trust_provider] += it->second.payment;
    auto [rit, _] = records_.insert_or_assign(request_id, std::move(record));
    if (out_events)
        out_events->push_back({EventKind::TrustScoreDelivered, request_id, rit->second});
}

void ContractEngine::refund_request(RequestId request_id, SimTime sim_time) {
    auto it = requests_.find(request_id);
    if (it == requests_.end()) throw Error(Errc::UnknownRequest, "no such request");
    if (it->second.state != RequestState::Open)
        throw Error(Errc::AlreadyFulfilled, "request already settled");
    if (sim_time - it->second.created_at < params_.refund_timeout_s)
        throw Error(Errc::NotYetExpired, "refund timeout has not elapsed");
    it->second.state = RequestState::Refunded;
    escrow_total_ -= it->second.payment;
    balances_[it->second.consumer] += it->second.payment;
}

std::vector<Ledger::PendingEvent> ContractEngine::apply(const Transaction& tx) {
    std::vector<Ledger::PendingEvent> events;
    ContractCall call = decode_call(tx.payload);
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SubmitIncidentCall>) {
                submit_incident(tx.sender, c.location, c.heading, tx.sim_time, c.classification,
                                &events);
            } else if constexpr (std::is_same_v<T, SubmitReviewCall>) {
                submit_review(tx.sender, c.incident_id, c.verdict, c.location, c.heading,
                              tx.sim_time, &events);
            } else if constexpr (std::is_same_v<T, RequestTrustScoreCall>) {
                request_trust_score(tx.sender, c.scope, c.payment, tx.sim_time, &events);
            } else if constexpr (std::is_same_v<T, DeliverTrustScoreCall>) {
                TrustScoreRecord rec;
                rec.request_id = c.request_id;
                rec.algorithm_id = c.algorithm_id;
                rec.score = c.score;
                rec.trusted = c.trusted;
                rec.total_reviews = c.total_reviews;
                rec.verified_feedback = c.verified_feedback;
                deliver_trust_score(tx.sender, c.request_id, std::move(rec), tx.sim_time, &events);
            } else if constexpr (std::is_same_v<T, RefundRequestCall>) {
                refund_request(c.request_id, tx.sim_time);
            }
        },
        call);
    return events;
}

const Incident* ContractEngine::find_incident(IncidentId id) const {
    auto it = incidents_.find(id);
    return it == incidents_.end() ? nullptr : &it->second;
}

const Review* ContractEngine::find_review(ReviewId id) const {
    auto it = reviews_.find(id);
    return it == reviews_.end() ? nullptr : &it->second;
}

const TrustRequest* ContractEngine::find_request(RequestId id) const {
    auto it = requests_.find(id);
    return it == requests_.end() ? nullptr : &it->second;
}

const TrustScoreRecord* ContractEngine::find_record(RequestId request_id) const {
    auto it = records_.find(request_id);
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<Review> ContractEngine::reviews_for(IncidentId id) const {
    std::vector<Review> out;
    auto it = reviews_by_incident_.find(id);
    if (it == reviews_by_incident_.end()) return out;
    for (ReviewId rid : it->second) out.push_back(reviews_.at(rid));
    return out;
}

std::vector<IncidentId> ContractEngine::incidents_by(const AccountId& provider) const {
    std::vector<IncidentId> out;
    for (const auto& [id, inc] : incidents_)
        if (inc.provider == provider) out.push_back(id);
    return out;
}

std::string ContractEngine::balances_csv() const {
    std::ostringstream out;
    out << "account_id,balance\n";
    for (const auto& [acct, bal] : balances_) out << acct << ',' << bal << '\n';
    return out.str();
}

}  // namespace veriblock
