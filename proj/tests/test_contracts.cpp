#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "veriblock/contracts.hpp"
#include "veriblock/evidence.hpp"
#include "veriblock/node.hpp"
#include "veriblock/sim.hpp"

using namespace veriblock;

TEST_CASE("first report opens an incident, in-buffer duplicate becomes a positive review") {
    ContractEngine eng;  // defaults: 200 m, 900 s
    std::vector<Ledger::PendingEvent> events;

    auto r1 = eng.submit_incident("car-a", {0, 0}, 90, 0, "Accident", &events);
    CHECK_FALSE(r1.deduplicated);
    CHECK(r1.incident_id == 1);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::IncidentReported);

    // Car B inside the buffer: converted to a positive review of incident 1
    events.clear();
    auto r2 = eng.submit_incident("car-b", {50, 0}, 90, 60, "Accident", &events);
    CHECK(r2.deduplicated);
    CHECK(r2.incident_id == 1);
    CHECK(r2.review_id != 0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::EvidenceSubmitted);
    CHECK(eng.incidents().size() == 1);
    REQUIRE(eng.reviews_for(1).size() == 1);
    CHECK(eng.reviews_for(1)[0].verdict == Verdict::Positive);

    // far outside the buffer: a distinct incident
    auto r3 = eng.submit_incident("car-c", {10000, 0}, 90, 60, "Accident", nullptr);
    CHECK_FALSE(r3.deduplicated);
    CHECK(eng.incidents().size() == 2);

    // same location, different classification: no dedup
    auto r4 = eng.submit_incident("car-d", {40, 0}, 90, 70, "Congestion", nullptr);
    CHECK_FALSE(r4.deduplicated);

    // outside the time window: new incident
    auto r5 = eng.submit_incident("car-e", {60, 0}, 90, 60 + 10000, "Accident", nullptr);
    CHECK_FALSE(r5.deduplicated);
}

TEST_CASE("no two open same-classification incidents stay within the buffer") {
    ContractEngine eng;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Position p{uniform01(rng) * 2000 - 1000, uniform01(rng) * 2000 - 1000};
        try {
            eng.submit_incident("car-" + std::to_string(i), p, 90,
                                static_cast<SimTime>(i), "Accident", nullptr);
        } catch (const Error&) {
        }
    }
    std::vector<Incident> open;
    for (const auto& [id, inc] : eng.incidents()) open.push_back(inc);
    for (std::size_t i = 0; i < open.size(); ++i) {
        for (std::size_t j = i + 1; j < open.size(); ++j) {
            bool close = distance(open[i].location, open[j].location) <= 200.0 &&
                         std::abs(open[i].reported_at - open[j].reported_at) <= 900;
            CHECK_FALSE(close);
        }
    }
}

TEST_CASE("invalid geometry is rejected") {
    ContractEngine eng;
    CHECK_THROWS_AS(
        eng.submit_incident("car-a", {std::nan(""), 0}, 90, 0, "Accident", nullptr), Error);
    eng.submit_incident("car-a", {0, 0}, 90, 0, "Accident", nullptr);
    CHECK_THROWS_AS(eng.submit_review("car-b", 1, Verdict::Positive, {0, 0},
                                      std::numeric_limits<double>::infinity(), 1, nullptr),
                    Error);
}

TEST_CASE("review rules: unknown incident, self-review, one review per reviewer") {
    ContractEngine eng;
    eng.submit_incident("car-a", {0, 0}, 90, 0, "Accident", nullptr);

    try {
        eng.submit_review("car-b", 999, Verdict::Positive, {0, 0}, 90, 1, nullptr);
        FAIL("expected UnknownIncident");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownIncident);
    }
    try {
        eng.submit_review("car-a", 1, Verdict::Positive, {0, 0}, 90, 1, nullptr);
        FAIL("expected SelfReview");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SelfReview);
    }

    ReviewId first = eng.submit_review("car-b", 1, Verdict::Positive, {10, 0}, 90, 5, nullptr);
    ReviewId second = eng.submit_review("car-b", 1, Verdict::Negative, {20, 0}, 90, 9, nullptr);
    CHECK(first == second);  // replacement keeps the id and list position
    REQUIRE(eng.reviews_for(1).size() == 1);
    CHECK(eng.reviews_for(1)[0].verdict == Verdict::Negative);
    CHECK(eng.reviews_for(1)[0].observed_at == 9);
}

TEST_CASE("escrow arithmetic through request, deliver, refund") {
    ContractEngine eng;
    eng.set_balance("consumer", 10);
    eng.submit_incident("car-a", {0, 0}, 90, 0, "Accident", nullptr);

    RequestId req =
        eng.request_trust_score("consumer", TrustScope::of_incident(1), 3, 100, nullptr);
    CHECK(eng.balance("consumer") == 7);
    CHECK(eng.escrow_total() == 3);
    CHECK(eng.find_request(req)->state == RequestState::Open);

    SUBCASE("delivery releases escrow to the trust provider") {
        TrustScoreRecord rec;
        rec.algorithm_id = "simple";
        rec.score = 0.8;
        rec.trusted = true;
        rec.total_reviews = 5;
        rec.verified_feedback = 5;
        eng.deliver_trust_score("trust-1", req, rec, 200, nullptr);
        CHECK(eng.find_request(req)->state == RequestState::Fulfilled);
        CHECK(eng.balance("trust-1") == 3);
        CHECK(eng.escrow_total() == 0);

        // second delivery is rejected without balance movement
        try {
            eng.deliver_trust_score("trust-2", req, rec, 201, nullptr);
            FAIL("expected AlreadyFulfilled");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::AlreadyFulfilled);
        }
        CHECK(eng.balance("trust-2") == 0);
        CHECK(eng.escrow_total() == 0);
    }

    SUBCASE("out-of-range record is rejected before any state change") {
        TrustScoreRecord rec;
        rec.score = 1.2;
        CHECK_THROWS_AS(eng.deliver_trust_score("trust-1", req, rec, 200, nullptr), Error);
        CHECK(eng.find_request(req)->state == RequestState::Open);
        CHECK(eng.escrow_total() == 3);
    }

    SUBCASE("refund only after the timeout") {
        try {
            eng.refund_request(req, 101);  // aged 1 s, timeout 3600 s
            FAIL("expected NotYetExpired");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NotYetExpired);
        }
        eng.refund_request(req, 100 + 3600);
        CHECK(eng.find_request(req)->state == RequestState::Refunded);
        CHECK(eng.balance("consumer") == 10);
        CHECK(eng.escrow_total() == 0);
        CHECK_THROWS_AS(eng.refund_request(req, 99999), Error);
    }
}

TEST_CASE("free requests and insufficient balance") {
    ContractEngine eng;
    eng.set_balance("consumer", 1);
    eng.submit_incident("car-a", {0, 0}, 90, 0, "Accident", nullptr);

    RequestId req = eng.request_trust_score("consumer", TrustScope::of_incident(1), 0, 10, nullptr);
    CHECK(eng.escrow_total() == 0);
    CHECK(eng.find_request(req)->state == RequestState::Open);

    std::vector<Ledger::PendingEvent> events;
    try {
        eng.request_trust_score("consumer", TrustScope::of_incident(1), 5, 11, &events);
        FAIL("expected InsufficientBalance");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InsufficientBalance);
    }
    CHECK(events.empty());
    CHECK(eng.balance("consumer") == 1);

    try {
        eng.request_trust_score("consumer", TrustScope::of_provider("nobody"), 0, 12, nullptr);
        FAIL("expected UnknownScopeTarget");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownScopeTarget);
    }
}

TEST_CASE("credits are conserved across random interleavings") {
    std::mt19937_64 rng(21);
    ContractEngine eng;
    const Credits initial_total = 10 * 100;
    for (int i = 0; i < 10; ++i) eng.set_balance("consumer-" + std::to_string(i), 100);
    eng.submit_incident("car-a", {0, 0}, 90, 0, "Accident", nullptr);

    std::vector<RequestId> open;
    SimTime t = 1;
    for (int step = 0; step < 500; ++step, ++t) {
        double roll = uniform01(rng);
        try {
            if (roll < 0.45) {
                AccountId consumer = "consumer-" + std::to_string(rng() % 10);
                Credits pay = static_cast<Credits>(rng() % 8);
                open.push_back(
                    eng.request_trust_score(consumer, TrustScope::of_incident(1), pay, t, nullptr));
            } else if (roll < 0.75 && !open.empty()) {
                RequestId req = open[rng() % open.size()];
                TrustScoreRecord rec;
                rec.algorithm_id = "simple";
                rec.score = 0.5;
                rec.total_reviews = 1;
                rec.verified_feedback = 1;
                eng.deliver_trust_score("trust-" + std::to_string(rng() % 3), req, rec, t,
                                        nullptr);
            } else if (!open.empty()) {
                eng.refund_request(open[rng() % open.size()], t + (rng() % 2 ? 4000 : 0));
            }
        } catch (const Error&) {
            // rejected operations must leave balances untouched; conservation
            // below catches any partial mutation
        }
        CHECK(eng.total_credits() == initial_total);
        CHECK(eng.escrow_total() >= 0);
    }
}

TEST_CASE("contract call payloads round-trip and the ledger applies them") {
    Node node;
    node.contracts().set_balance("consumer", 50);

    SubmitIncidentCall inc{{12.5, -3.25}, 87.5, "RoadWork"};
    ContractCall decoded = decode_call(encode_call(inc));
    auto* dec = std::get_if<SubmitIncidentCall>(&decoded);
    REQUIRE(dec != nullptr);
    CHECK(dec->location == inc.location);
    CHECK(dec->heading == inc.heading);
    CHECK(dec->classification == inc.classification);
    CHECK(call_to_json(decoded).find("submit_incident") != std::string::npos);

    node.submit("car-a", inc, 0);
    node.submit("car-b", SubmitReviewCall{1, Verdict::Positive, {20, 0}, 88.0}, 1);
    node.submit("consumer", RequestTrustScoreCall{TrustScope::of_incident(1), 5}, 2);
    node.flush(2);

    CHECK(node.contracts().incidents().size() == 1);
    CHECK(node.contracts().reviews_for(1).size() == 1);
    CHECK(node.contracts().balance("consumer") == 45);
    CHECK(node.contracts().escrow_total() == 5);

    auto events = node.ledger().events_since(0);
    REQUIRE(events.size() == 3);
    CHECK(events[0].kind == EventKind::IncidentReported);
    CHECK(events[1].kind == EventKind::EvidenceSubmitted);
    CHECK(events[2].kind == EventKind::TrustScoreRequested);
}
