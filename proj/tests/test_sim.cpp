#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "veriblock/node.hpp"
#include "veriblock/sim.hpp"
#include "veriblock/trust.hpp"

using namespace veriblock;

TEST_CASE("all-supporting scenario: one incident plus n-1 positive reviews") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::AllSupporting;
    spec.n_transactions = 11;
    auto calls = generate_scenario(spec);
    REQUIRE(calls.size() == 11);
    CHECK(std::holds_alternative<SubmitIncidentCall>(calls[0].call));
    for (std::size_t i = 1; i < calls.size(); ++i) {
        auto* rev = std::get_if<SubmitReviewCall>(&calls[i].call);
        REQUIRE(rev != nullptr);
        CHECK(rev->verdict == Verdict::Positive);
        CHECK(calls[i].sim_time >= calls[i - 1].sim_time);
        CHECK(calls[i].sender != calls[0].sender);  // reviewers never self-review
    }
}

TEST_CASE("all-opposing scenario scores 0.0 end to end and is not trusted") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::AllOpposing;
    spec.n_transactions = 11;

    Node node;
    SimTime last = 0;
    for (const auto& c : generate_scenario(spec)) {
        node.submit(c.sender, c.call, c.sim_time);
        last = c.sim_time;
    }
    node.flush(last);

    TrustProvider tp("trust-1", {kAlgSimple, 0, 0}, spec.params, 0.5);
    tp.ingest(node.ledger().events_since(0));
    auto res = tp.score_scope(TrustScope::of_incident(1));
    CHECK(res.score == 0.0);
    CHECK_FALSE(res.trusted);
    CHECK(res.total == 10);
}

TEST_CASE("fixed seed reproduces the identical call sequence") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::RandomSplit;
    spec.n_transactions = 1001;
    spec.seed = 1234;
    auto a = generate_scenario(spec);
    auto b = generate_scenario(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].sender == b[i].sender);
        CHECK(a[i].sim_time == b[i].sim_time);
        CHECK(encode_call(a[i].call) == encode_call(b[i].call));
    }
    // a different seed diverges
    spec.seed = 1235;
    auto c = generate_scenario(spec);
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i)
        same = encode_call(a[i].call) == encode_call(c[i].call) && a[i].sim_time == c[i].sim_time;
    CHECK_FALSE(same);
}

TEST_CASE("step must divide total") {
    ExperimentConfig cfg;
    cfg.total = 100;
    cfg.step = 7;
    try {
        run_incremental_experiment(0.5, cfg);
        FAIL("expected BadStep");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadStep);
    }
}

TEST_CASE("unanimous evidence that always passes the filter scores 1.0 everywhere") {
    ExperimentConfig cfg;
    cfg.total = 100;
    cfg.step = 10;
    cfg.p_pass_filter = 1.0;
    cfg.params.time_window_s = 1e9;  // the whole run stays inside the window
    auto series = run_incremental_experiment(1.0, cfg);
    REQUIRE(series.rows.size() == 10);
    for (const auto& row : series.rows) {
        CHECK(row.score_alg1 == 1.0);
        CHECK(row.score_alg2 == 1.0);
        CHECK(row.score_alg3 == 1.0);
    }
}

TEST_CASE("experiment series is reproducible byte for byte") {
    ExperimentConfig cfg;
    cfg.total = 200;
    cfg.step = 10;
    cfg.seed = 77;
    auto a = run_incremental_experiment(0.6, cfg);
    auto b = run_incremental_experiment(0.6, cfg);
    CHECK(a.to_csv() == b.to_csv());
    REQUIRE(a.rows.size() == 20);
    for (const auto& row : a.rows) {
        CHECK(row.score_alg1 >= 0.0);
        CHECK(row.score_alg1 <= 1.0);
        CHECK(row.score_alg2 >= 0.0);
        CHECK(row.score_alg2 <= 1.0);
        CHECK(row.score_alg3 >= 0.0);
        CHECK(row.score_alg3 <= 1.0);
    }
}

TEST_CASE("the pipeline adds no bias over the raw verdict stream") {
    // Tally verdicts as they are generated, before they touch the ledger; the
    // final algorithm-1 score must equal the direct tally exactly.
    std::uint64_t positives = 0, count = 0;
    ExperimentConfig cfg;
    cfg.total = 300;
    cfg.step = 10;
    cfg.seed = 9;
    cfg.on_review = [&](const SubmitReviewCall& rev) {
        ++count;
        if (rev.verdict == Verdict::Positive) ++positives;
    };
    auto series = run_incremental_experiment(0.7, cfg);
    CHECK(count == 300);
    double tally = static_cast<double>(positives) / static_cast<double>(count);
    CHECK(series.rows.back().score_alg1 == tally);
}

TEST_CASE("weights (0.5,0.5) collapse algorithm 3 onto algorithm 2") {
    ExperimentConfig cfg;
    cfg.total = 200;
    cfg.step = 10;
    cfg.w_filtered = 0.5;
    cfg.w_unfiltered = 0.5;
    auto series = run_incremental_experiment(0.6, cfg);
    for (const auto& row : series.rows) CHECK(row.score_alg2 == row.score_alg3);
}

TEST_CASE("random-percentage wrapper is deterministic per seed") {
    ExperimentConfig cfg;
    cfg.total = 100;
    cfg.step = 10;
    cfg.seed = 5;
    auto a = run_random_percentage_experiment(cfg);
    auto b = run_random_percentage_experiment(cfg);
    CHECK(a.p_good == b.p_good);
    CHECK(a.p_good >= 0.0);
    CHECK(a.p_good <= 1.0);
    CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("csv schema is n,alg1,alg2,alg3") {
    ExperimentConfig cfg;
    cfg.total = 20;
    cfg.step = 10;
    auto csv = run_incremental_experiment(0.5, cfg).to_csv();
    CHECK(csv.rfind("n,alg1,alg2,alg3\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
