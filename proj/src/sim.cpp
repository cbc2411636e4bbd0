#include "veriblock/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace veriblock {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Seeded exponential inter-arrival, mean in seconds, floored to 1ms so the
/// simulation clock always advances.
double exp_interarrival(std::mt19937_64& rng, double mean_s) {
    double u = uniform01(rng);
    return std::max(0.001, -mean_s * std::log1p(-u));
}

AccountId reviewer_name(std::uint64_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "car-%05llu", static_cast<unsigned long long>(i));
    return buf;
}

/// Reviewer position sampled uniformly in a disk sized so the configured
/// fraction lands inside the verification radius. p <= 0 pushes everything
/// into an annulus well outside it.
Position sample_position(std::mt19937_64& rng, const Position& center, double radius_m,
                         double p_pass) {
    double r;
    if (p_pass <= 0.0) {
        r = radius_m * (2.0 + uniform01(rng));
    } else {
        double disk_radius = radius_m / std::sqrt(std::min(1.0, p_pass));
        r = disk_radius * std::sqrt(uniform01(rng));
    }
    double theta = 2.0 * kPi * uniform01(rng);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

double sample_heading(std::mt19937_64& rng, double incident_heading, double tol_deg) {
    return normalize_heading(incident_heading + (2.0 * uniform01(rng) - 1.0) * tol_deg);
}

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const char* scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::AllSupporting: return "all-supporting";
        case ScenarioKind::AllOpposing: return "all-opposing";
        case ScenarioKind::RandomSplit: return "random-split";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& name) {
    if (name == "all-supporting") return ScenarioKind::AllSupporting;
    if (name == "all-opposing") return ScenarioKind::AllOpposing;
    if (name == "random-split") return ScenarioKind::RandomSplit;
    throw std::invalid_argument("unknown scenario kind: " + name);
}

std::vector<TimedCall> generate_scenario(const ScenarioSpec& spec) {
    if (spec.n_transactions == 0) throw std::invalid_argument("n_transactions must be > 0");
    std::mt19937_64 rng(spec.seed);

    // Keep the whole review stream inside the verification time window so
    // p_pass_filter is decided by geometry alone.
    double mean = spec.mean_interarrival_s;
    double horizon = 0.8 * spec.params.time_window_s;
    if (mean * static_cast<double>(spec.n_transactions) > horizon)
        mean = horizon / static_cast<double>(spec.n_transactions);

    std::vector<TimedCall> calls;
    double t = 0.0;

    SubmitIncidentCall inc;
    inc.location = spec.incident_location;
    inc.heading = spec.incident_heading;
    inc.classification = spec.classification;
    calls.push_back({"provider-0", inc, static_cast<SimTime>(t)});

    for (std::uint64_t i = 1; i < spec.n_transactions; ++i) {
        t += exp_interarrival(rng, mean);
        SubmitReviewCall rev;
        rev.incident_id = 1;  // the scenario's single incident
        switch (spec.kind) {
            case ScenarioKind::AllSupporting: rev.verdict = Verdict::Positive; break;
            case ScenarioKind::AllOpposing: rev.verdict = Verdict::Negative; break;
            case ScenarioKind::RandomSplit:
                rev.verdict = uniform01(rng) < 0.5 ? Verdict::Positive : Verdict::Negative;
                break;
        }
        rev.location = sample_position(rng, spec.incident_location, spec.params.radius_m,
                                       spec.p_pass_filter);
        rev.heading = sample_heading(rng, spec.incident_heading, spec.params.heading_tol_deg);
        calls.push_back({reviewer_name(i), rev, static_cast<SimTime>(t)});
    }
    return calls;
}

std::string ExperimentSeries::to_csv() const {
    std::ostringstream out;
    out << "n,alg1,alg2,alg3\n";
    for (const auto& row : rows)
        out << row.n_evidence << ',' << format_score(row.score_alg1) << ','
            << format_score(row.score_alg2) << ',' << format_score(row.score_alg3) << '\n';
    return out.str();
}

ExperimentSeries run_incremental_experiment(double p_good, const ExperimentConfig& cfg) {
    if (cfg.step == 0 || cfg.total % cfg.step != 0)
        throw Error(Errc::BadStep, "step must divide total");
    if (p_good < 0.0 || p_good > 1.0) throw std::invalid_argument("p_good outside [0,1]");

    std::mt19937_64 rng(cfg.seed);
    Node node({}, cfg.block_interval_s);

    const Position incident_pos{0.0, 0.0};
    const double incident_heading = 90.0;
    SubmitIncidentCall inc;
    inc.location = incident_pos;
    inc.heading = incident_heading;
    inc.classification = "Accident";
    node.submit("provider-0", inc, 0);
    node.seal_now(0);
    const IncidentId incident_id = 1;

    TrustProvider p1("trust-1", {kAlgSimple, 0, 0}, cfg.params, cfg.threshold);
    TrustProvider p2("trust-2", {kAlgFilteredAverage, 0, 0}, cfg.params, cfg.threshold);
    TrustProvider p3("trust-3", {kAlgWeighted, cfg.w_filtered, cfg.w_unfiltered}, cfg.params,
                     cfg.threshold);

    double mean = 1.0;
    double horizon = 0.8 * cfg.params.time_window_s;
    if (mean * static_cast<double>(cfg.total) > horizon)
        mean = horizon / static_cast<double>(cfg.total);

    ExperimentSeries series;
    series.p_good = p_good;
    series.seed = cfg.seed;

    double t = 0.0;
    std::uint64_t reviewer = 1;
    const TrustScope scope = TrustScope::of_incident(incident_id);

    for (std::uint64_t n = cfg.step; n <= cfg.total; n += cfg.step) {
        for (std::uint64_t i = 0; i < cfg.step; ++i, ++reviewer) {
            t += exp_interarrival(rng, mean);
            SubmitReviewCall rev;
            rev.incident_id = incident_id;
            rev.verdict = uniform01(rng) < p_good ? Verdict::Positive : Verdict::Negative;
            rev.location = sample_position(rng, incident_pos, cfg.params.radius_m,
                                           cfg.p_pass_filter);
            rev.heading = sample_heading(rng, incident_heading, cfg.params.heading_tol_deg);
            if (cfg.on_review) cfg.on_review(rev);
            node.submit(reviewer_name(reviewer), rev, static_cast<SimTime>(t));
        }
        node.flush(static_cast<SimTime>(t));

        for (TrustProvider* tp : {&p1, &p2, &p3})
            tp->ingest(node.ledger().events_since(tp->db().cursor()));

        ExperimentRow row;
        row.n_evidence = n;
        row.score_alg1 = p1.score_scope(scope).score;
        row.score_alg2 = p2.score_scope(scope).score;
        row.score_alg3 = p3.score_scope(scope).score;
        series.rows.push_back(row);
    }
    return series;
}

ExperimentSeries run_random_percentage_experiment(const ExperimentConfig& cfg) {
    std::mt19937_64 rng(cfg.seed ^ 0x70637467646f6f67ULL);
    return run_incremental_experiment(uniform01(rng), cfg);
}

}  // namespace veriblock
