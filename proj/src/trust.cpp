#include "veriblock/trust.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace veriblock {

namespace {

double positive_fraction(const std::vector<Review>& reviews) {
    std::uint64_t pos = 0;
    for (const auto& r : reviews)
        if (r.verdict == Verdict::Positive) ++pos;
    return static_cast<double>(pos) / static_cast<double>(reviews.size());
}

/// Shared kernel for Algorithms 2 and 3: the filtered-average is exactly the
/// weighted score at (0.5, 0.5), same expression order.
ScoreResult weighted_kernel(const Incident& incident, const std::vector<Review>& reviews,
                            const VerificationParams& params, double w_filtered,
                            double w_unfiltered, double threshold, std::string algorithm_id) {
    if (reviews.empty()) throw Error(Errc::EmptyEvidence, "no reviews to score");
    double u = positive_fraction(reviews);
    std::vector<Review> feedback = filter_feedback(incident, reviews, params);
    double f = feedback.empty() ? u : positive_fraction(feedback);
    ScoreResult res;
    res.score = w_filtered * f + w_unfiltered * u;
    res.trusted = res.score >= threshold;
    res.total = reviews.size();
    res.verified = feedback.size();
    res.algorithm_id = std::move(algorithm_id);
    return res;
}

}  // namespace

ScoreResult score_simple(const std::vector<Review>& reviews, double threshold) {
    if (reviews.empty()) throw Error(Errc::EmptyEvidence, "no reviews to score");
    ScoreResult res;
    res.score = positive_fraction(reviews);
    res.trusted = res.score >= threshold;
    res.total = reviews.size();
    res.verified = reviews.size();  // no filtering, every review counts
    res.algorithm_id = kAlgSimple;
    return res;
}

ScoreResult score_filtered_average(const Incident& incident, const std::vector<Review>& reviews,
                                   const VerificationParams& params, double threshold) {
    return weighted_kernel(incident, reviews, params, 0.5, 0.5, threshold, kAlgFilteredAverage);
}

ScoreResult score_weighted(const Incident& incident, const std::vector<Review>& reviews,
                           const VerificationParams& params, double w_filtered,
                           double w_unfiltered, double threshold) {
    if (w_filtered < 0.0 || w_unfiltered < 0.0 ||
        std::fabs(w_filtered + w_unfiltered - 1.0) > 1e-12)
        throw Error(Errc::BadWeights, "weights must be non-negative and sum to 1");
    return weighted_kernel(incident, reviews, params, w_filtered, w_unfiltered, threshold,
                           kAlgWeighted);
}

void EvidenceDB::ingest_events(const std::vector<LedgerEvent>& events) {
    for (const auto& ev : events) {
        if (ev.event_seq != cursor_ + 1)
            throw Error(Errc::EventGap, "events are not a contiguous suffix of the cursor");
        switch (ev.kind) {
            case EventKind::IncidentReported:
                incidents_[std::get<Incident>(ev.payload).incident_id] =
                    std::get<Incident>(ev.payload);
                break;
            case EventKind::EvidenceSubmitted: {
                const Review& rev = std::get<Review>(ev.payload);
                auto& list = reviews_[rev.incident_id];
                bool replaced = false;
                for (auto& existing : list) {
                    if (existing.reviewer == rev.reviewer) {
                        existing = rev;
                        replaced = true;
                        break;
                    }
                }
                if (!replaced) list.push_back(rev);
                break;
            }
            default:
                break;  // non-evidence events advance the cursor only
        }
        cursor_ = ev.event_seq;
    }
}

const std::vector<Review>& EvidenceDB::reviews_for(IncidentId id) const {
    static const std::vector<Review> empty;
    auto it = reviews_.find(id);
    return it == reviews_.end() ? empty : it->second;
}

std::uint64_t EvidenceDB::review_count() const {
    std::uint64_t n = 0;
    for (const auto& [id, list] : reviews_) n += list.size();
    return n;
}

std::string EvidenceDB::export_csv() const {
    std::ostringstream out;
    out << "incident_id,review_id,reviewer,verdict,x,y,heading,observed_at\n";
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6f", v);
        return std::string(buf);
    };
    for (const auto& [iid, list] : reviews_) {
        for (const auto& r : list) {
            out << iid << ',' << r.review_id << ',' << r.reviewer << ',' << verdict_name(r.verdict)
                << ',' << fmt(r.location.x) << ',' << fmt(r.location.y) << ',' << fmt(r.heading)
                << ',' << r.observed_at << '\n';
        }
    }
    return out.str();
}

ScoreResult TrustProvider::score_scope(const TrustScope& scope) const {
    if (scope.kind == ScopeKind::Incident) {
        auto it = db_.incidents().find(scope.incident_id);
        if (it == db_.incidents().end())
            throw Error(Errc::UnknownScope, "incident not in evidence database");
        const auto& reviews = db_.reviews_for(scope.incident_id);
        if (reviews.empty()) throw Error(Errc::NoEvidence, "incident has no reviews");
        if (algorithm_.id == kAlgSimple) return score_simple(reviews, threshold_);
        if (algorithm_.id == kAlgFilteredAverage)
            return score_filtered_average(it->second, reviews, params_, threshold_);
        if (algorithm_.id == kAlgWeighted)
            return score_weighted(it->second, reviews, params_, algorithm_.w_filtered,
                                  algorithm_.w_unfiltered, threshold_);
        throw Error(Errc::UnknownScope, "unknown algorithm id: " + algorithm_.id);
    }

    // Provider scope: pool reviews across all of that provider's incidents,
    // filtering each against its own incident geometry.
    std::vector<Review> pooled;
    std::vector<Review> pooled_feedback;
    bool any_incident = false;
    for (const auto& [iid, inc] : db_.incidents()) {
        if (inc.provider != scope.provider) continue;
        any_incident = true;
        const auto& reviews = db_.reviews_for(iid);
        pooled.insert(pooled.end(), reviews.begin(), reviews.end());
        auto fb = filter_feedback(inc, reviews, params_);
        pooled_feedback.insert(pooled_feedback.end(), fb.begin(), fb.end());
    }
    if (!any_incident) throw Error(Errc::UnknownScope, "provider has no incidents in database");
    if (pooled.empty()) throw Error(Errc::NoEvidence, "provider's incidents have no reviews");

    if (algorithm_.id == kAlgSimple) return score_simple(pooled, threshold_);

    double w_f = algorithm_.id == kAlgFilteredAverage ? 0.5 : algorithm_.w_filtered;
    double w_u = algorithm_.id == kAlgFilteredAverage ? 0.5 : algorithm_.w_unfiltered;
    if (algorithm_.id == kAlgWeighted &&
        (w_f < 0.0 || w_u < 0.0 || std::fabs(w_f + w_u - 1.0) > 1e-12))
        throw Error(Errc::BadWeights, "weights must be non-negative and sum to 1");
    if (algorithm_.id != kAlgFilteredAverage && algorithm_.id != kAlgWeighted)
        throw Error(Errc::UnknownScope, "unknown algorithm id: " + algorithm_.id);

    std::uint64_t pos_all = 0;
    for (const auto& r : pooled)
        if (r.verdict == Verdict::Positive) ++pos_all;
    double u = static_cast<double>(pos_all) / static_cast<double>(pooled.size());
    double f = u;
    if (!pooled_feedback.empty()) {
        std::uint64_t pos_fb = 0;
        for (const auto& r : pooled_feedback)
            if (r.verdict == Verdict::Positive) ++pos_fb;
        f = static_cast<double>(pos_fb) / static_cast<double>(pooled_feedback.size());
    }
    ScoreResult res;
    res.score = w_f * f + w_u * u;
    res.trusted = res.score >= threshold_;
    res.total = pooled.size();
    res.verified = pooled_feedback.size();
    res.algorithm_id = algorithm_.id;
    return res;
}

TrustScoreRecord TrustProvider::serve_request(const TrustRequest& request,
                                              SimTime sim_time) const {
    ScoreResult res = score_scope(request.scope);
    TrustScoreRecord rec;
    rec.request_id = request.request_id;
    rec.algorithm_id = res.algorithm_id;
    rec.score = res.score;
    rec.trusted = res.trusted;
    rec.total_reviews = res.total;
    rec.verified_feedback = res.verified;
    rec.delivered_at = sim_time;
    return rec;
}

}  // namespace veriblock
