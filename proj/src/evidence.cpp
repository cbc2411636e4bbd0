#include "veriblock/evidence.hpp"

#include <cmath>

namespace veriblock {

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool heading_aligned(double h1_deg, double h2_deg, double tol_deg) {
    double d = std::fabs(normalize_heading(h1_deg) - normalize_heading(h2_deg));
    if (d > 180.0) d = 360.0 - d;
    return d <= tol_deg;
}

bool verify_interaction(const Incident& incident, const Review& review,
                        const VerificationParams& params) {
    return distance(incident.location, review.location) <= params.radius_m &&
           std::fabs(static_cast<double>(incident.reported_at - review.observed_at)) <=
               params.time_window_s &&
           heading_aligned(incident.heading, review.heading, params.heading_tol_deg);
}

std::vector<Review> filter_feedback(const Incident& incident, const std::vector<Review>& reviews,
                                    const VerificationParams& params) {
    std::vector<Review> out;
    for (const auto& r : reviews)
        if (verify_interaction(incident, r, params)) out.push_back(r);
    return out;
}

}  // namespace veriblock
