#pragma once

#include <vector>

#include "veriblock/domain.hpp"
#include "veriblock/types.hpp"

namespace veriblock {

/// Spatio-temporal interaction bounds. All comparisons downstream are
/// inclusive: a review exactly at the radius/window/tolerance is verified.
struct VerificationParams {
    double radius_m = 200.0;
    double time_window_s = 900.0;
    double heading_tol_deg = 45.0;

    bool valid() const {
        return radius_m > 0.0 && time_window_s > 0.0 && heading_tol_deg > 0.0 &&
               heading_tol_deg <= 180.0;
    }
};

double distance(const Position& a, const Position& b);

/// Circular angular difference min(|h1-h2|, 360-|h1-h2|) <= tol.
bool heading_aligned(double h1_deg, double h2_deg, double tol_deg);

/// The evidence mapping: a review's interaction is proven iff it is inside the
/// radius, inside the time window, and heading-aligned with the incident.
bool verify_interaction(const Incident& incident, const Review& review,
                        const VerificationParams& params);

/// Subset of reviews passing verify_interaction, order preserved.
std::vector<Review> filter_feedback(const Incident& incident, const std::vector<Review>& reviews,
                                    const VerificationParams& params);

}  // namespace veriblock
