#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace veriblock {

using AccountId = std::string;
using SimTime = std::int64_t;  // seconds since simulation epoch
using TxId = std::uint64_t;
using IncidentId = std::uint64_t;
using ReviewId = std::uint64_t;
using RequestId = std::uint64_t;
using EventSeq = std::uint64_t;
using Credits = std::int64_t;

enum class Verdict : std::uint8_t { Positive = 0, Negative = 1 };

/// Planar simulation coordinates, meters.
struct Position {
    double x = 0.0;
    double y = 0.0;

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
    bool operator==(const Position&) const = default;
};

/// Compass heading normalized into [0, 360).
inline double normalize_heading(double deg) {
    double h = std::fmod(deg, 360.0);
    if (h < 0.0) h += 360.0;
    return h;
}

enum class Errc {
    // ledger
    EmptyPayload,
    ClockRegression,
    // contracts
    InvalidGeometry,
    UnknownIncident,
    SelfReview,
    InsufficientBalance,
    UnknownScopeTarget,
    UnknownRequest,
    AlreadyFulfilled,
    NotYetExpired,
    InvalidRecord,
    // trust
    EventGap,
    EmptyEvidence,
    BadWeights,
    NoEvidence,
    UnknownScope,
    // sim
    BadStep,
    // codec / io
    MalformedPayload,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace veriblock
