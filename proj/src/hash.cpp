#include "veriblock/hash.hpp"

#include <openssl/sha.h>

#include "veriblock/bytes.hpp"

namespace veriblock {

Hash256 sha256(std::span<const std::uint8_t> data) {
    Hash256 out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

std::string to_hex(std::span<const std::uint8_t> data) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::EmptyPayload: return "EmptyPayload";
        case Errc::ClockRegression: return "ClockRegression";
        case Errc::InvalidGeometry: return "InvalidGeometry";
        case Errc::UnknownIncident: return "UnknownIncident";
        case Errc::SelfReview: return "SelfReview";
        case Errc::InsufficientBalance: return "InsufficientBalance";
        case Errc::UnknownScopeTarget: return "UnknownScopeTarget";
        case Errc::UnknownRequest: return "UnknownRequest";
        case Errc::AlreadyFulfilled: return "AlreadyFulfilled";
        case Errc::NotYetExpired: return "NotYetExpired";
        case Errc::InvalidRecord: return "InvalidRecord";
        case Errc::EventGap: return "EventGap";
        case Errc::EmptyEvidence: return "EmptyEvidence";
        case Errc::BadWeights: return "BadWeights";
        case Errc::NoEvidence: return "NoEvidence";
        case Errc::UnknownScope: return "UnknownScope";
        case Errc::BadStep: return "BadStep";
        case Errc::MalformedPayload: return "MalformedPayload";
    }
    return "UnknownError";
}

}  // namespace veriblock
