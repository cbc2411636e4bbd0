#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace veriblock {

using Hash256 = std::array<std::uint8_t, 32>;

inline constexpr Hash256 kZeroHash{};

/// The chain's one pinned digest. Recorded in the genesis header so a dump
/// carries its own hash identity.
inline constexpr const char* kHashAlgorithmId = "sha-256";

Hash256 sha256(std::span<const std::uint8_t> data);

}  // namespace veriblock
