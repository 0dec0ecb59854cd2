#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

namespace resetkit {

/// States serialize themselves into a flat integer sequence. The encoding is
/// injective per state type.
template <class S>
concept Encodable = requires(const S& s, std::vector<std::int64_t>& out) {
  { s.encode(out) } -> std::same_as<void>;
};

template <Encodable S>
std::vector<std::int64_t> canonical_encoding(std::span<const S> config) {
  std::vector<std::int64_t> out;
  out.reserve(config.size() * 8);
  for (const auto& s : config) s.encode(out);
  return out;
}

inline std::uint64_t fnv1a(std::span<const std::int64_t> words) {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto w : words) {
    const auto x = static_cast<std::uint64_t>(w);
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

/// 64-bit digest of the full-state encoding; stable across runs and builds.
template <Encodable S>
std::uint64_t canonical_hash(std::span<const S> config) {
  return fnv1a(canonical_encoding(config));
}

}  // namespace resetkit
