#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace resetkit {

/// Index into an algorithm's fixed rule catalog. Lower ids take priority when
/// a daemon does not pick a rule itself.
struct RuleId {
  std::uint8_t value = 0;
  friend constexpr auto operator<=>(RuleId, RuleId) = default;
};

/// Set of rule ids, at most 32 rules per catalog.
class RuleSet {
 public:
  constexpr RuleSet() = default;
  constexpr explicit RuleSet(std::uint32_t bits) : bits_(bits) {}

  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr bool contains(RuleId r) const { return (bits_ >> r.value) & 1U; }
  constexpr void insert(RuleId r) { bits_ |= (1U << r.value); }
  constexpr std::uint32_t bits() const { return bits_; }

  /// Lowest id in the set; the set must be nonempty.
  constexpr RuleId lowest() const {
    if (bits_ == 0) throw std::logic_error("lowest() on an empty rule set");
    return RuleId{static_cast<std::uint8_t>(std::countr_zero(bits_))};
  }

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
      f(RuleId{static_cast<std::uint8_t>(std::countr_zero(b))});
    }
  }

  friend constexpr bool operator==(RuleSet, RuleSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

}  // namespace resetkit
