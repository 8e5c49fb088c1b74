#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace mrca {

/// A level (or count) that may also be the explicit infinity marker, as used
/// for I_t when the next fixation curve has not started yet.
class ExtendedLevel {
 public:
  constexpr ExtendedLevel() = default;
  constexpr explicit ExtendedLevel(std::int64_t value) : value_(value) {}

  static constexpr ExtendedLevel infinity() {
    ExtendedLevel v;
    v.infinite_ = true;
    return v;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }
  /// Only meaningful when finite.
  [[nodiscard]] constexpr std::int64_t value() const { return value_; }

  constexpr std::strong_ordering operator<=>(const ExtendedLevel& other) const {
    if (infinite_ || other.infinite_) return infinite_ <=> other.infinite_;
    return value_ <=> other.value_;
  }
  constexpr bool operator==(const ExtendedLevel& other) const {
    return infinite_ == other.infinite_ && (infinite_ || value_ == other.value_);
  }

  [[nodiscard]] std::string to_string() const {
    return infinite_ ? std::string("inf") : std::to_string(value_);
  }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

}  // namespace mrca
