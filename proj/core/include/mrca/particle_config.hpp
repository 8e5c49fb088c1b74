#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mrca {

/// Levels of the fixation curves present at one instant, leading (highest)
/// particle first. Only the active prefix is stored; every level beyond it is
/// implicitly 1. The empty configuration is a valid state.
struct ParticleConfig {
  std::vector<std::int64_t> levels;

  [[nodiscard]] std::size_t count() const { return levels.size(); }
  [[nodiscard]] bool empty() const { return levels.empty(); }
  /// Level of the leading particle, 1 when there is none.
  [[nodiscard]] std::int64_t leading() const { return levels.empty() ? 1 : levels.front(); }
  /// k-th particle level (1-based), 1 beyond the active prefix.
  [[nodiscard]] std::int64_t level(std::size_t k) const {
    return k >= 1 && k <= levels.size() ? levels[k - 1] : 1;
  }
  /// Strictly decreasing with every level >= 2.
  [[nodiscard]] bool valid() const {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (levels[k] < 2) return false;
      if (k > 0 && levels[k] >= levels[k - 1]) return false;
    }
    return true;
  }
  [[nodiscard]] std::string to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(levels[k]);
    }
    return s + ")";
  }

  bool operator==(const ParticleConfig&) const = default;
  auto operator<=>(const ParticleConfig&) const = default;
};

}  // namespace mrca
