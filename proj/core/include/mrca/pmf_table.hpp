#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mrca/extended_level.hpp"

namespace mrca {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);
/// "num/den" (or "num" when the denominator is 1).
std::string to_string(const Rational& r);

struct PmfEntry {
  ExtendedLevel value;
  double weight = 0.0;
  std::optional<Rational> exact;
};

/// Probability table over integer (or infinity-marked) outcomes. When the
/// support is an infinite set truncated for output, tail_bound bounds the
/// omitted mass.
struct PmfTable {
  std::vector<PmfEntry> entries;
  double tail_bound = 0.0;

  void add(ExtendedLevel value, const Rational& w);
  void add(ExtendedLevel value, double w);

  [[nodiscard]] double total() const;
  /// Zero when the value is not listed.
  [[nodiscard]] double weight_of(ExtendedLevel value) const;
  [[nodiscard]] bool normalized(double tolerance = 1e-9) const;
  /// Throws std::logic_error on negative weights or a normalization failure.
  void validate(double tolerance = 1e-9) const;
};

}  // namespace mrca
