#pragma once

// Substitutions at MRCA changes. A mutation becomes a substitution exactly
// when it falls on level 1; given the MRCA point process, the number of such
// mutations established at E'' is Poisson with mean theta/2 (B'' - B').

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrca/lookdown.hpp"
#include "mrca/random.hpp"

namespace mrca::mutation {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MutationConfig {
  double theta = 1.0;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless theta > 0.
  void validate() const;
};

struct SubstitutionEvent {
  double E = 0.0;
  std::int64_t S = 1;
};

/// Marks each MRCA point after the first with a Poisson number of
/// substitutions and keeps the positive ones. Throws ValidationError for
/// fewer than two points, E or B not strictly increasing, or B >= E.
std::vector<SubstitutionEvent> simulate_substitutions(std::span<const lookdown::MrcaPoint> points,
                                                      const MutationConfig& config, Rng& rng);
/// Same, with an Rng seeded from config.seed.
std::vector<SubstitutionEvent> simulate_substitutions(std::span<const lookdown::MrcaPoint> points,
                                                      const MutationConfig& config);

/// Pairwise coalescence time of two lines sampled at an MRCA change.
double sample_Tc(Rng& rng);

enum class DispersionWeight {
  events,         ///< count each substitution time once
  substitutions,  ///< weight each time by its substitution count
};

struct DispersionResult {
  double ratio = 0.0;
  std::size_t windows = 0;
  /// Standard error of the ratio for Poisson counts.
  double poisson_se = 0.0;
  /// Standard error from the spread of the ratio over kDispersionBlocks
  /// contiguous blocks of windows.
  double block_se = 0.0;
  [[nodiscard]] double se() const { return poisson_se > block_se ? poisson_se : block_se; }
};

inline constexpr std::size_t kDispersionBlocks = 20;

/// Variance-to-mean ratio of counts in consecutive windows of the given
/// width, spanning the first to the last event. Throws ValidationError with
/// fewer than 100 events.
DispersionResult dispersion_of_substitution_times(std::span<const SubstitutionEvent> events, double window,
                                                  DispersionWeight weight = DispersionWeight::events);

struct MassRate {
  double total = 0.0;  ///< substitutions counted
  double span = 0.0;   ///< B-span covered, B_last - B_first
  double rate = 0.0;
  double se = 0.0;     ///< sqrt(rate / span)
};
MassRate substitution_mass_rate(std::span<const SubstitutionEvent> events,
                                std::span<const lookdown::MrcaPoint> points);

}  // namespace mrca::mutation
