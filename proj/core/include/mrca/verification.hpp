#pragma once

// Acceptance suite: every criterion confronts the simulators with the exact
// laws. Criteria are numbered 1..11; each produces named checks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mrca::verification {

enum class Profile { quick, full };
Profile parse_profile(const std::string& name);  ///< throws std::invalid_argument
std::string to_string(Profile profile);

/// Sample sizes and size floors of a profile. The full profile uses the
/// sizes of the acceptance criteria; quick scales them down for smoke runs.
struct ProfileSizes {
  std::size_t stationary_draws = 100000;
  double particle_horizon = 200000.0;
  std::int64_t particle_cap = 10000;
  double z_spacing = 5.0;
  std::size_t min_z_samples = 10000;
  std::size_t min_exit_gaps = 10000;
  int lookdown_levels = 1000;
  std::size_t lookdown_samples = 12000;
  double lookdown_spacing = 3.0;
  std::size_t min_lookdown_samples = 5000;
  std::size_t min_bin_samples = 300;
  std::size_t mixture_draws = 100000;
  std::size_t tc_draws = 100000;
  int structural_realizations = 100;
  int structural_levels = 1000;
  int K_max_j = 50;
  double theta = 2.0;
  std::size_t min_mrca_points = 10000;
  double dispersion_window = 5.0;
};
ProfileSizes sizes_for(Profile profile);

struct Check {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  std::string error;  ///< set when the criterion threw

  [[nodiscard]] bool pass() const;
  /// "criterion 3 PASS (12.1 s) particle equilibrium: ..." style line.
  [[nodiscard]] std::string summary_line() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct SuiteOptions {
  Profile profile = Profile::full;
  std::uint64_t seed = 20240601;
  std::vector<int> only;  ///< empty: all criteria
};

struct SuiteReport {
  Profile profile = Profile::full;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr int kCriterionCount = 11;

/// Runs the selected criteria in order; on_result is called after each one.
SuiteReport run_suite(const SuiteOptions& options,
                      const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace mrca::verification
