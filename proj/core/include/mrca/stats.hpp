#pragma once

// Goodness-of-fit machinery: empirical pmfs, Pearson chi-square with cell
// pooling, one-sample Kolmogorov-Smirnov, moment bands and count dispersion.
// Every function is a deterministic function of its inputs.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrca/extended_level.hpp"
#include "mrca/pmf_table.hpp"

namespace mrca::stats {

class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultAlpha = 0.001;
/// Two-sided normal tail beyond 4 standard errors.
double four_sigma_alpha();

struct GofReport {
  std::string name;
  double statistic = 0.0;
  std::int64_t dof = 0;  ///< chi-square degrees of freedom, 0 otherwise
  std::size_t n = 0;
  double p_value = 1.0;
  double alpha = kDefaultAlpha;
  bool pass = true;  ///< p_value > alpha
  std::string bins;

  [[nodiscard]] nlohmann::json to_json() const;
};

struct EmpiricalPmf {
  PmfTable table;
  std::vector<std::pair<ExtendedLevel, std::size_t>> counts;  ///< same order as table
  std::size_t n = 0;

  [[nodiscard]] double count_of(ExtendedLevel value) const;
};
/// Relative frequencies, values in increasing order with infinity last.
/// Throws StatsError on empty input.
EmpiricalPmf empirical_pmf(std::span<const ExtendedLevel> samples);
EmpiricalPmf empirical_pmf(std::span<const std::int64_t> samples);

struct ChiSquareOptions {
  double min_expected = 5.0;
  double alpha = kDefaultAlpha;
  /// Per-cell absolute probability tolerance: each cell contributes
  /// max(0, |O - E| - allowance * n)^2 / E.
  double allowance = 0.0;
  std::string name = "chi_square";
};

/// Pearson test of the empirical counts against an exact table. Cells of the
/// exact table with expected count below min_expected, together with the mass
/// outside the table, form a tail cell; a tail cell that is itself too small
/// is merged into the smallest remaining cell. Throws StatsError when fewer
/// than two cells remain.
GofReport chi_square_gof(const EmpiricalPmf& empirical, const PmfTable& exact,
                         const ChiSquareOptions& options = {});

/// Upper tail of the asymptotic Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// One-sample KS test against a continuous CDF.
GofReport ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                  std::string name = "ks", double alpha = kDefaultAlpha);
/// KS against Exp(1). Throws StatsError for n < 50 or nonpositive samples.
GofReport ks_test_exp1(std::span<const double> samples, double alpha = kDefaultAlpha);

/// |mean - target| < 4 sd / sqrt(n), and optionally the sample variance
/// within 4 standard errors of target_var (standard error from the fourth
/// central moment). Throws StatsError for n < 100.
GofReport moment_band(std::span<const double> samples, double target_mean,
                      std::optional<double> target_var = std::nullopt, std::string name = "moment_band");

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double m4 = 0.0;        ///< fourth central moment
};
SampleMoments sample_moments(std::span<const double> samples);

double lag1_autocorrelation(std::span<const double> samples);

/// Counts of event times in consecutive windows [from + k w, from + (k+1) w)
/// that lie entirely inside [from, to).
std::vector<std::int64_t> window_counts(std::span<const double> times, double from, double to, double width);
/// Variance-to-mean ratio (unbiased variance).
double dispersion_index(std::span<const std::int64_t> counts);
/// Standard error of the dispersion index of Poisson counts, sqrt(2/(m-1)).
double dispersion_se(std::size_t windows);

}  // namespace mrca::stats
