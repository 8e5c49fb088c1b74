#include "mrca/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace mrca::stats {

double four_sigma_alpha() { return std::erfc(4.0 / std::numbers::sqrt2); }

nlohmann::json GofReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["statistic"] = statistic;
  j["p_value"] = p_value;
  j["pass"] = pass;
  j["n"] = n;
  j["alpha"] = alpha;
  if (dof > 0) j["dof"] = dof;
  if (!bins.empty()) j["bins"] = bins;
  return j;
}

// ---------------------------------------------------------------------------

double EmpiricalPmf::count_of(ExtendedLevel value) const {
  for (const auto& [v, c] : counts) {
    if (v == value) return static_cast<double>(c);
  }
  return 0.0;
}

EmpiricalPmf empirical_pmf(std::span<const ExtendedLevel> samples) {
  if (samples.empty()) throw StatsError("empirical_pmf: empty sample");
  std::map<ExtendedLevel, std::size_t> counts;
  for (const auto& s : samples) ++counts[s];
  EmpiricalPmf out;
  out.n = samples.size();
  for (const auto& [value, c] : counts) {
    out.counts.emplace_back(value, c);
    out.table.add(value, Rational(static_cast<std::int64_t>(c), static_cast<std::int64_t>(out.n)));
  }
  return out;
}

EmpiricalPmf empirical_pmf(std::span<const std::int64_t> samples) {
  std::vector<ExtendedLevel> v;
  v.reserve(samples.size());
  for (auto s : samples) v.emplace_back(s);
  return empirical_pmf(std::span<const ExtendedLevel>(v));
}

// ---------------------------------------------------------------------------

GofReport chi_square_gof(const EmpiricalPmf& empirical, const PmfTable& exact, const ChiSquareOptions& options) {
  if (empirical.n == 0) throw StatsError("chi_square_gof: empty sample");
  const double n = static_cast<double>(empirical.n);

  struct Cell {
    double observed = 0.0;
    double expected = 0.0;
    std::string label;
  };
  std::vector<Cell> kept;
  Cell tail{0.0, 0.0, "tail"};
  double listed_weight = 0.0;
  double listed_observed = 0.0;
  for (const auto& e : exact.entries) {
    const double observed = empirical.count_of(e.value);
    const double expected = n * e.weight;
    listed_weight += e.weight;
    listed_observed += observed;
    if (expected >= options.min_expected) {
      kept.push_back({observed, expected, e.value.to_string()});
    } else {
      tail.observed += observed;
      tail.expected += expected;
    }
  }
  tail.observed += n - listed_observed;
  tail.expected += n * std::max(0.0, 1.0 - listed_weight);

  if (tail.expected >= options.min_expected) {
    kept.push_back(tail);
  } else if (tail.expected > 0.0 || tail.observed > 0.0) {
    if (kept.empty()) throw StatsError("chi_square_gof: all mass pooled into one cell");
    auto smallest = std::min_element(kept.begin(), kept.end(),
                                     [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
    smallest->observed += tail.observed;
    smallest->expected += tail.expected;
    smallest->label += "+tail";
  }
  if (kept.size() < 2) throw StatsError("chi_square_gof: degenerate binning (fewer than two cells)");

  double stat = 0.0;
  std::string bins;
  for (const auto& c : kept) {
    const double excess = std::max(0.0, std::abs(c.observed - c.expected) - options.allowance * n);
    stat += excess * excess / c.expected;
    if (!bins.empty()) bins += ",";
    bins += c.label;
  }
  GofReport r;
  r.name = options.name;
  r.statistic = stat;
  r.dof = static_cast<std::int64_t>(kept.size()) - 1;
  r.n = empirical.n;
  r.alpha = options.alpha;
  r.p_value = stat <= 0.0 ? 1.0 : boost::math::gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * stat);
  r.pass = r.p_value > r.alpha;
  r.bins = bins;
  return r;
}

// ---------------------------------------------------------------------------

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series, fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      s += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

GofReport ks_test(std::span<const double> samples, const std::function<double(double)>& cdf, std::string name,
                  double alpha) {
  if (samples.empty()) throw StatsError("ks_test: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  GofReport r;
  r.name = std::move(name);
  r.statistic = d;
  r.n = x.size();
  r.alpha = alpha;
  r.p_value = kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d);
  r.pass = r.p_value > alpha;
  return r;
}

GofReport ks_test_exp1(std::span<const double> samples, double alpha) {
  if (samples.size() < 50) throw StatsError("ks_test_exp1: need at least 50 samples");
  for (double s : samples) {
    if (!(s > 0.0)) throw StatsError("ks_test_exp1: samples must be positive");
  }
  return ks_test(samples, [](double x) { return -std::expm1(-x); }, "ks_exp1", alpha);
}

// ---------------------------------------------------------------------------

SampleMoments sample_moments(std::span<const double> samples) {
  SampleMoments m;
  if (samples.empty()) return m;
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double s : samples) sum += s;
  m.mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double s : samples) {
    const double d = s - m.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m.variance = samples.size() > 1 ? m2 / (n - 1.0) : 0.0;
  m.m4 = m4 / n;
  return m;
}

GofReport moment_band(std::span<const double> samples, double target_mean, std::optional<double> target_var,
                      std::string name) {
  if (samples.size() < 100) throw StatsError("moment_band: need at least 100 samples");
  const auto m = sample_moments(samples);
  const double n = static_cast<double>(samples.size());
  auto z_of = [](double diff, double se) {
    if (se > 0.0) return std::abs(diff) / se;
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  double z = z_of(m.mean - target_mean, std::sqrt(m.variance / n));
  std::string bins = "mean";
  if (target_var) {
    const double se = std::sqrt(std::max(0.0, m.m4 - m.variance * m.variance) / n);
    z = std::max(z, z_of(m.variance - *target_var, se));
    bins += ",variance";
  }
  GofReport r;
  r.name = std::move(name);
  r.statistic = z;
  r.n = samples.size();
  r.alpha = four_sigma_alpha();
  r.p_value = std::erfc(z / std::numbers::sqrt2);
  r.pass = r.p_value > r.alpha;
  r.bins = bins;
  return r;
}

double lag1_autocorrelation(std::span<const double> samples) {
  if (samples.size() < 3) throw StatsError("lag1_autocorrelation: need at least 3 samples");
  const auto m = sample_moments(samples);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples[i] - m.mean;
    den += d * d;
    if (i + 1 < samples.size()) num += d * (samples[i + 1] - m.mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

std::vector<std::int64_t> window_counts(std::span<const double> times, double from, double to, double width) {
  if (!(width > 0.0)) throw StatsError("window_counts: width must be positive");
  if (!(to > from)) throw StatsError("window_counts: empty range");
  const auto windows = static_cast<std::size_t>(std::floor((to - from) / width));
  std::vector<std::int64_t> counts(windows, 0);
  for (double t : times) {
    if (t < from) continue;
    const auto k = static_cast<std::size_t>(std::floor((t - from) / width));
    if (k < windows) ++counts[k];
  }
  return counts;
}

double dispersion_index(std::span<const std::int64_t> counts) {
  if (counts.size() < 2) throw StatsError("dispersion_index: need at least 2 windows");
  std::vector<double> v(counts.begin(), counts.end());
  const auto m = sample_moments(v);
  if (m.mean <= 0.0) throw StatsError("dispersion_index: no events");
  return m.variance / m.mean;
}

double dispersion_se(std::size_t windows) {
  return windows > 1 ? std::sqrt(2.0 / static_cast<double>(windows - 1)) : std::numeric_limits<double>::infinity();
}

}  // namespace mrca::stats
