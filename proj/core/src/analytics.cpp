#include "mrca/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/trigamma.hpp>

namespace mrca::analytics {

namespace {

using boost::multiprecision::cpp_int;

Rational ratio(std::int64_t num, std::int64_t den) {
  return Rational(cpp_int(num), cpp_int(den));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// C(n, k) exactly.
cpp_int binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  cpp_int r = 1;
  for (std::int64_t m = 1; m <= k; ++m) {
    r *= (n - k + m);
    r /= m;
  }
  return r;
}

}  // namespace

std::int64_t choose2(std::int64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

Rational pmf_L_exact(std::int64_t level) {
  require(level >= 1, "pmf_L: level must be >= 1");
  return Rational(cpp_int(2), cpp_int(level + 1) * cpp_int(level + 2));
}

double pmf_L(std::int64_t level) { return to_double(pmf_L_exact(level)); }

Rational survival_L(std::int64_t level) {
  require(level >= 1, "survival_L: level must be >= 1");
  return ratio(2, level + 1);
}

Rational pmf_LI_exact(std::int64_t level, ExtendedLevel i) {
  if (level == 1 && i.is_infinite()) return ratio(1, 3);
  if (level >= 2 && i.is_finite() && i.value() >= 3) {
    return Rational(cpp_int(level - 1), 3 * binomial(level + i.value(), level));
  }
  return Rational(0);
}

double pmf_LI(std::int64_t level, ExtendedLevel i) { return to_double(pmf_LI_exact(level, i)); }

Rational joint_I(std::span<const std::int64_t> finite_levels) {
  for (std::size_t m = 0; m < finite_levels.size(); ++m) {
    require(finite_levels[m] > 2, "joint_I: levels must exceed 2");
    if (m > 0) require(finite_levels[m] > finite_levels[m - 1], "joint_I: levels must increase");
  }
  // l = number of finite entries + 1.
  const auto l = static_cast<std::int64_t>(finite_levels.size()) + 1;
  cpp_int num = 1;
  for (std::int64_t q = 2; q <= l; ++q) num *= q;      // l!
  for (std::int64_t q = 2; q <= l - 1; ++q) num *= q;  // (l-1)!
  cpp_int den = 3;
  for (std::size_t idx = 0; idx < finite_levels.size(); ++idx) {
    const std::int64_t m = static_cast<std::int64_t>(idx) + 2;
    const std::int64_t i = finite_levels[idx];
    den *= cpp_int(i + m) * cpp_int(i + m - 1);
  }
  return Rational(num, den);
}

Rational K_transition(std::int64_t j, std::int64_t k) {
  require(k >= 1 && j > k, "K_transition: need j > k >= 1");
  return ratio(choose2(k + 1), choose2(j + 1));
}

Rational K_marginal(std::int64_t j, std::int64_t k) {
  require(k >= 1 && j > k, "K_marginal: need j > k >= 1");
  return ratio(j + 1, j - 1) * pmf_L_exact(k);
}

Rational pi_lambda(std::span<const std::int64_t> levels) {
  Rational p = ratio(1, 3);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const std::int64_t l = levels[k];
    if (l <= 1) {
      // Trailing ones are the implicit tail of the configuration.
      for (std::size_t r = k; r < levels.size(); ++r)
        if (levels[r] != 1) return Rational(0);
      break;
    }
    if (k > 0 && l >= levels[k - 1]) return Rational(0);
    p *= Rational(cpp_int(2), cpp_int(l + 2) * cpp_int(l - 1));
  }
  return p;
}

Rational pi_lambda(const ParticleConfig& config) { return pi_lambda(config.levels); }

double f_weight(std::int64_t level) {
  return 1.0 / (static_cast<double>(level + 2) * static_cast<double>(level - 1));
}

double b_coefficient(int j) {
  return 1.0 + std::pow(2.0, -j) + std::pow(3.0, -j);
}

double zeta(int j) {
  require(j >= 2, "zeta: argument must be >= 2");
  // Sum n < N directly (smallest terms first), then the Euler-Maclaurin tail
  // sum_{n >= N} n^-s = N^{1-s}/(s-1) + N^-s/2 + sum_k B_2k/(2k)! s^(2k-1 rising) N^{-s-2k+1}.
  constexpr int N = 64;
  const double s = j;
  double head = 0.0;
  for (int n = N - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -s);
  const double Nd = N;
  double tail = std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0};
  double rising = s;  // s (s+1) ... (s+2k-2)
  double power = std::pow(Nd, -s - 1.0);
  for (int k = 0; k < 5; ++k) {
    tail += kBernoulliOverFactorial[k] * rising * power;
    rising *= (s + 2 * k + 1) * (s + 2 * k + 2);
    power /= Nd * Nd;
  }
  return head + tail;
}

SeriesValue x_k_series(int k) {
  require(k >= 1, "x_k: k must be >= 1");
  if (k == 1) {
    // Harmonic-type decay: add the midpoint-rule integral of the tail.
    constexpr std::int64_t L = 200000;
    double sum = 0.0;
    for (std::int64_t l = L; l >= 2; --l) sum += f_weight(l);
    const double a = static_cast<double>(L) + 0.5;
    const double tail = std::log((a + 2.0) / (a - 1.0)) / 3.0;
    // Midpoint error is bounded by |g'(L)| / 24 summed geometrically; g' ~ 2/L^3.
    const double bound = 1.0 / (std::pow(static_cast<double>(L), 3));
    return {sum + tail, bound};
  }
  // sum_{l > L} f(l)^k <= sum_{m >= L} m^{-2k} <= (L-1)^{1-2k}/(2k-1).
  constexpr double kTarget = 1e-13;
  std::int64_t L = 2;
  while (std::pow(static_cast<double>(L - 1), 1.0 - 2.0 * k) / (2.0 * k - 1.0) >= kTarget || L < 3) ++L;
  double sum = 0.0;
  for (std::int64_t l = L; l >= 2; --l) sum += std::pow(f_weight(l), k);
  return {sum, std::pow(static_cast<double>(L - 1), 1.0 - 2.0 * k) / (2.0 * k - 1.0)};
}

std::pair<double, double> mean_var_Z() {
  return {1.0, 14.0 - 4.0 * std::numbers::pi * std::numbers::pi / 3.0};
}

SeriesValue pgf_Z(double u) {
  require(u >= 0.0 && u <= 1.0, "pgf_Z: u must lie in [0, 1]");
  constexpr std::int64_t L = 100000;
  double log_sum = 0.0;
  for (std::int64_t i = L; i >= 2; --i) {
    const double di = static_cast<double>(i);
    log_sum += std::log1p(2.0 * u / ((di + 2.0) * (di - 1.0)));
  }
  // First-order tail: 2u sum_{i > L} f(i), which telescopes.
  const double Ld = static_cast<double>(L);
  log_sum += 2.0 * u * (1.0 / Ld + 1.0 / (Ld + 1.0) + 1.0 / (Ld + 2.0)) / 3.0;
  const double bound = 2.0 * u * u / (3.0 * std::pow(Ld - 1.0, 3));
  const double value = std::exp(log_sum) / 3.0;
  return {value, value * bound * 1.01};
}

Moments moments_S(std::int64_t i) {
  require(i >= 1, "moments_S: i must be >= 1");
  const double K = static_cast<double>(i);
  double variance = 0.0;
  if (i <= 100) {
    // sum_{k>i} (1/(k-1) - 1/k)^2 = psi'(i) + psi'(i+1) - 2/i.
    variance = 4.0 * (boost::math::trigamma(K) + boost::math::trigamma(K + 1.0) - 2.0 / K);
  } else {
    // Asymptotic form of the same sum; avoids cancellation for large i.
    variance = 4.0 / (3.0 * K * K * K) - 4.0 / (15.0 * std::pow(K, 5)) + 4.0 / (21.0 * std::pow(K, 7));
  }
  return {2.0 / K, variance};
}

double sample_S(std::int64_t i, Rng& rng, const SSampler& options) {
  require(i >= 1, "sample_S: i must be >= 1");
  const std::int64_t cut = std::max<std::int64_t>(options.exact_terms, i);
  double total = 0.0;
  for (std::int64_t k = i + 1; k <= cut; ++k) total += rng.exponential(static_cast<double>(choose2(k)));
  const Moments rem = moments_S(cut);
  total += rng.gamma(rem.mean * rem.mean / rem.variance, rem.variance / rem.mean);
  return total;
}

std::int64_t sample_L(Rng& rng) {
  // P[L >= l] = 2/(l+1): invert the survival function.
  const double u = rng.uniform_open_low();
  const double x = std::floor(2.0 / u - 1.0);
  constexpr double kCap = 4.0e18;
  return x >= kCap ? static_cast<std::int64_t>(kCap) : std::max<std::int64_t>(1, static_cast<std::int64_t>(x));
}

std::int64_t sample_L_below(std::int64_t bound, Rng& rng) {
  require(bound >= 2, "sample_L_below: bound must be >= 2");
  for (;;) {
    const std::int64_t l = sample_L(rng);
    if (l < bound) return l;
  }
}

double expected_Tc() { return 2.0 * std::numbers::pi * std::numbers::pi / 3.0 - 6.0; }

SMixture pmf_Tc_mixture(std::int64_t max_level) {
  require(max_level >= 1, "pmf_Tc_mixture: max_level must be >= 1");
  SMixture m;
  for (std::int64_t l = 1; l <= max_level; ++l) m.components.push_back({pmf_L_exact(l), l + 1});
  m.tail_weight = to_double(survival_L(max_level + 1));
  return m;
}

double sample_Tc(Rng& rng, const SSampler& options) {
  return sample_S(sample_L(rng) + 1, rng, options);
}

double sample_exit_mixture(Rng& rng, const SSampler& options) {
  return sample_S(sample_L(rng), rng, options);
}

PmfTable table_L(std::int64_t max_level) {
  require(max_level >= 1, "table_L: max_level must be >= 1");
  PmfTable t;
  for (std::int64_t l = 1; l <= max_level; ++l) t.add(ExtendedLevel(l), pmf_L_exact(l));
  t.tail_bound = to_double(survival_L(max_level + 1));
  return t;
}

PmfTable table_LI(std::int64_t level, std::int64_t max_i) {
  require(level >= 1, "table_LI: level must be >= 1");
  PmfTable t;
  if (level == 1) {
    t.add(ExtendedLevel::infinity(), Rational(1));
    return t;
  }
  require(max_i >= 3, "table_LI: max_i must be >= 3");
  const Rational row = pmf_L_exact(level);
  Rational listed = 0;
  for (std::int64_t i = 3; i <= max_i; ++i) {
    const Rational w = pmf_LI_exact(level, ExtendedLevel(i)) / row;
    listed += w;
    t.add(ExtendedLevel(i), w);
  }
  t.tail_bound = to_double(1 - listed);
  return t;
}

PmfTable table_K_marginal(std::int64_t j) {
  require(j >= 2, "table_K_marginal: j must be >= 2");
  PmfTable t;
  for (std::int64_t k = 1; k < j; ++k) t.add(ExtendedLevel(k), K_marginal(j, k));
  return t;
}

PmfTable table_Z(int max_z) {
  require(max_z >= 0, "table_Z: max_z must be >= 0");
  PmfTable t;
  double listed = 0.0;
  for (int z = 0; z <= max_z; ++z) {
    if (z == 0) {
      t.add(ExtendedLevel(0), ratio(1, 3));
    } else if (z == 1) {
      // (2/3) * x_1 with x_1 = 11/18.
      t.add(ExtendedLevel(1), ratio(11, 27));
    } else {
      t.add(ExtendedLevel(z), pmf_Z(z));
    }
    listed += t.entries.back().weight;
  }
  t.tail_bound = std::max(0.0, 1.0 - listed) + 1e-12;
  return t;
}

std::vector<ConfigWeight> enumerate_pi_lambda(std::int64_t max_leading, std::size_t max_count) {
  require(max_leading >= 1, "enumerate_pi_lambda: max_leading must be >= 1");
  std::vector<ConfigWeight> out;
  ParticleConfig current;
  std::function<void(std::int64_t)> recurse = [&](std::int64_t below) {
    out.push_back({current, pi_lambda(current)});
    if (current.count() >= max_count) return;
    for (std::int64_t l = below - 1; l >= 2; --l) {
      current.levels.push_back(l);
      recurse(l);
      current.levels.pop_back();
    }
  };
  recurse(max_leading + 1);
  return out;
}

std::int64_t config_code(const ParticleConfig& config, std::int64_t max_leading, std::size_t max_count) {
  if (config.count() > max_count || config.leading() > max_leading) return -1;
  std::int64_t code = 0;
  for (std::int64_t l : config.levels) code |= std::int64_t{1} << (l - 2);
  return code;
}

PmfTable table_pi_codes(std::int64_t max_leading, std::size_t max_count) {
  require(max_leading <= 62, "table_pi_codes: max_leading too large for a bitmask code");
  PmfTable t;
  Rational listed = 0;
  for (const auto& cw : enumerate_pi_lambda(max_leading, max_count)) {
    t.add(ExtendedLevel(config_code(cw.config, max_leading, max_count)), cw.weight);
    listed += cw.weight;
  }
  t.tail_bound = to_double(1 - listed);
  return t;
}

}  // namespace mrca::analytics
