#pragma once

// Closed-form laws of the MRCA process: the level L of the next fixation
// curve, the pair (L, I), the embedded chains I^k and K^j, the stationary
// particle law, the number Z of pending MRCAs, Kingman holding-time sums
// S_i^inf and the pairwise coalescence time at an MRCA change.
//
// Finite products and ratios are returned as exact rationals; anything that
// involves zeta values or an infinite series is a double together with an
// explicit truncation bound.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mrca/extended_level.hpp"
#include "mrca/particle_config.hpp"
#include "mrca/pmf_table.hpp"
#include "mrca/random.hpp"

namespace mrca::analytics {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// C(n, 2) as an exact integer.
std::int64_t choose2(std::int64_t n);

// ---------------------------------------------------------------------------
// L and (L, I)

/// P[L = level] = 2 / ((level+1)(level+2)), level >= 1.
Rational pmf_L_exact(std::int64_t level);
double pmf_L(std::int64_t level);
/// P[L >= level] = 2 / (level + 1).
Rational survival_L(std::int64_t level);

/// P[L = level, I = i]; zero off the support {(1, inf)} u {level >= 2, i >= 3}.
Rational pmf_LI_exact(std::int64_t level, ExtendedLevel i);
double pmf_LI(std::int64_t level, ExtendedLevel i);

/// P[I^2 = i_2, ..., I^l = i_l, I^{l+1} = ... = inf] for 2 < i_2 < ... < i_l.
/// The empty tuple is the all-infinite event. Throws DomainError when the
/// arguments are not strictly increasing or not above 2.
Rational joint_I(std::span<const std::int64_t> finite_levels);

/// P[K^{j+1} = k+1 | K^j = k] = C(k+1,2) / C(j+1,2), for j > k >= 1.
Rational K_transition(std::int64_t j, std::int64_t k);
/// P[K^j = k] = (j+1)/(j-1) * 2/((k+1)(k+2)), for j > k >= 1.
Rational K_marginal(std::int64_t j, std::int64_t k);

/// Stationary law of the particle configuration. Ill-ordered input has
/// probability zero.
Rational pi_lambda(std::span<const std::int64_t> levels);
Rational pi_lambda(const ParticleConfig& config);

// ---------------------------------------------------------------------------
// Z, the number of fixation curves present

/// Truncated-series value with a bound on the neglected remainder.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

enum class XMethod { series, closed_form };
enum class PMethod { recursion, partition };

/// Riemann zeta by direct summation with an Euler-Maclaurin tail, j >= 2.
double zeta(int j);
/// b_j = 1 + 2^-j + 3^-j.
double b_coefficient(int j);
/// f(l) = 1 / ((l+2)(l-1)).
double f_weight(std::int64_t level);

/// x_k = sum_{l >= 2} f(l)^k by truncated summation.
SeriesValue x_k_series(int k);
double x_k(int k, XMethod method = XMethod::closed_form);

/// Elementary symmetric sums p_z of the weights f(l); p_0 = 1.
double p_z(int z, PMethod method = PMethod::recursion);
/// Largest z accepted by the partition route.
inline constexpr int kMaxPartitionZ = 30;

/// P[Z = z] = 2^z p_z / 3.
double pmf_Z(int z);
/// E[u^Z] for u in [0, 1], from the infinite log-product.
SeriesValue pgf_Z(double u);
/// (E[Z], Var[Z]) = (1, 14 - 4 pi^2 / 3).
std::pair<double, double> mean_var_Z();

// ---------------------------------------------------------------------------
// Kingman holding times T_k ~ Exp(C(k,2)) and S_i^inf = sum_{k > i} T_k

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean 2/i, variance sum_{k>i} 4/(k(k-1))^2.
Moments moments_S(std::int64_t i);

/// Options for sampling S_i^inf. Terms k = i+1 .. exact_terms are drawn
/// exactly; the remainder S_{K*}^inf is drawn from the gamma law with the
/// same mean and variance (its third cumulant differs by < 1.5 K*^-5).
struct SSampler {
  std::int64_t exact_terms = 256;
};
double sample_S(std::int64_t i, Rng& rng, const SSampler& options = {});

/// Draws from P[L = l] = 2/((l+1)(l+2)).
std::int64_t sample_L(Rng& rng);
/// Draws from pmf_L restricted to {value < bound}, bound >= 2.
std::int64_t sample_L_below(std::int64_t bound, Rng& rng);

/// E[T_c] = 2 pi^2 / 3 - 6.
double expected_Tc();

struct MixtureComponent {
  Rational weight;
  std::int64_t s_from = 1;  ///< component law is S_{s_from}^inf
};
/// A countable mixture of S-laws, listed up to some index, with the omitted
/// weight reported separately.
struct SMixture {
  std::vector<MixtureComponent> components;
  double tail_weight = 0.0;
};
/// T_c = sum_l 2/((l+1)(l+2)) * law(S_{l+1}^inf), listed for l <= max_level.
SMixture pmf_Tc_mixture(std::int64_t max_level = 50);
/// Draw of T_c.
double sample_Tc(Rng& rng, const SSampler& options = {});
/// Draw of sum_l pmf_L(l) * law(S_l^inf), which is Exp(1).
double sample_exit_mixture(Rng& rng, const SSampler& options = {});

// ---------------------------------------------------------------------------
// Tables

PmfTable table_L(std::int64_t max_level);
/// Law of I given L = level, i = 3 .. max_i (the single point infinity when
/// level == 1). Joint weights are pmf_L(level) times these.
PmfTable table_LI(std::int64_t level, std::int64_t max_i);
PmfTable table_K_marginal(std::int64_t j);
PmfTable table_Z(int max_z);

struct ConfigWeight {
  ParticleConfig config;
  Rational weight;
};
/// All configurations with leading level <= max_leading and at most
/// max_count particles, with their stationary probabilities.
std::vector<ConfigWeight> enumerate_pi_lambda(std::int64_t max_leading, std::size_t max_count);

/// Integer code of a configuration for binning: bitmask over levels
/// 2..max_leading, or -1 when the configuration falls outside that box or
/// has more than max_count particles.
std::int64_t config_code(const ParticleConfig& config, std::int64_t max_leading,
                         std::size_t max_count);

/// pi_lambda tabulated by config_code over the box; the remaining mass is the
/// tail.
PmfTable table_pi_codes(std::int64_t max_leading, std::size_t max_count);

}  // namespace mrca::analytics
