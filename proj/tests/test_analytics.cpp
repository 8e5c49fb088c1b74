#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "mrca/analytics.hpp"
#include "mrca/particles.hpp"
#include "mrca/random.hpp"
#include "mrca/stats.hpp"

using namespace mrca;
using namespace mrca::analytics;

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
Rational q(std::int64_t a, std::int64_t b) { return Rational(a, b); }
}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("pmf_L") {
    CHECK(pmf_L_exact(1) == q(1, 3));
    CHECK(pmf_L_exact(2) == q(1, 6));
    CHECK(pmf_L_exact(5) == q(1, 21));
    CHECK(survival_L(1) == 1);
    double sum = 0.0;
    constexpr std::int64_t kMax = 1000000;
    for (std::int64_t l = kMax; l >= 1; --l) sum += pmf_L(l);
    CHECK(std::abs(sum + to_double(survival_L(kMax + 1)) - 1.0) < 1e-9);
  }

  TEST_CASE("pmf_LI") {
    CHECK(pmf_LI_exact(2, ExtendedLevel(3)) == q(1, 30));
    CHECK(pmf_LI_exact(3, ExtendedLevel(3)) == q(1, 30));
    CHECK(pmf_LI_exact(1, ExtendedLevel::infinity()) == q(1, 3));
    CHECK(pmf_LI_exact(2, ExtendedLevel(2)) == 0);
    CHECK(pmf_LI_exact(1, ExtendedLevel(5)) == 0);
    CHECK(pmf_LI_exact(2, ExtendedLevel::infinity()) == 0);
    double sum = 0.0;
    constexpr std::int64_t kMax = 100000;
    for (std::int64_t i = kMax; i >= 3; --i) sum += pmf_LI(2, ExtendedLevel(i));
    sum += 2.0 / (3.0 * static_cast<double>(kMax + 2));
    CHECK(std::abs(sum - 1.0 / 6.0) < 1e-9);
  }

  TEST_CASE("joint_I") {
    CHECK(joint_I({}) == q(1, 3));
    const std::vector<std::int64_t> one{3};
    CHECK(joint_I(one) == q(1, 30));
    for (std::int64_t i = 3; i < 30; ++i) {
      const std::vector<std::int64_t> v{i};
      CHECK(joint_I(v) == pmf_LI_exact(2, ExtendedLevel(i)));
    }
    const std::vector<std::int64_t> bad{4, 4};
    CHECK_THROWS_AS(joint_I(bad), DomainError);
    const std::vector<std::int64_t> low{2};
    CHECK_THROWS_AS(joint_I(low), DomainError);
  }

  TEST_CASE("K chain") {
    CHECK(K_transition(2, 1) == q(1, 3));
    CHECK(K_marginal(3, 1) == q(2, 3));
    CHECK(K_marginal(3, 2) == q(1, 3));
    CHECK_THROWS_AS(K_transition(2, 2), DomainError);
    CHECK_THROWS_AS(K_marginal(3, 3), DomainError);
    for (std::int64_t k = 1; k <= 5; ++k) {
      CHECK(std::abs(to_double(K_marginal(1000000, k)) - pmf_L(k)) < 1e-5);
    }
  }

  TEST_CASE("pi_lambda") {
    CHECK(pi_lambda(ParticleConfig{}) == q(1, 3));
    CHECK(pi_lambda(ParticleConfig{{3, 2}}) == q(1, 30));
    CHECK(pi_lambda(ParticleConfig{{2, 3}}) == 0);
    CHECK(pi_lambda(ParticleConfig{{3, 3}}) == 0);
    // Complete enumeration for leading level <= 8 reproduces pmf_L exactly.
    std::map<std::int64_t, Rational> by_leading;
    for (const auto& cw : enumerate_pi_lambda(8, 8)) by_leading[cw.config.leading()] += cw.weight;
    for (std::int64_t l = 1; l <= 8; ++l) CHECK(by_leading[l] == pmf_L_exact(l));
  }

  TEST_CASE("x_k and p_z") {
    CHECK(std::abs(x_k(1, XMethod::closed_form) - 11.0 / 18.0) < 1e-12);
    CHECK(std::abs(x_k(1, XMethod::series) - 11.0 / 18.0) < 1e-10);
    CHECK(std::abs(x_k(2, XMethod::series) - 0.0785039) < 5e-8);
    CHECK(x_k_series(2).tail_bound < 1e-10);
    CHECK(p_z(0) == 1.0);
    CHECK(std::abs(p_z(1) - 11.0 / 18.0) < 1e-12);
    const double x1 = x_k(1);
    const double x2 = x_k(2);
    CHECK(std::abs(p_z(2) - 0.5 * (x1 * x1 - x2)) < 1e-12);
    CHECK(std::abs(p_z(2) - 0.1474765) < 5e-8);
    CHECK(std::abs(4.0 / 3.0 * p_z(2) - pmf_Z(2)) < 1e-12);
  }

  TEST_CASE("Z law") {
    CHECK(std::abs(pmf_Z(0) - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(pmf_Z(1) - 11.0 / 27.0) < 1e-12);
    CHECK(std::abs(pmf_Z(2) - (107.0 / 243.0 - 2.0 * kPi2 / 81.0)) < 1e-9);
    CHECK(std::abs(pmf_Z(3) - (1003.0 / 2187.0 - 10.0 * kPi2 / 243.0)) < 1e-9);
    CHECK(std::abs(pgf_Z(1.0).value - 1.0) < 1e-9);
    const auto [m, v] = mean_var_Z();
    CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v == doctest::Approx(0.84052).epsilon(1e-5));
    const auto z = table_Z(6);
    REQUIRE(z.entries.size() >= 2);
    CHECK(z.entries[0].exact == q(1, 3));
    CHECK(z.entries[1].exact == q(11, 27));
  }

  TEST_CASE("zeta") {
    CHECK(std::abs(zeta(2) - kPi2 / 6.0) < 1e-12);
    CHECK(std::abs(zeta(4) - kPi2 * kPi2 / 90.0) < 1e-12);
    CHECK(std::abs(zeta(3) - 1.2020569032) < 1e-10);
  }

  TEST_CASE("S moments and samplers") {
    CHECK(moments_S(1).mean == doctest::Approx(2.0));
    CHECK(moments_S(2).mean == doctest::Approx(1.0));
    Rng rng(5);
    std::vector<double> s1(100000);
    for (auto& s : s1) s = sample_S(1, rng);
    const auto m = stats::sample_moments(s1);
    CHECK(std::abs(m.mean - 2.0) < 4.0 * std::sqrt(moments_S(1).variance / 1e5));
    CHECK(std::abs(m.variance - moments_S(1).variance) < 0.05);
  }

  TEST_CASE("T_c") {
    CHECK(expected_Tc() == doctest::Approx(0.5797362).epsilon(1e-7));
    double series = 0.0;
    for (std::int64_t l = 2000000; l >= 1; --l) {
      const double d = static_cast<double>(l);
      series += 2.0 / ((d + 1.0) * (d + 2.0)) * 2.0 / (d + 1.0);
    }
    CHECK(std::abs(series - expected_Tc()) < 1e-10);
    const auto mix = pmf_Tc_mixture(50);
    double mean = 0.0;
    double w = 0.0;
    for (const auto& c : mix.components) {
      mean += to_double(c.weight) * moments_S(c.s_from).mean;
      w += to_double(c.weight);
    }
    CHECK(std::abs(w + mix.tail_weight - 1.0) < 1e-12);
    CHECK(mean <= expected_Tc());
    CHECK(expected_Tc() - mean < 2.0 * mix.tail_weight);
  }

  TEST_CASE("sample_L cellwise") {
    Rng rng(17);
    constexpr int n = 100000;
    std::map<std::int64_t, int> counts;
    for (int k = 0; k < n; ++k) ++counts[sample_L(rng)];
    for (std::int64_t l = 1; l <= 10; ++l) {
      const double p = pmf_L(l);
      CHECK(std::abs(counts[l] / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1.0 - p) / n));
    }
  }

  TEST_CASE("sample_stationary frequencies") {
    Rng rng(3);
    constexpr int n = 100000;
    int empty = 0;
    int c32 = 0;
    for (int k = 0; k < n; ++k) {
      const auto c = particles::sample_stationary(rng);
      REQUIRE(c.valid());
      empty += c.empty() ? 1 : 0;
      c32 += c == ParticleConfig{{3, 2}} ? 1 : 0;
    }
    CHECK(std::abs(empty / static_cast<double>(n) - 1.0 / 3.0) < 4.0 * std::sqrt(2.0 / 9.0 / n));
    CHECK(std::abs(c32 / static_cast<double>(n) - 1.0 / 30.0) < 4.0 * std::sqrt(29.0 / 900.0 / n));
  }

  TEST_CASE("tables normalize within their tail bounds") {
    std::vector<PmfTable> tables{table_L(50), table_LI(1, 10), table_LI(3, 60), table_K_marginal(12),
                                 table_Z(10), table_pi_codes(10, 3)};
    for (const auto& t : tables) {
      CHECK_NOTHROW(t.validate());
      CHECK(t.total() <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("config codes") {
    CHECK(config_code(ParticleConfig{}, 10, 3) == 0);
    CHECK(config_code(ParticleConfig{{11}}, 10, 3) == -1);
    CHECK(config_code(ParticleConfig{{6, 5, 4, 3}}, 10, 3) == -1);
    CHECK(config_code(ParticleConfig{{3, 2}}, 10, 3) != config_code(ParticleConfig{{3}}, 10, 3));
  }
}
