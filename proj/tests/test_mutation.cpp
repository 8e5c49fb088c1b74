#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mrca/analytics.hpp"
#include "mrca/mutation.hpp"
#include "mrca/particles.hpp"
#include "mrca/stats.hpp"

using namespace mrca;
using namespace mrca::mutation;
using lookdown::MrcaPoint;

namespace {

// (E, B) pairs from the particle system: exits with known arrival times.
std::vector<MrcaPoint> particle_points(double horizon, std::uint64_t seed) {
  particles::ParticleSimConfig c;
  c.particle_cap = 1000;
  c.horizon = horizon;
  c.seed = seed;
  const auto r = particles::simulate(c);
  std::vector<MrcaPoint> pts;
  for (const auto& x : r.exits) {
    if (!std::isnan(x.B)) pts.push_back({x.E, x.B});
  }
  return pts;
}

}  // namespace

TEST_SUITE("mutation") {
  TEST_CASE("validation") {
    MutationConfig bad;
    bad.theta = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    MutationConfig ok;
    const std::vector<MrcaPoint> one{{1.0, 0.5}};
    CHECK_THROWS_AS(simulate_substitutions(one, ok), ValidationError);
    const std::vector<MrcaPoint> unsorted{{2.0, 0.5}, {1.0, 0.7}};
    CHECK_THROWS_AS(simulate_substitutions(unsorted, ok), ValidationError);
    const std::vector<MrcaPoint> b_after_e{{1.0, 0.5}, {2.0, 2.5}};
    CHECK_THROWS_AS(simulate_substitutions(b_after_e, ok), ValidationError);
    const std::vector<MrcaPoint> b_decreasing{{1.0, 0.5}, {2.0, 0.4}};
    CHECK_THROWS_AS(simulate_substitutions(b_decreasing, ok), ValidationError);
  }

  TEST_CASE("tiny theta gives no substitutions") {
    const std::vector<MrcaPoint> pts{{1.0, 0.5}, {2.0, 1.5}, {3.0, 2.0}};
    MutationConfig c;
    c.theta = 1e-12;
    c.seed = 4;
    CHECK(simulate_substitutions(pts, c).empty());
  }

  TEST_CASE("mass, clustering and support on MRCA times") {
    const auto pts = particle_points(12000.0, 3);
    REQUIRE(pts.size() >= 10000);
    MutationConfig c;
    c.theta = 2.0;
    c.seed = 5;
    const auto subs = simulate_substitutions(pts, c);
    REQUIRE(subs.size() > 100);

    std::set<double> es;
    for (const auto& p : pts) es.insert(p.E);
    double total = 0.0;
    for (std::size_t k = 0; k < subs.size(); ++k) {
      CHECK(subs[k].S >= 1);
      CHECK(es.count(subs[k].E) == 1);
      if (k) CHECK(subs[k].E > subs[k - 1].E);
      total += static_cast<double>(subs[k].S);
    }
    CHECK(subs.front().E > pts.front().E);

    const auto mass = substitution_mass_rate(subs, pts);
    CHECK(std::abs(mass.rate - 1.0) < 4.0 * mass.se);
    CHECK(mass.total == doctest::Approx(total));

    const double span = pts.back().E - pts.front().E;
    CHECK(total / static_cast<double>(subs.size()) > 1.0);
    CHECK(static_cast<double>(subs.size()) / span < 1.0);

    const auto d = dispersion_of_substitution_times(subs, 5.0, DispersionWeight::substitutions);
    CHECK(d.ratio > 1.0 + 4.0 * d.se());
  }

  TEST_CASE("dispersion of a Poisson stream is one") {
    Rng rng(6);
    std::vector<SubstitutionEvent> ev;
    double t = 0.0;
    for (int k = 0; k < 20000; ++k) {
      t += rng.exponential(1.0);
      ev.push_back({t, 1});
    }
    for (double w : {0.5, 2.0, 5.0}) {
      const auto d = dispersion_of_substitution_times(ev, w);
      CHECK(std::abs(d.ratio - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(d.windows)));
    }
    // Narrow windows hold at most one event: counts become Bernoulli.
    const auto narrow = dispersion_of_substitution_times(ev, 0.01);
    CHECK(std::abs(narrow.ratio - 1.0) < 0.02);
    CHECK_THROWS_AS(dispersion_of_substitution_times(std::span(ev).first(50), 1.0), ValidationError);
  }

  TEST_CASE("T_c sampler") {
    Rng rng(7);
    std::vector<double> d(100000);
    for (auto& x : d) {
      x = sample_Tc(rng);
      REQUIRE(x > 0.0);
    }
    const auto m = stats::sample_moments(d);
    CHECK(std::abs(m.mean - analytics::expected_Tc()) < 3.0 * std::sqrt(m.variance / 1e5));
    // Segregating sites of a 2-sample at theta = 1: theta E[T_c], about 42% below equilibrium.
    CHECK(1.0 * analytics::expected_Tc() == doctest::Approx(0.58).epsilon(0.01));
  }

  TEST_CASE("same seed, same substitutions") {
    const std::vector<MrcaPoint> pts{{1.0, 0.5}, {2.0, 1.5}, {3.0, 2.0}, {5.0, 4.5}};
    MutationConfig c;
    c.theta = 5.0;
    c.seed = 9;
    const auto a = simulate_substitutions(pts, c);
    const auto b = simulate_substitutions(pts, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].E == b[k].E);
      CHECK(a[k].S == b[k].S);
    }
  }
}
