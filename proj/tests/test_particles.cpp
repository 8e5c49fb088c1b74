#include <doctest.h>

#include <cmath>

#include "mrca/particles.hpp"
#include "mrca/random.hpp"
#include "mrca/stats.hpp"

using namespace mrca;
using namespace mrca::particles;

TEST_SUITE("particles") {
  TEST_CASE("branch rates") {
    const auto r2 = branch_rates(ParticleConfig{{2}});
    REQUIRE(r2.push_rates.size() == 1);
    CHECK(r2.push_rates[0] == 2.0);
    CHECK(r2.arrival == 1.0);
    CHECK(r2.total() == 3.0);

    const auto r0 = branch_rates(ParticleConfig{});
    CHECK(r0.push_rates.empty());
    CHECK(r0.total() == 1.0);

    const auto r52 = branch_rates(ParticleConfig{{5, 2}});
    REQUIRE(r52.push_rates.size() == 2);
    CHECK(r52.push_rates[0] == 12.0);
    CHECK(r52.push_rates[1] == 2.0);
    CHECK(r52.total() == 15.0);
  }

  TEST_CASE("empty configuration only admits an arrival") {
    Rng rng(1);
    const auto [next, ev] = step(ParticleConfig{}, 0.0, rng);
    CHECK(next == ParticleConfig{{2}});
    CHECK(ev.kind == TransitionKind::arrival);
    CHECK(ev.time > 0.0);
  }

  TEST_CASE("holding time and branch frequencies from (5,2)") {
    Rng rng(2);
    constexpr int n = 100000;
    double hold = 0.0;
    int push1 = 0;
    int push2 = 0;
    int arrivals = 0;
    for (int k = 0; k < n; ++k) {
      const auto [next, ev] = step(ParticleConfig{{5, 2}}, 0.0, rng);
      hold += ev.time;
      if (ev.kind == TransitionKind::arrival) {
        ++arrivals;
        CHECK(next == ParticleConfig{{6, 3, 2}});
      } else if (ev.k == 1) {
        ++push1;
        CHECK(next == ParticleConfig{{6, 2}});
      } else {
        ++push2;
        CHECK(next == ParticleConfig{{6, 3}});
      }
    }
    const double mean = hold / n;
    CHECK(std::abs(mean - 1.0 / 15.0) < 4.0 * (1.0 / 15.0) / std::sqrt(n));
    auto within = [&](int count, double p) { return std::abs(count / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n); };
    CHECK(within(push1, 12.0 / 15.0));
    CHECK(within(push2, 2.0 / 15.0));
    CHECK(within(arrivals, 1.0 / 15.0));
  }

  TEST_CASE("configuration errors") {
    ParticleSimConfig c;
    c.particle_cap = 5;
    CHECK_THROWS_AS(ParticleSimulator{c}, ConfigError);
    c.particle_cap = 20;
    c.init = ParticleConfig{{25, 3}};
    CHECK_THROWS_AS(ParticleSimulator{c}, ConfigError);
    c.init = ParticleConfig{{3, 3}};
    CHECK_THROWS_AS(ParticleSimulator{c}, ConfigError);
    CHECK_THROWS_AS(exit_gap_statistics(std::vector<double>(50, 1.0)), SampleSizeError);
  }

  TEST_CASE("exits are a rate-one Poisson process") {
    ParticleSimConfig c;
    c.particle_cap = 1000;
    c.horizon = 20000.0;
    c.seed = 8;
    Rng init(9);
    c.init = sample_stationary(init);
    const auto r = simulate(c);
    REQUIRE(r.exits.size() > 100);
    std::vector<double> e;
    for (const auto& x : r.exits) e.push_back(x.E);
    const auto g = exit_gap_statistics(e);
    CHECK(std::abs(g.mean - 1.0) < 4.0 / std::sqrt(static_cast<double>(g.n)));
    CHECK(g.ks_p_value > 0.001);
    CHECK(std::abs(g.lag1_autocorrelation) < 4.0 / std::sqrt(static_cast<double>(g.n)));
    CHECK(std::abs(g.unit_window_dispersion - 1.0) < 4.0 * stats::dispersion_se(g.unit_windows));
    CHECK(std::abs(static_cast<double>(r.exits.size()) / c.horizon - 1.0) < 4.0 / std::sqrt(c.horizon));
    for (const auto& x : r.exits) {
      if (!std::isnan(x.B)) CHECK(x.B < x.E);
    }
  }

  TEST_CASE("exit file nonempty for horizon 100") {
    ParticleSimConfig c;
    c.particle_cap = 10000;
    c.horizon = 100.0;
    c.seed = 4;
    CHECK(!simulate(c).exits.empty());
  }

  TEST_CASE("time average of {Z = 0} is 1/3") {
    ParticleSimConfig c;
    c.particle_cap = 1000;
    c.horizon = 30000.0;
    c.seed = 10;
    ParticleSimulator sim(c);
    int zero = 0;
    int n = 0;
    for (double t = 5.0; t <= c.horizon; t += 5.0, ++n) {
      sim.advance_to(t);
      zero += sim.state().empty() ? 1 : 0;
    }
    CHECK(std::abs(zero / double(n) - 1.0 / 3.0) < 4.0 * std::sqrt(2.0 / 9.0 / n) + 0.005);
  }

  TEST_CASE("stationary start matches empty start after burn-in") {
    auto mean_gap = [](ParticleConfig init, double burn_in, std::uint64_t seed) {
      ParticleSimConfig c;
      c.particle_cap = 1000;
      c.horizon = burn_in + 10000.0;
      c.seed = seed;
      c.init = std::move(init);
      const auto r = simulate(c);
      std::vector<double> e;
      for (const auto& x : r.exits) {
        if (x.E >= burn_in) e.push_back(x.E);
      }
      return (e.back() - e.front()) / static_cast<double>(e.size() - 1);
    };
    Rng rng(12);
    const double stationary = mean_gap(sample_stationary(rng), 0.0, 13);
    const double burned = mean_gap(ParticleConfig{}, 200.0, 14);
    CHECK(std::abs(stationary - burned) < 4.0 * std::sqrt(2.0 / 10000.0));
  }

  TEST_CASE("jump-back and trajectory consistency") {
    ParticleSimConfig c;
    c.particle_cap = 30;
    c.horizon = 500.0;
    c.seed = 15;
    c.record_trajectory = true;
    ParticleSimulator sim(c);
    sim.track_post_exit(true);
    sim.run();
    REQUIRE(!sim.exits().empty());
    CHECK(sim.post_exit_states().size() == sim.exits().size());
    std::size_t exit_records = 0;
    double last = 0.0;
    for (const auto& ev : sim.trajectory()) {
      CHECK(ev.after.valid());
      CHECK(ev.after.leading() < c.particle_cap);
      CHECK(ev.time >= last);
      last = ev.time;
      exit_records += ev.kind == TransitionKind::exit ? 1 : 0;
    }
    CHECK(exit_records == sim.exits().size());
  }

  TEST_CASE("residual exit times stay ordered") {
    ParticleSimConfig c;
    c.particle_cap = 20;
    c.horizon = 2000.0;
    c.seed = 16;
    c.residual_exit_time = true;
    const auto r = simulate(c);
    REQUIRE(r.exits.size() > 100);
    for (std::size_t k = 1; k < r.exits.size(); ++k) CHECK(r.exits[k].E >= r.exits[k - 1].E);
    CHECK(c.exit_bias() == doctest::Approx(0.1));
  }

  TEST_CASE("same seed, same run") {
    ParticleSimConfig c;
    c.particle_cap = 100;
    c.horizon = 300.0;
    c.seed = 21;
    const auto a = simulate(c);
    const auto b = simulate(c);
    REQUIRE(a.exits.size() == b.exits.size());
    for (std::size_t k = 0; k < a.exits.size(); ++k) CHECK(a.exits[k].E == b.exits[k].E);
    CHECK(a.final_state == b.final_state);
  }
}
