#include "mrca/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mrca/analytics.hpp"
#include "mrca/event_stream.hpp"
#include "mrca/lookdown.hpp"
#include "mrca/mutation.hpp"
#include "mrca/particles.hpp"
#include "mrca/random.hpp"
#include "mrca/stats.hpp"

namespace mrca::verification {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Check tolerance_check(std::string name, double observed, double expected, double tolerance) {
  const double diff = std::abs(observed - expected);
  return {std::move(name),
          diff <= tolerance,
          {{"observed", observed}, {"expected", expected}, {"abs_diff", diff}, {"tolerance", tolerance}}};
}

Check gof_check(std::string name, const stats::GofReport& r) { return {std::move(name), r.pass, r.to_json()}; }

Check floor_check(std::string name, std::size_t have, std::size_t need) {
  return {std::move(name), have >= need, {{"count", have}, {"required", need}}};
}

Check runtime_check(std::string name, double seconds, double limit) {
  return {std::move(name), seconds < limit, {{"seconds", seconds}, {"limit_seconds", limit}}};
}

// ---------------------------------------------------------------------------
// Shared simulation runs, built on first use.

struct ParticleRun {
  std::vector<ParticleConfig> grid;  // state at z_spacing, 2 z_spacing, ...
  std::vector<double> exits;
  std::uint64_t transitions = 0;
  double seconds = 0.0;
};

struct LookdownRun {
  std::unique_ptr<lookdown::EventStream> stream;
  std::vector<double> times;
  std::vector<lookdown::MrcaObservables> observables;
  lookdown::MrcaPointProcess points;
  double seconds = 0.0;
};

struct Context {
  SuiteOptions options;
  ProfileSizes sizes;
  std::optional<ParticleRun> particle_run;
  std::optional<LookdownRun> lookdown_run;

  const ParticleRun& particles() {
    if (particle_run) return *particle_run;
    const auto t0 = Clock::now();
    ParticleRun run;
    Rng init_rng(derive_seed(options.seed, {3, 0}));
    particles::ParticleSimConfig cfg;
    cfg.particle_cap = sizes.particle_cap;
    cfg.horizon = sizes.particle_horizon;
    cfg.seed = derive_seed(options.seed, {3, 1});
    cfg.init = particles::sample_stationary(init_rng);
    while (cfg.init.leading() >= cfg.particle_cap) cfg.init = particles::sample_stationary(init_rng);
    particles::ParticleSimulator sim(cfg);
    for (double t = sizes.z_spacing; t <= cfg.horizon; t += sizes.z_spacing) {
      sim.advance_to(t);
      run.grid.push_back(sim.state());
    }
    sim.run();
    for (const auto& e : sim.exits()) run.exits.push_back(e.E);
    run.transitions = sim.transitions();
    run.seconds = seconds_since(t0);
    particle_run = std::move(run);
    return *particle_run;
  }

  const LookdownRun& lookdown() {
    if (lookdown_run) return *lookdown_run;
    const auto t0 = Clock::now();
    LookdownRun run;
    lookdown::EngineConfig cfg;
    cfg.level_cap = sizes.lookdown_levels;
    cfg.t_start = 0.0;
    cfg.burn_in = 20.0;
    // Extra room after the last query so that its next exit is observed.
    cfg.t_end = static_cast<double>(sizes.lookdown_samples) * sizes.lookdown_spacing + 20.0;
    cfg.seed = derive_seed(options.seed, {6});
    run.stream = std::make_unique<lookdown::EventStream>(cfg);
    for (std::size_t k = 0; k < sizes.lookdown_samples; ++k) {
      run.times.push_back(static_cast<double>(k) * sizes.lookdown_spacing);
    }
    const auto sw = lookdown::sweep(*run.stream, run.times, false);
    run.observables = lookdown::observables_from_sweep(*run.stream, sw, run.times);
    run.points = lookdown::point_process_from_curves(sw.curves, {cfg.t_start, cfg.t_end});
    run.seconds = seconds_since(t0);
    lookdown_run = std::move(run);
    return *lookdown_run;
  }
};

std::vector<std::int64_t> pi_codes(const std::vector<ParticleConfig>& configs) {
  std::vector<std::int64_t> codes;
  codes.reserve(configs.size());
  for (const auto& c : configs) codes.push_back(analytics::config_code(c, 10, 3));
  return codes;
}

// ---------------------------------------------------------------------------

void criterion_1(Context&, CriterionResult& r) {
  r.title = "exact constants";
  const auto t0 = Clock::now();
  r.checks.push_back(tolerance_check("pmf_Z(0)", analytics::pmf_Z(0), 1.0 / 3.0, 1e-9));
  r.checks.push_back(tolerance_check("pmf_Z(1)", analytics::pmf_Z(1), 11.0 / 27.0, 1e-9));
  r.checks.push_back(tolerance_check("pmf_Z(2)", analytics::pmf_Z(2), 107.0 / 243.0 - 2.0 * kPi2 / 81.0, 1e-9));
  r.checks.push_back(tolerance_check("pmf_Z(3)", analytics::pmf_Z(3), 1003.0 / 2187.0 - 10.0 * kPi2 / 243.0, 1e-9));

  const auto [mean, var] = analytics::mean_var_Z();
  r.checks.push_back(tolerance_check("mean_var_Z.mean", mean, 1.0, 1e-9));
  r.checks.push_back(tolerance_check("mean_var_Z.variance", var, 14.0 - 4.0 * kPi2 / 3.0, 1e-9));
  double m1 = 0.0;
  double m2 = 0.0;
  for (int z = 0; z <= 40; ++z) {
    const double p = analytics::pmf_Z(z);
    m1 += z * p;
    m2 += static_cast<double>(z) * z * p;
  }
  r.checks.push_back(tolerance_check("mean_Z_from_weights", m1, mean, 1e-9));
  r.checks.push_back(tolerance_check("variance_Z_from_weights", m2 - m1 * m1, var, 1e-9));

  r.checks.push_back(tolerance_check("expected_Tc", analytics::expected_Tc(), 2.0 * kPi2 / 3.0 - 6.0, 1e-9));
  // sum_l 2/((l+1)(l+2)) * 2/(l+1), with the tail integral 2/L^2 (1 - 3/L).
  constexpr std::int64_t L = 1000000;
  double series = 0.0;
  for (std::int64_t l = L; l >= 1; --l) {
    const double d = static_cast<double>(l);
    series += 4.0 / ((d + 1.0) * (d + 1.0) * (d + 2.0));
  }
  const double Ld = static_cast<double>(L) + 1.5;
  series += 2.0 / (Ld * Ld);
  r.checks.push_back(tolerance_check("expected_Tc_from_mixture", series, analytics::expected_Tc(), 1e-9));
  r.checks.push_back(runtime_check("runtime", seconds_since(t0), 1.0));
}

void criterion_2(Context&, CriterionResult& r) {
  r.title = "dual-method identities";
  const auto t0 = Clock::now();
  double worst_x = 0.0;
  for (int k = 1; k <= 10; ++k) {
    worst_x = std::max(worst_x, std::abs(analytics::x_k(k, analytics::XMethod::series) -
                                         analytics::x_k(k, analytics::XMethod::closed_form)));
  }
  r.checks.push_back({"x_k series vs closed form, k=1..10", worst_x <= 1e-9, {{"max_abs_diff", worst_x}, {"tolerance", 1e-9}}});

  double worst_p = 0.0;
  for (int z = 0; z <= 15; ++z) {
    worst_p = std::max(worst_p, std::abs(analytics::p_z(z, analytics::PMethod::recursion) -
                                         analytics::p_z(z, analytics::PMethod::partition)));
  }
  r.checks.push_back({"p_z recursion vs partition, z=0..15", worst_p <= 1e-10, {{"max_abs_diff", worst_p}, {"tolerance", 1e-10}}});

  for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double series = 0.0;
    for (int z = 40; z >= 0; --z) series = series * u + analytics::pmf_Z(z);
    std::ostringstream name;
    name << "pgf product vs weights at u=" << u;
    r.checks.push_back(tolerance_check(name.str(), analytics::pgf_Z(u).value, series, 1e-8));
  }
  r.checks.push_back(tolerance_check("pgf_Z(1)", analytics::pgf_Z(1.0).value, 1.0, 1e-9));
  r.checks.push_back(runtime_check("runtime", seconds_since(t0), 5.0));
}

void criterion_3(Context& ctx, CriterionResult& r) {
  r.title = "particle-system equilibrium";
  const auto t0 = Clock::now();
  const PmfTable exact = analytics::table_pi_codes(10, 3);

  Rng rng(derive_seed(ctx.options.seed, {3, 2}));
  std::vector<ParticleConfig> draws;
  draws.reserve(ctx.sizes.stationary_draws);
  for (std::size_t i = 0; i < ctx.sizes.stationary_draws; ++i) draws.push_back(particles::sample_stationary(rng));
  const auto draw_codes = pi_codes(draws);
  stats::ChiSquareOptions opt;
  opt.name = "sample_stationary vs pi_lambda";
  r.checks.push_back(gof_check(opt.name, stats::chi_square_gof(stats::empirical_pmf(draw_codes), exact, opt)));

  const auto& run = ctx.particles();
  const auto grid_codes = pi_codes(run.grid);
  opt.name = "occupation measure of simulate vs pi_lambda";
  auto report = stats::chi_square_gof(stats::empirical_pmf(grid_codes), exact, opt);
  Check occupation = gof_check(opt.name, report);
  occupation.detail["horizon"] = ctx.sizes.particle_horizon;
  occupation.detail["spacing"] = ctx.sizes.z_spacing;
  occupation.detail["transitions"] = run.transitions;
  r.checks.push_back(occupation);
  r.checks.push_back(runtime_check("runtime", seconds_since(t0), 120.0));
}

void criterion_4(Context& ctx, CriterionResult& r) {
  r.title = "Poisson exit process";
  const auto& run = ctx.particles();
  r.checks.push_back(floor_check("exit gaps", run.exits.size() - 1, ctx.sizes.min_exit_gaps));
  const auto s = particles::exit_gap_statistics(run.exits);
  r.checks.push_back({"gap KS vs Exp(1)",
                      s.ks_p_value > stats::kDefaultAlpha,
                      {{"statistic", s.ks_statistic}, {"p_value", s.ks_p_value}, {"n", s.n}, {"mean_gap", s.mean}}});
  const double band = 4.0 / std::sqrt(static_cast<double>(s.n));
  r.checks.push_back({"lag-1 gap autocorrelation",
                      std::abs(s.lag1_autocorrelation) < band,
                      {{"observed", s.lag1_autocorrelation}, {"band", band}}});
  const double se = stats::dispersion_se(s.unit_windows);
  r.checks.push_back({"unit-window count dispersion",
                      std::abs(s.unit_window_dispersion - 1.0) < 4.0 * se,
                      {{"observed", s.unit_window_dispersion}, {"windows", s.unit_windows}, {"band", 4.0 * se}}});
}

void criterion_5(Context& ctx, CriterionResult& r) {
  r.title = "Z law by simulation";
  const auto& run = ctx.particles();
  std::vector<std::int64_t> z;
  std::vector<double> zd;
  for (const auto& c : run.grid) {
    z.push_back(static_cast<std::int64_t>(c.count()));
    zd.push_back(static_cast<double>(c.count()));
  }
  r.checks.push_back(floor_check("time samples", z.size(), ctx.sizes.min_z_samples));
  stats::ChiSquareOptions opt;
  opt.name = "Z samples vs pmf_Z";
  r.checks.push_back(gof_check(opt.name, stats::chi_square_gof(stats::empirical_pmf(z), analytics::table_Z(6), opt)));
  r.checks.push_back(gof_check("Z sample mean vs 1", stats::moment_band(zd, 1.0, std::nullopt, "Z mean")));
}

void criterion_6(Context& ctx, CriterionResult& r) {
  r.title = "look-down observables";
  const auto t0 = Clock::now();
  const auto& run = ctx.lookdown();
  std::vector<std::int64_t> L;
  std::size_t n = 0;
  std::vector<std::size_t> li(9, 0);
  for (const auto& o : run.observables) {
    if (o.stationarity_warning) continue;
    ++n;
    L.push_back(o.L);
    if (o.L == 2 && o.I.is_finite() && o.I.value() <= 8) ++li[static_cast<std::size_t>(o.I.value())];
  }
  r.checks.push_back(floor_check("stationary samples", n, ctx.sizes.min_lookdown_samples));
  stats::ChiSquareOptions opt;
  opt.name = "L vs pmf_L with finite-N allowance";
  opt.allowance = 0.005;
  auto report = stats::chi_square_gof(stats::empirical_pmf(L), analytics::table_L(8), opt);
  Check c = gof_check(opt.name, report);
  c.detail["allowance_per_cell"] = opt.allowance;
  c.detail["levels"] = ctx.sizes.lookdown_levels;
  r.checks.push_back(c);
  for (std::int64_t i = 3; i <= 8; ++i) {
    const double p = analytics::pmf_LI(2, ExtendedLevel(i));
    const double phat = static_cast<double>(li[static_cast<std::size_t>(i)]) / static_cast<double>(n);
    const double band = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    r.checks.push_back({"P[L=2,I=" + std::to_string(i) + "]",
                        std::abs(phat - p) < band,
                        {{"observed", phat}, {"expected", p}, {"band", band}, {"n", n}}});
  }
  r.checks.push_back(runtime_check("runtime", seconds_since(t0), 600.0));
}

void criterion_7(Context& ctx, CriterionResult& r) {
  r.title = "exponential establishment times";
  const auto& run = ctx.lookdown();
  const auto& cfg = run.stream->config();
  std::vector<double> gaps;
  double prev = std::nan("");
  for (const auto& p : run.points.points) {
    if (p.E < cfg.t_start) continue;
    if (!std::isnan(prev)) gaps.push_back(p.E - prev);
    prev = p.E;
  }
  r.checks.push_back(gof_check("E gaps KS vs Exp(1)", stats::ks_test_exp1(gaps)));

  constexpr int kBins = 7;
  std::vector<std::vector<double>> bins(kBins);
  for (const auto& o : run.observables) {
    if (o.stationarity_warning || !o.A || !o.E_next) continue;
    const double depth = *o.A - o.time;
    const int b = static_cast<int>(std::floor((depth + 4.0) / 0.5));
    if (depth >= -4.0 && b >= 0 && b < kBins) bins[static_cast<std::size_t>(b)].push_back(*o.E_next - o.time);
  }
  for (int b = 0; b < kBins; ++b) {
    const double lo = -4.0 + 0.5 * b;
    std::ostringstream name;
    name << "A_0 in [" << lo << "," << lo + 0.5 << ")";
    const auto& samples = bins[static_cast<std::size_t>(b)];
    if (samples.size() < ctx.sizes.min_bin_samples) {
      r.checks.push_back(floor_check(name.str() + " samples", samples.size(), ctx.sizes.min_bin_samples));
      continue;
    }
    Check c = gof_check(name.str() + " E-t KS vs Exp(1)", stats::ks_test_exp1(samples));
    c.detail["required_n"] = ctx.sizes.min_bin_samples;
    r.checks.push_back(c);
  }
}

void criterion_8(Context& ctx, CriterionResult& r) {
  r.title = "mixture identity";
  Rng rng(derive_seed(ctx.options.seed, {8}));
  std::vector<double> draws(ctx.sizes.mixture_draws);
  for (auto& d : draws) d = analytics::sample_exit_mixture(rng);
  r.checks.push_back(gof_check("sum_l pmf_L(l) law(S_l) KS vs Exp(1)", stats::ks_test_exp1(draws)));
}

// Re-applies a logged push or arrival to the previous state.
ParticleConfig replay(const ParticleConfig& before, const particles::TransitionEvent& ev) {
  ParticleConfig c = before;
  if (ev.kind == particles::TransitionKind::push) {
    for (std::int64_t m = 0; m < ev.k.value_or(0); ++m) ++c.levels[static_cast<std::size_t>(m)];
  } else {
    for (auto& l : c.levels) ++l;
    c.levels.push_back(2);
  }
  return c;
}

void criterion_9(Context& ctx, CriterionResult& r) {
  r.title = "structural equalities";
  std::size_t curves = 0;
  std::size_t curve_mismatch = 0;
  std::size_t z_queries = 0;
  std::size_t z_mismatch = 0;
  for (int rep = 0; rep < ctx.sizes.structural_realizations; ++rep) {
    lookdown::EngineConfig cfg;
    cfg.level_cap = ctx.sizes.structural_levels;
    cfg.t_start = 0.0;
    cfg.t_end = 10.0;
    cfg.burn_in = 20.0;
    cfg.seed = derive_seed(ctx.options.seed, {9, static_cast<std::uint64_t>(rep)});
    const lookdown::EventStream stream(cfg);
    std::vector<double> times;
    for (double t = -10.0; t <= cfg.t_end; t += 0.5) times.push_back(t);
    const auto sw = lookdown::sweep(stream, times, true);
    for (const auto& c : sw.curves) {
      if (c.open()) continue;
      ++curves;
      const auto back = lookdown::coalescent_curve(stream, *c.exit, c.birth);
      if (back.steps != c.path) ++curve_mismatch;
    }
    for (std::size_t q = 0; q < times.size(); ++q) {
      std::int64_t z = 0;
      for (const auto& c : sw.curves) {
        if (c.birth <= times[q] && (c.open() || *c.exit > times[q])) ++z;
      }
      ++z_queries;
      if (z != sw.snapshots[q].Z) ++z_mismatch;
    }
  }
  r.checks.push_back({"fixation curve equals coalescent curve back from E",
                      curves > 0 && curve_mismatch == 0,
                      {{"realizations", ctx.sizes.structural_realizations},
                       {"curves", curves},
                       {"mismatches", curve_mismatch}}});
  r.checks.push_back({"Z_t from curves equals #{(E,B): B<=t<E}",
                      z_queries > 0 && z_mismatch == 0,
                      {{"queries", z_queries}, {"mismatches", z_mismatch}}});

  particles::ParticleSimConfig pc;
  pc.particle_cap = 50;
  pc.horizon = 2000.0;
  pc.seed = derive_seed(ctx.options.seed, {9, 1u << 20});
  pc.record_trajectory = true;
  const auto sim = particles::simulate(pc);
  std::size_t exits = 0;
  std::size_t bad = 0;
  ParticleConfig state = pc.init;
  for (std::size_t i = 0; i < sim.trajectory.size(); ++i) {
    const auto& ev = sim.trajectory[i];
    if (ev.kind == particles::TransitionKind::exit) continue;
    ParticleConfig pre = replay(state, ev);
    const bool exit_next =
        i + 1 < sim.trajectory.size() && sim.trajectory[i + 1].kind == particles::TransitionKind::exit;
    if (exit_next) {
      ++exits;
      ParticleConfig shifted = pre;
      const bool at_cap = !shifted.empty() && shifted.levels.front() >= pc.particle_cap;
      if (!shifted.empty()) shifted.levels.erase(shifted.levels.begin());
      if (!at_cap || shifted != ev.after || sim.trajectory[i + 1].after != ev.after) ++bad;
    } else if (pre != ev.after) {
      ++bad;
    }
    state = ev.after;
  }
  r.checks.push_back({"jump-back shift at every exit",
                      exits > 0 && bad == 0 && exits == sim.exits.size(),
                      {{"exits", exits}, {"violations", bad}, {"cap", pc.particle_cap}}});
}

void criterion_10(Context& ctx, CriterionResult& r) {
  r.title = "T_c at MRCA change and K chain";
  Rng rng(derive_seed(ctx.options.seed, {10}));
  std::vector<double> draws(ctx.sizes.tc_draws);
  for (auto& d : draws) d = mutation::sample_Tc(rng);
  const auto m = stats::sample_moments(draws);
  const double se = std::sqrt(m.variance / static_cast<double>(draws.size()));
  const double target = analytics::expected_Tc();
  r.checks.push_back({"sample_Tc mean within 3 SE of 2pi^2/3-6",
                      std::abs(m.mean - target) < 3.0 * se,
                      {{"observed", m.mean}, {"expected", target}, {"se", se}, {"n", draws.size()}}});

  // Forward recursion of K from K^2 = 1.
  std::vector<Rational> dist{Rational(0), Rational(1)};  // index k
  std::size_t mismatches = 0;
  std::size_t compared = 0;
  for (std::int64_t j = 2; j <= ctx.sizes.K_max_j; ++j) {
    for (std::int64_t k = 1; k < j; ++k) {
      ++compared;
      if (analytics::K_marginal(j, k) != dist[static_cast<std::size_t>(k)]) ++mismatches;
    }
    std::vector<Rational> next(static_cast<std::size_t>(j + 1), Rational(0));
    for (std::int64_t k = 1; k < j; ++k) {
      const Rational& pk = dist[static_cast<std::size_t>(k)];
      const Rational up = analytics::K_transition(j, k);
      next[static_cast<std::size_t>(k + 1)] += pk * up;
      next[static_cast<std::size_t>(k)] += pk * (1 - up);
    }
    dist = std::move(next);
  }
  r.checks.push_back({"K^j marginal equals forward recursion (exact)",
                      mismatches == 0,
                      {{"max_j", ctx.sizes.K_max_j}, {"cells", compared}, {"mismatches", mismatches}}});
}

void criterion_11(Context& ctx, CriterionResult& r) {
  r.title = "substitutions";
  const auto& run = ctx.lookdown();
  const auto& points = run.points.points;
  r.checks.push_back(floor_check("MRCA points", points.size(), ctx.sizes.min_mrca_points));
  mutation::MutationConfig mc;
  mc.theta = ctx.sizes.theta;
  mc.seed = derive_seed(ctx.options.seed, {11});
  const auto subs = mutation::simulate_substitutions(points, mc);
  const auto mass = mutation::substitution_mass_rate(subs, points);
  r.checks.push_back({"substitution mass rate within 3 SE of theta/2",
                      std::abs(mass.rate - 0.5 * mc.theta) < 3.0 * mass.se,
                      {{"observed", mass.rate}, {"expected", 0.5 * mc.theta}, {"se", mass.se}, {"span", mass.span}}});

  const double w = ctx.sizes.dispersion_window;
  const auto weighted = mutation::dispersion_of_substitution_times(subs, w, mutation::DispersionWeight::substitutions);
  const auto events = mutation::dispersion_of_substitution_times(subs, w, mutation::DispersionWeight::events);
  r.checks.push_back({"substitution dispersion > 1 at 4 sigma",
                      weighted.ratio > 1.0 + 4.0 * weighted.se(),
                      {{"observed", weighted.ratio},
                       {"se", weighted.se()},
                       {"poisson_se", weighted.poisson_se},
                       {"block_se", weighted.block_se},
                       {"windows", weighted.windows},
                       {"window", w},
                       {"weight", "substitutions"},
                       {"distinct_time_dispersion", events.ratio},
                       {"distinct_time_se", events.se()}}});
}

using CriterionFn = void (*)(Context&, CriterionResult&);
constexpr CriterionFn kCriteria[kCriterionCount] = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                    criterion_5, criterion_6, criterion_7, criterion_8,
                                                    criterion_9, criterion_10, criterion_11};

}  // namespace

Profile parse_profile(const std::string& name) {
  if (name == "quick") return Profile::quick;
  if (name == "full") return Profile::full;
  throw std::invalid_argument("unknown profile '" + name + "' (expected quick or full)");
}

std::string to_string(Profile profile) { return profile == Profile::quick ? "quick" : "full"; }

ProfileSizes sizes_for(Profile profile) {
  ProfileSizes s;
  if (profile == Profile::quick) {
    s.stationary_draws = 20000;
    s.particle_horizon = 20000.0;
    s.min_z_samples = 2000;
    s.min_exit_gaps = 2000;
    s.lookdown_levels = 300;
    s.lookdown_samples = 4000;
    s.min_lookdown_samples = 2000;
    s.min_bin_samples = 100;
    s.mixture_draws = 20000;
    s.tc_draws = 20000;
    s.structural_realizations = 20;
    s.structural_levels = 300;
    s.min_mrca_points = 4000;
  }
  return s;
}

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string CriterionResult::summary_line() const {
  std::ostringstream out;
  out << "criterion " << id << ' ' << (pass() ? "PASS" : "FAIL") << " [" << title << "] ";
  out.setf(std::ios::fixed);
  out.precision(1);
  out << seconds << " s";
  if (!error.empty()) out << " error: " << error;
  std::size_t failed = 0;
  for (const auto& c : checks) failed += c.pass ? 0 : 1;
  out << ", " << checks.size() - failed << '/' << checks.size() << " checks";
  for (const auto& c : checks) {
    if (!c.pass) out << "; failed: " << c.name;
  }
  return out.str();
}

nlohmann::json CriterionResult::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  nlohmann::json j{{"id", id}, {"title", title}, {"pass", pass()}, {"seconds", seconds}, {"checks", list}};
  if (!error.empty()) j["error"] = error;
  return j;
}

bool SuiteReport::pass() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : criteria) list.push_back(c.to_json());
  return {{"profile", to_string(profile)}, {"seed", seed}, {"pass", pass()}, {"criteria", list}};
}

SuiteReport run_suite(const SuiteOptions& options, const std::function<void(const CriterionResult&)>& on_result) {
  Context ctx;
  ctx.options = options;
  ctx.sizes = sizes_for(options.profile);
  SuiteReport report;
  report.profile = options.profile;
  report.seed = options.seed;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = id;
    const auto t0 = Clock::now();
    try {
      kCriteria[id - 1](ctx, r);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    if (on_result) on_result(r);
    report.criteria.push_back(std::move(r));
  }
  return report;
}

}  // namespace mrca::verification
