#include "mrca/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrca/analytics.hpp"
#include "mrca/stats.hpp"

namespace mrca::particles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// C(l+1, 2), the total push rate seen by a particle at level l.
double climb_rate(std::int64_t level) {
  const auto l = static_cast<double>(level);
  return 0.5 * l * (l + 1.0);
}

}  // namespace

std::string to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::push:
      return "push";
    case TransitionKind::arrival:
      return "arrival";
    case TransitionKind::exit:
      return "exit";
  }
  return "unknown";
}

void ParticleSimConfig::validate() const {
  if (particle_cap < 10) throw ConfigError("particle_cap must be >= 10, got " + std::to_string(particle_cap));
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be finite and >= 0");
  if (!init.valid()) throw ConfigError("init configuration is not strictly decreasing above 1: " + init.to_string());
  if (init.leading() >= particle_cap) throw ConfigError("init configuration reaches the particle cap");
}

double BranchRates::total() const {
  double s = arrival;
  for (double r : push_rates) s += r;
  return s;
}

BranchRates branch_rates(const ParticleConfig& state) {
  BranchRates r;
  const std::size_t z = state.count();
  r.push_rates.reserve(z);
  for (std::size_t k = 1; k <= z; ++k) {
    r.push_rates.push_back(climb_rate(state.level(k)) - climb_rate(state.level(k + 1)));
  }
  return r;
}

std::pair<ParticleConfig, TransitionEvent> step(const ParticleConfig& state, double now, Rng& rng) {
  const BranchRates rates = branch_rates(state);
  const double total = rates.total();
  TransitionEvent ev;
  ev.time = now + rng.exponential(total);
  ParticleConfig next = state;
  double u = rng.uniform() * total;
  for (std::size_t k = 0; k < rates.push_rates.size(); ++k) {
    if (u < rates.push_rates[k]) {
      for (std::size_t m = 0; m <= k; ++m) ++next.levels[m];
      ev.kind = TransitionKind::push;
      ev.k = static_cast<std::int64_t>(k + 1);
      ev.after = next;
      return {next, ev};
    }
    u -= rates.push_rates[k];
  }
  for (auto& l : next.levels) ++l;
  next.levels.push_back(2);
  ev.kind = TransitionKind::arrival;
  ev.after = next;
  return {next, ev};
}

// ---------------------------------------------------------------------------

ParticleSimulator::ParticleSimulator(const ParticleSimConfig& config)
    : config_(config), rng_(config.seed), state_(config.init) {
  config_.validate();
  births_.assign(state_.count(), std::numeric_limits<double>::quiet_NaN());
}

void ParticleSimulator::draw_clocks() {
  const std::size_t z = state_.count();
  if (!other_valid_) {
    // Every class except the leader's solo push: rate C(l_2+1, 2).
    other_clock_ = now_ + rng_.exponential(climb_rate(state_.level(2)));
    other_valid_ = true;
  }
  if (!leader_valid_) {
    leader_clock_ = z == 0 ? kInf : now_ + rng_.exponential(climb_rate(state_.level(1)) - climb_rate(state_.level(2)));
    leader_valid_ = true;
  }
}

void ParticleSimulator::advance_to(double t) {
  for (;;) {
    draw_clocks();
    const double next = std::min(leader_clock_, other_clock_);
    if (next > t) break;
    if (leader_clock_ < other_clock_) {
      leader_push(next);
    } else {
      other_event(next);
    }
  }
  now_ = std::max(now_, t);
}

void ParticleSimulator::run() { advance_to(config_.horizon); }

void ParticleSimulator::leader_push(double t) {
  now_ = t;
  ++state_.levels.front();
  leader_valid_ = false;
  ++transitions_;
  const std::size_t exited = handle_exits(t) ? 1 : 0;
  if (config_.record_trajectory) {
    record(t, TransitionKind::push, 1);
    if (exited) record(t, TransitionKind::exit, std::nullopt);
  }
}

void ParticleSimulator::other_event(double t) {
  now_ = t;
  ++transitions_;
  const std::size_t z = state_.count();
  // Classes: push of 1..k for k = 2..z, then arrival; total C(l_2+1, 2).
  double u = rng_.uniform() * climb_rate(state_.level(2));
  std::size_t pushed = 0;
  for (std::size_t k = 2; k <= z; ++k) {
    const double r = climb_rate(state_.level(k)) - climb_rate(state_.level(k + 1));
    if (u < r) {
      pushed = k;
      break;
    }
    u -= r;
  }
  TransitionKind kind = TransitionKind::push;
  if (pushed > 0) {
    for (std::size_t m = 0; m < pushed; ++m) ++state_.levels[m];
  } else {
    for (auto& l : state_.levels) ++l;
    state_.levels.push_back(2);
    births_.push_back(t);
    kind = TransitionKind::arrival;
  }
  leader_valid_ = false;
  other_valid_ = false;
  check_state();
  const bool exited = handle_exits(t);
  if (config_.record_trajectory) {
    record(t, kind, kind == TransitionKind::push ? std::optional<std::int64_t>(pushed) : std::nullopt);
    if (exited) record(t, TransitionKind::exit, std::nullopt);
  }
}

bool ParticleSimulator::handle_exits(double t) {
  bool any = false;
  while (!state_.empty() && state_.levels.front() >= config_.particle_cap) {
    double reported = t;
    if (config_.residual_exit_time) reported += analytics::sample_S(config_.particle_cap, rng_);
    reported = std::max(reported, last_reported_exit_);
    last_reported_exit_ = reported;
    exits_.push_back({reported, births_.front()});
    // Jump-back: L^k <- L^{k+1}.
    state_.levels.erase(state_.levels.begin());
    births_.erase(births_.begin());
    leader_valid_ = false;
    other_valid_ = false;
    check_state();
    if (track_post_exit_) post_exit_.push_back(state_);
    any = true;
  }
  return any;
}

void ParticleSimulator::record(double t, TransitionKind kind, std::optional<std::int64_t> k) {
  trajectory_.push_back({t, kind, k, state_});
}

void ParticleSimulator::check_state() const {
  if (!state_.valid()) throw std::logic_error("particle configuration lost strict order: " + state_.to_string());
}

SimulationResult simulate(const ParticleSimConfig& config) {
  ParticleSimulator sim(config);
  sim.run();
  SimulationResult out;
  out.trajectory = sim.trajectory();
  out.exits = sim.exits();
  out.final_state = sim.state();
  out.exit_bias = config.exit_bias();
  return out;
}

ParticleConfig sample_stationary(Rng& rng) {
  ParticleConfig c;
  std::int64_t level = analytics::sample_L(rng);
  while (level > 1) {
    c.levels.push_back(level);
    level = analytics::sample_L_below(level, rng);
  }
  return c;
}

ExitGapSummary exit_gap_statistics(const std::vector<double>& exits) {
  if (exits.size() < 100) {
    throw SampleSizeError("exit_gap_statistics: need at least 100 exits, got " + std::to_string(exits.size()));
  }
  std::vector<double> gaps;
  gaps.reserve(exits.size() - 1);
  for (std::size_t i = 1; i < exits.size(); ++i) gaps.push_back(exits[i] - exits[i - 1]);
  ExitGapSummary s;
  s.n = gaps.size();
  s.mean = stats::sample_moments(gaps).mean;
  std::vector<double> positive;
  positive.reserve(gaps.size());
  for (double g : gaps) positive.push_back(std::max(g, std::numeric_limits<double>::min()));
  const auto ks = stats::ks_test_exp1(positive);
  s.ks_statistic = ks.statistic;
  s.ks_p_value = ks.p_value;
  s.lag1_autocorrelation = stats::lag1_autocorrelation(gaps);
  const auto counts = stats::window_counts(exits, exits.front(), exits.back(), 1.0);
  s.unit_windows = counts.size();
  s.unit_window_dispersion = counts.size() >= 2 ? stats::dispersion_index(counts) : 0.0;
  return s;
}

}  // namespace mrca::particles
