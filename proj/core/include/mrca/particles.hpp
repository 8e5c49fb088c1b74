#pragma once

// The fixation-curve particle configuration as an autonomous Markov chain.
//
// From (l_1 > ... > l_Z > 1) the particles 1..k move up one level at rate
// C(l_k+1,2) - C(l_{k+1}+1,2) (with l_{Z+1} = 1) and a new particle enters at
// level 2, pushing every other particle, at rate 1. A particle reaching the
// cap M exits; the remaining particles shift down one index.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrca/particle_config.hpp"
#include "mrca/random.hpp"

namespace mrca::particles {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SampleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TransitionKind { push, arrival, exit };
std::string to_string(TransitionKind kind);

struct TransitionEvent {
  double time = 0.0;
  TransitionKind kind = TransitionKind::push;
  /// push: number of particles moved; arrival and exit: unset.
  std::optional<std::int64_t> k;
  ParticleConfig after;
};

struct ParticleSimConfig {
  std::int64_t particle_cap = 10000;
  double horizon = 100.0;
  std::uint64_t seed = 0;
  ParticleConfig init;
  /// Add a draw of the residual climb time above the cap to each reported
  /// exit time.
  bool residual_exit_time = false;
  bool record_trajectory = false;

  /// Throws ConfigError.
  void validate() const;
  /// Expected time a particle needs to climb from the cap to infinity, 2/M.
  [[nodiscard]] double exit_bias() const { return 2.0 / static_cast<double>(particle_cap); }
};

/// Branch rates out of a configuration: push_rates[k-1] for pushing
/// particles 1..k, then the arrival rate.
struct BranchRates {
  std::vector<double> push_rates;
  double arrival = 1.0;

  [[nodiscard]] double total() const;
};
BranchRates branch_rates(const ParticleConfig& state);

/// One transition from state with no cap (the leader is never removed).
std::pair<ParticleConfig, TransitionEvent> step(const ParticleConfig& state, double now, Rng& rng);

struct ExitRecord {
  double E = 0.0;  ///< reported exit time
  double B = 0.0;  ///< arrival time of the exiting particle (NaN if present at start)
};

/// Event-driven simulator. Only the leader's solo-push clock depends on the
/// leader's level, so the clock of every other transition class is kept
/// across solo pushes; each transition is exact.
class ParticleSimulator {
 public:
  explicit ParticleSimulator(const ParticleSimConfig& config);

  /// Applies every transition with time <= t and moves the clock to t.
  void advance_to(double t);
  /// advance_to(config.horizon).
  void run();

  [[nodiscard]] double now() const { return now_; }
  [[nodiscard]] const ParticleConfig& state() const { return state_; }
  [[nodiscard]] const std::vector<ExitRecord>& exits() const { return exits_; }
  [[nodiscard]] const std::vector<TransitionEvent>& trajectory() const { return trajectory_; }
  [[nodiscard]] std::uint64_t transitions() const { return transitions_; }
  /// Configuration right after each exit (jump-back applied), recorded when
  /// track_post_exit is set.
  [[nodiscard]] const std::vector<ParticleConfig>& post_exit_states() const { return post_exit_; }
  void track_post_exit(bool on) { track_post_exit_ = on; }

 private:
  void draw_clocks();
  void leader_push(double t);
  void other_event(double t);
  void record(double t, TransitionKind kind, std::optional<std::int64_t> k);
  void check_state() const;
  /// Removes leaders at or above the cap. Returns true when one exited.
  bool handle_exits(double t);

  ParticleSimConfig config_;
  Rng rng_;
  double now_ = 0.0;
  ParticleConfig state_;
  std::vector<double> births_;  // parallel to state_.levels
  double leader_clock_ = 0.0;
  double other_clock_ = 0.0;
  bool leader_valid_ = false;
  bool other_valid_ = false;
  std::vector<ExitRecord> exits_;
  std::vector<TransitionEvent> trajectory_;
  std::vector<ParticleConfig> post_exit_;
  bool track_post_exit_ = false;
  std::uint64_t transitions_ = 0;
  double last_reported_exit_ = -1e300;
};

struct SimulationResult {
  std::vector<TransitionEvent> trajectory;  ///< empty unless requested
  std::vector<ExitRecord> exits;
  ParticleConfig final_state;
  double exit_bias = 0.0;
};
SimulationResult simulate(const ParticleSimConfig& config);

/// A draw from the stationary law pi_Lambda.
ParticleConfig sample_stationary(Rng& rng);

struct ExitGapSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double ks_statistic = 0.0;
  double ks_p_value = 0.0;
  double lag1_autocorrelation = 0.0;
  double unit_window_dispersion = 0.0;
  std::size_t unit_windows = 0;
};
/// Gaps between consecutive exits; the gap before the first exit is
/// discarded. Throws SampleSizeError with fewer than 100 exits.
ExitGapSummary exit_gap_statistics(const std::vector<double>& exits);

}  // namespace mrca::particles
