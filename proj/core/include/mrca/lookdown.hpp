#pragma once

// Genealogical observables of a finite-level look-down stream: ancestral
// levels, coalescent curves, MRCA times, fixation curves and the MRCA point
// process.
//
// Conventions. An event (t, i, j) gives birth to a new line at level j whose
// parent is the individual at level i; every line at level >= j moves up by
// one and the line leaving level N dies. The state at time t includes the
// events at t, so tracing back from t to s applies the events in (s, t].

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrca/event_stream.hpp"
#include "mrca/extended_level.hpp"

namespace mrca::lookdown {

/// Thrown when a backward walk reaches the start of the simulated window
/// before the requested quantity is determined.
class InsufficientWindow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepKnot {
  double time = 0.0;
  int level = 0;

  bool operator==(const StepKnot&) const = default;
};

/// X_s^t(j): level at time s of the ancestor of the individual at (t, j).
int backward_level(const EventStream& stream, double t, int level, double s);

/// C_s^t for s in [s_min, t] as a step function. steps[k].level holds on
/// [steps[k].time, steps[k+1].time), the last step up to t. steps[0] starts at
/// s_min (the window start when truncated); below a drop to one the level
/// stays 1.
struct CoalescentCurve {
  double reference_time = 0.0;
  std::vector<StepKnot> steps;
  bool reached_one = false;
  /// The window start was reached before s_min.
  bool truncated = false;
};

CoalescentCurve coalescent_curve(const EventStream& stream, double t, double s_min);
/// C_s^t as a single number.
int coalescent_level_at(const EventStream& stream, double t, double s);
/// A_t = sup{s : C_s^t = 1}. Throws InsufficientWindow.
double mrca_time(const EventStream& stream, double t);

/// Level path of the line pushed from 2 to 3 at birth, minus one. The path
/// starts with (birth, 2), gains one knot per push and ends with (exit, N).
struct FixationCurve {
  double birth = 0.0;
  std::optional<double> exit;  ///< nullopt while still open at the window end
  std::vector<StepKnot> path;  ///< empty unless paths were requested

  [[nodiscard]] bool open() const { return !exit.has_value(); }
};

struct Window {
  double from = 0.0;
  double to = 0.0;
};

/// Curves born in [window.from, window.to], in birth order. Curves alive at
/// the end of the stream are returned open.
std::vector<FixationCurve> extract_fixation_curves(const EventStream& stream, Window window,
                                                   bool keep_paths = false);

struct MrcaPoint {
  double E = 0.0;
  double B = 0.0;
};

struct MrcaPointProcess {
  std::vector<MrcaPoint> points;  ///< increasing in both E and B
  std::size_t open_curves = 0;    ///< curves born in the window and not yet exited
};

/// Closed curves born in the window whose exit also lies in the window.
MrcaPointProcess mrca_point_process(const EventStream& stream, Window window);

struct MrcaObservables {
  double time = 0.0;
  std::optional<double> A;   ///< nullopt when no curve exited since the window start
  std::int64_t L = 1;
  ExtendedLevel I = ExtendedLevel::infinity();
  std::int64_t Z = 0;
  std::optional<double> B_next;  ///< B_t, nullopt when beyond the window
  std::optional<double> E_next;  ///< E_t, nullopt when beyond the window
  bool stationarity_warning = false;
};

/// Minimum history before a query for the stream to count as stationary.
inline constexpr double kMinHistory = 10.0;

MrcaObservables observables_at(const EventStream& stream, double t);
/// Batch version; one forward sweep serves all times. Result order follows
/// the input order.
std::vector<MrcaObservables> observables_at(const EventStream& stream, std::span<const double> times);

/// Result of one forward pass over the window.
struct Sweep {
  std::vector<FixationCurve> curves;  ///< every curve born in the window
  struct Snapshot {
    std::size_t exited = 0;  ///< curves exited at or before the query time
    std::int64_t Z = 0;
    std::int64_t L = 1;
  };
  std::vector<Snapshot> snapshots;  ///< one per query, input order
};

/// Forward pass from the window start, taking snapshots at the query times.
Sweep sweep(const EventStream& stream, std::span<const double> query_times, bool keep_paths = false);

/// Observables at the query times of a finished sweep (same order).
std::vector<MrcaObservables> observables_from_sweep(const EventStream& stream, const Sweep& sweep,
                                                    std::span<const double> query_times);
/// Point process of the closed curves born in the window and exited by its end.
MrcaPointProcess point_process_from_curves(std::span<const FixationCurve> curves, Window window);

}  // namespace mrca::lookdown
