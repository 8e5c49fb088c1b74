#include "mrca/lookdown.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

namespace mrca::lookdown {

namespace {

void check_time(const EventStream& stream, double t, const char* what) {
  if (!(t >= stream.window_begin() && t <= stream.window_end())) {
    throw RangeError(std::string(what) + ": time " + std::to_string(t) + " outside simulated window [" +
                     std::to_string(stream.window_begin()) + ", " + std::to_string(stream.window_end()) + "]");
  }
}

}  // namespace

int backward_level(const EventStream& stream, double t, int level, double s) {
  check_time(stream, t, "backward_level");
  check_time(stream, s, "backward_level");
  if (s > t) throw RangeError("backward_level: s must not exceed t");
  if (level < 1 || level > stream.level_cap()) throw RangeError("backward_level: level out of range");
  int x = level;
  auto cursor = stream.backward(t);
  while (x > 1) {
    const auto e = cursor.next(x);
    if (!e || e->time <= s) break;
    if (e->dst == x) {
      x = e->src;
    } else {
      --x;
    }
  }
  return x;
}

CoalescentCurve coalescent_curve(const EventStream& stream, double t, double s_min) {
  check_time(stream, t, "coalescent_curve");
  if (!(s_min < t)) throw RangeError("coalescent_curve: s_min must be below t");
  CoalescentCurve curve;
  curve.reference_time = t;
  double floor = s_min;
  if (floor < stream.window_begin()) {
    floor = stream.window_begin();
    curve.truncated = true;
  }
  int c = stream.level_cap();
  auto cursor = stream.backward(t);
  while (c > 1) {
    const auto e = cursor.next(c);
    if (!e || e->time <= floor) break;
    curve.steps.push_back({e->time, c});
    --c;
  }
  curve.reached_one = c == 1;
  curve.steps.push_back({floor, c});
  std::reverse(curve.steps.begin(), curve.steps.end());
  return curve;
}

int coalescent_level_at(const EventStream& stream, double t, double s) {
  check_time(stream, t, "coalescent_level_at");
  check_time(stream, s, "coalescent_level_at");
  if (s > t) throw RangeError("coalescent_level_at: s must not exceed t");
  int c = stream.level_cap();
  auto cursor = stream.backward(t);
  while (c > 1) {
    const auto e = cursor.next(c);
    if (!e || e->time <= s) break;
    --c;
  }
  return c;
}

double mrca_time(const EventStream& stream, double t) {
  check_time(stream, t, "mrca_time");
  int c = stream.level_cap();
  auto cursor = stream.backward(t);
  for (;;) {
    const auto e = cursor.next(c);
    if (!e) throw InsufficientWindow("mrca_time: coalescent curve did not reach 1 inside the window");
    if (c == 2) {
      if (e->src != 1 || e->dst != 2) throw std::logic_error("mrca_time: final merger is not a (1,2) event");
      return e->time;
    }
    --c;
  }
}

// ---------------------------------------------------------------------------

Sweep sweep(const EventStream& stream, std::span<const double> query_times, bool keep_paths) {
  for (double q : query_times) check_time(stream, q, "sweep");
  const int cap = stream.level_cap();

  std::vector<std::size_t> order(query_times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return query_times[a] < query_times[b]; });

  struct Active {
    std::size_t index;  // into Sweep::curves
    int y;              // level of the tracked line (fixation level + 1)
  };

  Sweep out;
  out.snapshots.resize(query_times.size());
  std::deque<Active> active;  // oldest (highest) first
  std::size_t exited = 0;
  std::size_t next_query = 0;

  auto snapshot_until = [&](double limit, bool inclusive) {
    while (next_query < order.size()) {
      const double q = query_times[order[next_query]];
      if (inclusive ? q > limit : q >= limit) break;
      auto& snap = out.snapshots[order[next_query]];
      snap.exited = exited;
      snap.Z = static_cast<std::int64_t>(active.size());
      snap.L = active.empty() ? 1 : active.front().y - 1;
      ++next_query;
    }
  };

  // Start just below the window so an event at the first instant counts.
  auto cursor = stream.forward(std::nextafter(stream.window_begin(), -1e300));
  for (;;) {
    const int bound = active.empty() ? 2 : std::max(2, active.front().y);
    const auto e = cursor.next(bound);
    if (!e) break;
    snapshot_until(e->time, false);

    for (auto& a : active) {
      if (a.y < e->dst) break;
      ++a.y;
      if (keep_paths) out.curves[a.index].path.push_back({e->time, a.y - 1});
    }
    while (!active.empty() && active.front().y > cap) {
      out.curves[active.front().index].exit = e->time;
      active.pop_front();
      ++exited;
    }
    if (e->src == 1 && e->dst == 2) {
      FixationCurve curve;
      curve.birth = e->time;
      if (keep_paths) curve.path.push_back({e->time, 2});
      active.push_back({out.curves.size(), 3});
      out.curves.push_back(std::move(curve));
    }
  }
  snapshot_until(stream.window_end(), true);
  return out;
}

std::vector<FixationCurve> extract_fixation_curves(const EventStream& stream, Window window, bool keep_paths) {
  check_time(stream, window.from, "extract_fixation_curves");
  check_time(stream, window.to, "extract_fixation_curves");
  if (window.to < window.from) throw RangeError("extract_fixation_curves: empty window");
  Sweep s = sweep(stream, {}, keep_paths);
  std::vector<FixationCurve> out;
  for (auto& c : s.curves) {
    if (c.birth >= window.from && c.birth <= window.to) out.push_back(std::move(c));
  }
  return out;
}

MrcaPointProcess point_process_from_curves(std::span<const FixationCurve> curves, Window window) {
  MrcaPointProcess out;
  for (const auto& c : curves) {
    if (c.birth < window.from || c.birth > window.to) continue;
    if (c.open()) {
      ++out.open_curves;
      continue;
    }
    if (*c.exit > window.to) continue;
    out.points.push_back({*c.exit, c.birth});
  }
  return out;
}

MrcaPointProcess mrca_point_process(const EventStream& stream, Window window) {
  const auto curves = extract_fixation_curves(stream, window, false);
  return point_process_from_curves(curves, window);
}

std::vector<MrcaObservables> observables_from_sweep(const EventStream& stream, const Sweep& s,
                                                    std::span<const double> times) {
  if (s.snapshots.size() != times.size()) throw std::invalid_argument("observables_from_sweep: size mismatch");
  std::vector<MrcaObservables> out(times.size());
  for (std::size_t q = 0; q < times.size(); ++q) {
    const auto& snap = s.snapshots[q];
    auto& obs = out[q];
    obs.time = times[q];
    obs.Z = snap.Z;
    obs.L = snap.L;
    if (snap.exited > 0) obs.A = s.curves[snap.exited - 1].birth;
    if (snap.exited < s.curves.size()) {
      const auto& next = s.curves[snap.exited];
      obs.B_next = next.birth;
      obs.E_next = next.exit;
    }
    if (obs.B_next && *obs.B_next <= obs.time) {
      obs.I = ExtendedLevel(coalescent_level_at(stream, obs.time, *obs.B_next));
    } else {
      obs.I = ExtendedLevel::infinity();
    }
    obs.stationarity_warning = !obs.A || obs.time - stream.window_begin() < kMinHistory;
  }
  return out;
}

std::vector<MrcaObservables> observables_at(const EventStream& stream, std::span<const double> times) {
  return observables_from_sweep(stream, sweep(stream, times, false), times);
}

MrcaObservables observables_at(const EventStream& stream, double t) {
  const double times[] = {t};
  return observables_at(stream, std::span<const double>(times)).front();
}

}  // namespace mrca::lookdown
