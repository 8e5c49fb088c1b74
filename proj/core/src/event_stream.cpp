#include "mrca/event_stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrca/random.hpp"

namespace mrca::lookdown {

void EngineConfig::validate() const {
  if (level_cap < 3) throw ConfigError("level_cap must be >= 3, got " + std::to_string(level_cap));
  if (!(t_end > t_start)) throw ConfigError("t_end must exceed t_start");
  if (!(burn_in >= 0.0)) throw ConfigError("burn_in must be >= 0");
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(burn_in))
    throw ConfigError("window bounds must be finite");
  if (level_cap > 1 << 20) throw ConfigError("level_cap above 2^20 is not supported");
}

std::int64_t pairs_up_to(int level) {
  const auto n = static_cast<std::int64_t>(level);
  return n < 2 ? 0 : n * (n - 1) / 2;
}

std::int64_t pair_index(int src, int dst) { return pairs_up_to(dst - 1) + src - 1; }

std::pair<int, int> pair_from_index(std::int64_t index) {
  auto d = static_cast<std::int64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (d * (d - 1) / 2 > index) --d;
  while ((d + 1) * d / 2 <= index) ++d;
  const auto dst = static_cast<int>(d + 1);
  const auto src = static_cast<int>(index - d * (d - 1) / 2 + 1);
  return {src, dst};
}

// ---------------------------------------------------------------------------

EventStream::EventStream(const EngineConfig& config) : config_(config) {
  config_.validate();
  const std::int64_t total = pairs_up_to(config_.level_cap);
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  while (lo < total) {
    Band b;
    b.lo = lo;
    b.hi = std::min(hi, total);
    b.slice = kCellEvents / static_cast<double>(b.hi - b.lo);
    bands_.push_back(b);
    lo = hi;
    hi *= 2;
  }
}

std::int64_t EventStream::slice_of(std::size_t band, double t) const {
  return static_cast<std::int64_t>(std::floor(t / bands_[band].slice));
}

void EventStream::generate_cell(std::size_t band, std::int64_t slice, std::vector<LookdownEvent>& events,
                                std::vector<std::int64_t>& indices) const {
  const Band& b = bands_[band];
  Rng rng(derive_seed(config_.seed, {static_cast<std::uint64_t>(band), static_cast<std::uint64_t>(slice)}));
  const double start = static_cast<double>(slice) * b.slice;
  const double end = static_cast<double>(slice + 1) * b.slice;
  const auto width = static_cast<std::uint64_t>(b.hi - b.lo);
  const std::uint64_t count = rng.poisson(static_cast<double>(width) * (end - start));

  std::vector<std::pair<LookdownEvent, std::int64_t>> cell;
  cell.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    double t = start + rng.uniform() * (end - start);
    if (t >= end) t = std::nextafter(end, start);
    const std::int64_t idx = b.lo + static_cast<std::int64_t>(rng.below(width));
    const auto [src, dst] = pair_from_index(idx);
    cell.push_back({{t, src, dst}, idx});
  }
  std::sort(cell.begin(), cell.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  cell.erase(std::unique(cell.begin(), cell.end(), [](const auto& x, const auto& y) { return x.first == y.first; }),
             cell.end());
  events.clear();
  indices.clear();
  for (const auto& [e, idx] : cell) {
    events.push_back(e);
    indices.push_back(idx);
  }
}

EventCursor EventStream::forward(double start) const { return EventCursor(*this, start, true); }

EventCursor EventStream::backward(double start) const { return EventCursor(*this, start, false); }

std::vector<LookdownEvent> EventStream::events(double from, double to, int max_dst) const {
  std::vector<LookdownEvent> out;
  auto cursor = forward(from);
  while (auto e = cursor.next(max_dst)) {
    if (e->time > to) break;
    out.push_back(*e);
  }
  return out;
}

std::vector<LookdownEvent> EventStream::all_events() const {
  // Start just below the window so an event at exactly window_begin is kept.
  return events(std::nextafter(window_begin(), -std::numeric_limits<double>::infinity()), window_end(),
                level_cap());
}

// ---------------------------------------------------------------------------

EventCursor::EventCursor(const EventStream& stream, double start, bool forward)
    : stream_(&stream), forward_(forward), bands_(stream.bands_.size()) {
  constexpr int kMax = std::numeric_limits<int>::max();
  // Forward: only events strictly after start. Backward: events at or before start.
  last_ = {start, kMax, kMax};
}

bool EventCursor::before(const LookdownEvent& a, const LookdownEvent& b) const {
  return forward_ ? a < b : b < a;
}

void EventCursor::sync(std::size_t band) {
  BandBuffer& buf = bands_[band];
  if (!buf.loaded) {
    buf.loaded = true;
    buf.next_slice = stream_->slice_of(band, last_.time);
  }
  // Drop everything at or behind the cursor.
  auto first = std::partition_point(buf.events.begin() + static_cast<std::ptrdiff_t>(buf.pos), buf.events.end(),
                                    [&](const LookdownEvent& e) { return !before(last_, e); });
  buf.pos = static_cast<std::size_t>(first - buf.events.begin());
  if (buf.pos == buf.events.size()) {
    // Drained: skip straight to the slice holding the cursor.
    const std::int64_t here = stream_->slice_of(band, last_.time);
    buf.next_slice = forward_ ? std::max(buf.next_slice, here) : std::min(buf.next_slice, here);
    buf.events.clear();
    buf.indices.clear();
    buf.pos = 0;
    buf.scan = 0;
    buf.scan_bound = -1;
  } else if (buf.pos > 4096 && buf.pos * 2 > buf.events.size()) {
    const auto shift = static_cast<std::ptrdiff_t>(buf.pos);
    buf.events.erase(buf.events.begin(), buf.events.begin() + shift);
    buf.indices.erase(buf.indices.begin(), buf.indices.begin() + shift);
    buf.scan = buf.scan >= buf.pos ? buf.scan - buf.pos : 0;
    if (buf.scan == 0) buf.scan_bound = -1;
    buf.pos = 0;
  }
}

bool EventCursor::load_next_slice(std::size_t band) {
  BandBuffer& buf = bands_[band];
  if (buf.exhausted) return false;
  const auto& b = stream_->bands_[band];
  const std::int64_t s = buf.next_slice;
  const double start = static_cast<double>(s) * b.slice;
  const double end = static_cast<double>(s + 1) * b.slice;
  const double lo = stream_->window_begin();
  const double hi = stream_->window_end();
  if ((forward_ && start > hi) || (!forward_ && end < lo)) {
    buf.exhausted = true;
    return false;
  }
  std::vector<LookdownEvent> cell;
  std::vector<std::int64_t> idx;
  stream_->generate_cell(band, s, cell, idx);
  const std::size_t n = cell.size();
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t r = forward_ ? q : n - 1 - q;
    if (cell[r].time < lo || cell[r].time > hi) continue;
    if (!before(last_, cell[r])) continue;
    buf.events.push_back(cell[r]);
    buf.indices.push_back(idx[r]);
  }
  buf.next_slice = forward_ ? s + 1 : s - 1;
  return true;
}

std::optional<std::size_t> EventCursor::candidate(std::size_t band, std::int64_t bound) {
  BandBuffer& buf = bands_[band];
  const bool full = stream_->bands_[band].hi <= bound;
  std::size_t i = buf.pos;
  if (!full && buf.scan_bound >= 0 && buf.scan >= buf.pos && bound <= buf.scan_bound) i = buf.scan;
  for (;;) {
    while (i == buf.events.size()) {
      if (!load_next_slice(band)) return std::nullopt;
    }
    if (full || buf.indices[i] < bound) {
      buf.scan = i;
      buf.scan_bound = bound;
      return i;
    }
    ++i;
  }
}

std::optional<LookdownEvent> EventCursor::next(int max_dst) {
  const std::int64_t bound = pairs_up_to(std::min(max_dst, stream_->level_cap()));
  std::size_t active = 0;
  while (active < bands_.size() && stream_->bands_[active].lo < bound) ++active;
  for (std::size_t band = active; band < active_bands_; ++band) bands_[band].cached = false;
  active_bands_ = active;

  std::optional<LookdownEvent> best;
  std::size_t best_band = 0;
  for (std::size_t band = 0; band < active; ++band) {
    BandBuffer& buf = bands_[band];
    const bool full = stream_->bands_[band].hi <= bound;
    if (!buf.cached || !(full ? buf.cached_full : (!buf.cached_full && buf.scan_bound == bound))) {
      sync(band);
      buf.cached_at = candidate(band, bound);
      buf.cached = true;
      buf.cached_full = full;
    }
    if (!buf.cached_at) continue;
    const LookdownEvent& e = buf.events[*buf.cached_at];
    if (!best || before(e, *best)) {
      best = e;
      best_band = band;
    }
  }
  if (best) {
    last_ = *best;
    bands_[best_band].cached = false;
  }
  return best;
}

}  // namespace mrca::lookdown
