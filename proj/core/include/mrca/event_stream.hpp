#pragma once

// Finite-level look-down event streams.
//
// For every ordered pair of levels i < j <= N the times at which level j looks
// down to level i form an independent rate-1 Poisson process. Materializing
// all N(N-1)/2 processes is wasteful (total rate C(N,2)), and every consumer
// only needs the events whose destination lies below some moving threshold.
// The stream is therefore a pure function of (seed, N): pairs are indexed
// 0 .. C(N,2)-1 in order of (dst, src), grouped into dyadic bands of indices,
// and each band is cut into time slices holding about kCellEvents events.
// A slice is generated on demand from a seed derived from (seed, band, slice).
// Cursors merge the bands lazily in time order, in either direction.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mrca::lookdown {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct EngineConfig {
  int level_cap = 1000;
  double t_start = 0.0;
  double t_end = 100.0;
  double burn_in = 20.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
  [[nodiscard]] double window_begin() const { return t_start - burn_in; }
};

struct LookdownEvent {
  double time = 0.0;
  int src = 1;
  int dst = 2;

  auto operator<=>(const LookdownEvent&) const = default;
};

/// Number of pairs (i, j) with i < j <= level, i.e. C(level, 2).
std::int64_t pairs_up_to(int level);
/// Index of the pair (src, dst): C(dst-1, 2) + src - 1.
std::int64_t pair_index(int src, int dst);
std::pair<int, int> pair_from_index(std::int64_t index);

class EventStream;

/// Walks the events of a stream in time order (forward) or reverse time order
/// (backward), restricted at each step to destinations <= a caller-supplied
/// level. Because the restriction may change between calls, skipped events
/// are never discarded until the cursor has moved past them in time.
class EventCursor {
 public:
  /// Next event strictly after (forward) or strictly before (backward) the
  /// last returned one with dst <= max_dst, or nullopt past the window edge.
  std::optional<LookdownEvent> next(int max_dst);
  /// Time of the last event returned (or the start time).
  [[nodiscard]] double position() const { return last_.time; }

 private:
  friend class EventStream;
  EventCursor(const EventStream& stream, double start, bool forward);

  struct BandBuffer {
    std::vector<LookdownEvent> events;    // cursor order
    std::vector<std::int64_t> indices;    // pair index of each event
    std::size_t pos = 0;                  // first event not yet behind the cursor
    std::int64_t next_slice = 0;          // next slice to load in cursor order
    bool loaded = false;
    bool exhausted = false;               // reached the window edge
    std::size_t scan = 0;                 // memoized candidate position
    std::int64_t scan_bound = -1;         // bound the candidate was found for
    // Result of the last candidate() call; stays valid until this band
    // supplies an event or the bound changes.
    bool cached = false;
    bool cached_full = false;
    std::optional<std::size_t> cached_at;
  };

  bool before(const LookdownEvent& a, const LookdownEvent& b) const;
  void sync(std::size_t band);
  bool load_next_slice(std::size_t band);
  std::optional<std::size_t> candidate(std::size_t band, std::int64_t bound);

  const EventStream* stream_;
  bool forward_;
  LookdownEvent last_;
  std::vector<BandBuffer> bands_;
  std::size_t active_bands_ = 0;
};

class EventStream {
 public:
  /// Throws ConfigError for an invalid configuration.
  explicit EventStream(const EngineConfig& config);

  [[nodiscard]] const EngineConfig& config() const { return config_; }
  [[nodiscard]] int level_cap() const { return config_.level_cap; }
  [[nodiscard]] double window_begin() const { return config_.window_begin(); }
  [[nodiscard]] double window_end() const { return config_.t_end; }

  /// Events with time > start, increasing.
  [[nodiscard]] EventCursor forward(double start) const;
  /// Events with time <= start, decreasing.
  [[nodiscard]] EventCursor backward(double start) const;

  /// Events in (from, to] with dst <= max_dst, time ordered.
  [[nodiscard]] std::vector<LookdownEvent> events(double from, double to, int max_dst) const;
  /// Every event of the simulated window. Intended for small level caps.
  [[nodiscard]] std::vector<LookdownEvent> all_events() const;

  /// Expected events per generated cell.
  static constexpr double kCellEvents = 32.0;

 private:
  friend class EventCursor;

  struct Band {
    std::int64_t lo = 0;  // first pair index
    std::int64_t hi = 0;  // one past the last pair index
    double slice = 0.0;   // slice length in model time
  };

  /// Events of one (band, slice) cell, increasing in time, with pair indices.
  void generate_cell(std::size_t band, std::int64_t slice, std::vector<LookdownEvent>& events,
                     std::vector<std::int64_t>& indices) const;
  [[nodiscard]] std::int64_t slice_of(std::size_t band, double t) const;

  EngineConfig config_;
  std::vector<Band> bands_;
};

}  // namespace mrca::lookdown
