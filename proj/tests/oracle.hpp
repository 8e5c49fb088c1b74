#pragma once

// Forward replay of the graphical construction, used as an independent
// oracle for the backward walks.

#include <set>
#include <vector>

#include "mrca/event_stream.hpp"

namespace oracle {

/// anc[k-1] is the level at time s of the ancestor of level k at time t,
/// obtained by pushing labels forward through every event in (s, t].
inline std::vector<int> replay_ancestors(const mrca::lookdown::EventStream& stream, double s, double t) {
  const int n = stream.level_cap();
  std::vector<int> anc(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) anc[static_cast<std::size_t>(k)] = k + 1;
  for (const auto& e : stream.events(s, t, n)) {
    const int parent = anc[static_cast<std::size_t>(e.src - 1)];
    for (int k = n - 1; k >= e.dst; --k) anc[static_cast<std::size_t>(k)] = anc[static_cast<std::size_t>(k - 1)];
    anc[static_cast<std::size_t>(e.dst - 1)] = parent;
  }
  return anc;
}

inline int distinct_ancestors(const mrca::lookdown::EventStream& stream, double s, double t) {
  const auto anc = replay_ancestors(stream, s, t);
  return static_cast<int>(std::set<int>(anc.begin(), anc.end()).size());
}

}  // namespace oracle
