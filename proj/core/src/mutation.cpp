#include "mrca/mutation.hpp"

#include <cmath>
#include <string>

#include "mrca/analytics.hpp"
#include "mrca/stats.hpp"

namespace mrca::mutation {

void MutationConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ValidationError("theta must be a positive finite number");
}

std::vector<SubstitutionEvent> simulate_substitutions(std::span<const lookdown::MrcaPoint> points,
                                                      const MutationConfig& config, Rng& rng) {
  config.validate();
  if (points.size() < 2) throw ValidationError("simulate_substitutions: need at least two MRCA points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k].B < points[k].E)) {
      throw ValidationError("simulate_substitutions: B must precede E at point " + std::to_string(k));
    }
    if (k > 0 && !(points[k].E > points[k - 1].E && points[k].B > points[k - 1].B)) {
      throw ValidationError("simulate_substitutions: points not strictly increasing at " + std::to_string(k));
    }
  }
  std::vector<SubstitutionEvent> out;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double mean = 0.5 * config.theta * (points[k].B - points[k - 1].B);
    const auto s = static_cast<std::int64_t>(rng.poisson(mean));
    if (s > 0) out.push_back({points[k].E, s});
  }
  return out;
}

std::vector<SubstitutionEvent> simulate_substitutions(std::span<const lookdown::MrcaPoint> points,
                                                      const MutationConfig& config) {
  Rng rng(config.seed);
  return simulate_substitutions(points, config, rng);
}

double sample_Tc(Rng& rng) { return analytics::sample_Tc(rng); }

DispersionResult dispersion_of_substitution_times(std::span<const SubstitutionEvent> events, double window,
                                                  DispersionWeight weight) {
  if (events.size() < 100) {
    throw ValidationError("dispersion_of_substitution_times: need at least 100 events, got " +
                          std::to_string(events.size()));
  }
  if (!(window > 0.0)) throw ValidationError("dispersion_of_substitution_times: window must be positive");
  const double from = events.front().E;
  const double to = events.back().E;
  const auto m = static_cast<std::size_t>(std::floor((to - from) / window));
  if (m < 2) throw ValidationError("dispersion_of_substitution_times: fewer than two windows");
  std::vector<std::int64_t> counts(m, 0);
  for (const auto& e : events) {
    const auto k = static_cast<std::size_t>(std::floor((e.E - from) / window));
    if (k < m) counts[k] += weight == DispersionWeight::events ? 1 : e.S;
  }
  DispersionResult r;
  r.ratio = stats::dispersion_index(counts);
  r.windows = m;
  r.poisson_se = stats::dispersion_se(m);
  const std::size_t per_block = m / kDispersionBlocks;
  if (per_block >= 2) {
    std::vector<double> ratios;
    for (std::size_t b = 0; b < kDispersionBlocks; ++b) {
      const std::span<const std::int64_t> block(counts.data() + b * per_block, per_block);
      double total = 0.0;
      for (auto c : block) total += static_cast<double>(c);
      if (total > 0.0) ratios.push_back(stats::dispersion_index(block));
    }
    if (ratios.size() >= 2) {
      r.block_se = std::sqrt(stats::sample_moments(ratios).variance / static_cast<double>(ratios.size()));
    }
  }
  return r;
}

MassRate substitution_mass_rate(std::span<const SubstitutionEvent> events,
                                std::span<const lookdown::MrcaPoint> points) {
  if (points.size() < 2) throw ValidationError("substitution_mass_rate: need at least two MRCA points");
  MassRate r;
  for (const auto& e : events) r.total += static_cast<double>(e.S);
  r.span = points.back().B - points.front().B;
  r.rate = r.total / r.span;
  r.se = std::sqrt(r.rate / r.span);
  return r;
}

}  // namespace mrca::mutation
