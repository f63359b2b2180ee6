#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "twoatom/analysis.hpp"
#include "twoatom/dynamics.hpp"

namespace twoatom {

/// Observables sampled on a time grid. subradiant_overlap is NaN where the
/// atomic part has decayed to exactly zero norm.
struct CoherenceTrace {
  std::vector<double> taus;
  std::vector<double> coherence;
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> concurrence;
  std::vector<double> subradiant_overlap;

  std::size_t size() const noexcept { return taus.size(); }
};

/// `points` equally spaced times covering [0, tau_max].
inline std::vector<double> linear_grid(double tau_max, std::size_t points) {
  if (!std::isfinite(tau_max) || tau_max <= 0.0) {
    throw domain_error("grid end must be finite and > 0");
  }
  if (points < 2) throw domain_error("grid needs at least two points");
  std::vector<double> grid(points);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = tau_max * (static_cast<double>(i) / last);
  }
  return grid;
}

inline CoherenceTrace trace(const InitialState& init, const RateSet& rates,
                            std::span<const double> grid) {
  if (grid.empty()) throw domain_error("time grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw domain_error("time grid entries must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw domain_error("time grid must be strictly increasing");
    }
  }

  CoherenceTrace out;
  const std::size_t n = grid.size();
  out.taus.assign(grid.begin(), grid.end());
  out.coherence.resize(n);
  out.p1.resize(n);
  out.p2.resize(n);
  out.concurrence.resize(n);
  out.subradiant_overlap.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double tau = grid[i];
    const AtomicState state = amplitudes(init, rates, tau);
    const XStateMatrix rho = reduced_density_matrix(state);
    out.coherence[i] = coherence_l1(init, rates, tau);
    out.p1[i] = rho.rho33;
    out.p2[i] = rho.rho22;
    out.concurrence[i] = concurrence(rho);
    const bool decayed = state.b1 == complex{} && state.b2 == complex{};
    out.subradiant_overlap[i] = decayed ? std::numeric_limits<double>::quiet_NaN()
                                        : subradiant_overlap(state);
  }
  return out;
}

}  // namespace twoatom
