#pragma once

/// \file analysis.hpp
/// Frozen-coherence classification and parameter-regime helpers.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twoatom/dynamics.hpp"
#include "twoatom/errors.hpp"
#include "twoatom/rates.hpp"

namespace twoatom {

enum class FrozenClass {
  FullyFrozen,         // both collective decay rates vanish
  SubradiantFrozen,    // only G11 - G12 vanishes
  SuperradiantFrozen,  // only G11 + G12 vanishes
  NotFrozen,
};

inline std::string to_string(FrozenClass c) {
  switch (c) {
    case FrozenClass::FullyFrozen: return "FullyFrozen";
    case FrozenClass::SubradiantFrozen: return "SubradiantFrozen";
    case FrozenClass::SuperradiantFrozen: return "SuperradiantFrozen";
    case FrozenClass::NotFrozen: return "NotFrozen";
  }
  return "unknown";
}

struct FrozenReport {
  double subradiant_decay = 0.0;
  double superradiant_decay = 0.0;
  FrozenClass classification = FrozenClass::NotFrozen;
  double epsilon = kDefaultFrozenTolerance;
  double asymptotic_value = 0.0;
};

/// Classifies `rates` by which collective decay rates fall below `epsilon`
/// and reports the long-time coherence for the initial angle `theta`.
inline FrozenReport check_frozen(const RateSet& rates, double theta,
                                 double epsilon = kDefaultFrozenTolerance) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw domain_error("frozen tolerance must be finite and > 0");
  }
  const CollectiveRates c = collective(rates);
  FrozenReport report;
  report.subradiant_decay = c.subradiant_decay();
  report.superradiant_decay = c.superradiant_decay();
  report.epsilon = epsilon;

  const bool sub = report.subradiant_decay <= epsilon;
  const bool super = report.superradiant_decay <= epsilon;
  if (sub && super) {
    report.classification = FrozenClass::FullyFrozen;
  } else if (sub) {
    report.classification = FrozenClass::SubradiantFrozen;
  } else if (super) {
    report.classification = FrozenClass::SuperradiantFrozen;
  } else {
    report.classification = FrozenClass::NotFrozen;
  }
  report.asymptotic_value = asymptotic_coherence(InitialState{theta}, rates, epsilon);
  return report;
}

/// Largest static free-space separation whose sub-radiant emission rate
/// 1 - Gamma12/Gamma11 stays within `epsilon`. The search is restricted to
/// (0, pi], where the modulation ratio decreases monotonically.
inline ReducedSeparation separation_for_threshold(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw domain_error("threshold must lie in (0, 1)");
  }
  const auto excess = [epsilon](double r) {
    return 1.0 - free_space_modulation_ratio(ReducedSeparation{r}) - epsilon;
  };
  double hi = std::numbers::pi;
  if (excess(hi) <= 0.0) {
    throw range_error("sub-radiant rate stays below the threshold on (0, pi]");
  }
  double lo = 0.0;  // excess(0) = -epsilon < 0
  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return ReducedSeparation{lo};
}

/// True when the frozen value (1 - sin th)/2 exceeds the initial coherence
/// |sin th|, i.e. sin th in (-1, 1/3).
inline bool enhancement_region(double theta) {
  const double s = std::sin(InitialState{theta}.theta());
  return s > -1.0 && s < 1.0 / 3.0;
}

/// Fidelity of the normalised atomic part of `state` with the antisymmetric
/// state (|e1 g2> - |g1 e2>)/sqrt(2).
inline double subradiant_overlap(const AtomicState& state) {
  const double scale = std::max(std::abs(state.b1), std::abs(state.b2));
  if (!(scale > 0.0)) {
    throw undefined_error("sub-radiant overlap is undefined for a fully decayed state");
  }
  const complex b1 = state.b1 / scale;
  const complex b2 = state.b2 / scale;
  return std::norm(b1 - b2) / (2.0 * (std::norm(b1) + std::norm(b2)));
}

/// Lifetime 1/(G11 - G12) of the quasi-frozen plateau; +infinity when the
/// sub-radiant channel does not decay at all.
inline double plateau_timescale(const RateSet& rates) {
  const double sub = rates.gamma11() - rates.gamma12();
  if (sub <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / sub;
}

}  // namespace twoatom
