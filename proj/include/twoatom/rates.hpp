#pragma once

/// \file rates.hpp
/// Transition-rate and dipole-coupling coefficients for a pair of identical
/// two-level atoms.
///
/// All rates are in units of the static single-atom spontaneous emission
/// rate Gamma_0, so the static vacuum self-rate is exactly 1. Times elsewhere
/// in the library are in units of 1/Gamma_0.

#include <cmath>
#include <string>

#include "twoatom/errors.hpp"

namespace twoatom {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

/// Default tolerance below which a collective decay rate counts as zero.
inline constexpr double kDefaultFrozenTolerance = 1e-3;

/// Largest acceleration parameter a/(pi w0 c) accepted by the first-order
/// acceleration correction.
inline constexpr double kMaxAccelerationParameter = 0.2;

/// Below this R the modulation ratio is taken from its Taylor series.
inline constexpr double kModulationSeriesCutoff = 1e-3;

/// Dimensionless separation R = r w0 / c.
class ReducedSeparation {
public:
  explicit ReducedSeparation(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0) {
      throw domain_error("reduced separation must be finite and >= 0");
    }
  }

  double value() const noexcept { return value_; }

  friend bool operator==(ReducedSeparation, ReducedSeparation) = default;

private:
  double value_;
};

/// Single-atom rates (11), cross-atom modulations (12), the dipole-dipole
/// potential v and the common level shift s.
struct RateSet {
  double g11_down = 0.0;
  double g11_up = 0.0;
  double g12_down = 0.0;
  double g12_up = 0.0;
  double v = 0.0;
  double s = 0.0;

  double gamma11() const noexcept { return g11_down + g11_up; }
  double gamma12() const noexcept { return g12_down + g12_up; }

  friend bool operator==(const RateSet&, const RateSet&) = default;
};

/// Throws domain_error unless `rates` has non-negative self-rates, cross
/// rates bounded by the self-rates, and only finite entries.
inline void validate(const RateSet& rates) {
  const double fields[] = {rates.g11_down, rates.g11_up, rates.g12_down,
                           rates.g12_up,   rates.v,      rates.s};
  for (double f : fields) {
    if (!std::isfinite(f)) throw domain_error("rate set has a non-finite entry");
  }
  if (rates.g11_down < 0.0 || rates.g11_up < 0.0) {
    throw domain_error("single-atom rates must be >= 0");
  }
  // A few ulps of slack: |g12| == g11 is the Dicke limit and is legal.
  const auto exceeds = [](double cross, double self) {
    return std::abs(cross) > self * (1.0 + 4e-16) + 1e-300;
  };
  if (exceeds(rates.g12_down, rates.g11_down) ||
      exceeds(rates.g12_up, rates.g11_up)) {
    throw domain_error("cross rates must satisfy |g12| <= g11");
  }
}

enum class EnvironmentKind { Vacuum, Thermal, Accelerated };

/// Field state seen by the atoms. Thermal carries the Bose occupation
/// n = 1/(e^{w0 beta} - 1); Accelerated carries alpha = a/(pi w0 c).
class Environment {
public:
  static Environment vacuum() { return Environment{EnvironmentKind::Vacuum, 0.0}; }

  static Environment thermal(double occupation) {
    if (!std::isfinite(occupation) || occupation < 0.0) {
      throw domain_error("thermal occupation n must be finite and >= 0");
    }
    return Environment{EnvironmentKind::Thermal, occupation};
  }

  static Environment thermal_from_beta(double omega0_beta) {
    if (!std::isfinite(omega0_beta) || omega0_beta <= 0.0) {
      throw domain_error("omega0*beta must be finite and > 0");
    }
    return thermal(1.0 / std::expm1(omega0_beta));
  }

  static Environment accelerated(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
      throw domain_error("acceleration parameter must be finite and >= 0");
    }
    if (alpha > kMaxAccelerationParameter) {
      throw domain_error("acceleration parameter exceeds first-order validity (0.2)");
    }
    return Environment{EnvironmentKind::Accelerated, alpha};
  }

  EnvironmentKind kind() const noexcept { return kind_; }
  double occupation() const noexcept {
    return kind_ == EnvironmentKind::Thermal ? param_ : 0.0;
  }
  double alpha() const noexcept {
    return kind_ == EnvironmentKind::Accelerated ? param_ : 0.0;
  }

private:
  Environment(EnvironmentKind kind, double param) : kind_(kind), param_(param) {}

  EnvironmentKind kind_;
  double param_;
};

/// Super-(plus) and sub-(minus) radiant combinations.
struct CollectiveRates {
  double gamma_plus_down = 0.0;
  double gamma_minus_down = 0.0;
  double gamma_plus_up = 0.0;
  double gamma_minus_up = 0.0;
  double gamma11_total = 0.0;
  double gamma12_total = 0.0;

  double superradiant_decay() const noexcept { return gamma11_total + gamma12_total; }
  double subradiant_decay() const noexcept { return gamma11_total - gamma12_total; }
};

struct KmsPair {
  double down;
  double up;
};

inline ReducedSeparation physical_to_reduced(double r_meters, double omega0) {
  if (!std::isfinite(r_meters) || r_meters < 0.0) {
    throw domain_error("separation must be finite and >= 0");
  }
  if (!std::isfinite(omega0) || omega0 <= 0.0) {
    throw domain_error("transition frequency must be finite and > 0");
  }
  return ReducedSeparation{r_meters * omega0 / kSpeedOfLight};
}

/// Gamma12_down / Gamma11_down = 3 (sin R - R cos R) / R^3 for static atoms
/// with dipoles along their separation.
inline double free_space_modulation_ratio(ReducedSeparation sep) {
  const double r = sep.value();
  if (r == 0.0) return 1.0;
  if (r < kModulationSeriesCutoff) {
    const double r2 = r * r;
    return 1.0 - r2 / 10.0 + r2 * r2 / 280.0;
  }
  // sin R - R cos R cancels badly for small R; j1 does not.
  if (r < 1.0) return 3.0 * std::sph_bessel(1u, r) / r;
  return 3.0 * (std::sin(r) - r * std::cos(r)) / (r * r * r);
}

/// V / Gamma11_down = -3 (cos R + R sin R) / (2 R^3). Diverges at contact.
inline double free_space_potential_ratio(ReducedSeparation sep) {
  const double r = sep.value();
  if (r == 0.0) {
    throw singularity_error("dipole-dipole potential diverges at R = 0", -1.5, -3);
  }
  return -3.0 * (std::cos(r) + r * std::sin(r)) / (2.0 * r * r * r);
}

/// Static atoms in free vacuum: no spontaneous excitation, unit self-rate.
inline RateSet static_free_space_rates(ReducedSeparation sep) {
  RateSet rates;
  rates.g11_down = 1.0;
  rates.g12_down = free_space_modulation_ratio(sep);
  rates.v = free_space_potential_ratio(sep);
  return rates;
}

/// Atoms close to a conducting plate with dipoles parallel to it: every
/// field correlation, and with it every rate and the potential, vanishes.
inline RateSet near_boundary_rates() { return RateSet{}; }

inline RateSet apply_environment(const RateSet& base, const Environment& env) {
  validate(base);
  RateSet out = base;
  switch (env.kind()) {
    case EnvironmentKind::Vacuum:
      break;
    case EnvironmentKind::Thermal: {
      if (base.g11_up != 0.0 || base.g12_up != 0.0) {
        throw domain_error("thermal scaling needs a vacuum base without excitation rates");
      }
      const double n = env.occupation();
      out.g11_down = (1.0 + n) * base.g11_down;
      out.g11_up = n * base.g11_down;
      out.g12_down = (1.0 + n) * base.g12_down;
      out.g12_up = n * base.g12_down;
      break;
    }
    case EnvironmentKind::Accelerated: {
      const double k = 1.0 + env.alpha();
      out.g11_down *= k;
      out.g11_up *= k;
      out.g12_down *= k;
      out.g12_up *= k;
      break;
    }
  }
  return out;
}

inline CollectiveRates collective(const RateSet& rates) {
  CollectiveRates c;
  c.gamma_plus_down = rates.g11_down + rates.g12_down;
  c.gamma_minus_down = rates.g11_down - rates.g12_down;
  c.gamma_plus_up = rates.g11_up + rates.g12_up;
  c.gamma_minus_up = rates.g11_up - rates.g12_up;
  c.gamma11_total = rates.gamma11();
  c.gamma12_total = rates.gamma12();
  return c;
}

/// Thermal emission and absorption rates from the vacuum emission rate:
/// down = e^x/(e^x - 1) * G, up = 1/(e^x - 1) * G with x = w0 beta.
inline KmsPair kms_pair(double gamma_down_vacuum, double omega0_beta) {
  if (!std::isfinite(gamma_down_vacuum) || gamma_down_vacuum < 0.0) {
    throw domain_error("vacuum emission rate must be finite and >= 0");
  }
  if (!std::isfinite(omega0_beta) || omega0_beta <= 0.0) {
    throw domain_error("omega0*beta must be > 0 (infinite temperature diverges)");
  }
  const double n = 1.0 / std::expm1(omega0_beta);
  return {(1.0 + n) * gamma_down_vacuum, n * gamma_down_vacuum};
}

inline std::string to_string(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::Vacuum: return "vacuum";
    case EnvironmentKind::Thermal: return "thermal";
    case EnvironmentKind::Accelerated: return "accelerated";
  }
  return "unknown";
}

}  // namespace twoatom
