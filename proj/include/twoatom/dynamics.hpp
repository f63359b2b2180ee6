#pragma once

/// \file dynamics.hpp
/// Closed-form evolution of the single-excitation two-atom state
///
///   |phi(0)> = cos(theta/2)|e1 g2>|0> + sin(theta/2)|g1 e2>|0>
///
/// and the observables built on the reduced X-form density matrix. The
/// doubly-excited admixture (rho11, rho14) is dropped throughout, which
/// underestimates the coherence at early times.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "twoatom/errors.hpp"
#include "twoatom/rates.hpp"

namespace twoatom {

using complex = std::complex<double>;

/// Mixing angle of the initial single-excitation superposition, reduced to
/// [-pi, pi]. theta = pi/2 is the super-radiant state, -pi/2 the sub-radiant.
class InitialState {
public:
  explicit InitialState(double theta) {
    if (!std::isfinite(theta)) throw domain_error("theta must be finite");
    theta_ = std::remainder(theta, 2.0 * std::numbers::pi);
  }

  double theta() const noexcept { return theta_; }
  double cos_half() const noexcept { return std::cos(0.5 * theta_); }
  double sin_half() const noexcept { return std::sin(0.5 * theta_); }

private:
  double theta_ = 0.0;
};

/// Amplitudes of |e1 g2>|0> (b1) and |g1 e2>|0> (b2) at time tau. Whatever
/// probability is missing from |b1|^2 + |b2|^2 sits in one-photon states.
struct AtomicState {
  complex b1;
  complex b2;
  double tau = 0.0;

  double norm_squared() const noexcept { return std::norm(b1) + std::norm(b2); }
};

/// Two-qubit density matrix in the product basis
/// |1> = |e1 e2>, |2> = |e1 g2>, |3> = |g1 e2>, |4> = |g1 g2>.
struct XStateMatrix {
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
  double rho44 = 0.0;
  complex rho23;
  complex rho14;

  double trace() const noexcept { return rho11 + rho22 + rho33 + rho44; }
};

struct CollectiveAmplitudes {
  complex plus;
  complex minus;
};

namespace detail {

inline void require_time(double tau) {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw domain_error("time must be finite and >= 0");
  }
}

}  // namespace detail

/// C_pm(tau) = exp(-[(G11 +- G12)/2] tau - i [s +- v] tau).
inline CollectiveAmplitudes c_plus_minus(const RateSet& rates, double tau) {
  detail::require_time(tau);
  const double g11 = rates.gamma11();
  const double g12 = rates.gamma12();
  const auto branch = [&](double sign) {
    return std::exp(complex{-0.5 * (g11 + sign * g12) * tau,
                            -(rates.s + sign * rates.v) * tau});
  };
  return {branch(+1.0), branch(-1.0)};
}

inline AtomicState amplitudes(const InitialState& init, const RateSet& rates,
                              double tau) {
  const auto [c_plus, c_minus] = c_plus_minus(rates, tau);
  const double sym = init.cos_half() + init.sin_half();
  const double anti = init.cos_half() - init.sin_half();
  return {0.5 * (sym * c_plus + anti * c_minus),
          0.5 * (sym * c_plus - anti * c_minus), tau};
}

/// l1-norm coherence 2|b1 b2*| in closed form:
///   e^{-G11 t} sqrt(cos^2(th) sin^2(2Vt) + [sin(th) cosh(G12 t) - sinh(G12 t)]^2)
/// with the hyperbolic factors folded into the exponentials so that large
/// G12 t cannot overflow.
inline double coherence_l1(const InitialState& init, const RateSet& rates,
                           double tau) {
  detail::require_time(tau);
  const double g11 = rates.gamma11();
  const double g12 = rates.gamma12();
  const double fast = std::exp(-(g11 + g12) * tau);
  const double slow = std::exp(-(g11 - g12) * tau);
  const double damped_cosh = 0.5 * (slow + fast);
  const double damped_sinh = 0.5 * (slow - fast);
  const double sin_theta = std::sin(init.theta());
  const double oscillating =
      std::cos(init.theta()) * std::sin(2.0 * rates.v * tau) * std::exp(-g11 * tau);
  return std::hypot(oscillating, sin_theta * damped_cosh - damped_sinh);
}

struct Populations {
  double p1;  // |g1 e2>|0>
  double p2;  // |e1 g2>|0>
};

inline Populations populations(const InitialState& init, const RateSet& rates,
                               double tau) {
  const AtomicState st = amplitudes(init, rates, tau);
  return {std::norm(st.b2), std::norm(st.b1)};
}

inline XStateMatrix reduced_density_matrix(const AtomicState& state) {
  XStateMatrix rho;
  rho.rho22 = std::norm(state.b1);
  rho.rho33 = std::norm(state.b2);
  rho.rho23 = state.b1 * std::conj(state.b2);
  rho.rho44 = 1.0 - rho.rho22 - rho.rho33;
  if (rho.rho44 < -1e-12 || rho.rho22 > 1.0 + 1e-12 || rho.rho33 > 1.0 + 1e-12) {
    throw consistency_error("atomic state carries more than unit probability");
  }
  if (rho.rho44 < 0.0) rho.rho44 = 0.0;
  return rho;
}

/// l1 coherence of an X state: 2(|rho23| + |rho14|).
inline double l1_coherence(const XStateMatrix& rho) {
  return 2.0 * (std::abs(rho.rho23) + std::abs(rho.rho14));
}

/// Wootters concurrence specialised to X states.
inline double concurrence(const XStateMatrix& rho) {
  const double a = 2.0 * (std::abs(rho.rho23) - std::sqrt(rho.rho11 * rho.rho44));
  const double b = 2.0 * (std::abs(rho.rho14) - std::sqrt(rho.rho22 * rho.rho33));
  return std::max({0.0, a, b});
}

/// Long-time coherence. With the sub-radiant decay G11 - G12 below
/// `epsilon` the coherence settles at (1 - sin th)/2; with the super-radiant
/// decay G11 + G12 below it, at (1 + sin th)/2. When both vanish nothing
/// decays and the initial |sin th| is kept (exact for v = 0, the plate
/// limit; a nonzero v then makes the coherence oscillate instead).
inline double asymptotic_coherence(const InitialState& init, const RateSet& rates,
                                   double epsilon = kDefaultFrozenTolerance) {
  const double sub = rates.gamma11() - rates.gamma12();
  const double super = rates.gamma11() + rates.gamma12();
  const double sin_theta = std::sin(init.theta());
  const bool sub_frozen = sub <= epsilon;
  const bool super_frozen = super <= epsilon;
  if (sub_frozen && super_frozen) return std::abs(sin_theta);
  if (sub_frozen) return 0.5 * (1.0 - sin_theta);
  if (super_frozen) return 0.5 * (1.0 + sin_theta);
  return 0.0;
}

}  // namespace twoatom
