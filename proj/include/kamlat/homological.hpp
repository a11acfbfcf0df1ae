#ifndef KAMLAT_HOMOLOGICAL_HPP
#define KAMLAT_HOMOLOGICAL_HPP

#include <optional>

#include "kamlat/torus_function.hpp"
#include "kamlat/window.hpp"

namespace kamlat {

/// Lower bound policy for the small divisors <l, omega>. The engine treats the
/// policy as a floor plus reporting flavor; it never changes the solution
/// formula itself.
struct DivisorPolicy {
  enum class Kind { BourgainDiophantine, ControlFunction };

  Kind kind = Kind::BourgainDiophantine;
  // floor = max(floor_abs, floor_rel * ||omega||_inf)
  double floor_rel = 1e-13;
  double floor_abs = 0.0;
  double zero_average_tol = 1e-12;  // relative to max |g_hat|

  double floor_for(const FrequencyVector& omega) const {
    return std::max(floor_abs, floor_rel * omega.max_abs());
  }
};

struct HomologicalReport {
  double min_divisor = 0.0;     // smallest |<l, omega>| met
  MultiIndex argmin_divisor;    // where it was met
  size_t modes = 0;
};

/// Solves omega . d_x f = g for zero-average g: f_hat(l) = g_hat(l) / (i <l, omega>),
/// f_hat(0) = 0. Throws NonZeroAverage / ResonantDivisor.
TorusFunction solve_homological(const TorusFunction& g, const FrequencyVector& omega,
                                const DivisorPolicy& policy,
                                HomologicalReport* report = nullptr);

/// Empirical ratio ||f||_sigma / ||g||_{sigma+rho} for a solved pair, the
/// quantity the exponential divisor bound controls.
double homological_ratio(const TorusFunction& f, const TorusFunction& g, double sigma,
                         double rho);

/// log of the bound exp((tau / rho^{1/eta}) log(tau / rho)).
double divisor_bound_log(double tau, double rho, double eta);

/// Smallest tau <= tau_max whose bound dominates the given ratio at rho
/// (bisection; returns nullopt if even tau_max fails).
std::optional<double> fit_divisor_bound_tau(double ratio, double rho, double eta,
                                            double tau_max);

}  // namespace kamlat

#endif
