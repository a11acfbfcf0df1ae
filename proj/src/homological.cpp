#include "kamlat/homological.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kamlat/errors.hpp"

namespace kamlat {

TorusFunction solve_homological(const TorusFunction& g, const FrequencyVector& omega,
                                const DivisorPolicy& policy, HomologicalReport* report) {
  const double scale = g.max_abs_coeff();
  if (std::abs(g.average()) > policy.zero_average_tol * std::max(scale, 1e-300) &&
      std::abs(g.average()) > 0.0)
    throw Error(ErrorKind::NonZeroAverage, "solve_homological: nonzero average right-hand side");

  const double floor = policy.floor_for(omega);
  TorusFunction f(g.window(), g.truncation());
  HomologicalReport rep;
  rep.min_divisor = std::numeric_limits<double>::infinity();

  for (const auto& [l, v] : g.coeffs()) {
    if (l.zero()) continue;
    double d = 0.0;
    for (const auto& [site, k] : l.entries()) d += k * omega.at(site);
    const double ad = std::fabs(d);
    if (ad < rep.min_divisor) {
      rep.min_divisor = ad;
      rep.argmin_divisor = l;
    }
    if (ad <= floor) {
      std::ostringstream msg;
      msg << "solve_homological: divisor " << ad << " below floor " << floor;
      throw Error(ErrorKind::ResonantDivisor, msg.str());
    }
    f.set(l, v / Complex{0.0, d});
    ++rep.modes;
  }
  if (report) *report = rep;
  return f;
}

double homological_ratio(const TorusFunction& f, const TorusFunction& g, double sigma,
                         double rho) {
  const double den = g.norm(sigma + rho);
  return den > 0.0 ? f.norm(sigma) / den : 0.0;
}

double divisor_bound_log(double tau, double rho, double eta) {
  return tau / std::pow(rho, 1.0 / eta) * std::log(tau / rho);
}

std::optional<double> fit_divisor_bound_tau(double ratio, double rho, double eta,
                                            double tau_max) {
  const double target = std::log(std::max(ratio, 1e-300));
  // The bound is increasing in tau on tau > rho/e; bracket from there.
  double lo = rho / std::exp(1.0) * (1.0 + 1e-12);
  if (divisor_bound_log(tau_max, rho, eta) < target) return std::nullopt;
  if (divisor_bound_log(lo, rho, eta) >= target) return lo;
  double hi = tau_max;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (divisor_bound_log(mid, rho, eta) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace kamlat
