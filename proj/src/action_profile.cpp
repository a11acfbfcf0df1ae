#include "kamlat/action_profile.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kamlat/errors.hpp"
#include "kamlat/series.hpp"
#include "nlohmann/json.hpp"

namespace kamlat {

double turning_point(const Potential& v, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::TurningPointNotFound, "turning_point: h <= 0");
  double hi = 1.0;
  int guard = 0;
  while (v.value(hi) < h) {
    hi *= 2.0;
    if (++guard > 600)
      throw Error(ErrorKind::TurningPointNotFound, "turning_point: bracketing failed");
  }
  double lo = 0.0;
  return solve_monotone([&](double x) { return v.value(x); },
                        [&](double x) { return v.d1(x); }, h, lo, hi);
}

double area_rho(const Potential& v, double h, double abs_tol) {
  const double xp = turning_point(v, h);
  auto f = [&](double s) {
    const double d = h - v.value(s);
    return d > 0.0 ? std::sqrt(d) : 0.0;
  };
  auto q = tanh_sinh(f, 0.0, xp, abs_tol * 0.5 / (2.0 * std::numbers::sqrt2), 12);
  return 2.0 * std::numbers::sqrt2 * q.value;
}

double loop_area(const Potential& v, double h, double abs_tol) {
  const double xp = turning_point(v, h);
  // x_- for even potentials is -x_+; the level curve is assumed symmetric.
  auto f = [&](double s) {
    const double d = h - v.value(s);
    return d > 0.0 ? std::sqrt(2.0 * d) : 0.0;
  };
  auto q = tanh_sinh(f, -xp, xp, abs_tol * 0.5, 12);
  return 2.0 * q.value;
}

double period(const Potential& v, double h, double abs_tol) {
  const double xp = turning_point(v, h);
  auto f = [&](double s) {
    const double d = h - v.value(s);
    return d > 0.0 ? 1.0 / std::sqrt(2.0 * d) : 0.0;
  };
  auto q = tanh_sinh(f, -xp, xp, abs_tol, 12);
  return 2.0 * q.value;
}

double ActionProfile::pi() { return std::numbers::pi; }

void ActionProfile::check_range(double h) const {
  if (!(h >= h_min_ * (1.0 - 1e-12) && h <= h_max_ * (1.0 + 1e-12)))
    throw Error(ErrorKind::OutOfRange, "ActionProfile: h outside fitted interval");
}

double ActionProfile::rho(double h) const {
  check_range(h);
  return h * rho_over_h_.eval(h);
}
double ActionProfile::rho_d1(double h) const {
  check_range(h);
  return rho_over_h_.eval(h) + h * f_d1_.eval(h);
}
double ActionProfile::rho_d2(double h) const {
  check_range(h);
  return 2.0 * f_d1_.eval(h) + h * f_d2_.eval(h);
}

double ActionProfile::h_from_rho(double r) const {
  return solve_monotone([&](double h) { return rho(h); },
                        [&](double h) { return rho_d1(h); }, r, h_min_, h_max_);
}

double ActionProfile::h_from_action(double i) const { return h_from_rho(i * pi()); }

double ActionProfile::h0_prime(double i) const {
  const double h = h_from_action(i);
  return pi() / rho_d1(h);
}

double ActionProfile::h0_second(double i) const {
  const double h = h_from_action(i);
  const double d1 = rho_d1(h) / pi();
  const double d2 = rho_d2(h) / pi();
  return -d2 / (d1 * d1 * d1);
}

std::string ActionProfile::export_json() const {
  nlohmann::json j;
  j["V"] = v_.descriptor();
  j["I"] = {h_min_, h_max_};
  j["cheb"] = rho_over_h_.coeffs();
  j["fit_residual"] = fit_residual_;
  j["loop_to_rho_ratio"] = loop_ratio_;
  j["c_bounds"] = {c_lo_, c_hi_};
  j["action_range"] = {action(h_min_), action(h_max_)};
  if (!area_series_.empty()) {
    j["rho_series"] = area_series_;
    j["H0_series"] = inv_series_;
  }
  return j.dump(2);
}

ActionProfile build_profile(const Potential& v, double h_min, double h_max,
                            const ProfileOptions& opt) {
  if (!(h_min > 0.0 && h_max > h_min))
    throw Error(ErrorKind::Config, "build_profile: need 0 < h_min < h_max");
  // positivity of V on the working interval (sampled)
  const double xp_max = turning_point(v, h_max);
  for (int i = 1; i <= 32; ++i) {
    const double x = xp_max * i / 32.0;
    if (!(v.value(x) > 0.0))
      throw Error(ErrorKind::Config, "build_profile: V not positive on the working range");
  }

  ActionProfile p;
  p.v_ = v;
  p.h_min_ = h_min;
  p.h_max_ = h_max;
  p.rho_over_h_ = ChebyshevFit::fit([&](double h) { return area_rho(v, h) / h; }, h_min,
                                    h_max, opt.nodes);
  p.f_d1_ = p.rho_over_h_.derivative();
  p.f_d2_ = p.f_d1_.derivative();
  p.fit_residual_ =
      p.rho_over_h_.residual([&](double h) { return area_rho(v, h) / h; }, 101);
  // residual is on rho/h; scale back to rho at the top of the range
  if (p.fit_residual_ * h_max > opt.fit_residual_tol * std::max(1.0, p.rho(h_max)))
    throw Error(ErrorKind::IntegrationFailure,
                "build_profile: Chebyshev fit residual above tolerance");

  // nondegeneracy scan: rho' != 0 and rho'' != 0 on the interval
  double d1_scale = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double h = h_min + (h_max - h_min) * i / 200.0;
    d1_scale = std::max(d1_scale, std::fabs(p.rho_d1(h)));
  }
  for (int i = 0; i <= 200; ++i) {
    const double h = h_min + (h_max - h_min) * i / 200.0;
    const double d1 = p.rho_d1(h);
    const double d2 = p.rho_d2(h);
    if (std::fabs(d1) < opt.nondegeneracy_rel_tol * d1_scale)
      throw Error(ErrorKind::NondegeneracyViolated,
                  "build_profile: rho'(h) vanishes near h = " + std::to_string(h));
    if (std::fabs(d2) * (h_max - h_min) < opt.nondegeneracy_rel_tol * std::fabs(d1))
      throw Error(ErrorKind::NondegeneracyViolated,
                  "build_profile: rho''(h) vanishes near h = " + std::to_string(h));
  }

  // canonical Hessian bounds over the interval
  p.c_lo_ = std::numeric_limits<double>::infinity();
  p.c_hi_ = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double h = h_min + (h_max - h_min) * i / 100.0;
    const double hess = p.h0_second(p.action(h));
    p.c_lo_ = std::min(p.c_lo_, std::fabs(hess));
    p.c_hi_ = std::max(p.c_hi_, std::fabs(hess));
  }

  // independent loop-area route, ratio recorded (2 for even potentials)
  double ratio = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double h = h_min + (h_max - h_min) * i / 8.0;
    ratio = std::max(ratio, loop_area(v, h) / p.rho(h));
  }
  p.loop_ratio_ = ratio;

  if (opt.fit_small_h_series) {
    std::vector<double> hs, rs;
    for (int i = 0; i < opt.series_samples; ++i) {
      const double h = h_min + (h_max - h_min) * (i + 0.5) / opt.series_samples;
      hs.push_back(h);
      rs.push_back(area_rho(v, h));
    }
    p.area_series_ = fit_series_through_origin(hs, rs, opt.series_order);
    p.inv_series_ = revert_series(p.area_series_, opt.series_order);
  }
  return p;
}

std::pair<FrequencyVector, std::vector<double>> frequency_map(
    const ActionProfile& profile, const SiteWindow& window, const std::vector<double>& xi) {
  if (static_cast<int>(xi.size()) != window.size())
    throw Error(ErrorKind::Config, "frequency_map: xi size mismatch");
  FrequencyVector omega(window);
  std::vector<double> hess(xi.size(), 0.0);
  for (size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] >= profile.action_min() && xi[i] <= profile.action_max()))
      throw Error(ErrorKind::OutOfRange, "frequency_map: xi outside the action range");
    omega.values[i] = profile.h0_prime(xi[i]);
    hess[i] = profile.h0_second(xi[i]);
    const double a = std::fabs(hess[i]);
    if (a < profile.c_lo() * (1.0 - 1e-6) || a > profile.c_hi() * (1.0 + 1e-6))
      throw Error(ErrorKind::DegenerateHessian, "frequency_map: Hessian outside c-bounds");
  }
  return {omega, hess};
}

}  // namespace kamlat
