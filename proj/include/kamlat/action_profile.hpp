#ifndef KAMLAT_ACTION_PROFILE_HPP
#define KAMLAT_ACTION_PROFILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "kamlat/potential.hpp"
#include "kamlat/quadrature.hpp"
#include "kamlat/window.hpp"

namespace kamlat {

/// Positive turning point V(x) = h, bracketed then polished by Newton.
double turning_point(const Potential& v, double h);

/// Half-area quadrature 2 sqrt(2) int_0^{V^{-1}(h)} sqrt(h - V(s)) ds, the
/// area function used for the nondegeneracy analysis (half the enclosed loop
/// area for even potentials).
double area_rho(const Potential& v, double h, double abs_tol = 1e-12);

/// Full enclosed loop area by direct contour quadrature of oint y dx.
double loop_area(const Potential& v, double h, double abs_tol = 1e-12);

/// Orbit period 2 int dx / sqrt(2(h - V)) over the full level curve.
double period(const Potential& v, double h, double abs_tol = 1e-12);

struct ProfileOptions {
  int nodes = 64;
  double fit_residual_tol = 1e-10;
  double nondegeneracy_rel_tol = 1e-6;  // |rho''| vs |rho'| / interval length
  bool fit_small_h_series = false;      // fit rho(h) = A1 h + A2 h^2 + ... near h_min
  int series_order = 8;
  int series_samples = 48;
};

/// Chebyshev model of the area function -- stored as rho(h)/h for uniform
/// relative accuracy down to small h -- with derivatives, the canonical
/// action I(h) = loop_area / (2 pi) and the inverse map used downstream.
class ActionProfile {
 public:
  ActionProfile() = default;

  double h_min() const { return h_min_; }
  double h_max() const { return h_max_; }
  const Potential& potential() const { return v_; }

  // area function (half loop): rho, rho', rho''
  double rho(double h) const;
  double rho_d1(double h) const;
  double rho_d2(double h) const;
  /// Inverse of the area function (Newton on the fit).
  double h_from_rho(double r) const;

  // canonical action I = loop area / (2 pi) = rho / pi for even potentials
  double action(double h) const { return rho(h) / pi(); }
  double action_d1(double h) const { return rho_d1(h) / pi(); }
  double action_min() const { return action(h_min_); }
  double action_max() const { return action(h_max_); }
  double h_from_action(double i) const;

  /// Frequency and Hessian of the canonical inverse H0(I):
  /// H0'(I) = 1 / I'(h), H0''(I) = -I''(h) / I'(h)^3 at h = H0(I).
  double h0_prime(double i) const;
  double h0_second(double i) const;

  double c_lo() const { return c_lo_; }
  double c_hi() const { return c_hi_; }
  double loop_to_rho_ratio() const { return loop_ratio_; }

  const std::vector<double>& area_series() const { return area_series_; }      // A_j
  const std::vector<double>& inverse_series() const { return inv_series_; }    // B_j

  std::string export_json() const;

  friend ActionProfile build_profile(const Potential& v, double h_min, double h_max,
                                     const ProfileOptions& opt);

 private:
  static double pi();
  void check_range(double h) const;

  Potential v_;
  double h_min_ = 0, h_max_ = 0;
  ChebyshevFit rho_over_h_;    // f(h) = rho(h)/h
  ChebyshevFit f_d1_, f_d2_;
  double c_lo_ = 0, c_hi_ = 0;
  double loop_ratio_ = 0;      // loop_area / rho sampled (2 for even potentials)
  double fit_residual_ = 0;
  std::vector<double> area_series_, inv_series_;
};

/// Builds the Chebyshev profile over [h_min, h_max]; raises
/// NondegeneracyViolated if rho' or rho'' vanishes on the interval.
ActionProfile build_profile(const Potential& v, double h_min, double h_max,
                            const ProfileOptions& opt = {});

/// omega_n = H0'(xi_n) and the diagonal Hessian H0''(xi_n) for per-site
/// actions xi; validates the profile's c-bounds.
std::pair<FrequencyVector, std::vector<double>> frequency_map(
    const ActionProfile& profile, const SiteWindow& window, const std::vector<double>& xi);

}  // namespace kamlat

#endif
