#ifndef KAMLAT_CHART_HPP
#define KAMLAT_CHART_HPP

#include <complex>
#include <map>
#include <vector>

#include "kamlat/action_profile.hpp"
#include "kamlat/potential.hpp"

namespace kamlat {

/// One sampled level curve 1/2 y^2 + V(x) = h: period, uniform-angle samples
/// and their trigonometric spectrum.
struct LoopData {
  double h = 0;
  double period = 0;
  std::vector<double> xs, ys;                 // samples at theta_k = 2 pi k / M
  std::vector<std::complex<double>> xk, yk;   // spectra, index k in [0, M)
  double closure_error = 0;
};

struct ChartOptions {
  int loop_samples = 256;
  int rk4_substeps = 64;
  double closure_tol = 1e-8;
};

/// Angle-action coordinate chart (theta, rho) <-> (x, y) for the local
/// oscillator, built by following the level-curve flow. theta = 0 sits on the
/// positive y-axis (x = 0, y > 0) and rho is the canonical action.
class AngleActionChart {
 public:
  AngleActionChart(const Potential& v, const ActionProfile& profile, ChartOptions opt = {})
      : v_(v), profile_(&profile), opt_(opt) {}

  const LoopData& loop(double h) const;

  struct Point {
    double x = 0, y = 0;
  };
  Point forward(double theta, double rho) const;
  /// theta from quadrant-resolved time quadrature; rho = action(h(x,y)).
  std::pair<double, double> inverse(double x, double y) const;

  /// det d(x,y)/d(theta,rho): exact theta-partials, Richardson differences in rho.
  double jacobian_det(double theta, double rho) const;

  /// x(theta) on the loop of energy h, evaluated by spectral interpolation.
  double x_at(double theta, double h) const;
  double y_at(double theta, double h) const;

  const ActionProfile& profile() const { return *profile_; }

 private:
  LoopData build_loop(double h) const;

  Potential v_;
  const ActionProfile* profile_;
  ChartOptions opt_;
  mutable std::map<double, LoopData> cache_;
};

}  // namespace kamlat

#endif
