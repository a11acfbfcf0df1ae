#ifndef KAMLAT_QUADRATURE_HPP
#define KAMLAT_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace kamlat {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int level = 0;
};

/// Tanh-sinh (double exponential) quadrature on (a, b). Handles integrable
/// endpoint singularities like sqrt(b - x). Refines the level until the
/// difference between successive levels is below abs_tol.
QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12, int max_level = 12);

/// Chebyshev interpolant of a smooth function on [a, b].
class ChebyshevFit {
 public:
  ChebyshevFit() = default;
  ChebyshevFit(double a, double b, std::vector<double> coeffs)
      : a_(a), b_(b), c_(std::move(coeffs)) {}

  /// Fit at n Chebyshev-Gauss nodes.
  static ChebyshevFit fit(const std::function<double(double)>& f, double a, double b, int n);

  double eval(double x) const;          // Clenshaw
  ChebyshevFit derivative() const;      // standard coefficient recurrence
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<double>& coeffs() const { return c_; }

  /// Max |fit - f| over a midpoint sample.
  double residual(const std::function<double(double)>& f, int samples = 200) const;

 private:
  double a_ = -1.0, b_ = 1.0;
  std::vector<double> c_;
};

/// Newton with bisection fallback for strictly monotone f on [lo, hi].
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double target, double lo,
                      double hi, double rel_tol = 1e-14, int max_iter = 200);

}  // namespace kamlat

#endif
