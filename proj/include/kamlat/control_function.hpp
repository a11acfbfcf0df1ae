#ifndef KAMLAT_CONTROL_FUNCTION_HPP
#define KAMLAT_CONTROL_FUNCTION_HPP

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace kamlat::nonres {

/// Strictly decreasing positive function bounding the homological-solution
/// loss ||f||_sigma <= E(rho) ||g||_{sigma+rho}. Doubly exponential kinds are
/// evaluated in log-space throughout; eval() itself may overflow to +inf.
class ControlFunction {
 public:
  enum class Kind { DiophantineExp, DoubleExp, LogIterated, Tabulated };

  /// E(rho) = exp(tau/rho) - 1
  static ControlFunction diophantine_exp(double tau);
  /// E(rho) = exp(exp(rho^{-lambda})), lambda in (0,1)
  static ControlFunction double_exp(double lambda);
  /// E(rho) = exp(exp(u / prod of guarded iterated logs of u)), u = 1/rho,
  /// with levels-1 log factors and exponent 1+lambda on the last one.
  static ControlFunction log_iterated(int levels, double lambda);
  /// Piecewise log-log-linear table of (rho, value), rho increasing.
  static ControlFunction tabulated(std::vector<std::pair<double, double>> points);

  Kind kind() const { return kind_; }

  double eval(double rho) const;          // E(rho)
  double log_eval(double rho) const;      // log E(rho)
  double log_log_eval(double rho) const;  // log log E(rho); OutOfRange if E <= 1

  /// Numerical inverse by bisection on the decreasing function, 1e-12
  /// relative tolerance in rho.
  double inverse(double t) const { return inverse_log(std::log(t)); }
  /// Inverse taking log t directly, for arguments like e^{2^m delta_m}.
  double inverse_log(double log_t) const;

 private:
  ControlFunction() = default;
  Kind kind_ = Kind::DiophantineExp;
  double tau_ = 1.0;
  double lambda_ = 0.5;
  int levels_ = 2;
  std::vector<std::pair<double, double>> table_;  // (rho, log value)
};

inline double eval_control(const ControlFunction& e, double rho) { return e.eval(rho); }
inline double inv_control(const ControlFunction& e, double t) { return e.inverse(t); }

struct SummabilityResult {
  double sum_delta = 0.0;
  double sum_inv = 0.0;
  bool converged = false;
  double tail_ratio_delta = 0.0;  // max term ratio over the last quartile
  double tail_ratio_inv = 0.0;
};

/// Partial sums of sum delta_m and sum E^{-1}(e^{2^m delta_m}) with a
/// Cauchy-tail heuristic (term ratios < 1 over the last quartile of indices).
SummabilityResult summability_check(const ControlFunction& e,
                                    const std::function<double(int)>& delta, int terms);

struct GrowthComparison {
  double lhs_log = 0.0;   // max over x >= 1 of x/(log(1+x))^{1+lambda} - rho x
  double rhs_log = 0.0;   // exp(rho^{-lambda_tilde}), may be +inf in double
  double x_star = 1.0;    // maximizer
  bool holds = false;     // lhs <= rhs, compared one level down when needed
};

/// Verifies that the near-critical approximation growth, damped by e^{-rho x},
/// stays below the double-exponential envelope. Maximization is a log-x grid
/// scan refined by golden-section search.
GrowthComparison lambdapiao_bound(double lambda, double rho, double lambda_tilde,
                                  double x_max = 1e250, int grid = 4096);

}  // namespace kamlat::nonres

#endif
