#include "kamlat/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "kamlat/errors.hpp"

namespace kamlat {

QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_level) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double pi_half = std::numbers::pi / 2.0;
  const double t_max = 6.1;  // tanh(pi/2 sinh 6.1) saturates double precision

  auto node = [&](double t, double& x, double& w) {
    const double s = pi_half * std::sinh(t);
    const double ch = std::cosh(s);
    x = mid + half * std::tanh(s);
    w = half * pi_half * std::cosh(t) / (ch * ch);
  };

  QuadratureResult res;
  double h = 1.0;
  // level 0: coarse trapezoid over t
  double sum = 0.0;
  {
    double x, w;
    node(0.0, x, w);
    sum = w * f(x);
    for (double t = h; t <= t_max; t += h) {
      node(t, x, w);
      if (x > a && x < b && w > 0.0) sum += w * f(x);
      node(-t, x, w);
      if (x > a && x < b && w > 0.0) sum += w * f(x);
      res.evaluations += 2;
    }
  }
  double prev = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) {
      double x, w;
      node(t, x, w);
      if (x > a && x < b && w > 0.0) add += w * f(x);
      node(-t, x, w);
      if (x > a && x < b && w > 0.0) add += w * f(x);
      res.evaluations += 2;
    }
    const double cur = 0.5 * prev + add * h;
    res.error_estimate = std::fabs(cur - prev);
    res.level = level;
    if (res.error_estimate < abs_tol && level >= 3) {
      res.value = cur;
      return res;
    }
    prev = cur;
  }
  res.value = prev;
  return res;
}

ChebyshevFit ChebyshevFit::fit(const std::function<double(double)>& f, double a, double b,
                               int n) {
  std::vector<double> fv(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * (k + 0.5) / n;
    const double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
    fv[static_cast<size_t>(k)] = f(x);
  }
  std::vector<double> c(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      s += fv[static_cast<size_t>(k)] * std::cos(std::numbers::pi * j * (k + 0.5) / n);
    c[static_cast<size_t>(j)] = 2.0 * s / n;
  }
  c[0] *= 0.5;
  return ChebyshevFit(a, b, std::move(c));
}

double ChebyshevFit::eval(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (size_t j = c_.size(); j-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c_[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c_[0];
}

ChebyshevFit ChebyshevFit::derivative() const {
  const size_t n = c_.size();
  std::vector<double> d(n, 0.0);
  if (n >= 2) {
    d[n - 1] = 0.0;
    if (n >= 2) d[n - 2] = 2.0 * static_cast<double>(n - 1) * c_[n - 1];
    for (size_t j = n - 2; j-- > 0;)
      d[j] = d[j + 2] + 2.0 * static_cast<double>(j + 1) * c_[j + 1];
    d[0] *= 0.5;
    const double scale = 2.0 / (b_ - a_);
    for (auto& v : d) v *= scale;
  }
  return ChebyshevFit(a_, b_, std::move(d));
}

double ChebyshevFit::residual(const std::function<double(double)>& f, int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = a_ + (b_ - a_) * (i + 0.5) / samples;
    worst = std::max(worst, std::fabs(eval(x) - f(x)));
  }
  return worst;
}

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double target, double lo,
                      double hi, double rel_tol, int max_iter) {
  double flo = f(lo) - target, fhi = f(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw Error(ErrorKind::TurningPointNotFound, "solve_monotone: target not bracketed");
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < max_iter; ++i) {
    const double fx = f(x) - target;
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fhi > 0.0))
      hi = x;
    else
      lo = x;
    const double d = df(x);
    double xn = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) < rel_tol * std::max(1.0, std::fabs(x))) return xn;
    x = xn;
  }
  return x;
}

}  // namespace kamlat
