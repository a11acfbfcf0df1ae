#include "kamlat/control_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kamlat/errors.hpp"

namespace kamlat::nonres {

namespace {
constexpr double kRhoLo = 1e-12;
constexpr double kRhoHi = 1e12;
const double kE = std::exp(1.0);
}  // namespace

ControlFunction ControlFunction::diophantine_exp(double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::Config, "control: tau must be > 0");
  ControlFunction e;
  e.kind_ = Kind::DiophantineExp;
  e.tau_ = tau;
  return e;
}

ControlFunction ControlFunction::double_exp(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw Error(ErrorKind::Config, "control: lambda must be in (0,1)");
  ControlFunction e;
  e.kind_ = Kind::DoubleExp;
  e.lambda_ = lambda;
  return e;
}

ControlFunction ControlFunction::log_iterated(int levels, double lambda) {
  if (levels < 2 || levels > 4)
    throw Error(ErrorKind::Config, "control: log_iterated levels must be in [2,4]");
  if (!(lambda > 0.0)) throw Error(ErrorKind::Config, "control: lambda must be > 0");
  ControlFunction e;
  e.kind_ = Kind::LogIterated;
  e.levels_ = levels;
  e.lambda_ = lambda;
  return e;
}

ControlFunction ControlFunction::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw Error(ErrorKind::Config, "control: empty table");
  ControlFunction e;
  e.kind_ = Kind::Tabulated;
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].first <= 0.0 || points[i].second <= 0.0)
      throw Error(ErrorKind::Config, "control: table entries must be positive");
    if (i > 0 && (points[i].first <= points[i - 1].first ||
                  points[i].second > points[i - 1].second))
      throw Error(ErrorKind::Config, "control: table must be rho-increasing, value-decreasing");
    e.table_.push_back({points[i].first, std::log(points[i].second)});
  }
  return e;
}

double ControlFunction::log_log_eval(double rho) const {
  if (!(rho > 0.0)) throw Error(ErrorKind::OutOfRange, "control: rho must be > 0");
  switch (kind_) {
    case Kind::DiophantineExp: {
      const double le = log_eval(rho);
      if (le <= 0.0) throw Error(ErrorKind::OutOfRange, "control: E(rho) <= 1");
      return std::log(le);
    }
    case Kind::DoubleExp:
      return std::pow(rho, -lambda_);
    case Kind::LogIterated: {
      // log log E = u / (log(e+u) * ... * (log...log(e^(k)+u))^{1+lambda})
      const double u = 1.0 / rho;
      double denom = 1.0;
      double guard = kE;
      double it = u;
      for (int k = 1; k <= levels_ - 1; ++k) {
        it = std::log(guard + it);
        denom *= (k == levels_ - 1) ? std::pow(it, 1.0 + lambda_) : it;
        guard = std::exp(guard);
      }
      return u / denom;
    }
    case Kind::Tabulated: {
      const double le = log_eval(rho);
      if (le <= 0.0) throw Error(ErrorKind::OutOfRange, "control: E(rho) <= 1");
      return std::log(le);
    }
  }
  throw Error(ErrorKind::Config, "control: bad kind");
}

double ControlFunction::log_eval(double rho) const {
  if (!(rho > 0.0)) throw Error(ErrorKind::OutOfRange, "control: rho must be > 0");
  switch (kind_) {
    case Kind::DiophantineExp: {
      const double a = tau_ / rho;
      // log(e^a - 1) = a + log(1 - e^{-a})
      return a + std::log1p(-std::exp(-a));
    }
    case Kind::DoubleExp:
    case Kind::LogIterated:
      return std::exp(log_log_eval(rho));
    case Kind::Tabulated: {
      if (rho <= table_.front().first) return table_.front().second;
      if (rho >= table_.back().first) return table_.back().second;
      auto it = std::lower_bound(table_.begin(), table_.end(), rho,
                                 [](const auto& p, double r) { return p.first < r; });
      const auto& [r1, v1] = *it;
      const auto& [r0, v0] = *(it - 1);
      const double t = (std::log(rho) - std::log(r0)) / (std::log(r1) - std::log(r0));
      return v0 + t * (v1 - v0);
    }
  }
  throw Error(ErrorKind::Config, "control: bad kind");
}

double ControlFunction::eval(double rho) const {
  return std::exp(log_eval(rho));  // may overflow to +inf; callers wanting
                                   // finite arithmetic use the log entry points
}

double ControlFunction::inverse_log(double log_t) const {
  if (kind_ == Kind::Tabulated) {
    // Table walk; a flat or single-entry table yields a constant inverse.
    if (log_t >= table_.front().second) return table_.front().first;
    if (log_t <= table_.back().second) return table_.back().first;
    for (size_t i = 1; i < table_.size(); ++i) {
      if (log_t >= table_[i].second) {
        const double t = (log_t - table_[i - 1].second) /
                         (table_[i].second - table_[i - 1].second);
        return std::exp(std::log(table_[i - 1].first) +
                        t * (std::log(table_[i].first) - std::log(table_[i - 1].first)));
      }
    }
    return table_.back().first;
  }

  // Closed-form-free bisection. For arguments above e, compare one level down
  // (log log E vs log log t) so doubly exponential kinds never overflow.
  const bool deep = log_t > 1.0;
  const double target = deep ? std::log(log_t) : log_t;
  auto value = [&](double rho) { return deep ? log_log_eval(rho) : log_eval(rho); };

  double lo = kRhoLo, hi = kRhoHi;
  // value() decreases in rho; shrink the bracket to where it is defined.
  auto defined = [&](double rho) {
    try {
      value(rho);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  while (!defined(hi) && hi > lo * 2.0) hi *= 0.5;
  if (!defined(lo) || value(lo) < target || value(hi) > target)
    throw Error(ErrorKind::OutOfRange, "control inverse: target outside range");
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);  // geometric mid suits the wide bracket
    if (value(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SummabilityResult summability_check(const ControlFunction& e,
                                    const std::function<double(int)>& delta, int terms) {
  if (terms < 10) throw Error(ErrorKind::Config, "summability_check: terms must be >= 10");
  SummabilityResult r;
  std::vector<double> d(static_cast<size_t>(terms)), a(static_cast<size_t>(terms));
  for (int m = 0; m < terms; ++m) {
    d[static_cast<size_t>(m)] = delta(m);
    const double log_t = std::exp2(static_cast<double>(m)) * d[static_cast<size_t>(m)];
    a[static_cast<size_t>(m)] = e.inverse_log(log_t);
    r.sum_delta += d[static_cast<size_t>(m)];
    r.sum_inv += a[static_cast<size_t>(m)];
  }
  auto tail_ratio = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (size_t m = v.size() - v.size() / 4; m < v.size(); ++m)
      if (v[m - 1] > 0.0) worst = std::max(worst, v[m] / v[m - 1]);
    return worst;
  };
  r.tail_ratio_delta = tail_ratio(d);
  r.tail_ratio_inv = tail_ratio(a);
  r.converged = r.tail_ratio_delta < 1.0 && r.tail_ratio_inv < 1.0;
  return r;
}

GrowthComparison lambdapiao_bound(double lambda, double rho, double lambda_tilde,
                                  double x_max, int grid) {
  if (!(lambda > 0.0) || !(rho > 0.0) || !(lambda_tilde > 0.0 && lambda_tilde < 1.0))
    throw Error(ErrorKind::Config, "lambdapiao_bound: bad parameters");

  auto f = [&](double x) {
    return x / std::pow(std::log1p(x), 1.0 + lambda) - rho * x;
  };

  // Coarse scan uniform in log x, then golden-section polish.
  const double llo = 0.0, lhi = std::log(x_max);
  double best_x = 1.0, best = f(1.0);
  int best_i = 0;
  for (int i = 0; i <= grid; ++i) {
    const double x = std::exp(llo + (lhi - llo) * i / grid);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
      best_i = i;
    }
  }
  double a = std::exp(llo + (lhi - llo) * std::max(0, best_i - 1) / grid);
  double b = std::exp(llo + (lhi - llo) * std::min(grid, best_i + 1) / grid);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d2 = a + gr * (b - a);
  for (int i = 0; i < 200 && (b - a) > 1e-12 * (1.0 + b); ++i) {
    if (f(c) > f(d2)) {
      b = d2;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d2 = a + gr * (b - a);
  }
  const double xg = 0.5 * (a + b);
  if (f(xg) > best) {
    best = f(xg);
    best_x = xg;
  }

  GrowthComparison g;
  g.x_star = best_x;
  g.lhs_log = best;
  const double rhs_exponent = std::pow(rho, -lambda_tilde);
  g.rhs_log = rhs_exponent > 700.0 ? std::numeric_limits<double>::infinity()
                                   : std::exp(rhs_exponent);
  // Compare one level down when the left side is itself large.
  if (g.lhs_log <= kE) {
    g.holds = std::isinf(g.rhs_log) || g.lhs_log <= g.rhs_log;
  } else {
    g.holds = std::log(g.lhs_log) <= rhs_exponent;
  }
  return g;
}

}  // namespace kamlat::nonres
