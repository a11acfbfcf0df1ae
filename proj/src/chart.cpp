#include "kamlat/chart.hpp"

#include <cmath>
#include <numbers>

#include "kamlat/errors.hpp"
#include "kamlat/quadrature.hpp"

namespace kamlat {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Spectral evaluation sum_k c_k e^{i k theta} with spectrum stored on [0, M).
double spectral_eval(const std::vector<std::complex<double>>& ck, double theta) {
  const int m = static_cast<int>(ck.size());
  std::complex<double> s{0.0, 0.0};
  for (int k = 0; k < m; ++k) {
    int kk = k <= m / 2 ? k : k - m;  // wrap to signed frequency
    s += ck[static_cast<size_t>(k)] * std::polar(1.0, kk * theta);
  }
  return s.real();
}
}  // namespace

LoopData AngleActionChart::build_loop(double h) const {
  LoopData loop;
  loop.h = h;
  loop.period = period(v_, h);
  const int m = opt_.loop_samples;
  const int sub = opt_.rk4_substeps;
  const double dt = loop.period / (static_cast<double>(m) * sub);

  double x = 0.0, y = std::sqrt(2.0 * h);
  const double y0 = y;
  loop.xs.resize(static_cast<size_t>(m));
  loop.ys.resize(static_cast<size_t>(m));
  auto fx = [&](double, double yy) { return yy; };
  auto fy = [&](double xx, double) { return -v_.d1(xx); };
  for (int k = 0; k < m; ++k) {
    loop.xs[static_cast<size_t>(k)] = x;
    loop.ys[static_cast<size_t>(k)] = y;
    for (int s = 0; s < sub; ++s) {
      const double k1x = fx(x, y), k1y = fy(x, y);
      const double k2x = fx(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y);
      const double k2y = fy(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y);
      const double k3x = fx(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y);
      const double k3y = fy(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y);
      const double k4x = fx(x + dt * k3x, y + dt * k3y);
      const double k4y = fy(x + dt * k3x, y + dt * k3y);
      x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    }
  }
  const double scale = std::max(1.0, std::fabs(y0));
  loop.closure_error = std::hypot(x - 0.0, y - y0) / scale;
  if (loop.closure_error > opt_.closure_tol)
    throw Error(ErrorKind::IntegrationFailure,
                "chart loop did not close: error " + std::to_string(loop.closure_error));

  loop.xk.resize(static_cast<size_t>(m));
  loop.yk.resize(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    std::complex<double> sx{0.0, 0.0}, sy{0.0, 0.0};
    for (int j = 0; j < m; ++j) {
      const std::complex<double> ph = std::polar(1.0, -kTwoPi * k * j / m);
      sx += loop.xs[static_cast<size_t>(j)] * ph;
      sy += loop.ys[static_cast<size_t>(j)] * ph;
    }
    loop.xk[static_cast<size_t>(k)] = sx / static_cast<double>(m);
    loop.yk[static_cast<size_t>(k)] = sy / static_cast<double>(m);
  }
  return loop;
}

const LoopData& AngleActionChart::loop(double h) const {
  auto it = cache_.find(h);
  if (it == cache_.end()) it = cache_.emplace(h, build_loop(h)).first;
  return it->second;
}

double AngleActionChart::x_at(double theta, double h) const {
  return spectral_eval(loop(h).xk, theta);
}
double AngleActionChart::y_at(double theta, double h) const {
  return spectral_eval(loop(h).yk, theta);
}

AngleActionChart::Point AngleActionChart::forward(double theta, double rho) const {
  const double h = profile_->h_from_action(rho);
  return {x_at(theta, h), y_at(theta, h)};
}

std::pair<double, double> AngleActionChart::inverse(double x, double y) const {
  const double h = 0.5 * y * y + v_.value(x);
  const double rho = profile_->action(h);
  const double t_period = loop(h).period;
  const double ax = std::fabs(x);
  double tau = 0.0;
  if (ax > 0.0) {
    auto f = [&](double s) {
      const double d = h - v_.value(s);
      return d > 0.0 ? 1.0 / std::sqrt(2.0 * d) : 0.0;
    };
    tau = tanh_sinh(f, 0.0, ax, 1e-13, 12).value;
  }
  double t;
  if (x >= 0.0 && y >= 0.0)
    t = tau;
  else if (x >= 0.0 && y < 0.0)
    t = 0.5 * t_period - tau;
  else if (y <= 0.0)
    t = 0.5 * t_period + tau;
  else
    t = t_period - tau;
  return {kTwoPi * t / t_period, rho};
}

double AngleActionChart::jacobian_det(double theta, double rho) const {
  const double h = profile_->h_from_action(rho);
  const Point pt = forward(theta, rho);
  // exact theta-partials from the flow, scaled by T / 2 pi
  const double tp = loop(h).period / kTwoPi;
  const double dx_dth = pt.y * tp;
  const double dy_dth = -v_.d1(pt.x) * tp;
  // rho-partials by Richardson-extrapolated central differences
  const double d = std::max(1e-6 * std::fabs(rho), 1e-9);
  auto diff = [&](double step) {
    const Point a = forward(theta, rho + step);
    const Point b = forward(theta, rho - step);
    return std::pair<double, double>{(a.x - b.x) / (2.0 * step), (a.y - b.y) / (2.0 * step)};
  };
  auto [c1x, c1y] = diff(d);
  auto [c2x, c2y] = diff(0.5 * d);
  const double dx_drho = (4.0 * c2x - c1x) / 3.0;
  const double dy_drho = (4.0 * c2y - c1y) / 3.0;
  return dx_dth * dy_drho - dx_drho * dy_dth;
}

}  // namespace kamlat
