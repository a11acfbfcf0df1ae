#include "kamlat/lattice.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "kamlat/errors.hpp"

namespace kamlat::lattice {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LatticeModel LatticeModel::chain(const SiteWindow& w, const Potential& v,
                                 const Potential& wpot, double q_c, double decay_r) {
  LatticeModel m;
  m.window = w;
  m.v = v;
  m.q_c = q_c;
  m.decay_r = decay_r;
  for (int n = -w.n_max; n < w.n_max; ++n) {
    const double eps = q_c * std::exp(-decay_r * std::fabs(static_cast<double>(n)));
    m.couplings.push_back({n, 1, eps, wpot});
  }
  m.validate();
  return m;
}

double LatticeModel::eps_l1() const {
  double s = 0.0;
  for (const auto& c : couplings) s += std::fabs(c.eps);
  return s;
}

void LatticeModel::validate() const {
  for (const auto& c : couplings) {
    if (c.p < 1) throw Error(ErrorKind::Config, "LatticeModel: coupling offset p must be >= 1");
    if (!window.contains(c.n) || !window.contains(c.n + c.p))
      throw Error(ErrorKind::Config, "LatticeModel: coupling references sites outside window");
    if (c.w.value(0.0) != 0.0 || c.w.d1(0.0) != 0.0 || std::fabs(c.w.d2(0.0)) > 1e-14)
      throw Error(ErrorKind::Config, "LatticeModel: W must vanish to second order at 0");
    for (double z : {1e-2, -1e-2, 1e-3, -1e-3})
      if (std::fabs(c.w.value(z)) > 1e3 * std::fabs(z * z * z))
        throw Error(ErrorKind::Config, "LatticeModel: W not O(|x|^3) near 0");
  }
}

std::vector<double> LatticeModel::force(const std::vector<double>& x) const {
  const int n = window.size();
  std::vector<double> f(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    f[static_cast<size_t>(i)] = -v.d1(x[static_cast<size_t>(i)]);
  for (const auto& c : couplings) {
    const int i = window.index_of(c.n);
    const int j = window.index_of(c.n + c.p);
    const double t =
        c.eps * c.w.d1(x[static_cast<size_t>(j)] - x[static_cast<size_t>(i)]);
    f[static_cast<size_t>(i)] += t;
    f[static_cast<size_t>(j)] -= t;
  }
  return f;
}

double LatticeModel::energy(const std::vector<double>& x, const std::vector<double>& y) const {
  double e = 0.0;
  for (int i = 0; i < window.size(); ++i)
    e += 0.5 * y[static_cast<size_t>(i)] * y[static_cast<size_t>(i)] +
         v.value(x[static_cast<size_t>(i)]);
  for (const auto& c : couplings)
    e += c.eps * c.w.value(x[static_cast<size_t>(window.index_of(c.n + c.p))] -
                           x[static_cast<size_t>(window.index_of(c.n))]);
  return e;
}

Trajectory integrate_lattice(const LatticeModel& model, const std::vector<double>& x0,
                             const std::vector<double>& y0, double t_end, double dt,
                             int stride) {
  const int n = model.window.size();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != n)
    throw Error(ErrorKind::Config, "integrate_lattice: state size mismatch");

  Trajectory traj;
  traj.dt = dt;
  traj.stride = stride;
  // local linear frequency bound omega^2 = V''(x); Verlet stability dt < 2/omega
  double w2 = 0.0;
  for (double x : x0) w2 = std::max(w2, std::fabs(model.v.d2(x)));
  w2 = std::max(w2, std::fabs(model.v.d2(0.0)));
  traj.dt_stability_bound = 2.0 / std::sqrt(std::max(w2, 1e-300));
  if (dt >= traj.dt_stability_bound)
    throw Error(ErrorKind::Config, "integrate_lattice: dt above the stability bound");

  std::vector<double> x = x0, y = y0;
  const double e0 = model.energy(x, y);
  const double escale = std::max(std::fabs(e0), 1e-300);
  const long steps = static_cast<long>(std::llround(t_end / dt));
  std::vector<double> f = model.force(x);

  traj.times.reserve(static_cast<size_t>(steps / stride + 2));
  for (long s = 0; s <= steps; ++s) {
    if (s % stride == 0) {
      traj.times.push_back(s * dt);
      traj.xs.push_back(x);
      traj.ys.push_back(y);
      const double e = model.energy(x, y);
      traj.energies.push_back(e);
      traj.energy_drift = std::max(traj.energy_drift, std::fabs(e - e0) / escale);
      if (traj.energy_drift > 1e-3)
        throw Error(ErrorKind::UnstableStep, "integrate_lattice: energy drift above 1e-3");
    }
    if (s == steps) break;
    // kick-drift-kick
    for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] += 0.5 * dt * f[static_cast<size_t>(i)];
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] += dt * y[static_cast<size_t>(i)];
    f = model.force(x);
    for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] += 0.5 * dt * f[static_cast<size_t>(i)];
  }
  return traj;
}

namespace {

// Chebyshev nodes on [-r, r] and the inverse of the degree-3 Vandermonde,
// used to interpolate the I-dependence of the coupling on a 4-point stencil.
struct Stencil {
  std::array<double, 4> nodes;
  std::array<std::array<double, 4>, 4> inv;  // inv[k][a]: coefficient k from values
};

Stencil make_stencil(double r) {
  Stencil s;
  for (int a = 0; a < 4; ++a)
    s.nodes[static_cast<size_t>(a)] =
        r * std::cos(std::numbers::pi * (a + 0.5) / 4.0);
  // invert V[a][k] = t_a^k by Gauss-Jordan
  std::array<std::array<double, 8>, 4> m{};
  for (int a = 0; a < 4; ++a) {
    double t = 1.0;
    for (int k = 0; k < 4; ++k) {
      m[static_cast<size_t>(a)][static_cast<size_t>(k)] = t;
      t *= s.nodes[static_cast<size_t>(a)];
    }
    m[static_cast<size_t>(a)][static_cast<size_t>(4 + a)] = 1.0;
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r2 = c + 1; r2 < 4; ++r2)
      if (std::fabs(m[static_cast<size_t>(r2)][static_cast<size_t>(c)]) >
          std::fabs(m[static_cast<size_t>(piv)][static_cast<size_t>(c)]))
        piv = r2;
    std::swap(m[static_cast<size_t>(c)], m[static_cast<size_t>(piv)]);
    const double d = m[static_cast<size_t>(c)][static_cast<size_t>(c)];
    for (int j = 0; j < 8; ++j) m[static_cast<size_t>(c)][static_cast<size_t>(j)] /= d;
    for (int r2 = 0; r2 < 4; ++r2) {
      if (r2 == c) continue;
      const double factor = m[static_cast<size_t>(r2)][static_cast<size_t>(c)];
      for (int j = 0; j < 8; ++j)
        m[static_cast<size_t>(r2)][static_cast<size_t>(j)] -=
            factor * m[static_cast<size_t>(c)][static_cast<size_t>(j)];
    }
  }
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 4; ++a)
      s.inv[static_cast<size_t>(k)][static_cast<size_t>(a)] =
          m[static_cast<size_t>(k)][static_cast<size_t>(4 + a)];
  return s;
}

}  // namespace

FourierTaylorHamiltonian build_reduced_hamiltonian(const LatticeModel& model,
                                                   const ActionProfile& profile,
                                                   const AngleActionChart& chart,
                                                   const std::vector<double>& xi,
                                                   const Truncation& caps, double sigma,
                                                   const ReducedOptions& opt) {
  const SiteWindow& w = model.window;
  const int nsites = w.size();
  if (static_cast<int>(xi.size()) != nsites)
    throw Error(ErrorKind::Config, "build_reduced_hamiltonian: xi size mismatch");

  FourierTaylorHamiltonian h(w, caps, sigma, opt.y_radius, opt.varsigma);

  // Integrable part: Taylor blocks of sum_n H0(xi_n + I_n) up to degree 3.
  // The Hessian and third derivative come from the profile; the constant is
  // dropped.
  for (int i = 0; i < nsites; ++i) {
    const int site = w.site_of(i);
    const double xin = xi[static_cast<size_t>(i)];
    const double w1 = profile.h0_prime(xin);
    const double w2 = profile.h0_second(xin);
    // third derivative by Richardson central differences of h0_second
    const double d = std::max(1e-5 * xin, 1e-10);
    const double c1 = (profile.h0_second(xin + d) - profile.h0_second(xin - d)) / (2.0 * d);
    const double c2 =
        (profile.h0_second(xin + 0.5 * d) - profile.h0_second(xin - 0.5 * d)) / d;
    const double w3 = (4.0 * c2 - c1) / 3.0;
    h.add_block(MultiIndex::unit(site, 1),
                TorusFunction::constant(w, caps, Complex{w1, 0.0}));
    h.add_block(MultiIndex::unit(site, 2),
                TorusFunction::constant(w, caps, Complex{0.5 * w2, 0.0}));
    h.add_block(MultiIndex::unit(site, 3),
                TorusFunction::constant(w, caps, Complex{w3 / 6.0, 0.0}));
  }

  // Perturbation: per bond, Fourier x Taylor expansion of
  // eps W(x_{n+p}(theta, xi + I) - x_n(theta, xi + I)) on a collocation grid.
  int m_grid = opt.theta_grid > 0 ? opt.theta_grid : 2 * (2 * caps.per_site_cap + 1);
  if (m_grid % 2) ++m_grid;
  if (m_grid < 16) m_grid = 16;

  double pert_scale = 0.0;
  double fourier_tail = 0.0, y_tail = 0.0;

  for (const auto& c : model.couplings) {
    if (c.eps == 0.0) continue;
    const int i1 = w.index_of(c.n), i2 = w.index_of(c.n + c.p);
    const double xi1 = xi[static_cast<size_t>(i1)], xi2 = xi[static_cast<size_t>(i2)];
    auto stencil_radius = [&](double x) {
      return std::min({opt.stencil_frac * x, 0.9 * (x - profile.action_min()),
                       0.9 * (profile.action_max() - x)});
    };
    const double r1 = stencil_radius(xi1), r2 = stencil_radius(xi2);
    if (!(r1 > 0.0) || !(r2 > 0.0))
      throw Error(ErrorKind::OutOfRange,
                  "build_reduced_hamiltonian: xi too close to the profile boundary");
    const Stencil s1 = make_stencil(r1), s2 = make_stencil(r2);

    // x(theta_m) per site and stencil node
    std::array<std::vector<double>, 4> x1g, x2g;
    for (int a = 0; a < 4; ++a) {
      x1g[static_cast<size_t>(a)].resize(static_cast<size_t>(m_grid));
      x2g[static_cast<size_t>(a)].resize(static_cast<size_t>(m_grid));
      const double h1 = profile.h_from_action(xi1 + s1.nodes[static_cast<size_t>(a)]);
      const double h2 = profile.h_from_action(xi2 + s2.nodes[static_cast<size_t>(a)]);
      for (int m = 0; m < m_grid; ++m) {
        const double th = kTwoPi * m / m_grid;
        x1g[static_cast<size_t>(a)][static_cast<size_t>(m)] = chart.x_at(th, h1);
        x2g[static_cast<size_t>(a)][static_cast<size_t>(m)] = chart.x_at(th, h2);
      }
    }

    // per (a, b): W grid and 2-D DFT coefficients for |l| <= L
    const int cap = caps.per_site_cap;
    const int nfreq = 2 * cap + 1;
    // dft[a][b][(l1+cap) * nfreq + (l2+cap)]
    std::vector<std::vector<std::vector<Complex>>> dft(
        4, std::vector<std::vector<Complex>>(4));
    // precompute phase table e^{-i l theta_m}
    std::vector<std::vector<Complex>> phase(
        static_cast<size_t>(2 * (m_grid / 2) + 1),
        std::vector<Complex>(static_cast<size_t>(m_grid)));
    const int lmax_meas = m_grid / 2;
    for (int l = -lmax_meas; l <= lmax_meas; ++l)
      for (int m = 0; m < m_grid; ++m)
        phase[static_cast<size_t>(l + lmax_meas)][static_cast<size_t>(m)] =
            std::polar(1.0, -kTwoPi * l * m / m_grid);

    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        std::vector<double> wg(static_cast<size_t>(m_grid) * m_grid);
        for (int m1 = 0; m1 < m_grid; ++m1)
          for (int m2 = 0; m2 < m_grid; ++m2)
            wg[static_cast<size_t>(m1) * m_grid + m2] =
                c.w.value(x2g[static_cast<size_t>(b)][static_cast<size_t>(m2)] -
                          x1g[static_cast<size_t>(a)][static_cast<size_t>(m1)]);
        // partial DFT over m2, then m1; store only needed l plus tail probe
        std::vector<Complex> half(static_cast<size_t>(m_grid) * (2 * lmax_meas + 1));
        for (int m1 = 0; m1 < m_grid; ++m1)
          for (int l2 = -lmax_meas; l2 <= lmax_meas; ++l2) {
            Complex s{0.0, 0.0};
            for (int m2 = 0; m2 < m_grid; ++m2)
              s += wg[static_cast<size_t>(m1) * m_grid + m2] *
                   phase[static_cast<size_t>(l2 + lmax_meas)][static_cast<size_t>(m2)];
            half[static_cast<size_t>(m1) * (2 * lmax_meas + 1) + (l2 + lmax_meas)] =
                s / static_cast<double>(m_grid);
          }
        std::vector<Complex> full(static_cast<size_t>(2 * lmax_meas + 1) *
                                  (2 * lmax_meas + 1));
        for (int l1 = -lmax_meas; l1 <= lmax_meas; ++l1)
          for (int l2 = -lmax_meas; l2 <= lmax_meas; ++l2) {
            Complex s{0.0, 0.0};
            for (int m1 = 0; m1 < m_grid; ++m1)
              s += half[static_cast<size_t>(m1) * (2 * lmax_meas + 1) + (l2 + lmax_meas)] *
                   phase[static_cast<size_t>(l1 + lmax_meas)][static_cast<size_t>(m1)];
            full[static_cast<size_t>(l1 + lmax_meas) * (2 * lmax_meas + 1) +
                 (l2 + lmax_meas)] = s / static_cast<double>(m_grid);
          }
        // split retained vs tail
        std::vector<Complex> kept(static_cast<size_t>(nfreq) * nfreq, Complex{0.0, 0.0});
        for (int l1 = -lmax_meas; l1 <= lmax_meas; ++l1)
          for (int l2 = -lmax_meas; l2 <= lmax_meas; ++l2) {
            const Complex vcoef =
                full[static_cast<size_t>(l1 + lmax_meas) * (2 * lmax_meas + 1) +
                     (l2 + lmax_meas)];
            pert_scale += std::fabs(c.eps) * std::abs(vcoef);
            if (std::abs(l1) <= cap && std::abs(l2) <= cap)
              kept[static_cast<size_t>(l1 + cap) * nfreq + (l2 + cap)] = vcoef;
            else
              fourier_tail += std::fabs(c.eps) * std::abs(vcoef);
          }
        dft[static_cast<size_t>(a)][static_cast<size_t>(b)] = std::move(kept);
      }
    }

    // Taylor fit in (I1, I2) per retained Fourier pair
    for (int l1 = -cap; l1 <= cap; ++l1)
      for (int l2 = -cap; l2 <= cap; ++l2) {
        // d[k1][k2] = sum_{a,b} inv1[k1][a] inv2[k2][b] dft[a][b](l1,l2)
        for (int k1 = 0; k1 < 4; ++k1)
          for (int k2 = 0; k2 < 4; ++k2) {
            Complex d{0.0, 0.0};
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                d += s1.inv[static_cast<size_t>(k1)][static_cast<size_t>(a)] *
                     s2.inv[static_cast<size_t>(k2)][static_cast<size_t>(b)] *
                     dft[static_cast<size_t>(a)][static_cast<size_t>(b)]
                        [static_cast<size_t>(l1 + cap) * nfreq + (l2 + cap)];
            d *= c.eps;
            if (std::abs(d) == 0.0) continue;
            if (k1 + k2 > 3) {
              // degree-3 closure: track the projected monomial mass at the
              // stencil radius
              y_tail += std::abs(d) * std::pow(r1, k1) * std::pow(r2, k2);
              continue;
            }
            MultiIndex l = MultiIndex::unit(c.n, l1).plus(MultiIndex::unit(c.n + c.p, l2));
            MultiIndex m = MultiIndex::unit(c.n, k1).plus(MultiIndex::unit(c.n + c.p, k2));
            if (l.zero() && m.zero()) continue;  // constant term discarded
            MassLoss ml;
            TorusFunction f = TorusFunction::mode(w, caps, l, d);
            h.add_block(m, f, &ml);
            fourier_tail += ml.total();
          }
      }
  }

  if (pert_scale > 0.0) {
    if (fourier_tail > opt.fourier_tail_rel * pert_scale)
      throw Error(ErrorKind::CapsExceeded,
                  "build_reduced_hamiltonian: spectral tail above budget");
    if (y_tail > opt.y_tail_rel * pert_scale)
      throw Error(ErrorKind::CapsExceeded,
                  "build_reduced_hamiltonian: action-degree tail above budget");
  }
  h.prune();
  return h;
}

}  // namespace kamlat::lattice
