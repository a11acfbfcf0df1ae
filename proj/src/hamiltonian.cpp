#include "kamlat/hamiltonian.hpp"

#include <cmath>

#include "kamlat/errors.hpp"

namespace kamlat {

std::vector<double> solve_dense(const SiteMatrix& a, std::vector<double> rhs,
                                double cond_threshold, double* cond_out) {
  const int n = a.window.size();
  std::vector<double> lu = a.data;
  std::vector<int> piv(static_cast<size_t>(n));
  double norm1 = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::fabs(lu[static_cast<size_t>(i) * n + j]);
    norm1 = std::max(norm1, s);
  }

  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(lu[static_cast<size_t>(i) * n + k]) >
          std::fabs(lu[static_cast<size_t>(p) * n + k]))
        p = i;
    piv[static_cast<size_t>(k)] = p;
    if (p != k)
      for (int j = 0; j < n; ++j)
        std::swap(lu[static_cast<size_t>(k) * n + j], lu[static_cast<size_t>(p) * n + j]);
    const double d = lu[static_cast<size_t>(k) * n + k];
    if (d == 0.0)
      throw Error(ErrorKind::DegenerateHessian, "solve_dense: singular matrix");
    for (int i = k + 1; i < n; ++i) {
      lu[static_cast<size_t>(i) * n + k] /= d;
      for (int j = k + 1; j < n; ++j)
        lu[static_cast<size_t>(i) * n + j] -=
            lu[static_cast<size_t>(i) * n + k] * lu[static_cast<size_t>(k) * n + j];
    }
  }

  auto lu_solve = [&](std::vector<double> x) {
    for (int k = 0; k < n; ++k) {
      std::swap(x[static_cast<size_t>(k)], x[static_cast<size_t>(piv[static_cast<size_t>(k)])]);
      for (int i = k + 1; i < n; ++i)
        x[static_cast<size_t>(i)] -= lu[static_cast<size_t>(i) * n + k] * x[static_cast<size_t>(k)];
    }
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j)
        x[static_cast<size_t>(i)] -= lu[static_cast<size_t>(i) * n + j] * x[static_cast<size_t>(j)];
      x[static_cast<size_t>(i)] /= lu[static_cast<size_t>(i) * n + i];
    }
    return x;
  };

  // 1-norm of the inverse by solving for unit vectors (windows are small).
  double inv_norm1 = 0.0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    e[static_cast<size_t>(j)] = 1.0;
    auto col = lu_solve(std::move(e));
    double s = 0.0;
    for (double v : col) s += std::fabs(v);
    inv_norm1 = std::max(inv_norm1, s);
  }
  const double cond = norm1 * inv_norm1;
  if (cond_out) *cond_out = cond;
  if (cond > cond_threshold)
    throw Error(ErrorKind::DegenerateHessian,
                "solve_dense: condition number " + std::to_string(cond) + " above threshold");
  return lu_solve(std::move(rhs));
}

const TorusFunction& FourierTaylorHamiltonian::block(const MultiIndex& m) const {
  static const TorusFunction kZero;
  auto it = blocks_.find(m);
  if (it == blocks_.end()) return kZero;
  return it->second;
}

void FourierTaylorHamiltonian::set_block(const MultiIndex& m, TorusFunction f) {
  for (const auto& [site, v] : m.entries())
    if (v < 0) throw Error(ErrorKind::Config, "y-degree must be nonnegative");
  if (f.empty())
    blocks_.erase(m);
  else
    blocks_[m] = std::move(f);
}

void FourierTaylorHamiltonian::add_block(const MultiIndex& m, const TorusFunction& f,
                                         MassLoss* loss) {
  auto it = blocks_.find(m);
  if (it == blocks_.end()) {
    TorusFunction g(window_, trunc_);
    for (const auto& [l, v] : f.coeffs()) g.add(l, v, loss);
    if (!g.empty()) blocks_[m] = std::move(g);
  } else {
    for (const auto& [l, v] : f.coeffs()) it->second.add(l, v, loss);
    if (it->second.empty()) blocks_.erase(it);
  }
}

TorusFunction FourierTaylorHamiltonian::gradient_block(int site) const {
  return block(MultiIndex::unit(site, 1));
}

TorusFunction FourierTaylorHamiltonian::hessian_block(int i, int j) const {
  if (i == j) return block(MultiIndex::unit(i, 2)).scaled(2.0);
  return block(MultiIndex::unit(i, 1).plus(MultiIndex::unit(j, 1)));
}

SiteMatrix FourierTaylorHamiltonian::averaged_hessian() const {
  SiteMatrix q(window_);
  for (const auto& [m, h] : blocks_) {
    if (m.order() != 2) continue;
    const Complex avg = h.average();
    if (m.support_size() == 1) {
      const int i = m.entries()[0].first;
      q.at(i, i) = 2.0 * avg.real();
    } else {
      const int i = m.entries()[0].first, j = m.entries()[1].first;
      q.at(i, j) = avg.real();
      q.at(j, i) = avg.real();
    }
  }
  return q;
}

TorusFunction FourierTaylorHamiltonian::evaluate_at_y(const std::vector<Complex>& y) const {
  TorusFunction r(window_, trunc_);
  for (const auto& [m, h] : blocks_) {
    Complex factor{1.0, 0.0};
    for (const auto& [site, deg] : m.entries())
      for (int k = 0; k < deg; ++k)
        factor *= y[static_cast<size_t>(window_.index_of(site))];
    if (factor != Complex{0.0, 0.0})
      for (const auto& [l, v] : h.coeffs()) r.add(l, v * factor);
  }
  r.prune();
  return r;
}

TorusFunction FourierTaylorHamiltonian::gradient_at_y(int site,
                                                      const std::vector<Complex>& y) const {
  TorusFunction r(window_, trunc_);
  for (const auto& [m, h] : blocks_) {
    const int deg = m.value_at(site);
    if (deg == 0) continue;
    Complex factor{static_cast<double>(deg), 0.0};
    for (const auto& [s, d] : m.entries()) {
      const int dd = (s == site) ? d - 1 : d;
      for (int k = 0; k < dd; ++k) factor *= y[static_cast<size_t>(window_.index_of(s))];
    }
    if (factor != Complex{0.0, 0.0})
      for (const auto& [l, v] : h.coeffs()) r.add(l, v * factor);
  }
  r.prune();
  return r;
}

double y_monomial_sup(const MultiIndex& m, double r, double varsigma, const SiteWindow& w) {
  const int total = m.order();
  if (total == 0) return 1.0;
  double log_v = 0.0;
  for (const auto& [site, deg] : m.entries()) {
    const double wj = std::pow(SiteWindow::bracket(site), varsigma);
    log_v += deg * std::log(static_cast<double>(deg) * r / (total * wj));
  }
  (void)w;
  return std::exp(log_v);
}

double FourierTaylorHamiltonian::hessian_sup_norm(double sigma, double r) const {
  // Q(x, y)_{ij} = Q0_{ij}(x) + sum_k C_{ijk}(x) y_k from the cubic blocks;
  // sup-entry norm over the polydisc |y_k| <= r <k>^{-varsigma}.
  double worst = 0.0;
  const int n = window_.size();
  for (int ii = 0; ii < n; ++ii) {
    for (int jj = ii; jj < n; ++jj) {
      const int i = window_.site_of(ii), j = window_.site_of(jj);
      double entry = hessian_block(i, j).norm(sigma);
      for (const auto& [m, h] : blocks_) {
        if (m.order() != 3) continue;
        const int mi = m.value_at(i), mj = m.value_at(j);
        double mult;
        if (i == j)
          mult = static_cast<double>(mi) * (mi - 1);
        else
          mult = static_cast<double>(mi) * mj;
        if (mult <= 0.0) continue;
        MultiIndex rest = m.plus(MultiIndex::unit(i, -1)).plus(MultiIndex::unit(j, -1));
        const int k = rest.entries()[0].first;
        entry += mult * h.norm(sigma) * r / std::pow(SiteWindow::bracket(k), varsigma_);
      }
      worst = std::max(worst, entry);
    }
  }
  return worst;
}

bool FourierTaylorHamiltonian::is_real_symmetric(double tol) const {
  for (const auto& [m, h] : blocks_)
    if (!h.is_real_symmetric(tol)) return false;
  return true;
}

double FourierTaylorHamiltonian::hessian_hermitian_defect(double sigma) const {
  double worst = 0.0;
  double scale = 1e-300;
  const int n = window_.size();
  for (int ii = 0; ii < n; ++ii)
    for (int jj = ii; jj < n; ++jj) {
      const int i = window_.site_of(ii), j = window_.site_of(jj);
      TorusFunction q = hessian_block(i, j);
      scale = std::max(scale, q.norm(sigma));
      // Hermitian coefficient symmetry of each entry.
      for (const auto& [l, v] : q.coeffs())
        worst = std::max(worst, std::abs(q.coeff(l.negated()) - std::conj(v)));
    }
  return worst / scale;
}

void FourierTaylorHamiltonian::prune(MassLoss* loss) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    it->second.prune(loss);
    if (it->second.empty())
      it = blocks_.erase(it);
    else
      ++it;
  }
}

ErrorPair measure_error(const FourierTaylorHamiltonian& h, const FrequencyVector& omega,
                        double sigma) {
  ErrorPair e;
  e.e_value = h.value_block().zero_average_part().norm(sigma);
  for (int ii = 0; ii < h.window().size(); ++ii) {
    const int j = h.window().site_of(ii);
    TorusFunction g = h.gradient_block(j);
    TorusFunction d =
        g - TorusFunction::constant(h.window(), h.truncation(), Complex{omega.at(j), 0.0});
    e.e_freq = std::max(e.e_freq, d.norm(sigma));
  }
  return e;
}

TaylorCheckReport taylor_remainder_checks(const FourierTaylorHamiltonian& h,
                                          const std::vector<Complex>& y, double sigma) {
  TaylorCheckReport rep;
  const double r = h.y_radius();
  double ynorm = 0.0;
  for (int ii = 0; ii < h.window().size(); ++ii)
    ynorm += std::abs(y[static_cast<size_t>(ii)]) *
             std::pow(SiteWindow::bracket(h.window().site_of(ii)), h.varsigma());
  rep.y_norm = ynorm;
  if (ynorm >= r)
    throw Error(ErrorKind::OutOfRange, "taylor_remainder_checks: ||y|| >= r");
  rep.m_norm = h.hessian_sup_norm(sigma, r);

  // (1) value remainder
  TorusFunction lhs1 = h.evaluate_at_y(y) - h.value_block();
  for (int ii = 0; ii < h.window().size(); ++ii) {
    const int j = h.window().site_of(ii);
    lhs1 = lhs1 - h.gradient_block(j).scaled(y[static_cast<size_t>(ii)]);
  }
  rep.lhs1 = lhs1.norm(sigma);
  rep.rhs1 = rep.m_norm * ynorm * ynorm;

  // (2) gradient difference, max over components
  for (int ii = 0; ii < h.window().size(); ++ii) {
    const int j = h.window().site_of(ii);
    TorusFunction d = h.gradient_at_y(j, y) - h.gradient_block(j);
    rep.lhs2 = std::max(rep.lhs2, d.norm(sigma));
  }
  rep.rhs2 = rep.m_norm * ynorm;

  // (3) gradient remainder against the Hessian at 0
  for (int ii = 0; ii < h.window().size(); ++ii) {
    const int j = h.window().site_of(ii);
    TorusFunction d = h.gradient_at_y(j, y) - h.gradient_block(j);
    for (int kk = 0; kk < h.window().size(); ++kk) {
      const int k = h.window().site_of(kk);
      d = d - h.hessian_block(j, k).scaled(y[static_cast<size_t>(kk)]);
    }
    rep.lhs3 = std::max(rep.lhs3, d.norm(sigma));
  }
  rep.rhs3 = rep.m_norm * ynorm * ynorm / (r - ynorm);
  return rep;
}

}  // namespace kamlat
