#include "kamlat/kam.hpp"

#include <chrono>
#include <cmath>

#include "kamlat/errors.hpp"

namespace kamlat::kam {

namespace {

// Exact average of a product, sum_l u_hat(l) v_hat(-l); avoids a full convolution.
Complex average_product(const TorusFunction& u, const TorusFunction& v) {
  Complex s{0.0, 0.0};
  const bool iterate_u = u.term_count() <= v.term_count();
  const TorusFunction& small = iterate_u ? u : v;
  const TorusFunction& big = iterate_u ? v : u;
  for (const auto& [l, cu] : small.coeffs()) s += cu * big.coeff(l.negated());
  return s;
}

}  // namespace

TorusFunction compose_shift(const TorusFunction& f, const std::vector<TorusFunction>& shift,
                            double sigma, double term_tol, int max_order, MassLoss* loss) {
  // f(xi + c(xi)) = sum_beta (d^beta f)(xi) c(xi)^beta / beta!
  // Layers are grown from (derivative, power-product) pairs; extension sites
  // are nondecreasing to visit every beta exactly once.
  const SiteWindow& w = f.window();
  struct Term {
    TorusFunction deriv;   // d^beta f
    TorusFunction power;   // c^beta / beta!
    int last_index;        // window index of the largest extended site
    std::vector<int> beta; // per window index
  };

  std::vector<int> active;  // window indices with nonzero shift component
  for (int i = 0; i < w.size(); ++i)
    if (!shift[static_cast<size_t>(i)].empty()) active.push_back(i);

  TorusFunction result = f;
  if (active.empty() || f.empty()) return result;

  std::vector<Term> layer;
  layer.push_back({f, TorusFunction::constant(w, f.truncation(), Complex{1.0, 0.0}), -1,
                   std::vector<int>(static_cast<size_t>(w.size()), 0)});

  for (int order = 1; order <= max_order; ++order) {
    std::vector<Term> next;
    double layer_norm = 0.0;
    for (const auto& t : layer) {
      for (int i : active) {
        if (i < t.last_index) continue;
        Term nt;
        nt.last_index = i;
        nt.beta = t.beta;
        nt.beta[static_cast<size_t>(i)] += 1;
        nt.deriv = t.deriv.derivative(w.site_of(i));
        if (nt.deriv.empty()) continue;
        MassLoss local;
        nt.power = t.power.multiply(shift[static_cast<size_t>(i)], &local);
        nt.power = nt.power.scaled(1.0 / nt.beta[static_cast<size_t>(i)]);
        if (nt.power.empty()) continue;
        MassLoss contrib_loss;
        TorusFunction contrib = nt.deriv.multiply(nt.power, &contrib_loss);
        if (loss) {
          loss->merge(local);
          loss->merge(contrib_loss);
        }
        layer_norm += contrib.norm(sigma);
        result = result + contrib;
        next.push_back(std::move(nt));
      }
    }
    if (next.empty() || layer_norm < term_tol) {
      result.prune(loss);
      return result;
    }
    layer = std::move(next);
  }
  throw Error(ErrorKind::InversionDiverged,
              "compose_shift: Taylor composition did not converge within the order cap");
}

KolmogorovStepData solve_step_equations(const FourierTaylorHamiltonian& h,
                                        const FrequencyVector& omega, const KAMConfig& cfg) {
  const SiteWindow& w = h.window();
  const int n = w.size();
  KolmogorovStepData step;

  // omega . d_x a = <H(.,0)> - H(.,0)
  TorusFunction h0 = h.value_block();
  TorusFunction g1 = h0.zero_average_part().scaled(-1.0);
  step.a = g1.empty() ? TorusFunction(w, h.truncation())
                      : solve_homological(g1, omega, cfg.divisor_policy);

  std::vector<TorusFunction> ax(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ax[static_cast<size_t>(i)] = step.a.derivative(w.site_of(i));

  // <Q> alpha = omega - <H_y(.,0)> - <Q a_x>
  SiteMatrix q_avg = h.averaged_hessian();
  std::vector<double> rhs(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const int si = w.site_of(i);
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      const int sj = w.site_of(j);
      TorusFunction qij = h.hessian_block(si, sj);
      if (qij.empty() || ax[static_cast<size_t>(j)].empty()) continue;
      acc += average_product(qij, ax[static_cast<size_t>(j)]);
    }
    rhs[static_cast<size_t>(i)] =
        omega.at(si) - h.gradient_block(si).average().real() - acc.real();
  }
  step.alpha = solve_dense(q_avg, rhs, cfg.cond_threshold, &step.hessian_cond);

  // omega . d_x b_i = omega_i - H_y(.,0)_i - (Q (alpha + a_x))_i
  step.b.assign(static_cast<size_t>(n), TorusFunction(w, h.truncation()));
  for (int i = 0; i < n; ++i) {
    const int si = w.site_of(i);
    TorusFunction rhs_i =
        TorusFunction::constant(w, h.truncation(), Complex{omega.at(si), 0.0}) -
        h.gradient_block(si);
    for (int j = 0; j < n; ++j) {
      const int sj = w.site_of(j);
      TorusFunction qij = h.hessian_block(si, sj);
      if (qij.empty()) continue;
      TorusFunction term = qij.scaled(step.alpha[static_cast<size_t>(j)]);
      if (!ax[static_cast<size_t>(j)].empty())
        term = term + qij.multiply(ax[static_cast<size_t>(j)]);
      rhs_i = rhs_i - term;
    }
    // The counterterm equation makes this average vanish; record the defect.
    step.rhs_b_avg_residual =
        std::max(step.rhs_b_avg_residual, std::abs(rhs_i.average()));
    rhs_i = rhs_i.zero_average_part();
    rhs_i.prune();
    if (!rhs_i.empty())
      step.b[static_cast<size_t>(i)] = solve_homological(rhs_i, omega, cfg.divisor_policy);
  }

  // Norms at the mid radius between sigma_nu and sigma_{nu+1} are recorded by
  // the caller; here plain sigma-of-h norms.
  const double sm = h.sigma();
  step.norm_a = step.a.norm(sm);
  double apx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double na = ax[static_cast<size_t>(i)].norm(sm);
    step.norm_ax = std::max(step.norm_ax, na);
    apx = std::max(apx,
                   (ax[static_cast<size_t>(i)] +
                    TorusFunction::constant(w, h.truncation(),
                                            Complex{step.alpha[static_cast<size_t>(i)], 0.0}))
                       .norm(sm));
  }
  step.norm_alpha_plus_ax = apx;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j)
      row += step.b[static_cast<size_t>(j)].derivative(w.site_of(i)).norm(sm);
    step.norm_bx = std::max(step.norm_bx, row);
  }
  return step;
}

FourierTaylorHamiltonian compose_push(const FourierTaylorHamiltonian& h,
                                      const KolmogorovStepData& step, double new_sigma,
                                      const KAMConfig& cfg, StepMap* map_out,
                                      MassLoss* loss_out) {
  const SiteWindow& w = h.window();
  const int n = w.size();
  const Truncation& tr = h.truncation();
  if (step.norm_bx >= 1.0)
    throw Error(ErrorKind::InversionDiverged,
                "compose_push: ||b_x|| >= 1, fixed point not contracting");
  MassLoss loss;

  // Invert xi = x + b(x): seek c with c = -b(id + c).
  std::vector<TorusFunction> c(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = step.b[static_cast<size_t>(i)].scaled(-1.0);
  double bscale = 0.0;
  for (int i = 0; i < n; ++i) bscale = std::max(bscale, step.b[static_cast<size_t>(i)].norm(new_sigma));
  if (bscale > 0.0) {
    bool converged = false;
    for (int it = 0; it < cfg.fixed_point_max_iters; ++it) {
      std::vector<TorusFunction> cn(static_cast<size_t>(n));
      double delta = 0.0;
      for (int i = 0; i < n; ++i) {
        cn[static_cast<size_t>(i)] =
            compose_shift(step.b[static_cast<size_t>(i)], c, new_sigma, cfg.taylor_term_tol,
                          cfg.taylor_max_order, &loss)
                .scaled(-1.0);
        delta = std::max(delta, (cn[static_cast<size_t>(i)] - c[static_cast<size_t>(i)]).norm(new_sigma));
      }
      c = std::move(cn);
      if (delta < cfg.fixed_point_tol * std::max(1.0, bscale)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw Error(ErrorKind::InversionDiverged, "compose_push: x(xi) fixed point stalled");
  }

  // p_i(xi) = alpha_i + (a_x)_i(x(xi)); g_ij(xi) = (d b_j / d x_i)(x(xi)).
  std::vector<TorusFunction> p(static_cast<size_t>(n));
  std::map<std::pair<int, int>, TorusFunction> g;
  for (int i = 0; i < n; ++i) {
    TorusFunction axi = step.a.derivative(w.site_of(i));
    if (!axi.empty())
      axi = compose_shift(axi, c, new_sigma, cfg.taylor_term_tol, cfg.taylor_max_order, &loss);
    p[static_cast<size_t>(i)] =
        axi + TorusFunction::constant(w, tr, Complex{step.alpha[static_cast<size_t>(i)], 0.0});
    for (int j = 0; j < n; ++j) {
      TorusFunction gij = step.b[static_cast<size_t>(j)].derivative(w.site_of(i));
      if (gij.empty()) continue;
      g[{i, j}] =
          compose_shift(gij, c, new_sigma, cfg.taylor_term_tol, cfg.taylor_max_order, &loss);
    }
  }

  // Substitute y_i = p_i + kappa_i + sum_j g_ij kappa_j into each block.
  FourierTaylorHamiltonian out(w, tr, new_sigma, h.y_radius(), h.varsigma());
  using Poly = std::map<MultiIndex, TorusFunction>;  // kappa-degree -> coefficient

  auto poly_mul = [&](const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, fa] : a)
      for (const auto& [mb, fb] : b) {
        MultiIndex m = ma.plus(mb);
        if (m.order() > cfg.y_degree_cap) continue;  // cannot happen for affine input
        MassLoss ml;
        TorusFunction prod = fa.multiply(fb, &ml);
        loss.merge(ml);
        auto it = r.find(m);
        if (it == r.end())
          r.emplace(m, std::move(prod));
        else
          it->second = it->second + prod;
      }
    return r;
  };

  // Linear substitution polynomial per site, cached.
  std::vector<Poly> linear(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Poly li;
    if (!p[static_cast<size_t>(i)].empty()) li.emplace(MultiIndex{}, p[static_cast<size_t>(i)]);
    TorusFunction diag = TorusFunction::constant(w, tr, Complex{1.0, 0.0});
    auto it = g.find({i, i});
    if (it != g.end()) diag = diag + it->second;
    li.emplace(MultiIndex::unit(w.site_of(i), 1), std::move(diag));
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      auto itg = g.find({i, j});
      if (itg != g.end()) li.emplace(MultiIndex::unit(w.site_of(j), 1), itg->second);
    }
    linear[static_cast<size_t>(i)] = std::move(li);
  }

  for (const auto& [m, hm] : h.blocks()) {
    TorusFunction hm_shifted =
        compose_shift(hm, c, new_sigma, cfg.taylor_term_tol, cfg.taylor_max_order, &loss);
    Poly acc;
    acc.emplace(MultiIndex{}, std::move(hm_shifted));
    for (const auto& [site, deg] : m.entries())
      for (int k = 0; k < deg; ++k)
        acc = poly_mul(acc, linear[static_cast<size_t>(w.index_of(site))]);
    for (auto& [mk, f] : acc) {
      f.prune(&loss);
      if (!f.empty()) out.add_block(mk, f, &loss);
    }
  }
  out.prune(&loss);
  if (map_out) *map_out = StepMap{std::move(c), std::move(p), std::move(g)};
  if (loss_out) *loss_out = loss;
  return out;
}

std::pair<KAMState, KolmogorovStepData> kolmogorov_step(const KAMState& state,
                                                        const FrequencyVector& omega,
                                                        const KAMConfig& cfg,
                                                        StepMap* map_out,
                                                        StepRecord* record_out) {
  const auto t0 = std::chrono::steady_clock::now();
  KolmogorovStepData step = solve_step_equations(state.h, omega, cfg);
  const double new_sigma = cfg.sigma_nu(state.nu + 1);
  MassLoss loss;
  FourierTaylorHamiltonian hn = compose_push(state.h, step, new_sigma, cfg, map_out, &loss);

  const double eps_prev = std::max(state.eps(), cfg.fit_floor);
  if (loss.total() > cfg.alias_budget_rel * std::max(eps_prev, 1e-30) &&
      loss.total() > 1e3 * cfg.taylor_term_tol)
    throw Error(ErrorKind::AliasingBudgetExceeded,
                "compose_push: truncation tail mass " + std::to_string(loss.total()) +
                    " above budget");

  KAMState next;
  next.h = std::move(hn);
  next.nu = state.nu + 1;
  next.sigma_nu = new_sigma;
  ErrorPair e = measure_error(next.h, omega, new_sigma);
  next.eps_value = e.e_value;
  next.eps_freq = e.e_freq;

  if (record_out) {
    record_out->nu = next.nu;
    record_out->sigma_nu = new_sigma;
    record_out->eps_value = e.e_value;
    record_out->eps_freq = e.e_freq;
    record_out->avg_freq_residual = average_frequency_residual(next.h, omega);
    record_out->norm_a = step.norm_a;
    record_out->norm_ax = step.norm_ax;
    record_out->norm_alpha_plus_ax = step.norm_alpha_plus_ax;
    record_out->norm_bx = step.norm_bx;
    record_out->hessian_cond = step.hessian_cond;
    record_out->compose_loss = loss.total();
    record_out->timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
  }
  return {std::move(next), std::move(step)};
}

double average_frequency_residual(const FourierTaylorHamiltonian& h,
                                  const FrequencyVector& omega) {
  double r = 0.0;
  for (int i = 0; i < h.window().size(); ++i) {
    const int s = h.window().site_of(i);
    r = std::max(r, std::abs(h.gradient_block(s).average() - Complex{omega.at(s), 0.0}));
  }
  return r;
}

KAMReport run_iteration(const FourierTaylorHamiltonian& h0, const FrequencyVector& omega,
                        const KAMConfig& cfg) {
  KAMReport rep;
  KAMState state;
  state.h = h0;
  state.h.set_sigma(cfg.sigma);
  state.nu = 0;
  state.sigma_nu = cfg.sigma_nu(0);
  ErrorPair e0 = measure_error(state.h, omega, state.sigma_nu);
  state.eps_value = e0.e_value;
  state.eps_freq = e0.e_freq;

  StepRecord rec0;
  rec0.nu = 0;
  rec0.sigma_nu = state.sigma_nu;
  rec0.eps_value = e0.e_value;
  rec0.eps_freq = e0.e_freq;
  rec0.avg_freq_residual = average_frequency_residual(state.h, omega);
  rep.history.push_back(rec0);

  int rises = 0;
  while (state.nu < cfg.max_steps) {
    if (state.eps() < cfg.target) {
      rep.status = RunStatus::Converged;
      break;
    }
    StepMap map;
    StepRecord rec;
    try {
      auto [next, step] = kolmogorov_step(state, omega, cfg, &map, &rec);
      rep.maps.push(std::move(map));
      rep.history.push_back(rec);
      rises = (next.eps() > state.eps()) ? rises + 1 : 0;
      state = std::move(next);
    } catch (const Error& err) {
      rep.status = RunStatus::Diverged;
      rep.message = std::string(error_kind_name(err.kind())) + ": " + err.what();
      break;
    }
    if (rises >= 2) {
      rep.status = RunStatus::Diverged;
      rep.message = "eps increased on two consecutive steps";
      break;
    }
    if (state.eps() < cfg.target) {
      rep.status = RunStatus::Converged;
      break;
    }
  }
  if (rep.status != RunStatus::Diverged && state.eps() >= cfg.target)
    rep.status = RunStatus::MaxSteps;

  rep.steps_executed = static_cast<int>(rep.history.size()) - 1;
  rep.final_freq_residual = average_frequency_residual(state.h, omega);
  rep.final_h = state.h;

  // Fits over the strictly decreasing super-floor segment.
  std::vector<double> eps;
  for (const auto& r : rep.history) eps.push_back(std::max(r.eps_value, r.eps_freq));
  size_t seg_end = 0;  // last index still in the decaying segment
  while (seg_end + 1 < eps.size() && eps[seg_end + 1] < eps[seg_end] &&
         eps[seg_end + 1] > cfg.fit_floor)
    ++seg_end;
  rep.decaying_steps = static_cast<int>(seg_end);
  if (seg_end >= 1) {
    double c = 0.0;
    for (size_t i = 0; i < seg_end; ++i) c = std::max(c, eps[i + 1] / (eps[i] * eps[i]));
    rep.fitted_c = c;
    if (seg_end >= 1 && eps[0] < 1.0) {
      // least squares on (nu, log log(1/eps_nu))
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int np = 0;
      for (size_t i = 0; i <= seg_end; ++i) {
        if (eps[i] >= 1.0) continue;
        const double x = static_cast<double>(i);
        const double y = std::log(std::log(1.0 / eps[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++np;
      }
      if (np >= 2) rep.loglog_slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    }
    double k = std::numeric_limits<double>::infinity();
    const double sig_pow = std::pow(cfg.sigma, -2.0 / cfg.eta);
    for (size_t i = 0; i <= seg_end; ++i)
      if (eps[i] < 1.0)
        k = std::min(k, -std::log(eps[i]) / (std::exp2(static_cast<double>(i)) * sig_pow));
    rep.envelope_k = std::isfinite(k) ? k : 0.0;
    for (size_t i = 0; i < rep.history.size(); ++i)
      rep.history[i].envelope =
          std::exp(-std::exp2(static_cast<double>(i)) * rep.envelope_k * sig_pow);
  }
  return rep;
}

SymplecticMapSeries::Embedding SymplecticMapSeries::embedding(const SiteWindow& w,
                                                              const Truncation& t,
                                                              const KAMConfig& cfg) const {
  const int n = w.size();
  Embedding emb;
  emb.u_minus_id.assign(static_cast<size_t>(n), TorusFunction(w, t));
  emb.v.assign(static_cast<size_t>(n), TorusFunction(w, t));
  if (steps_.empty()) return emb;
  const double sig = cfg.sigma / 2.0;  // embedding norms measured at the limit radius

  // innermost (last) step first
  emb.u_minus_id = steps_.back().c;
  emb.v = steps_.back().p;
  for (int k = static_cast<int>(steps_.size()) - 2; k >= 0; --k) {
    const StepMap& s = steps_[static_cast<size_t>(k)];
    std::vector<TorusFunction> new_u(static_cast<size_t>(n)), new_v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      TorusFunction ci = s.c[static_cast<size_t>(i)];
      if (!ci.empty())
        ci = compose_shift(ci, emb.u_minus_id, sig, cfg.taylor_term_tol, cfg.taylor_max_order);
      new_u[static_cast<size_t>(i)] = emb.u_minus_id[static_cast<size_t>(i)] + ci;

      TorusFunction pi = s.p[static_cast<size_t>(i)];
      if (!pi.empty())
        pi = compose_shift(pi, emb.u_minus_id, sig, cfg.taylor_term_tol, cfg.taylor_max_order);
      TorusFunction vi = pi + emb.v[static_cast<size_t>(i)];
      for (int j = 0; j < n; ++j) {
        auto it = s.g.find({i, j});
        if (it == s.g.end() || emb.v[static_cast<size_t>(j)].empty()) continue;
        TorusFunction gij = compose_shift(it->second, emb.u_minus_id, sig,
                                          cfg.taylor_term_tol, cfg.taylor_max_order);
        vi = vi + gij.multiply(emb.v[static_cast<size_t>(j)]);
      }
      new_v[static_cast<size_t>(i)] = std::move(vi);
    }
    emb.u_minus_id = std::move(new_u);
    emb.v = std::move(new_v);
  }
  return emb;
}

}  // namespace kamlat::kam
