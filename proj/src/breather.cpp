#include "kamlat/breather.hpp"

#include <cmath>
#include <numbers>

#include "kamlat/errors.hpp"
#include "kamlat/rng.hpp"
#include "kamlat/spectrum.hpp"
#include "nlohmann/json.hpp"

namespace kamlat::lattice {

namespace {

std::vector<double> base_actions(const SiteWindow& w, const ActionProfile& profile,
                                 const BreatherConfig& cfg) {
  const double lo = profile.action_min(), hi = profile.action_max();
  const double span = hi - lo;
  double scale = cfg.xi_scale;
  std::vector<double> xi(static_cast<size_t>(w.size()), 0.0);
  switch (cfg.mode) {
    case AmplitudeMode::Large: {
      if (scale <= 0.0) scale = lo + 0.6 * span;
      for (auto& v : xi) v = scale;
      break;
    }
    case AmplitudeMode::Small: {
      if (scale <= 0.0) scale = lo + 0.5 * span;
      const double floor_xi = cfg.xi_min > 0.0 ? cfg.xi_min : lo * 1.05;
      for (int i = 0; i < w.size(); ++i) {
        const double br = SiteWindow::bracket(w.site_of(i));
        xi[static_cast<size_t>(i)] =
            std::max(floor_xi, scale * std::pow(br, -cfg.varsigma - 2.0));
      }
      break;
    }
    case AmplitudeMode::Mixed: {
      const double big = scale > 0.0 ? scale : lo + 0.6 * span;
      const double small = std::max(cfg.xi_min > 0.0 ? cfg.xi_min : lo * 1.05, 0.05 * big);
      for (int i = 0; i < w.size(); ++i)
        xi[static_cast<size_t>(i)] = (w.site_of(i) % 2 == 0) ? big : small;
      break;
    }
  }
  return xi;
}

}  // namespace

BreatherCertificate construct_breather(const LatticeModel& model,
                                       const ActionProfile& profile,
                                       const AngleActionChart& chart,
                                       const BreatherConfig& cfg) {
  const SiteWindow& w = model.window;
  const std::vector<double> base = base_actions(w, profile, cfg);

  BreatherCertificate cert;
  cert.dio = cfg.dio;
  cert.budget = cfg.budget;

  bool accepted = false;
  std::vector<double> xi(base.size(), 0.0);
  FrequencyVector omega;
  for (int attempt = 0; attempt < cfg.retry_cap && !accepted; ++attempt) {
    for (size_t i = 0; i < base.size(); ++i) {
      const double u = rng::uniform(cfg.seed, rng::kStreamXiJitter,
                                    static_cast<uint64_t>(attempt) * base.size() + i, -1.0,
                                    1.0);
      xi[i] = base[i] * (1.0 + cfg.jitter_rel * u);
    }
    auto [om, hess] = frequency_map(profile, w, xi);
    auto verdict = nonres::check_diophantine(om, cfg.dio, cfg.budget);
    if (nonres::holds(verdict)) {
      accepted = true;
      omega = om;
      cert.dio_worst_margin = std::get<nonres::Holds>(verdict).worst_margin;
      cert.xi_attempts = attempt + 1;
    }
  }
  if (!accepted)
    throw Error(ErrorKind::NoDiophantineXi,
                "construct_breather: no nonresonant xi within the retry cap");

  cert.xi = xi;
  cert.omega = omega;
  for (size_t i = 0; i < xi.size(); ++i)
    cert.site_energy.push_back(profile.h_from_action(xi[i]));

  FourierTaylorHamiltonian h0 = build_reduced_hamiltonian(
      model, profile, chart, xi, cfg.caps, cfg.kam.sigma, cfg.reduced);
  cert.report = kam::run_iteration(h0, omega, cfg.kam);
  if (cert.report.status == kam::RunStatus::Diverged)
    throw Error(ErrorKind::Diverged, "construct_breather: " + cert.report.message);
  if (cert.report.status == kam::RunStatus::MaxSteps &&
      cert.report.final_freq_residual > cfg.kam.target)
    throw Error(ErrorKind::Diverged,
                "construct_breather: iteration stopped above the target residual");

  // Torus point at angle xi = 0 mapped through the chart.
  auto emb = cert.report.maps.embedding(w, cfg.caps, cfg.kam);
  std::vector<double> zero(static_cast<size_t>(w.size()), 0.0);
  cert.x0.resize(static_cast<size_t>(w.size()));
  cert.y0.resize(static_cast<size_t>(w.size()));
  for (int i = 0; i < w.size(); ++i) {
    const double theta = emb.u_minus_id[static_cast<size_t>(i)].evaluate(zero).real();
    const double act = xi[static_cast<size_t>(i)] +
                       emb.v[static_cast<size_t>(i)].evaluate(zero).real();
    auto pt = chart.forward(theta, act);
    cert.x0[static_cast<size_t>(i)] = pt.x;
    cert.y0[static_cast<size_t>(i)] = pt.y;
  }
  return cert;
}

VerificationReport verify_breather(const BreatherCertificate& cert,
                                   const LatticeModel& model,
                                   const ActionProfile& profile,
                                   const AngleActionChart& chart, const VerifyOptions& opt,
                                   Trajectory* trajectory_out) {
  (void)chart;
  const SiteWindow& w = model.window;
  Trajectory traj =
      integrate_lattice(model, cert.x0, cert.y0, opt.horizon, opt.dt, opt.stride);

  VerificationReport rep;
  rep.energy_drift = traj.energy_drift;
  rep.energy_ok = traj.energy_drift <= opt.energy_drift_tol;
  rep.spectral_tol = std::max(opt.spectral_tol_factor * 2.0 * std::numbers::pi / opt.horizon,
                              opt.spectral_tol_abs);

  const double sample_dt = opt.dt * opt.stride;
  rep.spectral_ok = true;
  std::vector<double> mean_energy(static_cast<size_t>(w.size()), 0.0);
  for (int i = 0; i < w.size(); ++i) {
    std::vector<double> sig(traj.xs.size());
    double esum = 0.0;
    for (size_t s = 0; s < traj.xs.size(); ++s) {
      sig[s] = traj.xs[s][static_cast<size_t>(i)];
      const double xv = traj.xs[s][static_cast<size_t>(i)];
      const double yv = traj.ys[s][static_cast<size_t>(i)];
      esum += 0.5 * yv * yv + model.v.value(xv);
    }
    mean_energy[static_cast<size_t>(i)] = esum / static_cast<double>(traj.xs.size());

    SiteVerification sv;
    sv.site = w.site_of(i);
    sv.omega_cert = cert.omega.values[static_cast<size_t>(i)];
    sv.mean_energy = mean_energy[static_cast<size_t>(i)];
    auto peak = dominant_frequency(sig, sample_dt);
    sv.omega_peak = peak.omega;
    sv.peak_error = std::fabs(peak.omega - sv.omega_cert);
    if (sv.peak_error > rep.spectral_tol) rep.spectral_ok = false;
    rep.sites.push_back(sv);
  }

  // torus distance through the chart: action deviation from xi
  rep.max_action_deviation = 0.0;
  for (size_t s = 0; s < traj.xs.size(); ++s) {
    for (int i = 0; i < w.size(); ++i) {
      const double xv = traj.xs[s][static_cast<size_t>(i)];
      const double yv = traj.ys[s][static_cast<size_t>(i)];
      const double h = 0.5 * yv * yv + model.v.value(xv);
      const double act = profile.action(h);
      rep.max_action_deviation = std::max(
          rep.max_action_deviation, std::fabs(act - cert.xi[static_cast<size_t>(i)]));
    }
  }
  rep.action_ok = rep.max_action_deviation <= opt.action_tol;

  // localization: center-to-edge decades and a log-linear decay fit
  const double e_center = mean_energy[static_cast<size_t>(w.index_of(0))];
  double e_edge = std::max(mean_energy.front(), mean_energy.back());
  rep.localization_decades = std::log10(std::max(e_center, 1e-300)) -
                             std::log10(std::max(e_edge, 1e-300));
  if (w.n_max >= 1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int np = 0;
    for (int i = 0; i < w.size(); ++i) {
      const int site = w.site_of(i);
      if (site == 0) continue;
      const double x = std::fabs(static_cast<double>(site));
      const double y = std::log(std::max(mean_energy[static_cast<size_t>(i)], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++np;
    }
    if (np >= 2) rep.decay_rate = -(np * sxy - sx * sy) / (np * sxx - sx * sx);
  }
  if (opt.localization_min_decades > 0.0)
    rep.localization_ok = rep.localization_decades >= opt.localization_min_decades;

  if (trajectory_out) *trajectory_out = std::move(traj);
  return rep;
}

std::string BreatherCertificate::to_json(bool include_embedding) const {
  nlohmann::json j;
  j["xi"] = xi;
  j["omega"] = omega.values;
  j["site_energy"] = site_energy;
  j["x0"] = x0;
  j["y0"] = y0;
  j["dio"] = {{"gamma", dio.gamma}, {"mu", dio.mu},
              {"budget_l1", budget.max_l1}, {"per_site_cap", budget.per_site_cap},
              {"worst_margin", dio_worst_margin}, {"attempts", xi_attempts}};
  j["kam"] = {{"steps", report.steps_executed},
              {"final_freq_residual", report.final_freq_residual},
              {"fitted_c", report.fitted_c},
              {"loglog_slope", report.loglog_slope},
              {"status", report.status == kam::RunStatus::Converged ? "converged"
                         : report.status == kam::RunStatus::MaxSteps ? "max_steps"
                                                                     : "diverged"}};
  (void)include_embedding;
  return j.dump(2);
}

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  auto arr = nlohmann::json::array();
  for (const auto& s : sites)
    arr.push_back({{"site", s.site},
                   {"omega_cert", s.omega_cert},
                   {"omega_peak", s.omega_peak},
                   {"peak_error", s.peak_error},
                   {"mean_energy", s.mean_energy}});
  j["sites"] = arr;
  j["energy_drift"] = energy_drift;
  j["max_action_deviation"] = max_action_deviation;
  j["localization_decades"] = localization_decades;
  j["decay_rate"] = decay_rate;
  j["spectral_tol"] = spectral_tol;
  j["pass"] = {{"energy", energy_ok},
               {"spectral", spectral_ok},
               {"action", action_ok},
               {"localization", localization_ok},
               {"all", pass()}};
  return j.dump(2);
}

}  // namespace kamlat::lattice
