#ifndef KAMLAT_KAM_HPP
#define KAMLAT_KAM_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kamlat/hamiltonian.hpp"
#include "kamlat/homological.hpp"
#include "kamlat/torus_function.hpp"

namespace kamlat::kam {

struct KAMConfig {
  double sigma = 0.4;
  double eta = 2.0;
  std::optional<double> q;  // contraction ratio; default midpoint of (2^-eta, (2^-eta+1)/2)
  double target = 1e-12;
  int max_steps = 8;
  int y_degree_cap = 3;
  DivisorPolicy divisor_policy;
  double cond_threshold = 1e8;
  double alias_budget_rel = 1e-3;   // composition tail mass allowed, relative to eps
  double fixed_point_tol = 1e-13;
  int fixed_point_max_iters = 50;
  double taylor_term_tol = 1e-18;   // absolute cutoff for composition Taylor terms
  int taylor_max_order = 12;
  double fit_floor = 1e-14;         // eps below this is treated as roundoff floor

  double q_value() const {
    if (q) return *q;
    const double lo = std::pow(2.0, -eta);
    const double hi = 0.5 * (lo + 1.0);
    return 0.5 * (lo + hi);
  }
  double sigma_nu(int nu) const { return 0.5 * sigma * (1.0 + std::pow(q_value(), nu)); }
};

/// Generating-function data of one step: zero-average a, the counterterm
/// alpha solved from the averaged Hessian, and the vector b.
struct KolmogorovStepData {
  TorusFunction a;
  std::vector<double> alpha;        // per site
  std::vector<TorusFunction> b;     // per site
  double norm_a = 0;
  double norm_ax = 0;               // max component norm
  double norm_alpha_plus_ax = 0;
  double norm_bx = 0;               // sup_i sum_j ||d b_j / d x_i||
  double hessian_cond = 0;
  double rhs_b_avg_residual = 0;    // zero-average defect of the b equations
};

/// One step map psi: xi = x + b(x), y = alpha + a_x(x) + kappa + Db(x)^T kappa,
/// stored in xi variables: x = xi + c(xi), p = alpha + a_x(x(xi)),
/// g_ij = (d b_j / d x_i)(x(xi)).
struct StepMap {
  std::vector<TorusFunction> c;
  std::vector<TorusFunction> p;
  std::map<std::pair<int, int>, TorusFunction> g;
};

/// Ordered composition psi^0 . psi^1 ... of the per-step maps; supplies the
/// torus embedding at kappa = 0.
class SymplecticMapSeries {
 public:
  void push(StepMap m) { steps_.push_back(std::move(m)); }
  size_t size() const { return steps_.size(); }
  const std::vector<StepMap>& steps() const { return steps_; }

  struct Embedding {
    std::vector<TorusFunction> u_minus_id;
    std::vector<TorusFunction> v;
  };
  /// Composes all stored maps at kappa = 0 (inner steps first).
  Embedding embedding(const SiteWindow& w, const Truncation& t, const KAMConfig& cfg) const;

 private:
  std::vector<StepMap> steps_;
};

struct KAMState {
  FourierTaylorHamiltonian h;
  int nu = 0;
  double sigma_nu = 0;
  double eps_value = 0;
  double eps_freq = 0;
  double eps() const { return std::max(eps_value, eps_freq); }
};

struct StepRecord {
  int nu = 0;
  double sigma_nu = 0;
  double eps_value = 0;
  double eps_freq = 0;
  double avg_freq_residual = 0;  // || avg H_y(.,0) - omega ||_inf
  double norm_a = 0, norm_ax = 0, norm_alpha_plus_ax = 0, norm_bx = 0;
  double hessian_cond = 0;
  double compose_loss = 0;
  double envelope = 0;  // fitted super-exponential envelope value at this step
  double timing_ms = 0;
};

enum class RunStatus { Converged, MaxSteps, Diverged };

struct KAMReport {
  RunStatus status = RunStatus::MaxSteps;
  std::string message;
  std::vector<StepRecord> history;
  int steps_executed = 0;
  int decaying_steps = 0;        // steps in the super-floor strictly-decreasing segment
  double fitted_c = 0;           // single C with eps_{nu+1} <= C eps_nu^2 on the segment
  double loglog_slope = 0;       // slope of log log(1/eps) vs nu on the segment
  double envelope_k = 0;         // fitted K in exp(-2^nu K sigma^{-2/eta})
  double final_freq_residual = 0;
  SymplecticMapSeries maps;
  FourierTaylorHamiltonian final_h;
};

/// Taylor composition f(xi + c(xi)) in coefficient space; converges for small
/// shifts. term_tol is an absolute cutoff on the sigma-norm of a Taylor layer.
TorusFunction compose_shift(const TorusFunction& f, const std::vector<TorusFunction>& shift,
                            double sigma, double term_tol, int max_order,
                            MassLoss* loss = nullptr);

/// Solves the three generating-function equations at the current state.
KolmogorovStepData solve_step_equations(const FourierTaylorHamiltonian& h,
                                        const FrequencyVector& omega, const KAMConfig& cfg);

/// Pushes H through the step map: H_new(xi, kappa) = H(x(xi), y(xi, kappa)),
/// re-truncated at new_sigma. Returns the map in xi variables as well.
FourierTaylorHamiltonian compose_push(const FourierTaylorHamiltonian& h,
                                      const KolmogorovStepData& step, double new_sigma,
                                      const KAMConfig& cfg, StepMap* map_out = nullptr,
                                      MassLoss* loss_out = nullptr);

/// One full Kolmogorov step: solve, compose, advance nu, re-measure.
std::pair<KAMState, KolmogorovStepData> kolmogorov_step(const KAMState& state,
                                                        const FrequencyVector& omega,
                                                        const KAMConfig& cfg,
                                                        StepMap* map_out = nullptr,
                                                        StepRecord* record_out = nullptr);

/// Iterates until eps < target, max_steps, or divergence (eps rising twice).
KAMReport run_iteration(const FourierTaylorHamiltonian& h0, const FrequencyVector& omega,
                        const KAMConfig& cfg);

double average_frequency_residual(const FourierTaylorHamiltonian& h,
                                  const FrequencyVector& omega);

}  // namespace kamlat::kam

#endif
