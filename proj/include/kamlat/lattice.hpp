#ifndef KAMLAT_LATTICE_HPP
#define KAMLAT_LATTICE_HPP

#include <vector>

#include "kamlat/chart.hpp"
#include "kamlat/hamiltonian.hpp"
#include "kamlat/potential.hpp"
#include "kamlat/window.hpp"

namespace kamlat::lattice {

/// One bond: site n coupled to site n+p (p >= 1) through eps * W(x_{n+p} - x_n).
struct Coupling {
  int n = 0;
  int p = 1;
  double eps = 0.0;
  Potential w;
};

struct LatticeModel {
  SiteWindow window;
  Potential v;
  std::vector<Coupling> couplings;
  double q_c = 0.0, decay_r = 0.0;  // parameters of the default eps_n = q_c e^{-R|n|}

  /// Nearest-neighbor chain with eps_n = q_c e^{-R|n|}; bonds whose partner
  /// falls outside the window are dropped (free boundary).
  static LatticeModel chain(const SiteWindow& w, const Potential& v, const Potential& wpot,
                            double q_c, double decay_r);

  double eps_l1() const;
  /// Checks W(0) = W'(0) = W''(0) = 0 (cubic-or-higher contact) by sampling.
  void validate() const;

  /// Accelerations F_n = -V'(x_n) + coupling forces, from the Hamiltonian.
  std::vector<double> force(const std::vector<double>& x) const;
  double energy(const std::vector<double>& x, const std::vector<double>& y) const;
};

struct Trajectory {
  double dt = 0;
  int stride = 1;
  std::vector<double> times;
  std::vector<std::vector<double>> xs, ys;  // [sample][site index]
  std::vector<double> energies;
  double energy_drift = 0;       // max relative deviation from the initial energy
  double dt_stability_bound = 0;
};

/// Second-order symplectic (Stoermer-Verlet) splitting of kinetic and full
/// potential parts. Throws UnstableStep if the relative energy drift passes 1e-3.
Trajectory integrate_lattice(const LatticeModel& model, const std::vector<double>& x0,
                             const std::vector<double>& y0, double t_end, double dt,
                             int stride = 1);

struct ReducedOptions {
  int theta_grid = 0;        // 0: derived from the caps (2 * (2L+1), rounded even)
  double stencil_frac = 0.2; // I-stencil radius as a fraction of xi_n
  double fourier_tail_rel = 1e-6;
  double y_tail_rel = 0.05;
  double varsigma = 2.0;
  double y_radius = 0.25;
};

/// Angle-action reduction of the chain Hamiltonian around actions xi:
/// degree-0..3 blocks of sum_n H0(xi_n + I_n) plus the coupling perturbation
/// evaluated through the chart on per-pair collocation grids, projected to the
/// Fourier-Taylor caps. The constant term (m = 0, l = 0) is discarded.
FourierTaylorHamiltonian build_reduced_hamiltonian(const LatticeModel& model,
                                                   const ActionProfile& profile,
                                                   const AngleActionChart& chart,
                                                   const std::vector<double>& xi,
                                                   const Truncation& caps, double sigma,
                                                   const ReducedOptions& opt = {});

}  // namespace kamlat::lattice

#endif
