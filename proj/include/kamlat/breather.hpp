#ifndef KAMLAT_BREATHER_HPP
#define KAMLAT_BREATHER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kamlat/kam.hpp"
#include "kamlat/lattice.hpp"
#include "kamlat/nonres.hpp"

namespace kamlat::lattice {

enum class AmplitudeMode { Large, Small, Mixed };

struct BreatherConfig {
  AmplitudeMode mode = AmplitudeMode::Small;
  double xi_scale = 0.0;     // 0: chosen from the profile action range
  double xi_min = 0.0;       // floor for the small-amplitude tail
  double varsigma = 2.0;     // tail exponent: xi_n ~ xi_scale <n>^{-varsigma-2}
  double jitter_rel = 1e-3;
  int retry_cap = 500;
  uint64_t seed = 1;
  nonres::DiophantineParams dio;
  nonres::IndexBudget budget;
  kam::KAMConfig kam;
  ReducedOptions reduced;
  Truncation caps;
};

struct BreatherCertificate {
  std::vector<double> xi;           // accepted actions per site
  FrequencyVector omega;
  double dio_worst_margin = 0.0;
  nonres::DiophantineParams dio;
  nonres::IndexBudget budget;
  int xi_attempts = 0;
  kam::KAMReport report;
  std::vector<double> x0, y0;       // lattice initial condition on the torus
  std::vector<double> site_energy;  // H0 level per site at xi
  std::string to_json(bool include_embedding = false) const;
};

/// Picks xi per amplitude mode, jitters until omega(xi) passes the
/// nonresonance check, reduces the Hamiltonian, runs the iteration and maps
/// the torus point at angle 0 back to lattice coordinates.
BreatherCertificate construct_breather(const LatticeModel& model,
                                       const ActionProfile& profile,
                                       const AngleActionChart& chart,
                                       const BreatherConfig& cfg);

struct VerifyOptions {
  double horizon = 1e4;
  double dt = 1e-3;
  int stride = 250;
  double spectral_tol_factor = 5.0;  // tolerance = max(factor * 2pi/horizon, spectral_tol_abs)
  double spectral_tol_abs = 1e-4;
  double action_tol = 1e-4;          // max |I_n(t)| through the chart
  double energy_drift_tol = 1e-6;
  double localization_min_decades = 0.0;  // 0: skip the center-to-edge check
};

struct SiteVerification {
  int site = 0;
  double omega_cert = 0.0;
  double omega_peak = 0.0;
  double peak_error = 0.0;
  double mean_energy = 0.0;
};

struct VerificationReport {
  std::vector<SiteVerification> sites;
  double energy_drift = 0.0;
  double max_action_deviation = 0.0;
  double localization_decades = 0.0;  // log10(center energy / edge energy)
  double decay_rate = 0.0;            // fitted exponential rate of E_n vs |n|
  double spectral_tol = 0.0;
  bool energy_ok = false;
  bool spectral_ok = false;
  bool action_ok = false;
  bool localization_ok = true;
  bool pass() const { return energy_ok && spectral_ok && action_ok && localization_ok; }
  std::string to_json() const;
};

/// Integrates the original lattice from the certificate initial condition and
/// measures localization, frequency preservation, and distance to the torus.
VerificationReport verify_breather(const BreatherCertificate& cert,
                                   const LatticeModel& model,
                                   const ActionProfile& profile,
                                   const AngleActionChart& chart, const VerifyOptions& opt,
                                   Trajectory* trajectory_out = nullptr);

}  // namespace kamlat::lattice

#endif
