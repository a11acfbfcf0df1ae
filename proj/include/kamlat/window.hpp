#ifndef KAMLAT_WINDOW_HPP
#define KAMLAT_WINDOW_HPP

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace kamlat {

/// Contiguous range of active lattice sites [-n_max, n_max] together with
/// the spatial weight exponent eta used by all site-weighted norms.
struct SiteWindow {
  int n_max = 0;
  double eta = 2.0;

  SiteWindow() = default;
  SiteWindow(int n, double eta_) : n_max(n), eta(eta_) {
    if (n_max < 0) throw std::invalid_argument("SiteWindow: n_max < 0");
    if (eta < 2.0) throw std::invalid_argument("SiteWindow: eta < 2");
  }

  int size() const { return 2 * n_max + 1; }
  bool contains(int site) const { return site >= -n_max && site <= n_max; }
  int index_of(int site) const { return site + n_max; }
  int site_of(int index) const { return index - n_max; }

  // <j> := max{1, |j|}
  static double bracket(int site) {
    return std::max(1.0, std::fabs(static_cast<double>(site)));
  }
  // <j>^eta
  double weight(int site) const { return std::pow(bracket(site), eta); }

  bool operator==(const SiteWindow&) const = default;
};

/// Per-site real frequency vector over a window.
struct FrequencyVector {
  SiteWindow window;
  std::vector<double> values;  // indexed by window.index_of(site)

  FrequencyVector() = default;
  explicit FrequencyVector(const SiteWindow& w, double fill = 0.0)
      : window(w), values(static_cast<size_t>(w.size()), fill) {}

  double& at(int site) { return values.at(static_cast<size_t>(window.index_of(site))); }
  double at(int site) const { return values.at(static_cast<size_t>(window.index_of(site))); }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace kamlat

#endif
