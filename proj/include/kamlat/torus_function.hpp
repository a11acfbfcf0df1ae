#ifndef KAMLAT_TORUS_FUNCTION_HPP
#define KAMLAT_TORUS_FUNCTION_HPP

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kamlat/multi_index.hpp"
#include "kamlat/window.hpp"

namespace kamlat {

using Complex = std::complex<double>;

/// Truncation caps for sparse coefficient maps: per-site order cap L,
/// total order cap O, and the relative drop tolerance for tiny coefficients.
struct Truncation {
  int per_site_cap = 8;   // L: |l_j| <= L for every site
  int total_cap = 16;     // O: |l|_1 <= O
  double drop_rel = 1e-16;

  bool admits(const MultiIndex& l) const {
    return l.max_site_abs_value() <= per_site_cap && l.order() <= total_cap;
  }
};

/// Mass dropped by truncation during an operation, measured in the sigma = 0
/// coefficient-sum norm.
struct MassLoss {
  double fourier_tail = 0.0;  // modes beyond the per-site/total caps
  double pruned = 0.0;        // coefficients below the drop tolerance

  void merge(const MassLoss& o) {
    fourier_tail += o.fourier_tail;
    pruned += o.pruned;
  }
  double total() const { return fourier_tail + pruned; }
};

/// Truncated analytic function on the thickened torus: a sparse map from
/// multi-indices to complex Fourier coefficients. Values are immutable in
/// spirit: every operation returns a fresh function.
class TorusFunction {
 public:
  using CoeffMap = std::map<MultiIndex, Complex>;

  TorusFunction() = default;
  TorusFunction(const SiteWindow& w, const Truncation& t) : window_(w), trunc_(t) {}

  static TorusFunction constant(const SiteWindow& w, const Truncation& t, Complex c) {
    TorusFunction f(w, t);
    f.set(MultiIndex{}, c);
    return f;
  }
  static TorusFunction mode(const SiteWindow& w, const Truncation& t,
                            const MultiIndex& l, Complex c) {
    TorusFunction f(w, t);
    f.set(l, c);
    return f;
  }
  /// amp * cos(x_site), stored as the conjugate coefficient pair.
  static TorusFunction cosine(const SiteWindow& w, const Truncation& t, int site,
                              double amp);

  const SiteWindow& window() const { return window_; }
  const Truncation& truncation() const { return trunc_; }
  const CoeffMap& coeffs() const { return c_; }
  size_t term_count() const { return c_.size(); }
  bool empty() const { return c_.empty(); }

  Complex coeff(const MultiIndex& l) const {
    auto it = c_.find(l);
    return it == c_.end() ? Complex{0.0, 0.0} : it->second;
  }

  /// Inserts or accumulates a coefficient; silently drops exact zeros.
  /// Out-of-cap indices are recorded in *loss when given, else rejected.
  void set(const MultiIndex& l, Complex v, MassLoss* loss = nullptr);
  void add(const MultiIndex& l, Complex v, MassLoss* loss = nullptr);

  /// Removes coefficients below drop_rel * max |coefficient|.
  void prune(MassLoss* loss = nullptr);

  double max_abs_coeff() const;

  // ||u||_sigma = sum |u_hat(l)| e^{sigma |l|_eta}; monotone in sigma.
  double norm(double sigma) const;

  Complex average() const { return coeff(MultiIndex{}); }

  /// Hermitian symmetry u_hat(-l) = conj(u_hat(l)) to a relative tolerance.
  bool is_real_symmetric(double tol = 1e-12) const;

  /// Pointwise evaluation at real angles (indexed by window site order).
  Complex evaluate(std::span<const double> angles) const;

  TorusFunction operator+(const TorusFunction& o) const;
  TorusFunction operator-(const TorusFunction& o) const;
  TorusFunction scaled(Complex s) const;

  /// Coefficient of y in (d/dx_site): multiplies u_hat(l) by i l_site.
  TorusFunction derivative(int site) const;

  /// Sparse convolution, re-truncated to the caps.
  TorusFunction multiply(const TorusFunction& o, MassLoss* loss = nullptr) const;

  /// Subtracts the Fourier constant.
  TorusFunction zero_average_part() const;

  std::string to_json_string() const;
  static TorusFunction from_json_string(const std::string& text, const Truncation& t);

 private:
  SiteWindow window_;
  Truncation trunc_;
  CoeffMap c_;
};

/// norm_sigma as a free function, matching the module surface.
inline double norm_sigma(const TorusFunction& u, double sigma) { return u.norm(sigma); }
inline TorusFunction multiply(const TorusFunction& u, const TorusFunction& v,
                              MassLoss* loss = nullptr) {
  return u.multiply(v, loss);
}
inline TorusFunction partial_derivative(const TorusFunction& u, int site) {
  return u.derivative(site);
}
inline Complex average(const TorusFunction& u) { return u.average(); }

}  // namespace kamlat

#endif
