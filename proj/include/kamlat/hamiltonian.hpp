#ifndef KAMLAT_HAMILTONIAN_HPP
#define KAMLAT_HAMILTONIAN_HPP

#include <map>
#include <vector>

#include "kamlat/torus_function.hpp"
#include "kamlat/window.hpp"

namespace kamlat {

/// Dense symmetric matrix over window sites, used for the averaged Hessian.
struct SiteMatrix {
  SiteWindow window;
  std::vector<double> data;  // row-major, size n*n

  explicit SiteMatrix(const SiteWindow& w)
      : window(w), data(static_cast<size_t>(w.size()) * static_cast<size_t>(w.size()), 0.0) {}
  double& at(int i, int j) {
    return data[static_cast<size_t>(window.index_of(i)) * window.size() +
                static_cast<size_t>(window.index_of(j))];
  }
  double at(int i, int j) const {
    return data[static_cast<size_t>(window.index_of(i)) * window.size() +
                static_cast<size_t>(window.index_of(j))];
  }
};

/// Solve A x = rhs by LU with partial pivoting; reports an estimate of the
/// 1-norm condition number. Throws DegenerateHessian on singular/ill matrices.
std::vector<double> solve_dense(const SiteMatrix& a, std::vector<double> rhs,
                                double cond_threshold, double* cond_out = nullptr);

/// Hamiltonian stored Fourier-in-x, polynomial-in-y up to total degree 3:
/// H(x, y) = sum_m h_m(x) y^m over y-multi-degrees |m|_1 <= 3.
class FourierTaylorHamiltonian {
 public:
  using BlockMap = std::map<MultiIndex, TorusFunction>;  // m >= 0 componentwise

  FourierTaylorHamiltonian() = default;
  FourierTaylorHamiltonian(const SiteWindow& w, const Truncation& t, double sigma,
                           double y_radius, double varsigma = 2.0)
      : window_(w), trunc_(t), sigma_(sigma), y_radius_(y_radius), varsigma_(varsigma) {}

  const SiteWindow& window() const { return window_; }
  const Truncation& truncation() const { return trunc_; }
  double sigma() const { return sigma_; }
  void set_sigma(double s) { sigma_ = s; }
  double y_radius() const { return y_radius_; }
  double varsigma() const { return varsigma_; }

  const BlockMap& blocks() const { return blocks_; }
  bool has_block(const MultiIndex& m) const { return blocks_.count(m) > 0; }
  const TorusFunction& block(const MultiIndex& m) const;  // zero function if absent
  void set_block(const MultiIndex& m, TorusFunction f);
  void add_block(const MultiIndex& m, const TorusFunction& f, MassLoss* loss = nullptr);

  TorusFunction value_block() const { return block(MultiIndex{}); }       // H(x, 0)
  TorusFunction gradient_block(int site) const;                            // H_y(x,0)_j
  /// H_yy(x, 0)_{ij} from the degree-2 blocks (2 h_{2e_i} on the diagonal).
  TorusFunction hessian_block(int i, int j) const;

  /// Averaged Hessian <Q> as a dense real matrix (imaginary parts checked).
  SiteMatrix averaged_hessian() const;

  /// Evaluate H(x, y) at a constant complex action vector -> TorusFunction in x.
  TorusFunction evaluate_at_y(const std::vector<Complex>& y) const;
  /// Gradient component d/dy_j at constant y.
  TorusFunction gradient_at_y(int site, const std::vector<Complex>& y) const;

  /// sup-entry weighted norm of H_yy over the polydisc ||y||*_varsigma < r,
  /// including the y-linear cubic contribution.
  double hessian_sup_norm(double sigma, double r) const;

  bool is_real_symmetric(double tol = 1e-12) const;
  /// max over (i,j) of ||Q_ij - conj-sym Q_ji|| / scale after composition.
  double hessian_hermitian_defect(double sigma) const;

  void prune(MassLoss* loss = nullptr);

 private:
  SiteWindow window_;
  Truncation trunc_;
  double sigma_ = 0.5;
  double y_radius_ = 0.25;
  double varsigma_ = 2.0;
  BlockMap blocks_;
};

struct ErrorPair {
  double e_value = 0.0;  // || H(x,0) - avg ||_sigma
  double e_freq = 0.0;   // max_j || H_y(x,0)_j - omega_j ||_sigma
  double max() const { return e_value > e_freq ? e_value : e_freq; }
};

ErrorPair measure_error(const FourierTaylorHamiltonian& h, const FrequencyVector& omega,
                        double sigma);

/// sup over ||y||*_varsigma <= r of |y^m| (closed form).
double y_monomial_sup(const MultiIndex& m, double r, double varsigma, const SiteWindow& w);

struct TaylorCheckReport {
  double lhs1 = 0, rhs1 = 0;  // value remainder vs M ||y||^2
  double lhs2 = 0, rhs2 = 0;  // gradient difference vs M ||y||
  double lhs3 = 0, rhs3 = 0;  // gradient remainder vs M ||y||^2 / (r - ||y||)
  double m_norm = 0;
  double y_norm = 0;
  bool all_hold() const { return lhs1 <= rhs1 && lhs2 <= rhs2 && lhs3 <= rhs3; }
};

/// Numerically verifies the three Taylor inequalities for the stored H at a
/// constant action vector y with ||y||*_varsigma < r.
TaylorCheckReport taylor_remainder_checks(const FourierTaylorHamiltonian& h,
                                          const std::vector<Complex>& y, double sigma);

}  // namespace kamlat

#endif
