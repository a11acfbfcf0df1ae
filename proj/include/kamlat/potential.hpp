#ifndef KAMLAT_POTENTIAL_HPP
#define KAMLAT_POTENTIAL_HPP

#include <string>
#include <vector>

namespace kamlat {

/// One-degree-of-freedom potential with first and second derivative closures.
/// Monomial: V = x^{2p}. Quartic: V = 2x^2 + x^4. Series: V = sum c_k x^k
/// (coefficients from power 1, no constant term).
class Potential {
 public:
  enum class Kind { Monomial, Quartic, Series };

  static Potential monomial(int p, double strip = 1.0);
  static Potential quartic(double strip = 1.0);
  static Potential series(std::vector<double> coeffs_from_power1, double strip = 1.0);
  /// z^k couplings, e.g. cubic(): W(z) = z^3.
  static Potential power(int k, double scale = 1.0, double strip = 1.0);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  Kind kind() const { return kind_; }
  int monomial_p() const { return p_; }
  double strip() const { return strip_; }
  const std::vector<double>& coeffs() const { return c_; }

  bool is_even() const;
  std::string descriptor() const;

 private:
  Kind kind_ = Kind::Quartic;
  int p_ = 1;
  double strip_ = 1.0;           // analyticity strip half-width (reported only)
  std::vector<double> c_;        // series coefficients from power 1
};

}  // namespace kamlat

#endif
