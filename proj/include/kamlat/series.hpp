#ifndef KAMLAT_SERIES_HPP
#define KAMLAT_SERIES_HPP

#include <vector>

namespace kamlat {

/// Reversion of y = a1 x + a2 x^2 + ... (a[0] = a1 != 0): returns b with
/// x = b1 y + b2 y^2 + ... to the given order. b1 = 1/a1, b2 = -a2/a1^3, ...
std::vector<double> revert_series(const std::vector<double>& a, int order);

/// Evaluate sum_j c[j] x^{j+1} (series with no constant term).
double eval_series(const std::vector<double>& c, double x);

/// Least-squares polynomial fit y ~ sum_{j=1..degree} c_j x^j through the
/// origin, with column equilibration for conditioning.
std::vector<double> fit_series_through_origin(const std::vector<double>& x,
                                              const std::vector<double>& y, int degree);

}  // namespace kamlat

#endif
