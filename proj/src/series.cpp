#include "kamlat/series.hpp"

#include <cmath>
#include <stdexcept>

namespace kamlat {

std::vector<double> revert_series(const std::vector<double>& a, int order) {
  if (a.empty() || a[0] == 0.0)
    throw std::invalid_argument("revert_series: leading coefficient must be nonzero");
  const int n = order;
  // powers[k][j] = coefficient of x^{j+1} in A(x)^{k+1}, truncated at order n
  std::vector<std::vector<double>> powers(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int j = 0; j < n && j < static_cast<int>(a.size()); ++j)
    powers[0][static_cast<size_t>(j)] = a[static_cast<size_t>(j)];
  for (int k = 1; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i - 1; ++j) {
        const int rem = i - 1 - j;  // x^{j+1} * x^{rem+1} = x^{i+1}
        if (rem >= 0 && rem < static_cast<int>(a.size()))
          s += powers[static_cast<size_t>(k - 1)][static_cast<size_t>(j)] *
               a[static_cast<size_t>(rem)];
      }
      powers[static_cast<size_t>(k)][static_cast<size_t>(i)] = s;
    }
  std::vector<double> b(static_cast<size_t>(n), 0.0);
  for (int m = 0; m < n; ++m) {
    double s = (m == 0) ? 1.0 : 0.0;
    for (int k = 0; k < m; ++k)
      s -= b[static_cast<size_t>(k)] * powers[static_cast<size_t>(k)][static_cast<size_t>(m)];
    b[static_cast<size_t>(m)] = s / powers[static_cast<size_t>(m)][static_cast<size_t>(m)];
  }
  return b;
}

double eval_series(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (size_t j = c.size(); j-- > 0;) s = s * x + c[j];
  return s * x;
}

std::vector<double> fit_series_through_origin(const std::vector<double>& x,
                                              const std::vector<double>& y, int degree) {
  const size_t m = x.size();
  const size_t n = static_cast<size_t>(degree);
  if (y.size() != m || m < n) throw std::invalid_argument("fit_series: bad sizes");
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::fabs(v));
  // columns s^j with s = x / xmax, QR by modified Gram-Schmidt
  std::vector<std::vector<double>> q(n, std::vector<double>(m));
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < m; ++i) q[j][i] = std::pow(x[i] / xmax, static_cast<double>(j + 1));
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  for (size_t j = 0; j < n; ++j) {
    for (size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (size_t i = 0; i < m; ++i) dot += q[k][i] * q[j][i];
      r[k][j] = dot;
      for (size_t i = 0; i < m; ++i) q[j][i] -= dot * q[k][i];
    }
    double nrm = 0.0;
    for (size_t i = 0; i < m; ++i) nrm += q[j][i] * q[j][i];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw std::invalid_argument("fit_series: rank deficient");
    r[j][j] = nrm;
    for (size_t i = 0; i < m; ++i) q[j][i] /= nrm;
  }
  std::vector<double> c(n, 0.0);
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < m; ++i) c[j] += q[j][i] * y[i];
  // back-substitute R b = Q^T y
  std::vector<double> b(n, 0.0);
  for (size_t j = n; j-- > 0;) {
    double s = c[j];
    for (size_t k = j + 1; k < n; ++k) s -= r[j][k] * b[k];
    b[j] = s / r[j][j];
  }
  for (size_t j = 0; j < n; ++j) b[j] /= std::pow(xmax, static_cast<double>(j + 1));
  return b;
}

}  // namespace kamlat
