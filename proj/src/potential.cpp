#include "kamlat/potential.hpp"

#include <cmath>
#include <sstream>

#include "kamlat/errors.hpp"

namespace kamlat {

Potential Potential::monomial(int p, double strip) {
  if (p < 1) throw Error(ErrorKind::Config, "Potential: monomial exponent p must be >= 1");
  Potential v;
  v.kind_ = Kind::Monomial;
  v.p_ = p;
  v.strip_ = strip;
  return v;
}

Potential Potential::quartic(double strip) {
  Potential v;
  v.kind_ = Kind::Quartic;
  v.strip_ = strip;
  return v;
}

Potential Potential::series(std::vector<double> coeffs, double strip) {
  if (coeffs.empty()) throw Error(ErrorKind::Config, "Potential: empty series");
  Potential v;
  v.kind_ = Kind::Series;
  v.c_ = std::move(coeffs);
  v.strip_ = strip;
  return v;
}

Potential Potential::power(int k, double scale, double strip) {
  std::vector<double> c(static_cast<size_t>(k), 0.0);
  c[static_cast<size_t>(k - 1)] = scale;
  return series(std::move(c), strip);
}

double Potential::value(double x) const {
  switch (kind_) {
    case Kind::Monomial: return std::pow(x, 2 * p_);
    case Kind::Quartic: return x * x * (2.0 + x * x);
    case Kind::Series: {
      double s = 0.0;
      for (size_t j = c_.size(); j-- > 0;) s = s * x + c_[j];
      return s * x;
    }
  }
  return 0.0;
}

double Potential::d1(double x) const {
  switch (kind_) {
    case Kind::Monomial: return 2.0 * p_ * std::pow(x, 2 * p_ - 1);
    case Kind::Quartic: return 4.0 * x + 4.0 * x * x * x;
    case Kind::Series: {
      double s = 0.0;
      for (size_t j = c_.size(); j-- > 0;) s = s * x + (static_cast<double>(j) + 1.0) * c_[j];
      return s;
    }
  }
  return 0.0;
}

double Potential::d2(double x) const {
  switch (kind_) {
    case Kind::Monomial:
      return 2.0 * p_ * (2.0 * p_ - 1.0) * std::pow(x, 2 * p_ - 2);
    case Kind::Quartic: return 4.0 + 12.0 * x * x;
    case Kind::Series: {
      double s = 0.0;
      for (size_t j = c_.size(); j-- > 1;)
        s = s * x + (static_cast<double>(j) + 1.0) * static_cast<double>(j) * c_[j];
      return s;
    }
  }
  return 0.0;
}

bool Potential::is_even() const {
  switch (kind_) {
    case Kind::Monomial:
    case Kind::Quartic: return true;
    case Kind::Series:
      for (size_t j = 0; j < c_.size(); j += 2)
        if (c_[j] != 0.0) return false;  // odd powers are c_[0], c_[2], ...
      return true;
  }
  return false;
}

std::string Potential::descriptor() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Monomial: os << "x^" << 2 * p_; break;
    case Kind::Quartic: os << "2x^2+x^4"; break;
    case Kind::Series: {
      os << "series[";
      for (size_t j = 0; j < c_.size(); ++j) os << (j ? "," : "") << c_[j];
      os << "]";
      break;
    }
  }
  return os.str();
}

}  // namespace kamlat
