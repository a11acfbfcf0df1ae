#include "kamlat/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "kamlat/errors.hpp"

namespace kamlat {

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::Config, "fft_radix2: size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl = std::polar(1.0, ang);
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& v : a) v /= static_cast<double>(n);
}

SpectralPeak dominant_frequency(const std::vector<double>& samples, double dt) {
  const size_t n = samples.size();
  if (n < 16) throw Error(ErrorKind::Config, "dominant_frequency: too few samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(n);

  size_t m = 1;
  while (m < 2 * n) m <<= 1;  // zero-pad for a finer raw grid
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  for (size_t i = 0; i < n; ++i) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                              static_cast<double>(n - 1)));
    buf[i] = (samples[i] - mean) * hann;
  }
  fft_radix2(buf);

  const size_t half = m / 2;
  size_t kbest = 1;
  double best = 0.0;
  for (size_t k = 1; k < half; ++k) {
    const double mag = std::abs(buf[k]);
    if (mag > best) {
      best = mag;
      kbest = k;
    }
  }
  // parabolic interpolation on log magnitude
  double delta = 0.0;
  if (kbest > 0 && kbest + 1 < half && best > 0.0) {
    const double la = std::log(std::max(std::abs(buf[kbest - 1]), 1e-300));
    const double lb = std::log(best);
    const double lc = std::log(std::max(std::abs(buf[kbest + 1]), 1e-300));
    const double den = la - 2.0 * lb + lc;
    if (den != 0.0) delta = 0.5 * (la - lc) / den;
    if (!(delta > -1.0 && delta < 1.0)) delta = 0.0;
  }
  SpectralPeak p;
  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(m) * dt);
  p.omega = (static_cast<double>(kbest) + delta) * bin;
  p.magnitude = best;
  p.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  return p;
}

}  // namespace kamlat
