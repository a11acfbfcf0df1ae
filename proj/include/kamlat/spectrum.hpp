#ifndef KAMLAT_SPECTRUM_HPP
#define KAMLAT_SPECTRUM_HPP

#include <complex>
#include <vector>

namespace kamlat {

/// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse = false);

struct SpectralPeak {
  double omega = 0.0;      // angular frequency of the dominant peak
  double magnitude = 0.0;
  double resolution = 0.0; // angular bin width 2 pi / (N dt)
};

/// Dominant spectral peak of a real signal: mean removed, Hann window,
/// zero-padded FFT, parabolic interpolation of the log-magnitude peak.
SpectralPeak dominant_frequency(const std::vector<double>& samples, double dt);

}  // namespace kamlat

#endif
