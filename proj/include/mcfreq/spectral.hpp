#ifndef MCFREQ_SPECTRAL_HPP
#define MCFREQ_SPECTRAL_HPP

#include <cstddef>

#include "mcfreq/spectrum.hpp"

namespace mcfreq::spectral {

/// Forward DFT scaled to approximate the continuous transform:
///   X(f_k) = dt * sum_n x[n] exp(-j 2 pi f_k (t0 + n dt)),  f_k = k / (N dt),
/// k = 0..N-1 (real signals: bins above N/2 mirror the negative axis).
/// Rectangular window. Runs the OpenMP kernel when built with OpenMP.
ComplexSpectrum dft_spectrum(const TimeSeries& ts);

/// Plain reference implementation (direct sin/cos accumulation, no phase
/// recurrence, no threading); kept for testing and benchmarking the kernel.
ComplexSpectrum dft_spectrum_serial(const TimeSeries& ts);

/// First `count` bins of a spectrum (e.g. to stay below Nyquist).
ComplexSpectrum truncate_bins(const ComplexSpectrum& spec, std::size_t count);

/// Smallest frequency f_c whose band (0, f_c] holds the fraction `eta` of the
/// spectrum energy (trapezoid rule on the grid, linear interpolation between
/// the bracketing bins). Requires the tail to have decayed:
/// |X(f_end)|^2 <= 1e-6 max|X|^2, else throws ("extend f_max"); the check can
/// be disabled for deliberately band-unlimited inputs.
double cutoff_frequency(const ComplexSpectrum& spec, double eta, bool enforce_decay = true);

/// Nyquist rate for the band (0, f_c]: the minimum admissible 2 f_c.
double sampling_frequency(double f_c);

struct SpectrumComparison {
    double band_lo = 0.0;
    double band_hi = 0.0;
    double reference_floor = 0.0;   // bins with |ref| < floor * max|ref| are excluded
    double max_rel_error = 0.0;     // on magnitudes, relative to the reference
    double rms_rel_error = 0.0;
    std::size_t included_bins = 0;
    std::size_t excluded_bins = 0;
};

/// Magnitude comparison of `candidate` against `reference` over (band_lo,
/// band_hi]. Grids must agree (start and step). Bins whose reference
/// magnitude falls below floor * max|reference| (max over the band) are
/// excluded and counted.
SpectrumComparison compare_spectra(const ComplexSpectrum& candidate,
                                   const ComplexSpectrum& reference, double band_lo,
                                   double band_hi, double floor);

}  // namespace mcfreq::spectral

#endif
