#ifndef MCFREQ_SPECTRUM_HPP
#define MCFREQ_SPECTRUM_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace mcfreq {

/// Uniformly sampled real-valued signal. `t0` is the time of the first sample.
struct TimeSeries {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double duration() const { return static_cast<double>(values.size()) * dt; }
};

/// Uniform frequency grid, f_i = f_start + i * f_step.
struct FrequencyGrid {
    double f_start = 0.0;
    double f_step = 0.0;
    std::size_t n = 0;

    double frequency(std::size_t i) const { return f_start + static_cast<double>(i) * f_step; }
    double f_end() const { return frequency(n == 0 ? 0 : n - 1); }

    /// Default analysis grid: `n` points spanning (0, f_max], no DC bin.
    static FrequencyGrid spanning(double f_max = 20e3, std::size_t n = 4096) {
        FrequencyGrid g;
        g.f_step = f_max / static_cast<double>(n);
        g.f_start = g.f_step;
        g.n = n;
        return g;
    }
};

/// Complex one-sided spectrum on a uniform grid. Fourier convention throughout
/// the toolkit: X(f) = integral x(t) exp(-j 2 pi f t) dt.
struct ComplexSpectrum {
    double f_start = 0.0;
    double f_step = 0.0;
    std::vector<std::complex<double>> values;

    std::size_t size() const { return values.size(); }
    double frequency(std::size_t i) const { return f_start + static_cast<double>(i) * f_step; }
    FrequencyGrid grid() const { return FrequencyGrid{f_start, f_step, values.size()}; }
};

/// Spectrum together with the per-bin series-convergence annotation of the
/// propagation model (true where f < f_valid of the scenario).
struct TransferEvaluation {
    ComplexSpectrum spectrum;
    std::vector<bool> series_valid;
};

}  // namespace mcfreq

#endif
