#include "mcfreq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "mcfreq/constants.hpp"

namespace mcfreq::spectral {

using constants::pi;
using std::complex;

namespace {

void require_series(const TimeSeries& ts) {
    if (ts.size() < 2) throw std::invalid_argument("dft_spectrum requires at least 2 samples");
    if (!(ts.dt > 0.0)) throw std::invalid_argument("dft_spectrum requires dt > 0");
}

/// One output bin via a phase recurrence, resynchronized every 256 terms to
/// keep the rotation error at roundoff level.
complex<double> bin_sum(const TimeSeries& ts, double f) {
    const double step = -2.0 * pi * f * ts.dt;
    const complex<double> rot{std::cos(step), std::sin(step)};
    complex<double> acc{0.0, 0.0};
    complex<double> phase{1.0, 0.0};
    const std::size_t n = ts.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & 0xFFu) == 0u) {
            const double ang = step * static_cast<double>(i);
            phase = {std::cos(ang), std::sin(ang)};
        }
        acc += ts.values[i] * phase;
        phase *= rot;
    }
    const double ang0 = -2.0 * pi * f * ts.t0;
    return acc * ts.dt * complex<double>{std::cos(ang0), std::sin(ang0)};
}

}  // namespace

ComplexSpectrum dft_spectrum(const TimeSeries& ts) {
    require_series(ts);
    const std::size_t n = ts.size();
    ComplexSpectrum out;
    out.f_start = 0.0;
    out.f_step = 1.0 / (static_cast<double>(n) * ts.dt);
    out.values.resize(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(n); ++k) {
        out.values[static_cast<std::size_t>(k)] =
            bin_sum(ts, out.f_step * static_cast<double>(k));
    }
    return out;
}

ComplexSpectrum dft_spectrum_serial(const TimeSeries& ts) {
    require_series(ts);
    const std::size_t n = ts.size();
    ComplexSpectrum out;
    out.f_start = 0.0;
    out.f_step = 1.0 / (static_cast<double>(n) * ts.dt);
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = out.f_step * static_cast<double>(k);
        complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * pi * f * ts.time(i);
            acc += ts.values[i] * complex<double>{std::cos(ang), std::sin(ang)};
        }
        out.values[k] = acc * ts.dt;
    }
    return out;
}

ComplexSpectrum truncate_bins(const ComplexSpectrum& spec, std::size_t count) {
    ComplexSpectrum out = spec;
    if (count < out.values.size()) out.values.resize(count);
    return out;
}

double cutoff_frequency(const ComplexSpectrum& spec, double eta, bool enforce_decay) {
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
    if (spec.size() < 3) throw std::invalid_argument("spectrum too short");
    if (!(spec.f_step > 0.0)) throw std::invalid_argument("f_step must be > 0");

    const std::size_t n = spec.size();
    double peak2 = 0.0;
    for (const auto& v : spec.values) peak2 = std::max(peak2, std::norm(v));
    if (peak2 == 0.0) throw std::invalid_argument("spectrum is identically zero");
    if (enforce_decay && std::norm(spec.values[n - 1]) > 1e-6 * peak2) {
        throw std::runtime_error(
            "spectrum energy has not decayed at the grid end: extend f_max");
    }

    // Cumulative trapezoid of |X|^2 over the grid.
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cum[i] = cum[i - 1] +
                 0.5 * (std::norm(spec.values[i]) + std::norm(spec.values[i - 1])) * spec.f_step;
    }
    const double target = eta * cum.back();
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const std::size_t i = static_cast<std::size_t>(it - cum.begin());
    if (i == 0) return spec.frequency(0);
    const double c0 = cum[i - 1];
    const double c1 = cum[i];
    const double frac = c1 > c0 ? (target - c0) / (c1 - c0) : 1.0;
    return spec.frequency(i - 1) + frac * spec.f_step;
}

double sampling_frequency(double f_c) {
    if (!(f_c > 0.0)) throw std::domain_error("cutoff frequency must be > 0");
    return 2.0 * f_c;
}

SpectrumComparison compare_spectra(const ComplexSpectrum& candidate,
                                   const ComplexSpectrum& reference, double band_lo,
                                   double band_hi, double floor) {
    const double tol = 1e-9 * std::max(std::abs(candidate.f_step), std::abs(reference.f_step));
    if (std::abs(candidate.f_start - reference.f_start) > tol ||
        std::abs(candidate.f_step - reference.f_step) > tol) {
        throw std::invalid_argument("compare_spectra: frequency grids differ");
    }
    const std::size_t n = std::min(candidate.size(), reference.size());

    double ref_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = reference.frequency(i);
        if (f > band_lo && f <= band_hi) ref_max = std::max(ref_max, std::abs(reference.values[i]));
    }

    SpectrumComparison cmp;
    cmp.band_lo = band_lo;
    cmp.band_hi = band_hi;
    cmp.reference_floor = floor;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = reference.frequency(i);
        if (!(f > band_lo && f <= band_hi)) continue;
        const double ref = std::abs(reference.values[i]);
        if (ref == 0.0 || ref < floor * ref_max) {
            ++cmp.excluded_bins;
            continue;
        }
        const double rel = std::abs(std::abs(candidate.values[i]) - ref) / ref;
        cmp.max_rel_error = std::max(cmp.max_rel_error, rel);
        sum_sq += rel * rel;
        ++cmp.included_bins;
    }
    if (cmp.included_bins > 0)
        cmp.rms_rel_error = std::sqrt(sum_sq / static_cast<double>(cmp.included_bins));
    return cmp;
}

}  // namespace mcfreq::spectral
