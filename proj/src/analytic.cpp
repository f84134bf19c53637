#include "mcfreq/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcfreq::analytic {

using constants::pi;
using std::complex;

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

/// erf(a / s) with the s -> 0 limit sign(a), so the D = 0 plug-flow case
/// degenerates to the exact indicator pulse.
double erf_scaled(double a, double s) {
    if (s == 0.0) return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    return std::erf(a / s);
}

void require_positive_frequency(double f) {
    if (!(f > 0.0)) throw std::domain_error("frequency must be > 0");
}

}  // namespace

double propagation_impulse_response(const Scenario& s, double x, double t) {
    if (!(t > 0.0)) throw std::domain_error("propagation_impulse_response requires t > 0");
    const double D = s.ligand.diffusion;
    const double u = s.flow.velocity;
    if (D == 0.0) {
        return x == u * t ? std::numeric_limits<double>::infinity() : 0.0;
    }
    const double dx = x - u * t;
    return std::exp(-dx * dx / (4.0 * D * t)) / std::sqrt(4.0 * pi * D * t);
}

double received_concentration(const Scenario& s, double t, PulseForm form) {
    if (!(t > 0.0)) throw std::domain_error("received_concentration requires t > 0");
    const double D = s.ligand.diffusion;
    const double u = s.flow.velocity;
    const double l = s.geometry.receiver_position;
    const double Tp = s.input.width;
    const double Cm = s.input.amplitude;
    const double spread = 2.0 * std::sqrt(D * t);
    if (form == PulseForm::paper) {
        return 0.5 * Cm * (erf_scaled(t * u - l + Tp * u, spread) - erf_scaled(t * u - l, spread));
    }
    return 0.5 * Cm * (erf_scaled(t * u - l, spread) - erf_scaled((t - Tp) * u - l, spread));
}

TimeSeries received_concentration_series(const Scenario& s, double dt, std::size_t n,
                                         PulseForm form) {
    if (!(dt > 0.0)) throw std::domain_error("dt must be > 0");
    TimeSeries ts;
    ts.t0 = 0.0;
    ts.dt = dt;
    ts.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        ts.values[i] = t > 0.0 ? received_concentration(s, t, form) : 0.0;
    }
    return ts;
}

TransferEvaluation propagation_transfer(const Scenario& s, const FrequencyGrid& grid) {
    const double D = s.ligand.diffusion;
    const double u = s.flow.velocity;
    const double xr = s.geometry.receiver_position;
    const double f_valid = s.validity_frequency();

    TransferEvaluation out;
    out.spectrum.f_start = grid.f_start;
    out.spectrum.f_step = grid.f_step;
    out.spectrum.values.resize(grid.n);
    out.series_valid.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double f = grid.frequency(i);
        if (f < 0.0) throw std::domain_error("propagation_transfer requires f >= 0");
        const double w = 2.0 * pi * f;
        out.spectrum.values[i] = std::exp(complex<double>(-w * w * D / (u * u * u) * xr,
                                                          -w / u * xr));
        out.series_valid[i] = f < f_valid;
    }
    return out;
}

ComplexSpectrum rect_pulse_spectrum(const PulseInput& input, const FrequencyGrid& grid) {
    ComplexSpectrum out;
    out.f_start = grid.f_start;
    out.f_step = grid.f_step;
    out.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double f = grid.frequency(i);
        const double mag = input.amplitude * input.width * sinc(f * input.width);
        out.values[i] = mag * std::exp(complex<double>(0.0, -pi * f * input.width));
    }
    return out;
}

TransferEvaluation received_spectrum(const Scenario& s, const FrequencyGrid& grid) {
    TransferEvaluation hp = propagation_transfer(s, grid);
    const ComplexSpectrum in = rect_pulse_spectrum(s.input, grid);
    for (std::size_t i = 0; i < hp.spectrum.size(); ++i) hp.spectrum.values[i] *= in.values[i];
    return hp;
}

TimeSeries solve_bound_ode(const Scenario& s, const TimeSeries& drive, BindingModel model) {
    for (double v : drive.values)
        if (v < 0.0) throw std::domain_error("bound-receptor ODE drive must be non-negative");
    if (!(drive.dt > 0.0)) throw std::domain_error("drive dt must be > 0");

    const double kp = s.ligand.binding_rate;
    const double km = s.ligand.unbinding_rate;
    const double Nr = s.receptors.count;
    const bool nonlinear = model == BindingModel::nonlinear;
    const double h = drive.dt;

    auto rate = [&](double y, double g) {
        return nonlinear ? kp * (Nr - y) * g - km * y : kp * Nr * g - km * y;
    };

    TimeSeries out;
    out.t0 = drive.t0;
    out.dt = h;
    out.values.assign(drive.size(), 0.0);
    for (std::size_t n = 0; n + 1 < drive.size(); ++n) {
        const double g0 = drive.values[n];
        const double g1 = drive.values[n + 1];
        const double gm = 0.5 * (g0 + g1);
        const double y = out.values[n];
        const double k1 = rate(y, g0);
        const double k2 = rate(y + 0.5 * h * k1, gm);
        const double k3 = rate(y + 0.5 * h * k2, gm);
        const double k4 = rate(y + h * k3, g1);
        out.values[n + 1] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

ComplexSpectrum lr_transfer(const Scenario& s, const FrequencyGrid& grid) {
    const double gain = s.ligand.binding_rate * s.receptors.count;
    const double km = s.ligand.unbinding_rate;
    ComplexSpectrum out;
    out.f_start = grid.f_start;
    out.f_step = grid.f_step;
    out.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        out.values[i] = gain / complex<double>(km, 2.0 * pi * grid.frequency(i));
    }
    return out;
}

TransferEvaluation bound_spectrum(const Scenario& s, const FrequencyGrid& grid) {
    TransferEvaluation phir = received_spectrum(s, grid);
    const ComplexSpectrum hlr = lr_transfer(s, grid);
    for (std::size_t i = 0; i < phir.spectrum.size(); ++i)
        phir.spectrum.values[i] *= hlr.values[i];
    return phir;
}

std::complex<double> cpe_impedance(const CpeParams& p, double f) {
    require_positive_frequency(f);
    const double mag = 1.0 / (p.admittance * std::pow(2.0 * pi * f, p.exponent));
    return std::polar(mag, -p.exponent * pi / 2.0);
}

std::complex<double> cpe_capacitance(const CpeParams& p, double f) {
    if (p.exponent < 1.0) require_positive_frequency(f);
    if (p.exponent == 1.0) return {p.admittance, 0.0};
    const double mag = p.admittance / std::pow(2.0 * pi * f, 1.0 - p.exponent);
    return std::polar(mag, (p.exponent - 1.0) * pi / 2.0);
}

CpeParams cpe_absolute(const CpeParams& p, const BioFetParams& b) {
    if (!p.per_area) return p;
    CpeParams abs = p;
    abs.admittance = p.admittance * b.graphene_width * b.graphene_length;
    abs.per_area = false;
    return abs;
}

double debye_length(const ElectrolyteMedium& m) {
    using namespace constants;
    const double eps = m.relative_permittivity * vacuum_permittivity;
    return std::sqrt(eps * boltzmann * m.temperature /
                     (2.0 * avogadro * elementary_charge * elementary_charge *
                      m.ionic_concentration));
}

EffectiveCharge effective_charge(const LigandSpecies& lig, const ReceptorPopulation& rec,
                                 const ElectrolyteMedium& m) {
    const double q_eff =
        constants::elementary_charge * std::exp(-rec.receptor_length / debye_length(m));
    return {q_eff, q_eff * lig.electrons_per_ligand};
}

std::complex<double> intrinsic_transconductance(const BioFetParams& b, double f) {
    require_positive_frequency(f);
    // Per-area interface capacitance; matches the usual FET g_m formula.
    const CpeParams ge_area =
        b.cpe_ge.per_area
            ? b.cpe_ge
            : CpeParams{b.cpe_ge.admittance / (b.graphene_width * b.graphene_length),
                        b.cpe_ge.exponent, true};
    const double sign = b.regime == ConductionRegime::electron ? 1.0 : -1.0;
    const double coeff = sign * b.drain_source_voltage *
                         (b.graphene_width / b.graphene_length) * b.mobility;
    return coeff * cpe_capacitance(ge_area, f);
}

std::complex<double> effective_transconductance(const BioFetParams& b, double f) {
    require_positive_frequency(f);
    const CpeParams ge = cpe_absolute(b.cpe_ge, b);
    const CpeParams par = cpe_absolute(b.cpe_par, b);
    return 0.5 * (1.0 / cpe_impedance(ge, f) + 1.0 / cpe_impedance(par, f));
}

std::complex<double> transconductance(const BioFetParams& b, double f) {
    return intrinsic_transconductance(b, f) + effective_transconductance(b, f);
}

std::complex<double> equivalent_capacitance(const BioFetParams& b, double f) {
    require_positive_frequency(f);
    const complex<double> c_ge = cpe_capacitance(cpe_absolute(b.cpe_ge, b), f);
    const complex<double> c_par = cpe_capacitance(cpe_absolute(b.cpe_par, b), f);
    const complex<double> c_le = cpe_capacitance(cpe_absolute(b.cpe_le, b), f);
    return 1.0 / (1.0 / (c_le + c_ge + c_par) + 1.0 / (c_ge + c_par));
}

std::complex<double> interface_potential(const Scenario& s, double f) {
    const EffectiveCharge q = effective_charge(s.ligand, s.receptors, s.medium);
    return q.per_ligand / equivalent_capacitance(s.biofet, f);
}

ComplexSpectrum transducer_transfer(const Scenario& s, const FrequencyGrid& grid) {
    ComplexSpectrum out;
    out.f_start = grid.f_start;
    out.f_step = grid.f_step;
    out.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double f = grid.frequency(i);
        out.values[i] = interface_potential(s, f) * transconductance(s.biofet, f);
    }
    return out;
}

TransferEvaluation end_to_end_transfer(const Scenario& s, const FrequencyGrid& grid) {
    TransferEvaluation h = propagation_transfer(s, grid);
    const ComplexSpectrum hlr = lr_transfer(s, grid);
    const ComplexSpectrum ht = transducer_transfer(s, grid);
    for (std::size_t i = 0; i < h.spectrum.size(); ++i)
        h.spectrum.values[i] *= hlr.values[i] * ht.values[i];
    return h;
}

TransferEvaluation output_current_spectrum(const Scenario& s, const FrequencyGrid& grid) {
    TransferEvaluation h = end_to_end_transfer(s, grid);
    const ComplexSpectrum in = rect_pulse_spectrum(s.input, grid);
    for (std::size_t i = 0; i < h.spectrum.size(); ++i) h.spectrum.values[i] *= in.values[i];
    return h;
}

}  // namespace mcfreq::analytic
