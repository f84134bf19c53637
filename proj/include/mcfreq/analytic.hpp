#ifndef MCFREQ_ANALYTIC_HPP
#define MCFREQ_ANALYTIC_HPP

#include <complex>

#include "mcfreq/scenario.hpp"
#include "mcfreq/spectrum.hpp"

namespace mcfreq::analytic {

/// Which time origin the pulse response uses. `causal` places the release
/// during [0, T_p] (matches the simulator's injection); `paper` reproduces
/// the literal erf expression, which is the same pulse advanced by T_p.
enum class PulseForm { causal, paper };

enum class BindingModel { linear, nonlinear };

// --- propagation channel ---------------------------------------------------

/// Green's function of 1D advection-diffusion observed at x, time t > 0:
/// exp(-(x - u t)^2 / (4 D t)) / sqrt(4 pi D t)   [1/m].
double propagation_impulse_response(const Scenario& s, double x, double t);

/// Received concentration at the receiver for the rectangular input pulse
/// [1/m^3]. Throws std::domain_error for t <= 0.
double received_concentration(const Scenario& s, double t, PulseForm form = PulseForm::causal);

/// Samples received_concentration on a uniform grid starting at t0 = 0
/// (the t = 0 sample is the causal limit, zero).
TimeSeries received_concentration_series(const Scenario& s, double dt, std::size_t n,
                                         PulseForm form = PulseForm::causal);

/// Propagation transfer function
/// H_p(f) = exp(-((2 pi f)^2 D / u^3 + j 2 pi f / u) x_r),
/// annotated with the series-convergence mask (f < f_valid).
TransferEvaluation propagation_transfer(const Scenario& s, const FrequencyGrid& grid);

/// Spectrum of the rectangular pulse: C_m T_p sinc(f T_p) e^{-j pi f T_p}
/// (the phase factor places the pulse on [0, T_p]).
ComplexSpectrum rect_pulse_spectrum(const PulseInput& input, const FrequencyGrid& grid);

/// Received spectrum Phi_r = H_p * Phi_in.
TransferEvaluation received_spectrum(const Scenario& s, const FrequencyGrid& grid);

// --- ligand-receptor kinetics ----------------------------------------------

/// Integrates the bound-receptor count driven by a sampled concentration:
///   linear:    dNb/dt = k+ N_r phi(t) - k- Nb
///   nonlinear: dNb/dt = k+ (N_r - Nb) phi(t) - k- Nb
/// Classical RK4 at the drive sample rate; midpoint drive values by linear
/// interpolation. Nb(0) = 0. Throws std::domain_error on negative drive.
TimeSeries solve_bound_ode(const Scenario& s, const TimeSeries& drive, BindingModel model);

/// One-pole low-pass of the binding reaction: H_lr = k+ N_r / (k- + j 2 pi f),
/// corner frequency k- / (2 pi).
ComplexSpectrum lr_transfer(const Scenario& s, const FrequencyGrid& grid);

/// Bound-receptor spectrum N_b(f) = H_lr * Phi_r.
TransferEvaluation bound_spectrum(const Scenario& s, const FrequencyGrid& grid);

// --- bioFET small-signal chain ----------------------------------------------

/// CPE impedance Z = 1 / (Q0 (j 2 pi f)^alpha). Throws for f <= 0 (the DC
/// impedance diverges for alpha > 0).
std::complex<double> cpe_impedance(const CpeParams& p, double f);

/// CPE equivalent capacitance Q0 (2 pi f)^(alpha-1) e^{j pi (alpha-1)/2};
/// reduces to the real constant Q0 for alpha = 1.
std::complex<double> cpe_capacitance(const CpeParams& p, double f);

/// Absolute admittance/capacitance scale: per-area CPEs are multiplied by
/// the graphene area w_g l_g exactly once.
CpeParams cpe_absolute(const CpeParams& p, const BioFetParams& b);

/// Debye screening length sqrt(eps_M k_B T / (2 N_A q^2 c_ion)) [m].
double debye_length(const ElectrolyteMedium& m);

struct EffectiveCharge {
    double per_electron;  // q_eff = q exp(-r / lambda_D) [C]
    double per_ligand;    // Q_m = q_eff N_e- [C]
};

EffectiveCharge effective_charge(const LigandSpecies& lig, const ReceptorPopulation& rec,
                                 const ElectrolyteMedium& m);

/// Field-effect part of the transconductance (signed by conduction regime):
/// +/- V_ds (w_g/l_g) mu_g C_cpe_ge(f), with the per-area capacitance.
std::complex<double> intrinsic_transconductance(const BioFetParams& b, double f);

/// Capacitive-current part: (1/2)(Z_ge^-1 + Z_par^-1) with absolute CPEs.
std::complex<double> effective_transconductance(const BioFetParams& b, double f);

/// G_m(f) = intrinsic + effective. Throws for f <= 0.
std::complex<double> transconductance(const BioFetParams& b, double f);

/// Equivalent transducer capacitance,
/// C_eq = [1/(C_le + C_ge + C_par) + 1/(C_ge + C_par)]^-1 (all absolute).
std::complex<double> equivalent_capacitance(const BioFetParams& b, double f);

/// Interface potential of a single bound ligand V_int = Q_m / C_eq [V].
std::complex<double> interface_potential(const Scenario& s, double f);

/// Transducer transfer function H_t(f) = V_int(f) G_m(f) [A per bound ligand
/// per unit N_b(f)]. Grid must exclude DC.
ComplexSpectrum transducer_transfer(const Scenario& s, const FrequencyGrid& grid);

// --- end-to-end --------------------------------------------------------------

/// H(f) = H_p H_lr H_t; validity mask from the propagation stage.
TransferEvaluation end_to_end_transfer(const Scenario& s, const FrequencyGrid& grid);

/// Output current spectrum I_m(f) = H(f) Phi_in(f) [A s].
TransferEvaluation output_current_spectrum(const Scenario& s, const FrequencyGrid& grid);

}  // namespace mcfreq::analytic

#endif
