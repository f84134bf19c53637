#ifndef MCFREQ_SCENARIO_HPP
#define MCFREQ_SCENARIO_HPP

#include <string>
#include <vector>

#include "mcfreq/constants.hpp"

namespace mcfreq {

/// Rectangular microchannel. All lengths in meters.
struct ChannelGeometry {
    double height = 0.0;             // h_ch, z extent
    double width = 0.0;              // w_ch, y extent
    double length = 0.0;             // l_ch, x extent (inlet at x = 0)
    double receiver_position = 0.0;  // x_r, transmitter-receiver distance
};

/// Uniform unidirectional flow along +x [m/s].
struct FlowField {
    double velocity = 0.0;
};

struct LigandSpecies {
    double diffusion = 0.0;             // D [m^2/s]
    double electrons_per_ligand = 0.0;  // N_e-
    double binding_rate = 0.0;          // k+ [m^3/s]
    double unbinding_rate = 0.0;        // k- [1/s]
};

/// Surface receptors on the channel floor (z = 0). The patch is an
/// axis-aligned rectangle, centered on the channel width.
struct ReceptorPopulation {
    double count = 0.0;            // N_r
    double receptor_length = 0.0;  // r, sets the charge screening distance [m]
    double patch_origin = 0.0;     // x of the upstream patch edge [m]
    double patch_extent_x = 0.0;   // [m]
    double patch_extent_y = 0.0;   // [m]
};

struct ElectrolyteMedium {
    double ionic_concentration = 0.0;   // c_ion [mol/m^3]
    double relative_permittivity = 0.0; // eps_M / eps_0
    double temperature = 0.0;           // T [K]
};

/// Constant phase element, Z = 1 / (Q0 (j 2 pi f)^alpha). When `per_area` is
/// set, `admittance` is per unit area [F s^(alpha-1) / m^2] and is converted
/// to absolute by the graphene area exactly once, where needed.
struct CpeParams {
    double admittance = 0.0;  // Q0
    double exponent = 0.0;    // alpha in [0, 1]
    bool per_area = false;
};

enum class ConductionRegime { hole, electron };

struct BioFetParams {
    double graphene_width = 0.0;        // w_g [m]
    double graphene_length = 0.0;       // l_g [m]
    double mobility = 0.0;              // mu_g [m^2/(V s)]
    double drain_source_voltage = 0.0;  // V_ds [V]
    ConductionRegime regime = ConductionRegime::hole;
    CpeParams cpe_ge;   // graphene-electrolyte double layer
    CpeParams cpe_par;  // parasitic contact coupling
    CpeParams cpe_le;   // ligand-electrolyte layer
};

/// Rectangular concentration pulse released at the inlet during [0, T_p].
struct PulseInput {
    double amplitude = 0.0;  // C_m [1/m^3]
    double width = 0.0;      // T_p [s]
};

/// Full parameter set; the single source of truth for every run.
struct Scenario {
    ChannelGeometry geometry;
    FlowField flow;
    LigandSpecies ligand;
    ReceptorPopulation receptors;
    ElectrolyteMedium medium;
    BioFetParams biofet;
    PulseInput input;
    double sim_timestep = 0.0;     // [s]
    double sensing_slab = 0.0;     // L_s override, 0 = auto [m]

    /// Pe = u x_r / D; convection-dominated transport needs Pe >> 1.
    double peclet() const;

    /// f_valid = u^2 / (8 pi D): the series expansion behind the propagation
    /// transfer function converges only for |8 pi f D / u^2| < 1.
    double validity_frequency() const;

    /// tau = x_r / u.
    double propagation_delay() const;

    /// Sensing-slab length: override, or 2 u dt clamped to [0.1 um, 1 um].
    double sensing_slab_length() const;
};

/// The default parameter set used across the documentation and tests.
Scenario table_default_scenario();

enum class CheckStatus { pass, warn, fail };

struct ValidationItem {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct ValidationReport {
    double peclet = 0.0;
    double validity_frequency = 0.0;
    double linearization_margin = 0.0;  // k+ C_m / k-
    std::vector<ValidationItem> items;

    bool passed() const;
    bool has_warnings() const;
    std::string summary() const;
};

/// Checks every scenario invariant; pure (same input, same report).
ValidationReport validate_scenario(const Scenario& s);

}  // namespace mcfreq

#endif
