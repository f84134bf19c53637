#include "mcfreq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mcfreq {

double Scenario::peclet() const {
    if (ligand.diffusion == 0.0) return std::numeric_limits<double>::infinity();
    return flow.velocity * geometry.receiver_position / ligand.diffusion;
}

double Scenario::validity_frequency() const {
    if (ligand.diffusion == 0.0) return std::numeric_limits<double>::infinity();
    return flow.velocity * flow.velocity / (8.0 * constants::pi * ligand.diffusion);
}

double Scenario::propagation_delay() const {
    return geometry.receiver_position / flow.velocity;
}

double Scenario::sensing_slab_length() const {
    if (sensing_slab > 0.0) return sensing_slab;
    const double ls = 2.0 * flow.velocity * sim_timestep;
    return std::clamp(ls, 0.1e-6, 1.0e-6);
}

Scenario table_default_scenario() {
    Scenario s;
    s.geometry.height = 3e-6;
    s.geometry.width = 3e-6;
    s.geometry.length = 200e-6;
    s.geometry.receiver_position = 100e-6;
    s.flow.velocity = 2e-3;
    s.ligand.diffusion = 1e-11;
    s.ligand.electrons_per_ligand = 3.0;
    s.ligand.binding_rate = 1e-18;
    s.ligand.unbinding_rate = 500.0;
    s.receptors.count = 500.0;
    s.receptors.receptor_length = 2e-9;
    s.biofet.graphene_width = 1e-6;
    s.biofet.graphene_length = 3e-6;
    s.biofet.mobility = 0.2;  // 2e3 cm^2/(V s)
    s.biofet.drain_source_voltage = 0.1;
    s.biofet.regime = ConductionRegime::hole;
    s.biofet.cpe_ge = CpeParams{1.6e-2, 0.905, true};  // 1.6 uF s^(a-1)/cm^2
    s.biofet.cpe_par = CpeParams{8e-9, 0.6, false};
    s.biofet.cpe_le = CpeParams{5.4e-15, 1.0, false};
    s.medium.ionic_concentration = 0.5;  // 0.5 mM
    s.medium.relative_permittivity = 80.0;
    s.medium.temperature = 300.0;
    s.input.amplitude = 3.3e20;
    s.input.width = 0.5e-3;
    s.sim_timestep = 50e-6;
    // Receptor patch defaults to the graphene footprint centered on x_r.
    s.receptors.patch_extent_x = s.biofet.graphene_length;
    s.receptors.patch_extent_y = s.biofet.graphene_width;
    s.receptors.patch_origin = s.geometry.receiver_position - 0.5 * s.receptors.patch_extent_x;
    return s;
}

bool ValidationReport::passed() const {
    for (const auto& it : items)
        if (it.status == CheckStatus::fail) return false;
    return true;
}

bool ValidationReport::has_warnings() const {
    for (const auto& it : items)
        if (it.status == CheckStatus::warn) return true;
    return false;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << "Pe=" << peclet << " f_valid=" << validity_frequency
       << " linearization_margin=" << linearization_margin << "\n";
    for (const auto& it : items) {
        const char* tag = it.status == CheckStatus::pass   ? "pass"
                          : it.status == CheckStatus::warn ? "WARN"
                                                           : "FAIL";
        os << "  [" << tag << "] " << it.name;
        if (!it.detail.empty()) os << ": " << it.detail;
        os << "\n";
    }
    return os.str();
}

namespace {

void check(ValidationReport& rep, const std::string& name, bool ok, const std::string& detail = "") {
    rep.items.push_back({name, ok ? CheckStatus::pass : CheckStatus::fail, ok ? "" : detail});
}

void warn_if(ValidationReport& rep, const std::string& name, bool warn, const std::string& detail) {
    rep.items.push_back({name, warn ? CheckStatus::warn : CheckStatus::pass, warn ? detail : ""});
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_cpe(ValidationReport& rep, const std::string& name, const CpeParams& p) {
    check(rep, name + ".admittance > 0", p.admittance > 0.0, num(p.admittance));
    check(rep, name + ".exponent in [0,1]", p.exponent >= 0.0 && p.exponent <= 1.0,
          num(p.exponent));
}

}  // namespace

ValidationReport validate_scenario(const Scenario& s) {
    ValidationReport rep;
    rep.peclet = s.peclet();
    rep.validity_frequency = s.validity_frequency();
    rep.linearization_margin =
        s.ligand.unbinding_rate > 0.0
            ? s.ligand.binding_rate * s.input.amplitude / s.ligand.unbinding_rate
            : std::numeric_limits<double>::infinity();

    const auto& g = s.geometry;
    check(rep, "geometry positive",
          g.height > 0.0 && g.width > 0.0 && g.length > 0.0 && g.receiver_position > 0.0);
    check(rep, "receiver inside channel (x_r < l_ch)", g.receiver_position < g.length,
          num(g.receiver_position) + " vs " + num(g.length));
    check(rep, "receptor patch on channel floor",
          s.receptors.patch_origin >= 0.0 &&
              s.receptors.patch_origin + s.receptors.patch_extent_x <= g.length &&
              s.receptors.patch_extent_y <= g.width && s.receptors.patch_extent_x > 0.0 &&
              s.receptors.patch_extent_y > 0.0);
    check(rep, "flow velocity > 0", s.flow.velocity > 0.0, num(s.flow.velocity));
    check(rep, "diffusion >= 0", s.ligand.diffusion >= 0.0, num(s.ligand.diffusion));
    warn_if(rep, "diffusion > 0", s.ligand.diffusion == 0.0, "degenerate pure-advection limit");
    check(rep, "binding rate >= 0", s.ligand.binding_rate >= 0.0);
    check(rep, "unbinding rate > 0", s.ligand.unbinding_rate > 0.0);
    check(rep, "electrons per ligand >= 0", s.ligand.electrons_per_ligand >= 0.0);
    check(rep, "receptor count >= 1", s.receptors.count >= 1.0, num(s.receptors.count));
    check(rep, "receptor length > 0", s.receptors.receptor_length > 0.0);
    check(rep, "medium positive",
          s.medium.ionic_concentration > 0.0 && s.medium.relative_permittivity > 0.0 &&
              s.medium.temperature > 0.0);
    check(rep, "graphene dimensions > 0",
          s.biofet.graphene_width > 0.0 && s.biofet.graphene_length > 0.0);
    check(rep, "mobility > 0", s.biofet.mobility > 0.0);
    check(rep, "V_ds != 0", s.biofet.drain_source_voltage != 0.0);
    check_cpe(rep, "cpe_ge", s.biofet.cpe_ge);
    check_cpe(rep, "cpe_par", s.biofet.cpe_par);
    check_cpe(rep, "cpe_le", s.biofet.cpe_le);
    check(rep, "pulse amplitude > 0", s.input.amplitude > 0.0);
    check(rep, "pulse width > 0", s.input.width > 0.0);
    check(rep, "timestep > 0", s.sim_timestep > 0.0);

    if (rep.peclet < 1.0) {
        rep.items.push_back({"Peclet number > 1", CheckStatus::fail,
                             "Pe=" + num(rep.peclet) + "; 1D transport model invalid"});
    } else {
        warn_if(rep, "Peclet number >= 100", rep.peclet < 100.0,
                "Pe=" + num(rep.peclet) + "; 1D approximation marginal");
    }

    warn_if(rep, "k- dt < 0.1", s.ligand.unbinding_rate * s.sim_timestep >= 0.1,
            "unbinding probability per step too coarse");
    warn_if(rep, "u dt < sensing slab",
            s.flow.velocity * s.sim_timestep >= s.sensing_slab_length(),
            "per-step advection crosses the sensing slab");
    return rep;
}

}  // namespace mcfreq
