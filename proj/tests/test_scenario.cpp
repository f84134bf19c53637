#include <doctest.h>

#include <cmath>

#include "mcfreq/analytic.hpp"
#include "mcfreq/constants.hpp"
#include "mcfreq/io.hpp"
#include "mcfreq/scenario.hpp"

using namespace mcfreq;

TEST_CASE("default scenario carries the documented parameter set") {
    const Scenario s = table_default_scenario();
    CHECK(s.geometry.height == 3e-6);
    CHECK(s.geometry.width == 3e-6);
    CHECK(s.geometry.length == 200e-6);
    CHECK(s.geometry.receiver_position == 100e-6);
    CHECK(s.flow.velocity == 2e-3);
    CHECK(s.ligand.diffusion == 1e-11);
    CHECK(s.ligand.electrons_per_ligand == 3.0);
    CHECK(s.ligand.binding_rate == 1e-18);
    CHECK(s.ligand.unbinding_rate == 500.0);
    CHECK(s.receptors.count == 500.0);
    CHECK(s.receptors.receptor_length == 2e-9);
    CHECK(s.medium.ionic_concentration == 0.5);
    CHECK(s.medium.relative_permittivity == 80.0);
    CHECK(s.medium.temperature == 300.0);
    CHECK(s.biofet.graphene_width == 1e-6);
    CHECK(s.biofet.graphene_length == 3e-6);
    CHECK(s.biofet.mobility == 0.2);
    CHECK(s.biofet.drain_source_voltage == 0.1);
    CHECK(s.biofet.regime == ConductionRegime::hole);
    CHECK(s.biofet.cpe_ge.admittance == 1.6e-2);
    CHECK(s.biofet.cpe_ge.exponent == 0.905);
    CHECK(s.biofet.cpe_ge.per_area);
    CHECK(s.biofet.cpe_par.admittance == 8e-9);
    CHECK(s.biofet.cpe_par.exponent == 0.6);
    CHECK_FALSE(s.biofet.cpe_par.per_area);
    CHECK(s.biofet.cpe_le.admittance == 5.4e-15);
    CHECK(s.biofet.cpe_le.exponent == 1.0);
    CHECK(s.input.amplitude == 3.3e20);
    CHECK(s.input.width == 0.5e-3);
    CHECK(s.sim_timestep == 50e-6);
}

TEST_CASE("validation on defaults: Pe, f_valid, margins, no warnings") {
    const Scenario s = table_default_scenario();
    const ValidationReport rep = validate_scenario(s);
    CHECK(rep.passed());
    CHECK_FALSE(rep.has_warnings());
    // Pe = u x_r / D
    CHECK(rep.peclet == doctest::Approx(2e4).epsilon(1e-12));
    // f_valid = u^2 / (8 pi D)
    const double expect_fv = 2e-3 * 2e-3 / (8.0 * constants::pi * 1e-11);
    CHECK(rep.validity_frequency == doctest::Approx(expect_fv).epsilon(1e-12));
    CHECK(rep.validity_frequency == doctest::Approx(1.59e4).epsilon(2e-3));
    CHECK(rep.linearization_margin == doctest::Approx(0.66).epsilon(1e-12));
}

TEST_CASE("validation failures and warnings") {
    Scenario s = table_default_scenario();

    SUBCASE("zero flow fails") {
        s.flow.velocity = 0.0;
        CHECK_FALSE(validate_scenario(s).passed());
    }
    SUBCASE("Pe below 1 fails") {
        s.flow.velocity = 1e-9;  // Pe = 0.01
        CHECK_FALSE(validate_scenario(s).passed());
    }
    SUBCASE("marginal Pe warns") {
        s.ligand.diffusion = 1e-8;  // Pe = 20
        const auto rep = validate_scenario(s);
        CHECK(rep.passed());
        CHECK(rep.has_warnings());
    }
    SUBCASE("receiver beyond the channel fails") {
        s.geometry.receiver_position = s.geometry.length * 2.0;
        CHECK_FALSE(validate_scenario(s).passed());
    }
    SUBCASE("negative diffusion fails, zero diffusion warns") {
        s.ligand.diffusion = -1.0;
        CHECK_FALSE(validate_scenario(s).passed());
        s.ligand.diffusion = 0.0;
        const auto rep = validate_scenario(s);
        CHECK(rep.passed());
        CHECK(rep.has_warnings());
    }
    SUBCASE("coarse timestep warns") {
        s.sim_timestep = 1e-3;  // k- dt = 0.5
        const auto rep = validate_scenario(s);
        CHECK(rep.passed());
        CHECK(rep.has_warnings());
    }
}

TEST_CASE("validation is pure") {
    const Scenario s = table_default_scenario();
    const auto a = validate_scenario(s);
    const auto b = validate_scenario(s);
    CHECK(a.summary() == b.summary());
    CHECK(a.peclet == b.peclet);
}

TEST_CASE("config JSON round trip is a field-by-field identity") {
    const Scenario s = table_default_scenario();
    const Scenario r = io::scenario_from_json(io::scenario_to_json(s));
    CHECK(r.geometry.height == s.geometry.height);
    CHECK(r.geometry.width == s.geometry.width);
    CHECK(r.geometry.length == s.geometry.length);
    CHECK(r.geometry.receiver_position == s.geometry.receiver_position);
    CHECK(r.flow.velocity == s.flow.velocity);
    CHECK(r.ligand.diffusion == s.ligand.diffusion);
    CHECK(r.ligand.electrons_per_ligand == s.ligand.electrons_per_ligand);
    CHECK(r.ligand.binding_rate == s.ligand.binding_rate);
    CHECK(r.ligand.unbinding_rate == s.ligand.unbinding_rate);
    CHECK(r.receptors.count == s.receptors.count);
    CHECK(r.receptors.receptor_length == s.receptors.receptor_length);
    CHECK(r.receptors.patch_origin == s.receptors.patch_origin);
    CHECK(r.receptors.patch_extent_x == s.receptors.patch_extent_x);
    CHECK(r.receptors.patch_extent_y == s.receptors.patch_extent_y);
    CHECK(r.medium.ionic_concentration == s.medium.ionic_concentration);
    CHECK(r.medium.relative_permittivity == s.medium.relative_permittivity);
    CHECK(r.medium.temperature == s.medium.temperature);
    CHECK(r.biofet.graphene_width == s.biofet.graphene_width);
    CHECK(r.biofet.graphene_length == s.biofet.graphene_length);
    CHECK(r.biofet.mobility == s.biofet.mobility);
    CHECK(r.biofet.drain_source_voltage == s.biofet.drain_source_voltage);
    CHECK(r.biofet.regime == s.biofet.regime);
    CHECK(r.biofet.cpe_ge.admittance == s.biofet.cpe_ge.admittance);
    CHECK(r.biofet.cpe_ge.exponent == s.biofet.cpe_ge.exponent);
    CHECK(r.biofet.cpe_ge.per_area == s.biofet.cpe_ge.per_area);
    CHECK(r.biofet.cpe_par.admittance == s.biofet.cpe_par.admittance);
    CHECK(r.biofet.cpe_le.admittance == s.biofet.cpe_le.admittance);
    CHECK(r.input.amplitude == s.input.amplitude);
    CHECK(r.input.width == s.input.width);
    CHECK(r.sim_timestep == s.sim_timestep);
}

TEST_CASE("unknown and missing config keys are rejected") {
    auto j = io::scenario_to_json(table_default_scenario());

    SUBCASE("unknown top-level key") {
        j["extra_section"] = 1;
        CHECK_THROWS_AS((void)io::scenario_from_json(j), io::ConfigError);
    }
    SUBCASE("unknown nested key") {
        j["ligand"]["typo_rate"] = 1.0;
        CHECK_THROWS_AS((void)io::scenario_from_json(j), io::ConfigError);
    }
    SUBCASE("missing key names the path") {
        j["flow"].erase("velocity_m_per_s");
        try {
            (void)io::scenario_from_json(j);
            FAIL("expected ConfigError");
        } catch (const io::ConfigError& e) {
            CHECK(std::string(e.what()).find("velocity_m_per_s") != std::string::npos);
        }
    }
    SUBCASE("non-numeric value") {
        j["input"]["width_s"] = "wide";
        CHECK_THROWS_AS((void)io::scenario_from_json(j), io::ConfigError);
    }
}

TEST_CASE("receptor patch defaults to the graphene footprint centered on x_r") {
    auto j = io::scenario_to_json(table_default_scenario());
    j["receptors"].erase("patch_origin_m");
    j["receptors"].erase("patch_extent_x_m");
    j["receptors"].erase("patch_extent_y_m");
    const Scenario s = io::scenario_from_json(j);
    CHECK(s.receptors.patch_extent_x == s.biofet.graphene_length);
    CHECK(s.receptors.patch_extent_y == s.biofet.graphene_width);
    CHECK(s.receptors.patch_origin ==
          doctest::Approx(s.geometry.receiver_position - 0.5 * s.biofet.graphene_length));
}

TEST_CASE("scenario hash is stable under key reordering") {
    const Scenario s = table_default_scenario();
    const std::string h1 = io::scenario_hash(s);

    // Re-parse from a JSON text with sections spelled in a different order.
    auto j = io::scenario_to_json(s);
    nlohmann::json shuffled;
    shuffled["sim"] = j["sim"];
    shuffled["input"] = j["input"];
    shuffled["biofet"] = j["biofet"];
    shuffled["medium"] = j["medium"];
    shuffled["receptors"] = j["receptors"];
    shuffled["ligand"] = j["ligand"];
    shuffled["flow"] = j["flow"];
    shuffled["geometry"] = j["geometry"];
    const Scenario r = io::scenario_from_json(shuffled);
    CHECK(io::scenario_hash(r) == h1);
    CHECK(h1.size() == 16);
}

TEST_CASE("per-area CPE admittance converts to absolute by the graphene area") {
    const Scenario s = table_default_scenario();
    const CpeParams abs = analytic::cpe_absolute(s.biofet.cpe_ge, s.biofet);
    CHECK(abs.admittance ==
          s.biofet.cpe_ge.admittance * s.biofet.graphene_width * s.biofet.graphene_length);
    CHECK_FALSE(abs.per_area);
    // Already-absolute parameters pass through untouched.
    const CpeParams same = analytic::cpe_absolute(s.biofet.cpe_par, s.biofet);
    CHECK(same.admittance == s.biofet.cpe_par.admittance);
}
