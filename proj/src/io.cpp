#include "mcfreq/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <fstream>
#include <sstream>

namespace mcfreq::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string tool_version() { return "0.1.0"; }

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// --- scenario config ---------------------------------------------------------

namespace {

double get_number(const json& obj, const std::string& scope, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing config key: " + scope + "." + key);
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("config key is not a number: " + scope + "." + key);
    return v.get<double>();
}

void reject_unknown(const json& obj, const std::string& scope,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError("unknown config key: " + scope + "." + key);
    }
}

CpeParams cpe_from_json(const json& j, const std::string& scope) {
    if (!j.is_object()) throw ConfigError(scope + " must be an object");
    reject_unknown(j, scope, {"admittance", "exponent", "per_area"});
    CpeParams p;
    p.admittance = get_number(j, scope, "admittance");
    p.exponent = get_number(j, scope, "exponent");
    if (!j.contains("per_area") || !j.at("per_area").is_boolean())
        throw ConfigError("missing or non-boolean key: " + scope + ".per_area");
    p.per_area = j.at("per_area").get<bool>();
    return p;
}

json cpe_to_json(const CpeParams& p) {
    return json{{"admittance", p.admittance}, {"exponent", p.exponent}, {"per_area", p.per_area}};
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    j["geometry"] = {{"height_m", s.geometry.height},
                     {"width_m", s.geometry.width},
                     {"length_m", s.geometry.length},
                     {"receiver_position_m", s.geometry.receiver_position}};
    j["flow"] = {{"velocity_m_per_s", s.flow.velocity}};
    j["ligand"] = {{"diffusion_m2_per_s", s.ligand.diffusion},
                   {"electrons_per_ligand", s.ligand.electrons_per_ligand},
                   {"binding_rate_m3_per_s", s.ligand.binding_rate},
                   {"unbinding_rate_per_s", s.ligand.unbinding_rate}};
    j["receptors"] = {{"count", s.receptors.count},
                      {"receptor_length_m", s.receptors.receptor_length},
                      {"patch_origin_m", s.receptors.patch_origin},
                      {"patch_extent_x_m", s.receptors.patch_extent_x},
                      {"patch_extent_y_m", s.receptors.patch_extent_y}};
    j["medium"] = {{"ionic_concentration_mol_per_m3", s.medium.ionic_concentration},
                   {"relative_permittivity", s.medium.relative_permittivity},
                   {"temperature_k", s.medium.temperature}};
    j["biofet"] = {{"graphene_width_m", s.biofet.graphene_width},
                   {"graphene_length_m", s.biofet.graphene_length},
                   {"mobility_m2_per_v_s", s.biofet.mobility},
                   {"drain_source_voltage_v", s.biofet.drain_source_voltage},
                   {"conduction_regime",
                    s.biofet.regime == ConductionRegime::hole ? "hole" : "electron"},
                   {"cpe_ge", cpe_to_json(s.biofet.cpe_ge)},
                   {"cpe_par", cpe_to_json(s.biofet.cpe_par)},
                   {"cpe_le", cpe_to_json(s.biofet.cpe_le)}};
    j["input"] = {{"amplitude_per_m3", s.input.amplitude}, {"width_s", s.input.width}};
    json sim_obj = {{"timestep_s", s.sim_timestep}};
    if (s.sensing_slab > 0.0) sim_obj["sensing_slab_m"] = s.sensing_slab;
    j["sim"] = sim_obj;
    return j;
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j, "<root>",
                   {"geometry", "flow", "ligand", "receptors", "medium", "biofet", "input", "sim"});
    for (const char* key :
         {"geometry", "flow", "ligand", "receptors", "medium", "biofet", "input", "sim"}) {
        if (!j.contains(key)) throw ConfigError(std::string("missing config section: ") + key);
    }

    Scenario s;
    const json& g = j.at("geometry");
    reject_unknown(g, "geometry", {"height_m", "width_m", "length_m", "receiver_position_m"});
    s.geometry.height = get_number(g, "geometry", "height_m");
    s.geometry.width = get_number(g, "geometry", "width_m");
    s.geometry.length = get_number(g, "geometry", "length_m");
    s.geometry.receiver_position = get_number(g, "geometry", "receiver_position_m");

    const json& f = j.at("flow");
    reject_unknown(f, "flow", {"velocity_m_per_s"});
    s.flow.velocity = get_number(f, "flow", "velocity_m_per_s");

    const json& l = j.at("ligand");
    reject_unknown(l, "ligand",
                   {"diffusion_m2_per_s", "electrons_per_ligand", "binding_rate_m3_per_s",
                    "unbinding_rate_per_s"});
    s.ligand.diffusion = get_number(l, "ligand", "diffusion_m2_per_s");
    s.ligand.electrons_per_ligand = get_number(l, "ligand", "electrons_per_ligand");
    s.ligand.binding_rate = get_number(l, "ligand", "binding_rate_m3_per_s");
    s.ligand.unbinding_rate = get_number(l, "ligand", "unbinding_rate_per_s");

    const json& r = j.at("receptors");
    reject_unknown(r, "receptors",
                   {"count", "receptor_length_m", "patch_origin_m", "patch_extent_x_m",
                    "patch_extent_y_m"});
    s.receptors.count = get_number(r, "receptors", "count");
    s.receptors.receptor_length = get_number(r, "receptors", "receptor_length_m");

    const json& m = j.at("medium");
    reject_unknown(m, "medium",
                   {"ionic_concentration_mol_per_m3", "relative_permittivity", "temperature_k"});
    s.medium.ionic_concentration = get_number(m, "medium", "ionic_concentration_mol_per_m3");
    s.medium.relative_permittivity = get_number(m, "medium", "relative_permittivity");
    s.medium.temperature = get_number(m, "medium", "temperature_k");

    const json& b = j.at("biofet");
    reject_unknown(b, "biofet",
                   {"graphene_width_m", "graphene_length_m", "mobility_m2_per_v_s",
                    "drain_source_voltage_v", "conduction_regime", "cpe_ge", "cpe_par", "cpe_le"});
    s.biofet.graphene_width = get_number(b, "biofet", "graphene_width_m");
    s.biofet.graphene_length = get_number(b, "biofet", "graphene_length_m");
    s.biofet.mobility = get_number(b, "biofet", "mobility_m2_per_v_s");
    s.biofet.drain_source_voltage = get_number(b, "biofet", "drain_source_voltage_v");
    if (!b.contains("conduction_regime") || !b.at("conduction_regime").is_string())
        throw ConfigError("missing or non-string key: biofet.conduction_regime");
    const std::string regime = b.at("conduction_regime").get<std::string>();
    if (regime == "hole")
        s.biofet.regime = ConductionRegime::hole;
    else if (regime == "electron")
        s.biofet.regime = ConductionRegime::electron;
    else
        throw ConfigError("biofet.conduction_regime must be \"hole\" or \"electron\"");
    if (!b.contains("cpe_ge") || !b.contains("cpe_par") || !b.contains("cpe_le"))
        throw ConfigError("biofet requires cpe_ge, cpe_par and cpe_le");
    s.biofet.cpe_ge = cpe_from_json(b.at("cpe_ge"), "biofet.cpe_ge");
    s.biofet.cpe_par = cpe_from_json(b.at("cpe_par"), "biofet.cpe_par");
    s.biofet.cpe_le = cpe_from_json(b.at("cpe_le"), "biofet.cpe_le");

    const json& in = j.at("input");
    reject_unknown(in, "input", {"amplitude_per_m3", "width_s"});
    s.input.amplitude = get_number(in, "input", "amplitude_per_m3");
    s.input.width = get_number(in, "input", "width_s");

    const json& sm = j.at("sim");
    reject_unknown(sm, "sim", {"timestep_s", "sensing_slab_m"});
    s.sim_timestep = get_number(sm, "sim", "timestep_s");
    if (sm.contains("sensing_slab_m")) s.sensing_slab = get_number(sm, "sim", "sensing_slab_m");

    // Patch defaults: graphene footprint centered on the receiver position.
    s.receptors.patch_extent_x = r.contains("patch_extent_x_m")
                                     ? get_number(r, "receptors", "patch_extent_x_m")
                                     : s.biofet.graphene_length;
    s.receptors.patch_extent_y = r.contains("patch_extent_y_m")
                                     ? get_number(r, "receptors", "patch_extent_y_m")
                                     : s.biofet.graphene_width;
    s.receptors.patch_origin = r.contains("patch_origin_m")
                                   ? get_number(r, "receptors", "patch_origin_m")
                                   : s.geometry.receiver_position - 0.5 * s.receptors.patch_extent_x;
    return s;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + config_path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::filesystem::path& config_path) {
    std::ofstream out(config_path);
    if (!out) throw ConfigError("cannot write config file: " + config_path.string());
    out << scenario_to_json(s).dump(2) << "\n";
}

std::string scenario_hash(const Scenario& s) {
    // nlohmann::json orders object keys, so dump() is canonical.
    const std::string canon = scenario_to_json(s).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- CSV ----------------------------------------------------------------------

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    return out;
}

}  // namespace

void write_spectrum_csv(const std::filesystem::path& path, const ComplexSpectrum& spec,
                        const std::vector<bool>* valid_mask) {
    auto out = open_out(path);
    out << "f_hz,re,im,abs,arg,valid\n";
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto v = spec.values[i];
        const bool valid = valid_mask == nullptr || (*valid_mask)[i];
        out << format_double(spec.frequency(i)) << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << ',' << format_double(std::abs(v)) << ','
            << format_double(std::arg(v)) << ',' << (valid ? '1' : '0') << '\n';
    }
}

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts) {
    auto out = open_out(path);
    out << "t_s,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << format_double(ts.time(i)) << ',' << format_double(ts.values[i]) << '\n';
    }
}

void write_sim_csv(const std::filesystem::path& path, const sim::SimOutput& o) {
    auto out = open_out(path);
    out << "t_s,n_bound,phi_local\n";
    for (std::size_t i = 0; i < o.n_bound.size(); ++i) {
        out << format_double(o.n_bound.time(i)) << ',' << format_double(o.n_bound.values[i]) << ','
            << format_double(o.phi_local.values[i]) << '\n';
    }
}

void write_ensemble_csv(const std::filesystem::path& path, const sim::EnsembleResult& res) {
    auto out = open_out(path);
    out << "t_s,n_bound_mean,n_bound_std,phi_local_mean,phi_local_std\n";
    for (std::size_t i = 0; i < res.n_bound_mean.size(); ++i) {
        out << format_double(res.n_bound_mean.time(i)) << ','
            << format_double(res.n_bound_mean.values[i]) << ','
            << format_double(res.n_bound_std.values[i]) << ','
            << format_double(res.phi_mean.values[i]) << ','
            << format_double(res.phi_std.values[i]) << '\n';
    }
}

SimSeries read_sim_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open simulation CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty simulation CSV: " + path.string());

    int col_nb = -1, col_phi = -1, col = 0;
    {
        std::istringstream header(line);
        std::string name;
        while (std::getline(header, name, ',')) {
            if (name == "n_bound" || name == "n_bound_mean") col_nb = col;
            if (name == "phi_local" || name == "phi_local_mean") col_phi = col;
            ++col;
        }
    }
    if (col_nb < 0 || col_phi < 0)
        throw ConfigError("simulation CSV lacks n_bound/phi_local columns: " + path.string());

    std::vector<double> t, nb, phi;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int c = 0;
        double tv = 0.0, nbv = 0.0, phiv = 0.0;
        while (std::getline(row, cell, ',')) {
            const double v = std::strtod(cell.c_str(), nullptr);
            if (c == 0) tv = v;
            if (c == col_nb) nbv = v;
            if (c == col_phi) phiv = v;
            ++c;
        }
        t.push_back(tv);
        nb.push_back(nbv);
        phi.push_back(phiv);
    }
    if (t.size() < 2) throw ConfigError("simulation CSV has fewer than 2 rows: " + path.string());

    SimSeries s;
    s.n_bound.t0 = t.front();
    s.n_bound.dt = t[1] - t[0];
    s.n_bound.values = nb;
    s.phi_local.t0 = t.front();
    s.phi_local.dt = t[1] - t[0];
    s.phi_local.values = phi;
    return s;
}

// --- run manifest ----------------------------------------------------------------

json manifest_to_json(const RunManifest& m) {
    json j;
    j["scenario_hash"] = m.scenario_hash;
    j["command"] = m.command;
    j["seed"] = m.seed;
    j["replicates"] = m.replicates;
    j["tool_version"] = m.tool_version;
    j["timestamp_utc"] = m.timestamp_utc;
    j["wall_time_s"] = m.wall_time_s;
    j["output_paths"] = m.output_paths;
    if (!m.extra.is_null()) j["extra"] = m.extra;
    return j;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    auto out = open_out(path);
    out << manifest_to_json(m).dump(2) << "\n";
}

}  // namespace mcfreq::io
