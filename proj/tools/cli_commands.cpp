#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mcfreq/io.hpp"
#include "mcfreq/simulator.hpp"
#include "mcfreq/spectral.hpp"
#include "mcfreq/svg.hpp"

namespace mcfreq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_config_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw io::ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw io::ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

Scenario load_and_validate(const fs::path& path, bool quiet = false) {
    const Scenario s = io::load_scenario(path);
    const ValidationReport rep = validate_scenario(s);
    if (!rep.passed()) throw RunError("scenario validation failed:\n" + rep.summary());
    if (rep.has_warnings() && !quiet) std::cerr << rep.summary();
    return s;
}

/// Sets a dotted parameter path ("ligand.diffusion_m2_per_s") in a config.
void apply_param(json& config, const std::string& path, double value) {
    json* node = &config;
    std::istringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw io::ConfigError("empty parameter path");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i]))
            throw io::ConfigError("parameter path does not resolve: " + path);
        node = &node->at(parts[i]);
    }
    if (!node->is_object() || !node->contains(parts.back()) ||
        !node->at(parts.back()).is_number())
        throw io::ConfigError("parameter path does not resolve to a number: " + path);
    (*node)[parts.back()] = value;
}

io::RunManifest make_manifest(const Scenario& s, const std::string& command,
                              const CommonOptions& opt) {
    io::RunManifest m;
    m.scenario_hash = io::scenario_hash(s);
    m.command = command;
    m.seed = opt.seed;
    m.replicates = opt.replicates;
    m.tool_version = io::tool_version();
    m.timestamp_utc = io::utc_timestamp();
    return m;
}

void plot_magnitude(const fs::path& path, const std::string& title, const ComplexSpectrum& spec,
                    const std::string& ylabel) {
    svg::Series ser;
    ser.x.reserve(spec.size());
    ser.y.reserve(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        ser.x.push_back(spec.frequency(i));
        ser.y.push_back(std::abs(spec.values[i]));
    }
    svg::PlotSpec ps;
    ps.title = title;
    ps.x_label = "f [Hz]";
    ps.y_label = ylabel;
    ps.log_x = true;
    ps.log_y = true;
    svg::write_plot(path, ps, {ser});
}

struct NamedSpectrum {
    std::string stem;
    std::string title;
    std::string unit;
    ComplexSpectrum spec;
    const std::vector<bool>* mask = nullptr;
};

}  // namespace

int cmd_analytic(const CommonOptions& opt) {
    const Scenario s = load_and_validate(opt.config);
    fs::create_directories(opt.out_dir);
    const FrequencyGrid grid = FrequencyGrid::spanning(opt.f_max, opt.n_freq);

    const auto hp = analytic::propagation_transfer(s, grid);
    const auto phi_in = analytic::rect_pulse_spectrum(s.input, grid);
    const auto phi_r = analytic::received_spectrum(s, grid);
    const auto hlr = analytic::lr_transfer(s, grid);
    const auto ht = analytic::transducer_transfer(s, grid);
    const auto h = analytic::end_to_end_transfer(s, grid);
    const auto im = analytic::output_current_spectrum(s, grid);

    std::vector<NamedSpectrum> files;
    files.push_back({"phi_in", "Input pulse spectrum", "|Phi_in| [s/m^3]", phi_in, nullptr});
    files.push_back({"phi_r", "Received concentration spectrum", "|Phi_r| [s/m^3]", phi_r.spectrum,
                     &phi_r.series_valid});
    files.push_back({"h_p", "Propagation transfer", "|H_p|", hp.spectrum, &hp.series_valid});
    files.push_back({"h_lr", "Binding-reaction transfer", "|H_lr| [m^3]", hlr, nullptr});
    files.push_back({"h_t", "Transducer transfer", "|H_t| [A]", ht, nullptr});
    files.push_back({"h", "End-to-end transfer", "|H| [A m^3]", h.spectrum, &h.series_valid});
    files.push_back({"i_m", "Output current spectrum", "|I_m| [A s]", im.spectrum,
                     &im.series_valid});

    io::RunManifest man = make_manifest(s, "analytic", opt);
    for (const auto& f : files) {
        const fs::path csv = opt.out_dir / (f.stem + ".csv");
        const fs::path pic = opt.out_dir / (f.stem + ".svg");
        io::write_spectrum_csv(csv, f.spec, f.mask);
        plot_magnitude(pic, f.title, f.spec, f.unit);
        man.output_paths.push_back(csv.string());
        man.output_paths.push_back(pic.string());
    }
    io::write_manifest(opt.out_dir / "manifest.json", man);
    return 0;
}

int cmd_simulate(const CommonOptions& opt) {
    const Scenario s = load_and_validate(opt.config);
    fs::create_directories(opt.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const sim::EnsembleResult res = sim::ensemble(s, opt.seed, opt.replicates, opt.t_end);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    io::RunManifest man = make_manifest(s, "simulate", opt);
    man.wall_time_s = wall;
    json reps = json::array();
    for (std::size_t i = 0; i < res.replicates.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "rep_%04zu.csv", i);
        const fs::path path = opt.out_dir / name;
        io::write_sim_csv(path, res.replicates[i]);
        man.output_paths.push_back(path.string());
        reps.push_back({{"replicate", i},
                        {"seed", res.replicates[i].info.seed},
                        {"wall_time_s", res.replicates[i].info.wall_time_s},
                        {"injected", res.replicates[i].counters.injected},
                        {"exited", res.replicates[i].counters.exited},
                        {"bind_events", res.replicates[i].counters.bind_events},
                        {"unbind_events", res.replicates[i].counters.unbind_events},
                        {"capped_bind_attempts", res.replicates[i].counters.capped_bind_attempts}});
    }
    const fs::path ens = opt.out_dir / "ensemble.csv";
    io::write_ensemble_csv(ens, res);
    man.output_paths.push_back(ens.string());
    man.extra = {{"replicate_stats", reps}, {"t_end_s", opt.t_end}};
    io::write_manifest(opt.out_dir / "manifest.json", man);

    svg::Series mean_s;
    for (std::size_t i = 0; i < res.n_bound_mean.size(); ++i) {
        mean_s.x.push_back(res.n_bound_mean.time(i));
        mean_s.y.push_back(res.n_bound_mean.values[i]);
    }
    mean_s.label = "ensemble mean";
    svg::PlotSpec ps;
    ps.title = "Bound receptors, ensemble mean";
    ps.x_label = "t [s]";
    ps.y_label = "N_b";
    svg::write_plot(opt.out_dir / "n_bound_mean.svg", ps, {mean_s});
    return 0;
}

int cmd_compare(const CommonOptions& opt, const fs::path& sim_csv) {
    const Scenario s = load_and_validate(opt.config);
    fs::create_directories(opt.out_dir);

    const io::SimSeries sim_data = io::read_sim_csv(sim_csv);
    const auto nb_dft_full = spectral::dft_spectrum(sim_data.n_bound);
    const auto phi_dft_full = spectral::dft_spectrum(sim_data.phi_local);

    // Keep bins up to the comparison band (and below Nyquist).
    const double nyquist = 0.5 / sim_data.n_bound.dt;
    if (opt.band_max > nyquist) throw RunError("comparison band exceeds the Nyquist frequency");
    const auto keep = static_cast<std::size_t>(opt.band_max / nb_dft_full.f_step) + 2;
    const auto nb_dft = spectral::truncate_bins(nb_dft_full, std::min(keep, nb_dft_full.size()));
    const auto phi_dft = spectral::truncate_bins(phi_dft_full, std::min(keep, phi_dft_full.size()));

    FrequencyGrid grid;
    grid.f_start = nb_dft.f_start;
    grid.f_step = nb_dft.f_step;
    grid.n = nb_dft.size();
    const auto bound = analytic::bound_spectrum(s, grid);
    const auto phi_r = analytic::received_spectrum(s, grid);

    const auto cmp_nb =
        spectral::compare_spectra(nb_dft, bound.spectrum, 0.0, opt.band_max, opt.floor);
    const auto cmp_phi =
        spectral::compare_spectra(phi_dft, phi_r.spectrum, 0.0, opt.band_max, opt.floor);

    // Time-domain references on the simulation grid.
    const auto drive = analytic::received_concentration_series(
        s, sim_data.phi_local.dt, sim_data.phi_local.size() + 1, opt.form);
    const auto nb_ode = analytic::solve_bound_ode(s, drive, opt.mode);

    auto cmp_json = [](const spectral::SpectrumComparison& c) {
        return json{{"band_lo_hz", c.band_lo},
                    {"band_hi_hz", c.band_hi},
                    {"reference_floor", c.reference_floor},
                    {"max_rel_error", c.max_rel_error},
                    {"rms_rel_error", c.rms_rel_error},
                    {"included_bins", c.included_bins},
                    {"excluded_bins", c.excluded_bins}};
    };
    json report;
    report["n_bound_spectrum_vs_analytic"] = cmp_json(cmp_nb);
    report["phi_spectrum_vs_analytic"] = cmp_json(cmp_phi);

    // Overlay plots: analytic curve as a line, simulation as markers.
    auto overlay = [&](const fs::path& path, const std::string& title,
                       const ComplexSpectrum& ana, const ComplexSpectrum& simsp) {
        svg::Series a;
        for (std::size_t i = 0; i < ana.size(); ++i) {
            a.x.push_back(ana.frequency(i));
            a.y.push_back(std::abs(ana.values[i]));
        }
        a.label = "analytic";
        svg::Series m;
        for (std::size_t i = 0; i < simsp.size(); ++i) {
            m.x.push_back(simsp.frequency(i));
            m.y.push_back(std::abs(simsp.values[i]));
        }
        m.label = "simulation";
        m.color = "#c23b22";
        m.line = false;
        m.markers = true;
        svg::PlotSpec ps;
        ps.title = title;
        ps.x_label = "f [Hz]";
        ps.y_label = "magnitude";
        ps.log_x = true;
        ps.log_y = true;
        svg::write_plot(path, ps, {a, m});
    };
    overlay(opt.out_dir / "n_bound_spectrum_overlay.svg", "Bound-receptor spectrum",
            bound.spectrum, nb_dft);
    overlay(opt.out_dir / "phi_spectrum_overlay.svg", "Received concentration spectrum",
            phi_r.spectrum, phi_dft);

    // Time-domain overlay for the bound-receptor count.
    {
        svg::Series a;
        for (std::size_t i = 0; i < nb_ode.size(); ++i) {
            a.x.push_back(nb_ode.time(i));
            a.y.push_back(nb_ode.values[i]);
        }
        a.label = opt.mode == analytic::BindingModel::linear ? "ODE (linear)" : "ODE (nonlinear)";
        svg::Series m;
        for (std::size_t i = 0; i < sim_data.n_bound.size(); ++i) {
            m.x.push_back(sim_data.n_bound.time(i));
            m.y.push_back(sim_data.n_bound.values[i]);
        }
        m.label = "simulation";
        m.color = "#c23b22";
        m.line = false;
        m.markers = true;
        svg::PlotSpec ps;
        ps.title = "Bound receptors vs time";
        ps.x_label = "t [s]";
        ps.y_label = "N_b";
        svg::write_plot(opt.out_dir / "n_bound_time_overlay.svg", ps, {a, m});
    }

    io::RunManifest man = make_manifest(s, "compare", opt);
    man.extra = {{"report", report}, {"sim_input", sim_csv.string()}};
    for (const char* p : {"n_bound_spectrum_overlay.svg", "phi_spectrum_overlay.svg",
                          "n_bound_time_overlay.svg", "comparison.json"})
        man.output_paths.push_back((opt.out_dir / p).string());
    std::ofstream rep_out(opt.out_dir / "comparison.json");
    rep_out << report.dump(2) << "\n";
    io::write_manifest(opt.out_dir / "manifest.json", man);

    std::cout << "n_bound spectrum: rms_rel_error=" << cmp_nb.rms_rel_error
              << " max_rel_error=" << cmp_nb.max_rel_error << "\n";
    std::cout << "phi spectrum:     rms_rel_error=" << cmp_phi.rms_rel_error
              << " max_rel_error=" << cmp_phi.max_rel_error << "\n";
    return 0;
}

namespace {

struct SweepPoint {
    double value = 0.0;
    double f_c = 0.0;
    double f_s = 0.0;
    bool ok = false;
    std::string error;
};

std::vector<SweepPoint> sampling_sweep(const json& base_config, const CommonOptions& opt,
                                       const std::string& param,
                                       const std::vector<double>& values) {
    std::vector<SweepPoint> points;
    for (double v : values) {
        SweepPoint p;
        p.value = v;
        try {
            json cfg = base_config;
            apply_param(cfg, param, v);
            const Scenario s = io::scenario_from_json(cfg);
            const ValidationReport rep = validate_scenario(s);
            if (!rep.passed()) throw RunError("scenario validation failed");
            const FrequencyGrid grid = FrequencyGrid::spanning(opt.f_max, opt.n_freq);
            const auto im = analytic::output_current_spectrum(s, grid);
            p.f_c = spectral::cutoff_frequency(im.spectrum, opt.eta);
            p.f_s = spectral::sampling_frequency(p.f_c);
            p.ok = true;
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        points.push_back(p);
    }
    return points;
}

}  // namespace

int cmd_sampling(const CommonOptions& opt, const std::string& param,
                 const std::vector<double>& values, TrendAssert trend) {
    const json base = load_config_json(opt.config);
    {
        // Surface config errors (bad file, bad path) before sweeping.
        const Scenario s = io::scenario_from_json(base);
        (void)s;
        json probe = base;
        apply_param(probe, param, values.empty() ? 0.0 : values.front());
    }
    if (values.empty()) throw io::ConfigError("sampling sweep needs at least one value");
    fs::create_directories(opt.out_dir);

    const auto points = sampling_sweep(base, opt, param, values);

    const fs::path csv_path = opt.out_dir / "sampling.csv";
    {
        std::ofstream out(csv_path);
        out << "param_value,f_c_hz,f_s_hz\n";
        for (const auto& p : points) {
            out << io::format_double(p.value) << ','
                << (p.ok ? io::format_double(p.f_c) : "nan") << ','
                << (p.ok ? io::format_double(p.f_s) : "nan") << '\n';
        }
    }

    svg::Series ser;
    for (const auto& p : points) {
        if (!p.ok) continue;
        ser.x.push_back(p.value);
        ser.y.push_back(p.f_s);
    }
    ser.markers = true;
    ser.label = "f_s";
    svg::PlotSpec ps;
    ps.title = "Sampling frequency vs " + param;
    ps.x_label = param;
    ps.y_label = "f_s [Hz]";
    svg::write_plot(opt.out_dir / "sampling.svg", ps, {ser});

    const Scenario base_scenario = io::scenario_from_json(base);
    io::RunManifest man = make_manifest(base_scenario, "sampling", opt);
    man.output_paths = {csv_path.string(), (opt.out_dir / "sampling.svg").string()};
    json errs = json::array();
    for (const auto& p : points)
        if (!p.ok) errs.push_back({{"param_value", p.value}, {"error", p.error}});
    man.extra = {{"param", param}, {"eta", opt.eta}, {"errors", errs}};
    io::write_manifest(opt.out_dir / "manifest.json", man);

    for (const auto& p : points) {
        if (p.ok)
            std::cout << param << "=" << p.value << " -> f_c=" << p.f_c << " Hz, f_s=" << p.f_s
                      << " Hz\n";
        else
            std::cout << param << "=" << p.value << " -> error: " << p.error << "\n";
    }

    if (trend != TrendAssert::none) {
        for (const auto& p : points)
            if (!p.ok) throw RunError("trend assertion impossible: sweep point failed");
        if (points.size() < 2) throw RunError("trend assertion needs at least two points");
        bool increasing = true, decreasing = true;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (points[i].f_s <= points[i - 1].f_s) increasing = false;
            if (points[i].f_s >= points[i - 1].f_s) decreasing = false;
        }
        const bool ok = trend == TrendAssert::increasing   ? increasing
                        : trend == TrendAssert::decreasing ? decreasing
                                                           : (increasing || decreasing);
        if (!ok) throw RunError("sampling-frequency trend assertion failed");
        std::cout << "trend: strictly " << (increasing ? "increasing" : "decreasing") << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& param,
              const std::vector<double>& values) {
    const json base = load_config_json(opt.config);
    if (values.empty()) throw io::ConfigError("sweep needs at least one value");
    {
        json probe = base;
        apply_param(probe, param, values.front());
    }
    fs::create_directories(opt.out_dir);

    const fs::path csv_path = opt.out_dir / "sweep.csv";
    std::ofstream out(csv_path);
    out << "param_value,phi_r_peak_per_m3,phi_r_peak_t_s,im_low_f_mag,f_c_hz,f_s_hz\n";

    json errs = json::array();
    for (double v : values) {
        try {
            json cfg = base;
            apply_param(cfg, param, v);
            const Scenario s = io::scenario_from_json(cfg);
            const ValidationReport rep = validate_scenario(s);
            if (!rep.passed()) throw RunError("scenario validation failed");

            const auto n = static_cast<std::size_t>(std::llround(opt.t_end / s.sim_timestep));
            const auto phi = analytic::received_concentration_series(s, s.sim_timestep, n, opt.form);
            std::size_t ipk = 0;
            for (std::size_t i = 1; i < phi.size(); ++i)
                if (phi.values[i] > phi.values[ipk]) ipk = i;

            const FrequencyGrid grid = FrequencyGrid::spanning(opt.f_max, opt.n_freq);
            const auto im = analytic::output_current_spectrum(s, grid);
            const double im_low = std::abs(im.spectrum.values.front());
            const double fc = spectral::cutoff_frequency(im.spectrum, opt.eta);

            out << io::format_double(v) << ',' << io::format_double(phi.values[ipk]) << ','
                << io::format_double(phi.time(ipk)) << ',' << io::format_double(im_low) << ','
                << io::format_double(fc) << ',' << io::format_double(spectral::sampling_frequency(fc))
                << '\n';
        } catch (const std::exception& e) {
            out << io::format_double(v) << ",nan,nan,nan,nan,nan\n";
            errs.push_back({{"param_value", v}, {"error", e.what()}});
        }
    }

    const Scenario base_scenario = io::scenario_from_json(base);
    io::RunManifest man = make_manifest(base_scenario, "sweep", opt);
    man.output_paths = {csv_path.string()};
    man.extra = {{"param", param}, {"errors", errs}};
    io::write_manifest(opt.out_dir / "manifest.json", man);
    return 0;
}

}  // namespace mcfreq::cli
