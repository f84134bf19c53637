#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_commands.hpp"
#include "mcfreq/io.hpp"
#include "mcfreq/scenario.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"mcfreq: microfluidic molecular-communication channel modeling toolkit"};
    app.require_subcommand(1);

    mcfreq::cli::CommonOptions opt;
    std::string mode = "linear";
    std::string form = "causal";

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", opt.config, "scenario config (JSON)");
        if (needs_config) c->required();
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--seed", opt.seed, "master random seed");
        cmd->add_option("--fmax", opt.f_max, "frequency grid upper edge [Hz]");
        cmd->add_option("--nfreq", opt.n_freq, "frequency grid points");
        cmd->add_option("--eta", opt.eta, "energy fraction for the cutoff frequency");
        cmd->add_option("--replicates", opt.replicates, "stochastic replicates");
        cmd->add_option("--t-end", opt.t_end, "simulated duration [s]");
        cmd->add_option("--mode", mode, "binding model: linear|nonlinear")
            ->check(CLI::IsMember({"linear", "nonlinear"}));
        cmd->add_option("--form", form, "pulse time origin: causal|paper")
            ->check(CLI::IsMember({"causal", "paper"}));
        cmd->add_option("--band-max", opt.band_max, "comparison band upper edge [Hz]");
        cmd->add_option("--floor", opt.floor, "comparison reference floor (relative)");
    };

    auto* c_analytic = app.add_subcommand("analytic", "evaluate the frequency-domain model");
    add_common(c_analytic, true);

    auto* c_sim = app.add_subcommand("simulate", "run particle-based stochastic replicates");
    add_common(c_sim, true);

    auto* c_cmp = app.add_subcommand("compare", "compare a simulation output with the model");
    std::string sim_csv;
    add_common(c_cmp, true);
    c_cmp->add_option("--sim", sim_csv, "simulation CSV (run or ensemble)")->required();

    auto* c_sampling = app.add_subcommand("sampling", "cutoff/sampling-frequency sweep");
    std::string param;
    std::vector<double> values;
    std::string trend = "none";
    add_common(c_sampling, true);
    c_sampling->add_option("--param", param, "dotted config path to sweep")->required();
    c_sampling->add_option("--values", values, "sweep values")->required()->expected(-1);
    c_sampling->add_option("--assert-trend", trend, "assert strict trend: auto|increasing|decreasing")
        ->check(CLI::IsMember({"none", "auto", "increasing", "decreasing"}));

    auto* c_sweep = app.add_subcommand("sweep", "generic analytic parameter sweep");
    add_common(c_sweep, true);
    c_sweep->add_option("--param", param, "dotted config path to sweep")->required();
    c_sweep->add_option("--values", values, "sweep values")->required()->expected(-1);

    auto* c_default = app.add_subcommand("write-default-config", "write the default scenario");
    std::string default_path = "default_scenario.json";
    c_default->add_option("path", default_path, "destination file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    opt.mode = mode == "nonlinear" ? mcfreq::analytic::BindingModel::nonlinear
                                   : mcfreq::analytic::BindingModel::linear;
    opt.form = form == "paper" ? mcfreq::analytic::PulseForm::paper
                               : mcfreq::analytic::PulseForm::causal;

    if (c_default->parsed()) {
        mcfreq::io::save_scenario(mcfreq::table_default_scenario(), default_path);
        std::cout << "wrote " << default_path << "\n";
        return 0;
    }
    if (c_analytic->parsed()) return mcfreq::cli::cmd_analytic(opt);
    if (c_sim->parsed()) return mcfreq::cli::cmd_simulate(opt);
    if (c_cmp->parsed()) return mcfreq::cli::cmd_compare(opt, sim_csv);
    if (c_sampling->parsed()) {
        auto t = mcfreq::cli::TrendAssert::none;
        if (trend == "auto") t = mcfreq::cli::TrendAssert::automatic;
        if (trend == "increasing") t = mcfreq::cli::TrendAssert::increasing;
        if (trend == "decreasing") t = mcfreq::cli::TrendAssert::decreasing;
        return mcfreq::cli::cmd_sampling(opt, param, values, t);
    }
    if (c_sweep->parsed()) return mcfreq::cli::cmd_sweep(opt, param, values);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mcfreq::io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
