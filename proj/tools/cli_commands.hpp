#ifndef MCFREQ_CLI_COMMANDS_HPP
#define MCFREQ_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mcfreq/analytic.hpp"

namespace mcfreq::cli {

/// Numerical or validation failure (exit code 1). Config problems raise
/// io::ConfigError (exit code 2).
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 1;
    double f_max = 20e3;
    std::size_t n_freq = 4096;
    double eta = 0.99;
    int replicates = 1;
    double t_end = 0.2;
    analytic::BindingModel mode = analytic::BindingModel::linear;
    analytic::PulseForm form = analytic::PulseForm::causal;
    double band_max = 2000.0;
    double floor = 0.01;
};

/// Writes Phi_in, Phi_r, H_p, H_lr, H_t, H and I_m as CSV + SVG + manifest.
int cmd_analytic(const CommonOptions& opt);

/// Per-replicate CSVs, ensemble mean/std CSV, manifest.
int cmd_simulate(const CommonOptions& opt);

/// Compares a simulation output (single run or ensemble CSV) against the
/// analytic model in time and frequency domain; JSON report + overlay SVGs.
int cmd_compare(const CommonOptions& opt, const std::filesystem::path& sim_csv);

enum class TrendAssert { none, automatic, increasing, decreasing };

/// Cutoff/sampling-frequency sweep over one scenario parameter.
int cmd_sampling(const CommonOptions& opt, const std::string& param,
                 const std::vector<double>& values, TrendAssert trend);

/// Generic analytic parameter sweep; summary CSV of derived quantities.
int cmd_sweep(const CommonOptions& opt, const std::string& param,
              const std::vector<double>& values);

}  // namespace mcfreq::cli

#endif
