#ifndef MCFREQ_IO_HPP
#define MCFREQ_IO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcfreq/scenario.hpp"
#include "mcfreq/simulator.hpp"
#include "mcfreq/spectrum.hpp"

namespace mcfreq::io {

/// Malformed or unusable configuration input (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- scenario config ---------------------------------------------------------

/// Scenario -> strict JSON (all keys present, SI values).
nlohmann::json scenario_to_json(const Scenario& s);

/// Strict parse: unknown keys are rejected at every level, required keys
/// must be present. The receptor patch keys are optional and default to the
/// graphene footprint centered on the receiver position.
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& config_path);
void save_scenario(const Scenario& s, const std::filesystem::path& config_path);

/// FNV-1a 64-bit digest of the canonical serialization (sorted keys, shortest
/// round-trip floats); stable under key reordering of the input.
std::string scenario_hash(const Scenario& s);

// --- CSV ----------------------------------------------------------------------

/// Header: f_hz,re,im,abs,arg,valid
void write_spectrum_csv(const std::filesystem::path& path, const ComplexSpectrum& spec,
                        const std::vector<bool>* valid_mask = nullptr);

/// Header: t_s,value
void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& ts);

/// Header: t_s,n_bound,phi_local
void write_sim_csv(const std::filesystem::path& path, const sim::SimOutput& out);

/// Header: t_s,n_bound_mean,n_bound_std,phi_local_mean,phi_local_std
void write_ensemble_csv(const std::filesystem::path& path, const sim::EnsembleResult& res);

struct SimSeries {
    TimeSeries n_bound;
    TimeSeries phi_local;
};

/// Reads either a single-run or an ensemble CSV (mean columns).
SimSeries read_sim_csv(const std::filesystem::path& path);

// --- run manifest --------------------------------------------------------------

struct RunManifest {
    std::string scenario_hash;
    std::string command;
    std::uint64_t seed = 0;
    int replicates = 0;
    std::string tool_version;
    std::string timestamp_utc;
    double wall_time_s = 0.0;
    std::vector<std::string> output_paths;
    nlohmann::json extra;  // command-specific entries (errors, reports, ...)
};

nlohmann::json manifest_to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

std::string tool_version();
std::string utc_timestamp();

/// Shortest round-trip decimal formatting (locale-independent).
std::string format_double(double v);

}  // namespace mcfreq::io

#endif
