#ifndef MCFREQ_SIMULATOR_HPP
#define MCFREQ_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mcfreq/scenario.hpp"
#include "mcfreq/spectrum.hpp"

namespace mcfreq::sim {

inline constexpr std::uint64_t kUnbound = ~0ull;

struct Counters {
    std::uint64_t injected = 0;
    std::uint64_t exited = 0;
    std::uint64_t bind_events = 0;
    std::uint64_t unbind_events = 0;
    std::uint64_t capped_bind_attempts = 0;  // binding draws in excess of slab content
};

/// Mutable state of one stochastic replicate. Particle arrays hold free
/// (unbound, in-channel) particles only; bound particles live in the
/// receptor table; exited particles are only counted. The conservation law
/// injected == free + bound + exited holds after every step, exactly.
struct SimState {
    std::vector<double> px, py, pz;
    std::vector<std::uint64_t> pid;
    std::vector<std::uint64_t> bound_id;  // per receptor, kUnbound when free
    std::vector<double> rx, ry;           // receptor positions on the floor
    std::uint64_t bound_count = 0;
    double t = 0.0;
    std::uint32_t step = 0;
    std::uint64_t next_id = 0;
    double injection_residual = 0.0;
    std::uint64_t key = 0;  // philox key for this replicate
    Counters counters;

    std::size_t free_count() const { return px.size(); }
};

struct SimOptions {
    enum class Boundary { open_channel, closed_box };

    Boundary boundary = Boundary::open_channel;
    /// Closed-box mode: initial uniform fill (advection and injection off,
    /// every wall reflective). Used by the equilibrium-kinetics tests.
    std::uint64_t initial_particles = 0;
    /// Sensing-slab length override [m]; 0 uses the scenario rule.
    double slab_length = 0.0;
    /// Run the particle move kernel through OpenMP. Results are identical
    /// either way; the flag exists for the serial-reference comparison.
    bool parallel_move = true;
};

struct RunInfo {
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
};

struct SimOutput {
    TimeSeries n_bound;    // bound-receptor count after each step
    TimeSeries phi_local;  // sensing-slab concentration estimate [1/m^3]
    Counters counters;
    RunInfo info;
};

/// Initializes a replicate state (receptor layout, closed-box fill).
SimState make_state(const Scenario& s, std::uint64_t seed, const SimOptions& opt = {});

/// Advances one step dt: move free particles (OpenMP or serial reference,
/// identical results), absorb/compact at the outlet, inject the inlet flux
/// while t < T_p, then run the surface-reaction substep. Returns the
/// sensing-slab concentration used for binding this step.
double advance(SimState& st, const Scenario& s, const SimOptions& opt);

/// Full replicate: validates the timestep contract (k- dt < 0.1 and
/// u dt < L_s in open-channel mode), then composes advance() until t_end.
/// Deterministic for a fixed (scenario, seed) on any thread count.
SimOutput run(const Scenario& s, std::uint64_t seed, double t_end, const SimOptions& opt = {});

struct EnsembleResult {
    TimeSeries n_bound_mean, n_bound_std;
    TimeSeries phi_mean, phi_std;
    std::vector<SimOutput> replicates;
};

/// Independent replicates with derived seeds rng::replicate_key(master, i),
/// run in parallel (capped by MCFREQ_THREADS) and merged by index; the
/// result does not depend on the degree of parallelism. Standard deviations
/// are the sample std over replicates (0 for n = 1).
EnsembleResult ensemble(const Scenario& s, std::uint64_t master_seed, int n_replicates,
                        double t_end, const SimOptions& opt = {}, bool keep_outputs = true);

/// Replicate-level thread cap: MCFREQ_THREADS if set, else OpenMP default.
int ensemble_thread_cap(int n_replicates);

}  // namespace mcfreq::sim

#endif
