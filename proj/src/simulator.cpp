#include "mcfreq/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mcfreq/rng.hpp"

namespace mcfreq::sim {

namespace {

/// Fold a coordinate into [0, limit] by specular reflection.
inline double reflect_into(double v, double limit) {
    while (v < 0.0 || v > limit) {
        if (v < 0.0) v = -v;
        if (v > limit) v = 2.0 * limit - v;
    }
    return v;
}

struct MoveParams {
    double advection;   // u dt (0 in closed-box mode)
    double sigma;       // sqrt(2 D dt)
    double len, wid, hei;
    bool closed;
};

/// Per-particle displacement; a pure function of (key, step, id), so the
/// loop order and thread count cannot change the outcome.
inline bool move_particle(double& x, double& y, double& z, std::uint64_t id,
                          std::uint64_t key, std::uint32_t step, const MoveParams& mp) {
    const auto xi = rng::normals3(key, step, id);
    x += mp.advection + mp.sigma * xi[0];
    y += mp.sigma * xi[1];
    z += mp.sigma * xi[2];
    if (mp.closed) {
        x = reflect_into(x, mp.len);
    } else {
        if (x < 0.0) x = -x;
        if (x >= mp.len) return false;  // absorbed at the open outlet
    }
    y = reflect_into(y, mp.wid);
    z = reflect_into(z, mp.hei);
    return true;
}

void layout_receptors(SimState& st, const Scenario& s) {
    const std::size_t n = static_cast<std::size_t>(s.receptors.count);
    const double ex = s.receptors.patch_extent_x;
    const double ey = s.receptors.patch_extent_y;
    const double x0 = s.receptors.patch_origin;
    const double y0 = 0.5 * (s.geometry.width - ey);
    // Near-square grid over the patch, row-major, cell centers.
    std::size_t cols = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(n) * ex / std::max(ey, 1e-30))));
    cols = std::max<std::size_t>(cols, 1);
    const std::size_t rows = (n + cols - 1) / cols;
    st.rx.resize(n);
    st.ry.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cx = i % cols;
        const std::size_t cy = i / cols;
        st.rx[i] = x0 + (static_cast<double>(cx) + 0.5) * ex / static_cast<double>(cols);
        st.ry[i] = y0 + (static_cast<double>(cy) + 0.5) * ey / static_cast<double>(rows);
    }
    st.bound_id.assign(n, kUnbound);
    st.bound_count = 0;
}

}  // namespace

SimState make_state(const Scenario& s, std::uint64_t seed, const SimOptions& opt) {
    SimState st;
    st.key = rng::splitmix64(seed);
    layout_receptors(st, s);
    if (opt.boundary == SimOptions::Boundary::closed_box && opt.initial_particles > 0) {
        const std::uint64_t n = opt.initial_particles;
        st.px.reserve(n);
        st.py.reserve(n);
        st.pz.reserve(n);
        st.pid.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto u = rng::uniforms3(st.key, 0, i, rng::Stream::init);
            st.px.push_back(u[0] * s.geometry.length);
            st.py.push_back(u[1] * s.geometry.width);
            st.pz.push_back(u[2] * s.geometry.height);
            st.pid.push_back(i);
        }
        st.next_id = n;
        st.counters.injected = n;
    }
    return st;
}

double advance(SimState& st, const Scenario& s, const SimOptions& opt) {
    const double dt = s.sim_timestep;
    const bool closed = opt.boundary == SimOptions::Boundary::closed_box;
    MoveParams mp;
    mp.advection = closed ? 0.0 : s.flow.velocity * dt;
    mp.sigma = std::sqrt(2.0 * s.ligand.diffusion * dt);
    mp.len = s.geometry.length;
    mp.wid = s.geometry.width;
    mp.hei = s.geometry.height;
    mp.closed = closed;

    const std::size_t n_free = st.free_count();
    static thread_local std::vector<std::uint8_t> alive;
    alive.assign(n_free, 1);

    // 1. Move every free particle.
    if (opt.parallel_move) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long i = 0; i < static_cast<long long>(n_free); ++i) {
            const auto k = static_cast<std::size_t>(i);
            if (!move_particle(st.px[k], st.py[k], st.pz[k], st.pid[k], st.key, st.step, mp))
                alive[k] = 0;
        }
    } else {
        for (std::size_t k = 0; k < n_free; ++k) {
            if (!move_particle(st.px[k], st.py[k], st.pz[k], st.pid[k], st.key, st.step, mp))
                alive[k] = 0;
        }
    }

    // 2. Compact absorbed particles out, preserving order.
    std::size_t w = 0;
    for (std::size_t k = 0; k < n_free; ++k) {
        if (!alive[k]) {
            ++st.counters.exited;
            continue;
        }
        if (w != k) {
            st.px[w] = st.px[k];
            st.py[w] = st.py[k];
            st.pz[w] = st.pz[k];
            st.pid[w] = st.pid[k];
        }
        ++w;
    }
    st.px.resize(w);
    st.py.resize(w);
    st.pz.resize(w);
    st.pid.resize(w);

    // 3. Inject the inlet flux for the part of this step inside [0, T_p].
    // The window is telescoped so the per-step durations sum to exactly
    // min(T_p, t) in floating point and no fractional particle is stranded.
    if (!closed) {
        const double step_start = static_cast<double>(st.step) * dt;
        const double step_end = static_cast<double>(st.step + 1) * dt;
        const double window =
            std::min(s.input.width, step_end) - std::min(s.input.width, step_start);
        if (window > 0.0) {
            const double rate = s.input.amplitude * s.geometry.height * s.geometry.width *
                                s.flow.velocity;
            st.injection_residual += rate * window;
            const double whole = std::floor(st.injection_residual);
            st.injection_residual -= whole;
            const auto count = static_cast<std::uint64_t>(whole);
            for (std::uint64_t i = 0; i < count; ++i) {
                const std::uint64_t id = st.next_id++;
                const auto u = rng::uniforms3(st.key, st.step, id, rng::Stream::inject);
                st.px.push_back(u[0] * s.flow.velocity * window);
                st.py.push_back(u[1] * s.geometry.width);
                st.pz.push_back(u[2] * s.geometry.height);
                st.pid.push_back(id);
            }
            st.counters.injected += count;
        }
    }

    // 4. Surface reactions: unbinding first, then slab estimate and binding.
    const double p_unbind = 1.0 - std::exp(-s.ligand.unbinding_rate * dt);
    const std::size_t n_rec = st.bound_id.size();
    const double reentry_z = std::min(mp.sigma, s.geometry.height);
    for (std::size_t r = 0; r < n_rec; ++r) {
        if (st.bound_id[r] == kUnbound) continue;
        const double u = rng::receptor_uniform(st.key, st.step, static_cast<std::uint32_t>(r),
                                               rng::Stream::unbind);
        if (u < p_unbind) {
            st.px.push_back(st.rx[r]);
            st.py.push_back(st.ry[r]);
            st.pz.push_back(reentry_z);
            st.pid.push_back(st.bound_id[r]);
            st.bound_id[r] = kUnbound;
            --st.bound_count;
            ++st.counters.unbind_events;
        }
    }

    const double slab_len = opt.slab_length > 0.0 ? opt.slab_length : s.sensing_slab_length();
    const double slab_lo = s.geometry.receiver_position - 0.5 * slab_len;
    const double slab_hi = s.geometry.receiver_position + 0.5 * slab_len;
    const double slab_volume = slab_len * s.geometry.width * s.geometry.height;

    static thread_local std::vector<std::uint32_t> slab;
    slab.clear();
    for (std::size_t k = 0; k < st.free_count(); ++k) {
        if (st.px[k] >= slab_lo && st.px[k] < slab_hi) slab.push_back(static_cast<std::uint32_t>(k));
    }
    const double phi_local = static_cast<double>(slab.size()) / slab_volume;

    if (s.ligand.binding_rate > 0.0 && !slab.empty()) {
        const double p_bind = 1.0 - std::exp(-s.ligand.binding_rate * phi_local * dt);
        static thread_local std::vector<std::uint32_t> removed;
        removed.clear();
        for (std::size_t r = 0; r < n_rec; ++r) {
            if (st.bound_id[r] != kUnbound) continue;
            const double u = rng::receptor_uniform(st.key, st.step, static_cast<std::uint32_t>(r),
                                                   rng::Stream::bind);
            if (u >= p_bind) continue;
            if (slab.empty()) {
                ++st.counters.capped_bind_attempts;
                continue;
            }
            const std::uint64_t j =
                rng::receptor_pick(st.key, st.step, static_cast<std::uint32_t>(r), slab.size());
            const std::uint32_t k = slab[static_cast<std::size_t>(j)];
            slab[static_cast<std::size_t>(j)] = slab.back();
            slab.pop_back();
            st.bound_id[r] = st.pid[k];
            ++st.bound_count;
            ++st.counters.bind_events;
            removed.push_back(k);
        }
        if (!removed.empty()) {
            std::sort(removed.begin(), removed.end());
            std::size_t out = removed[0];
            std::size_t next = 0;
            for (std::size_t k = removed[0]; k < st.free_count(); ++k) {
                if (next < removed.size() && removed[next] == k) {
                    ++next;
                    continue;
                }
                st.px[out] = st.px[k];
                st.py[out] = st.py[k];
                st.pz[out] = st.pz[k];
                st.pid[out] = st.pid[k];
                ++out;
            }
            st.px.resize(out);
            st.py.resize(out);
            st.pz.resize(out);
            st.pid.resize(out);
        }
    }

    ++st.step;
    st.t = static_cast<double>(st.step) * dt;

    if (st.counters.injected != st.free_count() + st.bound_count + st.counters.exited) {
        throw std::logic_error("particle conservation violated");
    }
    return phi_local;
}

namespace {

void validate_run_contract(const Scenario& s, double t_end, const SimOptions& opt) {
    const double dt = s.sim_timestep;
    if (!(dt > 0.0)) throw std::domain_error("simulation timestep must be > 0");
    if (s.ligand.unbinding_rate * dt >= 0.1) {
        throw std::domain_error("timestep too coarse: k- dt must stay below 0.1");
    }
    if (opt.boundary == SimOptions::Boundary::open_channel) {
        const double slab = opt.slab_length > 0.0 ? opt.slab_length : s.sensing_slab_length();
        if (s.flow.velocity * dt >= slab) {
            throw std::domain_error("timestep too coarse: u dt must stay below the sensing slab");
        }
    }
    if (!(t_end > 0.0)) throw std::domain_error("t_end must be > 0");
}

}  // namespace

SimOutput run(const Scenario& s, std::uint64_t seed, double t_end, const SimOptions& opt) {
    validate_run_contract(s, t_end, opt);
    const double dt = s.sim_timestep;

    const auto t_begin = std::chrono::steady_clock::now();
    SimState st = make_state(s, seed, opt);
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));

    SimOutput out;
    out.n_bound.t0 = dt;
    out.n_bound.dt = dt;
    out.n_bound.values.reserve(steps);
    out.phi_local.t0 = dt;
    out.phi_local.dt = dt;
    out.phi_local.values.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double phi = advance(st, s, opt);
        out.n_bound.values.push_back(static_cast<double>(st.bound_count));
        out.phi_local.values.push_back(phi);
    }
    out.counters = st.counters;
    out.info.seed = seed;
    out.info.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return out;
}

int ensemble_thread_cap(int n_replicates) {
    int cap = n_replicates;
#ifdef _OPENMP
    cap = std::min(cap, omp_get_max_threads());
#else
    cap = 1;
#endif
    if (const char* env = std::getenv("MCFREQ_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) cap = std::min(cap, v);
    }
    return std::max(cap, 1);
}

EnsembleResult ensemble(const Scenario& s, std::uint64_t master_seed, int n_replicates,
                        double t_end, const SimOptions& opt, bool keep_outputs) {
    if (n_replicates < 1) throw std::invalid_argument("n_replicates must be >= 1");

    std::vector<SimOutput> outs(static_cast<std::size_t>(n_replicates));
    SimOptions rep_opt = opt;
    rep_opt.parallel_move = false;  // parallelism lives at the replicate level here
    validate_run_contract(s, t_end, rep_opt);

    // Exceptions cannot unwind out of an OpenMP region; capture and rethrow.
    std::exception_ptr failure;
    const int threads = ensemble_thread_cap(n_replicates);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int i = 0; i < n_replicates; ++i) {
        try {
            outs[static_cast<std::size_t>(i)] = run(
                s, rng::replicate_key(master_seed, static_cast<std::uint64_t>(i)), t_end, rep_opt);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    (void)threads;
    if (failure) std::rethrow_exception(failure);

    const std::size_t len = outs.front().n_bound.size();
    EnsembleResult res;
    auto init_like = [&](TimeSeries& ts) {
        ts.t0 = outs.front().n_bound.t0;
        ts.dt = outs.front().n_bound.dt;
        ts.values.assign(len, 0.0);
    };
    init_like(res.n_bound_mean);
    init_like(res.n_bound_std);
    init_like(res.phi_mean);
    init_like(res.phi_std);

    const double n = static_cast<double>(n_replicates);
    for (std::size_t i = 0; i < len; ++i) {
        double sum_nb = 0.0, sum_phi = 0.0;
        for (const auto& o : outs) {
            sum_nb += o.n_bound.values[i];
            sum_phi += o.phi_local.values[i];
        }
        const double m_nb = sum_nb / n;
        const double m_phi = sum_phi / n;
        res.n_bound_mean.values[i] = m_nb;
        res.phi_mean.values[i] = m_phi;
        if (n_replicates > 1) {
            double ss_nb = 0.0, ss_phi = 0.0;
            for (const auto& o : outs) {
                const double d1 = o.n_bound.values[i] - m_nb;
                const double d2 = o.phi_local.values[i] - m_phi;
                ss_nb += d1 * d1;
                ss_phi += d2 * d2;
            }
            res.n_bound_std.values[i] = std::sqrt(ss_nb / (n - 1.0));
            res.phi_std.values[i] = std::sqrt(ss_phi / (n - 1.0));
        }
    }
    if (keep_outputs) res.replicates = std::move(outs);
    return res;
}

}  // namespace mcfreq::sim
