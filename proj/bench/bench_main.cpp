// Kernel benchmark: OpenMP particle-move and DFT kernels against their
// serial reference implementations, plus one full stochastic replicate.

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mcfreq/analytic.hpp"
#include "mcfreq/scenario.hpp"
#include "mcfreq/simulator.hpp"
#include "mcfreq/spectral.hpp"

using namespace mcfreq;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void bench_move_kernel() {
    Scenario s = table_default_scenario();
    s.geometry.length = 1.0;
    s.geometry.width = 1.0;
    s.geometry.height = 1.0;
    s.geometry.receiver_position = 0.5;
    s.receptors.patch_origin = 0.4;
    s.receptors.patch_extent_x = 0.1;
    s.receptors.patch_extent_y = 0.1;
    s.ligand.binding_rate = 0.0;
    s.input.amplitude = 0.0;
    s.sensing_slab = 0.01;

    const std::size_t n = 200000;
    const int steps = 50;

    for (bool parallel : {false, true}) {
        sim::SimState st = sim::make_state(s, 1, {});
        st.px.assign(n, 0.5);
        st.py.assign(n, 0.5);
        st.pz.assign(n, 0.5);
        st.pid.resize(n);
        for (std::size_t i = 0; i < n; ++i) st.pid[i] = i;
        st.counters.injected = n;
        sim::SimOptions opt;
        opt.parallel_move = parallel;

        const auto t0 = clock_type::now();
        for (int i = 0; i < steps; ++i) (void)sim::advance(st, s, opt);
        const double dt = seconds_since(t0);
        std::printf("move kernel (%s): %7.1f ns/particle-step  (%.3f s total)\n",
                    parallel ? "openmp" : "serial",
                    dt / static_cast<double>(n) / steps * 1e9, dt);
    }
}

void bench_dft() {
    const Scenario s = table_default_scenario();
    const auto drive = analytic::received_concentration_series(s, s.sim_timestep, 4000);

    {
        const auto t0 = clock_type::now();
        const auto spec = spectral::dft_spectrum_serial(drive);
        const double dt = seconds_since(t0);
        std::printf("dft reference (serial): %.3f s for %zu^2 terms (|X(0)|=%.3g)\n", dt,
                    drive.size(), std::abs(spec.values[0]));
    }
    {
        const auto t0 = clock_type::now();
        const auto spec = spectral::dft_spectrum(drive);
        const double dt = seconds_since(t0);
        std::printf("dft kernel (openmp):    %.3f s for %zu^2 terms (|X(0)|=%.3g)\n", dt,
                    drive.size(), std::abs(spec.values[0]));
    }
}

void bench_replicate() {
    const Scenario s = table_default_scenario();
    const auto t0 = clock_type::now();
    const auto out = sim::run(s, 99, 0.2);
    const double dt = seconds_since(t0);
    std::printf("full replicate (0.2 s simulated): %.3f s wall, %llu injected, %llu binds\n", dt,
                static_cast<unsigned long long>(out.counters.injected),
                static_cast<unsigned long long>(out.counters.bind_events));
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("openmp not available; parallel kernels run serially\n");
#endif
    bench_move_kernel();
    bench_dft();
    bench_replicate();
    return 0;
}
