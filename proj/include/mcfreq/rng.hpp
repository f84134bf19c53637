#ifndef MCFREQ_RNG_HPP
#define MCFREQ_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace mcfreq::rng {

// Counter-based random numbers built on Philox4x32-10 (Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3"). Every draw is a pure
// function of (key, counter), so particle updates can run in any order and
// on any number of threads without changing the result. The 128-bit counter
// is laid out as (id_lo, id_hi, step, stream).

struct Block {
    std::uint32_t w[4];
};

namespace detail {

inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t c1 = c[1];
    const std::uint32_t c3 = c[3];
    c[0] = hi1 ^ c1 ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ c3 ^ k1;
    c[3] = lo0;
}

}  // namespace detail

inline Block philox(std::uint64_t key, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                    std::uint32_t c3) {
    std::uint32_t c[4] = {c0, c1, c2, c3};
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int r = 0; r < 10; ++r) {
        detail::round_once(c, k0, k1);
        k0 += detail::kWeyl0;
        k1 += detail::kWeyl1;
    }
    return Block{{c[0], c[1], c[2], c[3]}};
}

/// SplitMix64 finalizer; also used to derive per-replicate keys:
/// key_i = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t replicate_key(std::uint64_t master_seed, std::uint64_t replicate) {
    return splitmix64(master_seed + replicate * 0x9E3779B97F4A7C15ull);
}

/// Uniform in (0, 1), never exactly 0 or 1 (safe under log / inverse CDF).
inline double uniform_open(std::uint32_t word) {
    return (static_cast<double>(word) + 0.5) * 0x1.0p-32;
}

inline double uniform64(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t v = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

/// Inverse standard-normal CDF (Acklam's rational approximation,
/// |relative error| < 1.2e-9 — far below the statistical resolution of any
/// ensemble this toolkit runs).
inline double inverse_normal_cdf(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Stream selectors keeping every (key, counter) pair unique per step.
enum class Stream : std::uint32_t {
    move = 0,      // per particle id: 3 normals
    inject = 1,    // per particle id: 3 position uniforms
    unbind = 2,    // per receptor index
    bind = 3,      // per receptor index
    pick = 4,      // per receptor index: slab particle choice
    init = 5,      // per particle id: closed-box uniform fill
};

/// Three standard normals for particle `id` at step `step`.
inline std::array<double, 3> normals3(std::uint64_t key, std::uint32_t step, std::uint64_t id) {
    const Block blk = philox(key, static_cast<std::uint32_t>(id),
                             static_cast<std::uint32_t>(id >> 32), step,
                             static_cast<std::uint32_t>(Stream::move));
    return {inverse_normal_cdf(uniform_open(blk.w[0])),
            inverse_normal_cdf(uniform_open(blk.w[1])),
            inverse_normal_cdf(uniform_open(blk.w[2]))};
}

/// Three uniforms in (0,1) for positioning particle `id`.
inline std::array<double, 3> uniforms3(std::uint64_t key, std::uint32_t step, std::uint64_t id,
                                       Stream stream) {
    const Block blk = philox(key, static_cast<std::uint32_t>(id),
                             static_cast<std::uint32_t>(id >> 32), step,
                             static_cast<std::uint32_t>(stream));
    return {uniform_open(blk.w[0]), uniform_open(blk.w[1]), uniform_open(blk.w[2])};
}

/// One uniform in (0,1) for receptor `index`.
inline double receptor_uniform(std::uint64_t key, std::uint32_t step, std::uint32_t index,
                               Stream stream) {
    const Block blk = philox(key, index, 0, step, static_cast<std::uint32_t>(stream));
    return uniform_open(blk.w[0]);
}

/// Uniform integer in [0, n) for receptor `index` (slab particle choice).
inline std::uint64_t receptor_pick(std::uint64_t key, std::uint32_t step, std::uint32_t index,
                                   std::uint64_t n) {
    const Block blk = philox(key, index, 0, step, static_cast<std::uint32_t>(Stream::pick));
    const std::uint64_t v = (static_cast<std::uint64_t>(blk.w[0]) << 32) | blk.w[1];
    return v % n;
}

}  // namespace mcfreq::rng

#endif
