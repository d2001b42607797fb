#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pecs {

inline constexpr const char* kVersion = "0.1.0";

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Power quantities (ISL, PSL as used in optimizer logs).
inline double db10(double x) {
    return 10.0 * std::log10(x);
}

/// Amplitude-ratio quantities (PSLR/ISLR, cross-correlation levels).
inline double db20(double x) {
    return 20.0 * std::log10(x);
}

/// Raised by iterative solvers when an intermediate quantity stops being finite.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by file readers/writers.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/**
 * Derives a child seed from (master seed, component label, index).
 *
 * All randomness in the toolkit flows from one master seed through this
 * function, so independent trials/components get decorrelated streams and a
 * partial re-run of any component reproduces the full-run values.
 */
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(master ^ h) ^ index);
}

/// Uniform double in [0, 1) from the top 53 bits; identical across platforms.
inline double next_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double next_uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * next_unit(gen);
}

/// Uniform integer in [lo, hi] without std::uniform_int_distribution
/// (whose output is implementation-defined).
inline std::int64_t next_int(std::mt19937_64& gen, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1ULL;
    return lo + static_cast<std::int64_t>(gen() % span);
}

}  // namespace rng

}  // namespace pecs
