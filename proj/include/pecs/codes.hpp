#pragma once

#include <numeric>

#include "pecs/metrics.hpp"
#include "pecs/seqcore.hpp"

namespace pecs {

enum class CodeKind { Frank, P1, P2, Px, P4, Zadoff, Golomb };

inline const char* code_kind_name(CodeKind k) {
    switch (k) {
        case CodeKind::Frank: return "frank";
        case CodeKind::P1: return "p1";
        case CodeKind::P2: return "p2";
        case CodeKind::Px: return "px";
        case CodeKind::P4: return "p4";
        case CodeKind::Zadoff: return "zadoff";
        case CodeKind::Golomb: return "golomb";
    }
    return "?";
}

/**
 * Chirplike polyphase code request.
 *
 * Frank/P1/Px take the side length L and produce N = L^2 samples; P2, P4,
 * Zadoff and Golomb take the length M directly. Zadoff additionally takes the
 * root r (coprime with M) and integer offset q in [0, M]; Golomb takes the
 * coprime root r''. A Chu code is a Zadoff code with q = 0.
 */
struct CodeSpec {
    CodeKind kind = CodeKind::Frank;
    int l = 0;   // Frank/P1/Px side
    int m = 0;   // P2/P4/Zadoff/Golomb length
    int r = 1;   // Zadoff/Golomb root
    int q = 0;   // Zadoff offset

    std::size_t length() const {
        switch (kind) {
            case CodeKind::Frank:
            case CodeKind::P1:
            case CodeKind::Px:
                return static_cast<std::size_t>(l) * static_cast<std::size_t>(l);
            default:
                return static_cast<std::size_t>(m);
        }
    }
};

namespace detail {

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline bool coprime(int a, int b) {
    return std::gcd(a, b) == 1;
}

}  // namespace detail

/**
 * Evaluates the closed-form phase expressions. Two-index codes are flattened
 * row-major with n as the slow index and k as the fast one, which reproduces
 * the staircase-quadratic unwrapped phase of the Frank family.
 */
inline UnimodularSequence generate(const CodeSpec& spec) {
    using detail::require;
    rvec phases;
    switch (spec.kind) {
        case CodeKind::Frank: {
            require(spec.l >= 2, "frank: L >= 2 required (length is L^2)");
            const double L = spec.l;
            for (int n = 1; n <= spec.l; ++n)
                for (int k = 1; k <= spec.l; ++k)
                    phases.push_back(kTwoPi * static_cast<double>((n - 1) * (k - 1)) / L);
            break;
        }
        case CodeKind::P1: {
            require(spec.l >= 2, "p1: L >= 2 required (length is L^2)");
            const double L = spec.l;
            for (int n = 1; n <= spec.l; ++n)
                for (int k = 1; k <= spec.l; ++k)
                    phases.push_back(kTwoPi / L * ((L + 1.0) / 2.0 - n) * ((n - 1.0) * L + (k - 1.0)));
            break;
        }
        case CodeKind::Px: {
            require(spec.l >= 2, "px: L >= 2 required (length is L^2)");
            const double L = spec.l;
            const bool even = spec.l % 2 == 0;
            for (int n = 1; n <= spec.l; ++n)
                for (int k = 1; k <= spec.l; ++k) {
                    const double a = even ? (L + 1.0) / 2.0 - k : L / 2.0 - k;
                    phases.push_back(kTwoPi / L * a * ((L + 1.0) / 2.0 - n));
                }
            break;
        }
        case CodeKind::P2: {
            require(spec.m >= 2, "p2: M >= 2 required");
            const double M = spec.m;
            for (int m = 1; m <= spec.m; ++m)
                phases.push_back(kTwoPi / M * (static_cast<double>(m - 1) * (m - 1) / 2.0));
            break;
        }
        case CodeKind::P4: {
            require(spec.m >= 2, "p4: M >= 2 required");
            const double M = spec.m;
            for (int m = 1; m <= spec.m; ++m)
                phases.push_back(kTwoPi / M * (m - 1.0) * ((m - 1.0 - M) / 2.0));
            break;
        }
        case CodeKind::Zadoff: {
            require(spec.m >= 2, "zadoff: M >= 2 required");
            require(detail::coprime(spec.r, spec.m), "zadoff: gcd(r, M) = 1 required");
            require(spec.q >= 0 && spec.q <= spec.m, "zadoff: 0 <= q <= M required");
            // (2 pi / M) (m-1) [r (M-1-m)/2 - q] with the half-integer kept
            // exact: phase = (pi / M) * (m-1) * [r (M-1-m) - 2q]
            for (int m = 1; m <= spec.m; ++m) {
                const std::int64_t num = static_cast<std::int64_t>(m - 1) *
                                         (static_cast<std::int64_t>(spec.r) * (spec.m - 1 - m) -
                                          2 * static_cast<std::int64_t>(spec.q));
                phases.push_back(kPi / spec.m * static_cast<double>(num));
            }
            break;
        }
        case CodeKind::Golomb: {
            require(spec.m >= 2, "golomb: M >= 2 required");
            require(detail::coprime(spec.r, spec.m), "golomb: gcd(r'', M) = 1 required");
            for (int m = 1; m <= spec.m; ++m) {
                const std::int64_t tri = static_cast<std::int64_t>(m - 1) * m / 2;
                phases.push_back(kTwoPi / spec.m * static_cast<double>(spec.r) * static_cast<double>(tri));
            }
            break;
        }
    }
    return UnimodularSequence(std::move(phases));
}

/// Sidelobe metrics of a generated code (FFT correlation path).
inline SidelobeMetrics reference_metrics(const CodeSpec& spec, double p = 2.0) {
    return sidelobe_metrics(autocorr_fft(generate(spec)), p);
}

}  // namespace pecs
