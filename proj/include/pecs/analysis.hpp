#pragma once

#include <atomic>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>

#include "pecs/codes.hpp"
#include "pecs/designers.hpp"

namespace pecs {

/**
 * Discrete ambiguity surface |sum_n x_n x_{n+k}^* e^{j 2 pi nu n}| / N over
 * integer delays k = -(N-1)..N-1 and normalized Dopplers nu (cycles/chip),
 * so the origin value is exactly 1 for unimodular sequences.
 */
struct AmbiguitySurface {
    std::vector<int> delays;
    rvec dopplers;
    std::vector<rvec> magnitude;  // magnitude[delay_index][doppler_index]

    double at(int delay, std::size_t doppler_index) const {
        const std::size_t n_half = delays.size() / 2;
        return magnitude[static_cast<std::size_t>(delay + static_cast<int>(n_half))][doppler_index];
    }
};

inline AmbiguitySurface ambiguity(const UnimodularSequence& x, const rvec& doppler_grid) {
    for (double nu : doppler_grid)
        if (!std::isfinite(nu)) throw std::invalid_argument("ambiguity: non-finite doppler");
    const int n = static_cast<int>(x.size());
    const cvec v = x.to_complex();

    AmbiguitySurface surf;
    surf.dopplers = doppler_grid;
    surf.delays.resize(2 * static_cast<std::size_t>(n) - 1);
    for (int k = -(n - 1); k <= n - 1; ++k) surf.delays[static_cast<std::size_t>(k + n - 1)] = k;
    surf.magnitude.assign(surf.delays.size(), rvec(doppler_grid.size(), 0.0));

    // Doppler rotations are shared across delays for one nu
    cvec rotated(static_cast<std::size_t>(n));
    for (std::size_t di = 0; di < doppler_grid.size(); ++di) {
        const double nu = doppler_grid[di];
        for (int i = 0; i < n; ++i) {
            const double a = kTwoPi * nu * static_cast<double>(i + 1);
            rotated[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] * cplx(std::cos(a), std::sin(a));
        }
        for (int k = -(n - 1); k <= n - 1; ++k) {
            cplx acc(0.0, 0.0);
            if (k >= 0) {
                for (int i = 0; i + k < n; ++i)
                    acc += rotated[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(i + k)]);
            } else {
                for (int i = -k; i < n; ++i)
                    acc += rotated[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(i + k)]);
            }
            surf.magnitude[static_cast<std::size_t>(k + n - 1)][di] = std::abs(acc) / static_cast<double>(n);
        }
    }
    return surf;
}

/**
 * Thumbtack criterion: away from the Doppler origin (|nu| >= min_abs_doppler)
 * the per-Doppler maximum over all delays stays at least `margin_db` below
 * the mainlobe.
 */
inline bool passes_thumbtack(const AmbiguitySurface& surf, double min_abs_doppler,
                             double margin_db = 10.0) {
    const double limit = std::pow(10.0, -margin_db / 20.0);
    bool checked = false;
    for (std::size_t di = 0; di < surf.dopplers.size(); ++di) {
        if (std::abs(surf.dopplers[di]) < min_abs_doppler) continue;
        checked = true;
        for (const auto& row : surf.magnitude)
            if (row[di] > limit) return false;
    }
    return checked;
}

/**
 * Ridge criterion: the delay of the per-Doppler maximum shifts monotonically
 * with nu (range-Doppler coupling), in either direction, with at most
 * `jitter_bins` of local backstep and at least `min_total_shift` bins of
 * total travel across the grid.
 */
inline bool passes_ridge(const AmbiguitySurface& surf, int jitter_bins = 1, int min_total_shift = 3) {
    if (surf.dopplers.size() < 3) throw std::invalid_argument("passes_ridge: need >= 3 dopplers");
    std::vector<int> peak_delay(surf.dopplers.size());
    for (std::size_t di = 0; di < surf.dopplers.size(); ++di) {
        double best = -1.0;
        for (std::size_t ki = 0; ki < surf.delays.size(); ++ki)
            if (surf.magnitude[ki][di] > best) {
                best = surf.magnitude[ki][di];
                peak_delay[di] = surf.delays[ki];
            }
    }
    const int total = peak_delay.back() - peak_delay.front();
    if (std::abs(total) < min_total_shift) return false;
    const int dir = total > 0 ? 1 : -1;
    for (std::size_t i = 1; i < peak_delay.size(); ++i)
        if (dir * (peak_delay[i] - peak_delay[i - 1]) < -jitter_bins) return false;
    return true;
}

/// Peak retention and sidelobe ratios of the matched filter under Doppler.
struct DopplerProfile {
    rvec nu_grid;
    rvec peak_loss_db;  // 20 log10(peak(nu)/peak(0)), 0 at nu = 0
    rvec pslr_db;
    rvec islr_db;
};

inline DopplerProfile doppler_sweep(const UnimodularSequence& x, double nu_max, int steps) {
    if (nu_max <= 0.0) throw std::invalid_argument("doppler_sweep: nu_max > 0 required");
    if (steps < 2) throw std::invalid_argument("doppler_sweep: steps >= 2 required");
    const std::size_t n = x.size();
    DopplerProfile prof;
    prof.nu_grid.resize(static_cast<std::size_t>(steps));
    prof.peak_loss_db.resize(static_cast<std::size_t>(steps));
    prof.pslr_db.resize(static_cast<std::size_t>(steps));
    prof.islr_db.resize(static_cast<std::size_t>(steps));

    for (int s = 0; s < steps; ++s) {
        const double nu = nu_max * static_cast<double>(s) / static_cast<double>(steps - 1);
        prof.nu_grid[static_cast<std::size_t>(s)] = nu;
        rvec shifted(n);
        for (std::size_t i = 0; i < n; ++i)
            shifted[i] = x.phases[i] + kTwoPi * nu * static_cast<double>(i + 1);
        const UnimodularSequence xs(shifted);

        // matched-filter response over all lags; the peak may migrate
        const cvec c = cross_correlation(xs, x);
        double peak = 0.0;
        for (const auto& v : c) peak = std::max(peak, std::abs(v));
        prof.peak_loss_db[static_cast<std::size_t>(s)] = db20(peak / static_cast<double>(n));

        // ratio metrics on the nonnegative-lag profile
        CorrelationProfile r;
        r.n = n;
        r.lags.assign(c.begin() + static_cast<std::ptrdiff_t>(n) - 1, c.end());
        const auto ratios = pslr_islr(r);
        prof.pslr_db[static_cast<std::size_t>(s)] = ratios.pslr_db;
        prof.islr_db[static_cast<std::size_t>(s)] = ratios.islr_db;
    }
    return prof;
}

/// One side of a Monte-Carlo interference pair.
struct GeneratorSpec {
    enum class Kind { Pecs, Chirp, RandomPhase, Code } kind = Kind::RandomPhase;
    int n = 100;

    // Pecs
    DesignerKind designer = DesignerKind::PECS;
    int q = 3;
    double p = 10.0;
    int m = 0;          // uniform block length when > 0
    int m_min = 0;      // random block range otherwise
    int m_max = 0;
    int iters = 400;

    // Chirp: quadratic coefficient rate_scale * pi / n with a random start
    // phase per trial; rate_scale 1 sweeps the full band over the sequence
    double rate_scale = 1.0;

    // Code: a fixed closed-form sequence (identical every trial)
    CodeSpec code;
};

inline UnimodularSequence generate_sequence(const GeneratorSpec& spec, std::uint64_t seed) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::Pecs: {
            DesignConfig cfg;
            cfg.n = spec.n;
            cfg.partition = spec.m > 0 ? PartitionSpec::uniform(spec.m)
                                       : PartitionSpec::random(spec.m_min, spec.m_max);
            cfg.q = spec.q;
            cfg.p = spec.p;
            cfg.designer = spec.designer;
            cfg.seed = seed;
            cfg.stopping.max_iters = spec.iters;
            return run_designer(cfg).x_final;
        }
        case GeneratorSpec::Kind::Chirp: {
            std::mt19937_64 gen(seed);
            const double a0 = rng::next_uniform(gen, 0.0, kTwoPi);
            const double a2 = spec.rate_scale * kPi / static_cast<double>(spec.n);
            rvec phases(static_cast<std::size_t>(spec.n));
            for (int m = 1; m <= spec.n; ++m)
                phases[static_cast<std::size_t>(m - 1)] = a0 + a2 * static_cast<double>(m) * m;
            return UnimodularSequence(std::move(phases));
        }
        case GeneratorSpec::Kind::RandomPhase:
            return random_unimodular(spec.n, seed);
        case GeneratorSpec::Kind::Code:
            return generate(spec.code);
    }
    throw std::invalid_argument("generate_sequence: bad kind");
}

struct InterferenceStats {
    int trials = 0;
    double bin_width_db = 0.25;
    rvec per_trial_db;                          // 20 log10(max|c_k| / N)
    std::vector<std::pair<double, int>> histogram;  // (bin center, count)
    double mean_db = 0.0;
    double center_db = 0.0;  // center of the most populated bin
};

namespace detail {

inline unsigned worker_count() {
    if (const char* env = std::getenv("PECS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace detail

/**
 * Max cross-correlation statistics over independent pairs. Trials run in
 * parallel with per-trial derived seeds and land in preallocated slots, so
 * the result is identical for any schedule or thread count.
 */
inline InterferenceStats interference_stats(const GeneratorSpec& gen_a, const GeneratorSpec& gen_b,
                                            int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("interference_stats: trials >= 1 required");
    InterferenceStats out;
    out.trials = trials;
    out.per_trial_db.resize(static_cast<std::size_t>(trials));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
            const auto xa = generate_sequence(gen_a, rng::derive_seed(seed, "stats-a", static_cast<std::uint64_t>(i)));
            const auto xb = generate_sequence(gen_b, rng::derive_seed(seed, "stats-b", static_cast<std::uint64_t>(i)));
            out.per_trial_db[static_cast<std::size_t>(i)] = db20(normalized_xcorr_peak(xa, xb));
        }
    };
    const unsigned workers = std::min<unsigned>(detail::worker_count(), static_cast<unsigned>(trials));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::map<long, int> bins;
    double mean = 0.0;
    for (double v : out.per_trial_db) {
        mean += v;
        ++bins[static_cast<long>(std::floor(v / out.bin_width_db))];
    }
    out.mean_db = mean / static_cast<double>(trials);
    int best = 0;
    for (const auto& [idx, count] : bins) {
        out.histogram.emplace_back((static_cast<double>(idx) + 0.5) * out.bin_width_db, count);
        if (count > best) {
            best = count;
            out.center_db = (static_cast<double>(idx) + 0.5) * out.bin_width_db;
        }
    }
    return out;
}

inline void write_ambiguity_csv(std::ostream& os, const AmbiguitySurface& surf) {
    os << "delay,doppler,mag_db\n";
    for (std::size_t ki = 0; ki < surf.delays.size(); ++ki)
        for (std::size_t di = 0; di < surf.dopplers.size(); ++di) {
            const double m = surf.magnitude[ki][di];
            os << surf.delays[ki] << ',' << surf.dopplers[di] << ',' << (m > 0.0 ? db20(m) : -300.0)
               << '\n';
        }
}

inline void write_doppler_csv(std::ostream& os, const DopplerProfile& prof) {
    os << "nu,peak_loss_db,pslr_db,islr_db\n";
    for (std::size_t i = 0; i < prof.nu_grid.size(); ++i)
        os << prof.nu_grid[i] << ',' << prof.peak_loss_db[i] << ',' << prof.pslr_db[i] << ','
           << prof.islr_db[i] << '\n';
}

inline void write_histogram_csv(std::ostream& os, const InterferenceStats& stats) {
    os << "bin_db,count\n";
    for (const auto& [center, count] : stats.histogram) os << center << ',' << count << '\n';
}

}  // namespace pecs
