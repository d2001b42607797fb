#pragma once

#include "pecs/analysis.hpp"

namespace pecs {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kBoltzmannDbmHz = -174.0;  // thermal floor at 290 K

enum class VictimKind { FMCW, PMCW };
enum class WindowKind { Rect, Hann, Hamming };

struct TargetSpec {
    double range_m = 30.0;
    double speed_mps = 5.56;
    double rcs_dbsm = 10.0;
};

/// What an interfering sensor transmits (same carrier, own timing).
struct InterfererWaveform {
    enum class Kind { Fmcw, Pmcw } kind = Kind::Fmcw;
    double bandwidth_hz = 150e6;  // FMCW sweep
    GeneratorSpec code;           // PMCW code generator (seeded per interferer)
};

struct InterfererSpec {
    double range_m = 50.0;
    double speed_mps = 11.11;
    InterfererWaveform waveform;
};

/**
 * Complex-baseband scenario at sample rate 1/chip_s. FMCW victims are
 * simulated pre-dechirp on the same grid (the sweep bandwidth must not
 * exceed the sample rate); PMCW victims transmit code chips of one sample
 * each, idle for the remainder of the pulse.
 */
struct ScenarioConfig {
    VictimKind victim = VictimKind::PMCW;
    double carrier_hz = 79e9;
    double bandwidth_hz = 150e6;
    double pulse_s = 60e-6;
    double prf_hz = 16.66e3;
    int pulses = 256;
    double chip_s = 6.66e-9;
    int code_len = 4500;
    double tx_power_dbm = 12.0;
    double antenna_gain_db = 10.0;
    double noise_figure_db = 10.0;
    std::vector<TargetSpec> targets;
    std::vector<InterfererSpec> interferers;
    std::uint64_t seed = 1;

    GeneratorSpec victim_code;          // PMCW victim code generator
    WindowKind fast_window = WindowKind::Hann;  // FMCW range window
    WindowKind slow_window = WindowKind::Hann;  // Doppler window
    int if_decim = 4;                   // FMCW de-chirped IF keeps fs/if_decim
    bool intra_pulse_doppler = false;   // apply Doppler inside the pulse too

    double sample_rate() const { return 1.0 / chip_s; }
    double pri_s() const { return 1.0 / prf_hz; }
    int fast_samples() const { return static_cast<int>(std::llround(pri_s() * sample_rate())); }
    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    void validate() const {
        if (pulses < 1 || code_len < 1) throw std::invalid_argument("scenario: pulses/code_len >= 1");
        if (chip_s <= 0.0 || pulse_s <= 0.0 || prf_hz <= 0.0)
            throw std::invalid_argument("scenario: timing must be positive");
        if (static_cast<double>(code_len) * chip_s > pulse_s * (1.0 + 1e-9))
            throw std::invalid_argument("scenario: code must fit inside the pulse");
        if (prf_hz > 1.0 / pulse_s * (1.0 + 1e-9))
            throw std::invalid_argument("scenario: PRI shorter than the pulse");
        if (victim == VictimKind::FMCW && bandwidth_hz > sample_rate() * (1.0 + 1e-9))
            throw std::invalid_argument("scenario: FMCW sweep exceeds the sample rate");
    }

    /// 1/10-scale profile that preserves the time-bandwidth ratios of the
    /// full-scale parameter set; every check runs in seconds at this size.
    static ScenarioConfig desk_default() {
        ScenarioConfig cfg;
        cfg.code_len = 450;
        cfg.pulses = 64;
        cfg.chip_s = 66.6e-9;
        cfg.bandwidth_hz = 1.0 / cfg.chip_s;
        cfg.victim_code.kind = GeneratorSpec::Kind::Pecs;
        cfg.victim_code.n = 450;
        cfg.victim_code.m_min = 5;
        cfg.victim_code.m_max = 20;
        cfg.victim_code.q = 2;
        cfg.victim_code.p = 10.0;
        cfg.victim_code.iters = 500;
        cfg.targets.push_back({30.0, 20.0 / 3.6, 10.0});
        return cfg;
    }
};

/// pulses x fast-time complex samples, row-major.
struct BasebandFrame {
    int pulses = 0;
    int n_fast = 0;
    double fs = 0.0;
    cvec data;

    cplx& at(int pulse, int n) { return data[static_cast<std::size_t>(pulse) * n_fast + n]; }
    const cplx& at(int pulse, int n) const {
        return data[static_cast<std::size_t>(pulse) * n_fast + n];
    }
};

struct RangeDopplerMap {
    rvec range_axis_m;
    rvec velocity_axis_mps;
    std::vector<rvec> power_db;  // [range][doppler], Doppler axis fftshifted
    double noise_bandwidth_hz = 0.0;

    std::pair<int, int> peak_cell() const {
        int br = 0, bd = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < power_db.size(); ++r)
            for (std::size_t d = 0; d < power_db[r].size(); ++d)
                if (power_db[r][d] > best) {
                    best = power_db[r][d];
                    br = static_cast<int>(r);
                    bd = static_cast<int>(d);
                }
        return {br, bd};
    }
};

namespace detail {

inline double window_value(WindowKind kind, int i, int n) {
    switch (kind) {
        case WindowKind::Rect: return 1.0;
        case WindowKind::Hann:
            return 0.5 - 0.5 * std::cos(kTwoPi * i / (n - 1));
        case WindowKind::Hamming:
            return 0.54 - 0.46 * std::cos(kTwoPi * i / (n - 1));
    }
    return 1.0;
}

inline double dbm_to_amplitude(double dbm) {
    return std::pow(10.0, dbm / 20.0);  // amplitude in sqrt(mW)
}

/// Deterministic complex Gaussian via Box-Muller on the portable uniform.
inline cplx complex_gaussian(std::mt19937_64& gen, double sigma2) {
    const double u1 = std::max(rng::next_unit(gen), 1e-300);
    const double u2 = rng::next_unit(gen);
    const double mag = std::sqrt(-sigma2 * std::log(u1));
    return std::polar(mag, kTwoPi * u2);
}

/// Two-way received power of a point target (radar equation), in dBm.
inline double target_rx_dbm(const ScenarioConfig& cfg, const TargetSpec& t) {
    const double lam = cfg.wavelength();
    const double sigma = std::pow(10.0, t.rcs_dbsm / 10.0);
    const double factor = lam * lam * sigma /
                          (std::pow(4.0 * kPi, 3.0) * std::pow(t.range_m, 4.0));
    return cfg.tx_power_dbm + 2.0 * cfg.antenna_gain_db + db10(factor);
}

/// One-way direct-path power from an interfering sensor, in dBm.
inline double interferer_rx_dbm(const ScenarioConfig& cfg, const InterfererSpec& i) {
    const double lam = cfg.wavelength();
    const double factor = lam * lam / std::pow(4.0 * kPi * i.range_m, 2.0);
    return cfg.tx_power_dbm + 2.0 * cfg.antenna_gain_db + db10(factor);
}

/// Noise power per complex sample over the sampled band, linear mW.
inline double noise_power_mw(const ScenarioConfig& cfg) {
    return std::pow(10.0, (kBoltzmannDbmHz + db10(cfg.sample_rate()) + cfg.noise_figure_db) / 10.0);
}

/// Transmit-waveform phase of an interferer at global time t (its own clock).
/// Returns false while the interferer is idle (between pulse end and PRI).
inline bool interferer_sample(const InterfererWaveform& w, const ScenarioConfig& cfg,
                              const cvec& code, double t, cplx* out) {
    const double pri = cfg.pri_s();
    double tau = std::fmod(t, pri);
    if (tau < 0.0) tau += pri;
    if (w.kind == InterfererWaveform::Kind::Fmcw) {
        if (tau >= cfg.pulse_s) return false;
        const double phase = kPi * (w.bandwidth_hz / cfg.pulse_s) * tau * tau;
        *out = cplx(std::cos(phase), std::sin(phase));
        return true;
    }
    const auto chip = static_cast<std::size_t>(tau / cfg.chip_s);
    if (chip >= code.size()) return false;
    *out = code[chip];
    return true;
}

}  // namespace detail

/// The PMCW victim's own code, derived deterministically from the seed.
inline UnimodularSequence victim_code(const ScenarioConfig& cfg) {
    GeneratorSpec spec = cfg.victim_code;
    spec.n = cfg.code_len;
    return generate_sequence(spec, rng::derive_seed(cfg.seed, "victim-code"));
}

/// Transmit frame of the FMCW victim: one linear sweep of bandwidth B over
/// the pulse per PRI, phase pi (B/T) t^2, idle after pulse_s.
inline BasebandFrame synth_fmcw(const ScenarioConfig& cfg) {
    cfg.validate();
    BasebandFrame frame;
    frame.pulses = cfg.pulses;
    frame.n_fast = cfg.fast_samples();
    frame.fs = cfg.sample_rate();
    frame.data.assign(static_cast<std::size_t>(frame.pulses) * frame.n_fast, cplx(0.0, 0.0));
    const double rate = cfg.bandwidth_hz / cfg.pulse_s;
    for (int m = 0; m < frame.pulses; ++m)
        for (int n = 0; n < frame.n_fast; ++n) {
            const double t = n / frame.fs;
            if (t >= cfg.pulse_s) break;
            const double phase = kPi * rate * t * t;
            frame.at(m, n) = cplx(std::cos(phase), std::sin(phase));
        }
    return frame;
}

/// Transmit frame of the PMCW victim: one chip per sample, zero-filled tail.
inline BasebandFrame synth_pmcw(const ScenarioConfig& cfg, const UnimodularSequence& code) {
    cfg.validate();
    if (code.size() != static_cast<std::size_t>(cfg.code_len))
        throw std::invalid_argument("synth_pmcw: code length != cfg.code_len");
    BasebandFrame frame;
    frame.pulses = cfg.pulses;
    frame.n_fast = cfg.fast_samples();
    frame.fs = cfg.sample_rate();
    frame.data.assign(static_cast<std::size_t>(frame.pulses) * frame.n_fast, cplx(0.0, 0.0));
    const cvec chips = code.to_complex();
    for (int m = 0; m < frame.pulses; ++m)
        for (int n = 0; n < cfg.code_len && n < frame.n_fast; ++n)
            frame.at(m, n) = chips[static_cast<std::size_t>(n)];
    return frame;
}

struct SimulationResult {
    BasebandFrame frame;
    UnimodularSequence code;  // PMCW victim code (empty phases for FMCW)
    std::vector<std::string> warnings;
};

/**
 * Victim receive frame: target echoes (two-way radar equation, stop-and-hop
 * Doppler as a per-pulse phase progression), interferer direct paths (one-way
 * propagation, own waveform timing with a random start offset per frame,
 * one-way Doppler), and thermal noise over the sampled band.
 */
inline SimulationResult simulate(const ScenarioConfig& cfg) {
    cfg.validate();
    SimulationResult res;
    res.frame.pulses = cfg.pulses;
    res.frame.n_fast = cfg.fast_samples();
    res.frame.fs = cfg.sample_rate();
    res.frame.data.assign(static_cast<std::size_t>(cfg.pulses) * res.frame.n_fast, cplx(0.0, 0.0));

    const double fs = res.frame.fs;
    const double pri = cfg.pri_s();
    const double lam = cfg.wavelength();
    const double rate = cfg.bandwidth_hz / cfg.pulse_s;

    cvec chips;
    if (cfg.victim == VictimKind::PMCW) {
        res.code = victim_code(cfg);
        chips = res.code.to_complex();
    }

    const double max_range = (res.frame.n_fast - (cfg.victim == VictimKind::PMCW ? cfg.code_len : 0)) *
                             kSpeedOfLight / (2.0 * fs);
    for (const auto& t : cfg.targets) {
        if (t.range_m > max_range)
            res.warnings.push_back("target beyond unambiguous range, echo truncated");
        const double amp = detail::dbm_to_amplitude(detail::target_rx_dbm(cfg, t));
        const double tau = 2.0 * t.range_m / kSpeedOfLight;
        const double fd = 2.0 * t.speed_mps / lam;
        const double carrier_phase = -kTwoPi * cfg.carrier_hz * tau;
        for (int m = 0; m < cfg.pulses; ++m) {
            const double pulse_phase = carrier_phase + kTwoPi * fd * (m * pri);
            if (cfg.victim == VictimKind::FMCW) {
                for (int n = 0; n < res.frame.n_fast; ++n) {
                    const double ts = n / fs - tau;
                    if (ts < 0.0 || ts >= cfg.pulse_s) continue;
                    double phase = kPi * rate * ts * ts + pulse_phase;
                    if (cfg.intra_pulse_doppler) phase += kTwoPi * fd * (n / fs);
                    res.frame.at(m, n) += amp * cplx(std::cos(phase), std::sin(phase));
                }
            } else {
                const int d = static_cast<int>(std::llround(tau * fs));
                for (int n = 0; n < cfg.code_len; ++n) {
                    const int idx = n + d;
                    if (idx >= res.frame.n_fast) break;
                    double phase = pulse_phase;
                    if (cfg.intra_pulse_doppler) phase += kTwoPi * fd * (idx / fs);
                    res.frame.at(m, idx) +=
                        amp * chips[static_cast<std::size_t>(n)] * cplx(std::cos(phase), std::sin(phase));
                }
            }
        }
    }

    std::mt19937_64 offset_gen(rng::derive_seed(cfg.seed, "interferer-offsets"));
    for (std::size_t ii = 0; ii < cfg.interferers.size(); ++ii) {
        const auto& intf = cfg.interferers[ii];
        const double amp = detail::dbm_to_amplitude(detail::interferer_rx_dbm(cfg, intf));
        const double tau = intf.range_m / kSpeedOfLight;
        const double fd = intf.speed_mps / lam;  // one-way Doppler
        const double t0 = rng::next_uniform(offset_gen, 0.0, pri);
        cvec icode;
        if (intf.waveform.kind == InterfererWaveform::Kind::Pmcw) {
            GeneratorSpec spec = intf.waveform.code;
            icode = generate_sequence(spec, rng::derive_seed(cfg.seed, "interferer-code", ii))
                        .to_complex();
        }
        const double carrier_phase = -kTwoPi * cfg.carrier_hz * tau;
        for (int m = 0; m < cfg.pulses; ++m)
            for (int n = 0; n < res.frame.n_fast; ++n) {
                const double t_global = m * pri + n / fs;
                cplx w;
                if (!detail::interferer_sample(intf.waveform, cfg, icode, t_global - t0 - tau, &w))
                    continue;
                const double phase = carrier_phase + kTwoPi * fd * t_global;
                res.frame.at(m, n) += amp * w * cplx(std::cos(phase), std::sin(phase));
            }
    }

    std::mt19937_64 noise_gen(rng::derive_seed(cfg.seed, "noise"));
    const double np = detail::noise_power_mw(cfg);
    for (auto& v : res.frame.data) v += detail::complex_gaussian(noise_gen, np);
    return res;
}

/**
 * De-chirp (mix with the conjugate reference sweep), windowed fast-time DFT
 * keeping the decimated IF band (n_fast / (2 if_decim) bins), then a windowed
 * slow-time DFT per range bin. An echo delayed by tau beats at -rate tau
 * after the conjugate mix, so range bins read from the negative-frequency
 * side of the fast-time spectrum.
 */
inline RangeDopplerMap process_fmcw(const BasebandFrame& frame, const ScenarioConfig& cfg) {
    const int n_fast = frame.n_fast;
    const int n_rb = std::max(1, n_fast / (2 * std::max(1, cfg.if_decim)));
    const double rate = cfg.bandwidth_hz / cfg.pulse_s;
    const int n_pulse_samples = std::min<int>(n_fast, static_cast<int>(cfg.pulse_s * frame.fs));

    std::vector<cvec> range_mat(static_cast<std::size_t>(cfg.pulses));
    for (int m = 0; m < cfg.pulses; ++m) {
        cvec row(static_cast<std::size_t>(n_fast), cplx(0.0, 0.0));
        for (int n = 0; n < n_pulse_samples; ++n) {
            const double t = n / frame.fs;
            const double phase = -kPi * rate * t * t;
            row[static_cast<std::size_t>(n)] = frame.at(m, n) * cplx(std::cos(phase), std::sin(phase)) *
                                               detail::window_value(cfg.fast_window, n, n_pulse_samples);
        }
        fft::dft_inplace(row);
        cvec kept(static_cast<std::size_t>(n_rb));
        for (int b = 0; b < n_rb; ++b)
            kept[static_cast<std::size_t>(b)] = row[static_cast<std::size_t>((n_fast - b) % n_fast)];
        range_mat[static_cast<std::size_t>(m)] = std::move(kept);
    }

    RangeDopplerMap map;
    map.noise_bandwidth_hz = frame.fs / (2.0 * std::max(1, cfg.if_decim));
    map.range_axis_m.resize(static_cast<std::size_t>(n_rb));
    const double beat_to_range = kSpeedOfLight * cfg.pulse_s * frame.fs /
                                 (2.0 * cfg.bandwidth_hz * n_fast);
    for (int b = 0; b < n_rb; ++b) map.range_axis_m[static_cast<std::size_t>(b)] = b * beat_to_range;

    map.velocity_axis_mps.resize(static_cast<std::size_t>(cfg.pulses));
    map.power_db.assign(static_cast<std::size_t>(n_rb), rvec(static_cast<std::size_t>(cfg.pulses), 0.0));
    const double dv = cfg.wavelength() * cfg.prf_hz / (2.0 * cfg.pulses);
    for (int b = 0; b < cfg.pulses; ++b)
        map.velocity_axis_mps[static_cast<std::size_t>(b)] = (b - cfg.pulses / 2) * dv;

    cvec slow(static_cast<std::size_t>(cfg.pulses));
    for (int r = 0; r < n_rb; ++r) {
        for (int m = 0; m < cfg.pulses; ++m)
            slow[static_cast<std::size_t>(m)] = range_mat[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)] *
                                                detail::window_value(cfg.slow_window, m, cfg.pulses);
        cvec spec = fft::dft(slow);
        for (int b = 0; b < cfg.pulses; ++b) {
            const int src = (b - cfg.pulses / 2 + cfg.pulses) % cfg.pulses;
            const double pw = std::norm(spec[static_cast<std::size_t>(src)]);
            map.power_db[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] =
                pw > 0.0 ? db10(pw) : -300.0;
        }
    }
    return map;
}

/**
 * Matched-filter range profile per pulse (linear correlation with the code),
 * then a windowed slow-time DFT per range bin.
 */
inline RangeDopplerMap process_pmcw(const BasebandFrame& frame, const ScenarioConfig& cfg,
                                    const UnimodularSequence& code) {
    if (code.size() != static_cast<std::size_t>(cfg.code_len))
        throw std::invalid_argument("process_pmcw: code length != cfg.code_len");
    const int n_fast = frame.n_fast;
    const int n_rb = n_fast - cfg.code_len + 1;
    if (n_rb < 1) throw std::invalid_argument("process_pmcw: pulse shorter than the code");

    const std::size_t fft_len = fft::detail::next_pow2(static_cast<std::size_t>(n_fast + cfg.code_len));
    cvec code_spec(fft_len, cplx(0.0, 0.0));
    {
        const cvec chips = code.to_complex();
        std::copy(chips.begin(), chips.end(), code_spec.begin());
        fft::dft_inplace(code_spec);
    }

    std::vector<cvec> range_mat(static_cast<std::size_t>(cfg.pulses));
    for (int m = 0; m < cfg.pulses; ++m) {
        cvec row(fft_len, cplx(0.0, 0.0));
        for (int n = 0; n < n_fast; ++n) row[static_cast<std::size_t>(n)] = frame.at(m, n);
        fft::dft_inplace(row);
        for (std::size_t i = 0; i < fft_len; ++i) row[i] *= std::conj(code_spec[i]);
        fft::idft_inplace(row);
        row.resize(static_cast<std::size_t>(n_rb));  // row[d] = sum_n frame[d+n] code_n^*
        range_mat[static_cast<std::size_t>(m)] = std::move(row);
    }

    RangeDopplerMap map;
    map.noise_bandwidth_hz = frame.fs;
    map.range_axis_m.resize(static_cast<std::size_t>(n_rb));
    for (int b = 0; b < n_rb; ++b)
        map.range_axis_m[static_cast<std::size_t>(b)] = b * kSpeedOfLight / (2.0 * frame.fs);

    map.velocity_axis_mps.resize(static_cast<std::size_t>(cfg.pulses));
    map.power_db.assign(static_cast<std::size_t>(n_rb), rvec(static_cast<std::size_t>(cfg.pulses), 0.0));
    const double dv = cfg.wavelength() * cfg.prf_hz / (2.0 * cfg.pulses);
    for (int b = 0; b < cfg.pulses; ++b)
        map.velocity_axis_mps[static_cast<std::size_t>(b)] = (b - cfg.pulses / 2) * dv;

    cvec slow(static_cast<std::size_t>(cfg.pulses));
    for (int r = 0; r < n_rb; ++r) {
        for (int m = 0; m < cfg.pulses; ++m)
            slow[static_cast<std::size_t>(m)] = range_mat[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)] *
                                                detail::window_value(cfg.slow_window, m, cfg.pulses);
        cvec spec = fft::dft(slow);
        for (int b = 0; b < cfg.pulses; ++b) {
            const int src = (b - cfg.pulses / 2 + cfg.pulses) % cfg.pulses;
            const double pw = std::norm(spec[static_cast<std::size_t>(src)]);
            map.power_db[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] =
                pw > 0.0 ? db10(pw) : -300.0;
        }
    }
    return map;
}

/// Map cell where a target should appear: (range bin, fftshifted Doppler bin).
inline std::pair<int, int> expected_cell(const ScenarioConfig& cfg, const TargetSpec& t,
                                         const RangeDopplerMap& map) {
    const double dr = map.range_axis_m.size() > 1 ? map.range_axis_m[1] - map.range_axis_m[0] : 1.0;
    const int rb = static_cast<int>(std::llround(t.range_m / dr));
    const double dv = cfg.wavelength() * cfg.prf_hz / (2.0 * cfg.pulses);
    int db_idx = cfg.pulses / 2 + static_cast<int>(std::llround(t.speed_mps / dv));
    db_idx = ((db_idx % cfg.pulses) + cfg.pulses) % cfg.pulses;
    return {rb, db_idx};
}

/**
 * Peak power inside the +-guard window around the true cell against the mean
 * power outside it, in dB.
 */
inline double estimate_sinr(const RangeDopplerMap& map, std::pair<int, int> true_cell, int guard) {
    const int n_r = static_cast<int>(map.power_db.size());
    const int n_d = n_r > 0 ? static_cast<int>(map.power_db[0].size()) : 0;
    if (true_cell.first < 0 || true_cell.first >= n_r || true_cell.second < 0 || true_cell.second >= n_d)
        throw std::invalid_argument("estimate_sinr: cell outside the map");
    double peak = -std::numeric_limits<double>::infinity();
    double floor_acc = 0.0;
    std::int64_t floor_count = 0;
    for (int r = 0; r < n_r; ++r)
        for (int d = 0; d < n_d; ++d) {
            const bool in_guard =
                std::abs(r - true_cell.first) <= guard && std::abs(d - true_cell.second) <= guard;
            if (in_guard) {
                peak = std::max(peak, map.power_db[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)]);
            } else {
                floor_acc += std::pow(10.0, map.power_db[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] / 10.0);
                ++floor_count;
            }
        }
    if (floor_count == 0) throw std::invalid_argument("estimate_sinr: guard covers the whole map");
    return peak - db10(floor_acc / static_cast<double>(floor_count));
}

/// STFT magnitude, rows = hops, columns = frequency bins (fftshifted).
struct Spectrogram {
    int window = 0;
    int hop = 0;
    std::vector<rvec> magnitude;
};

inline Spectrogram spectrogram(const cvec& waveform, int window, int hop,
                               WindowKind taper = WindowKind::Hann) {
    if (window < 2 || hop < 1) throw std::invalid_argument("spectrogram: window >= 2, hop >= 1");
    if (static_cast<std::size_t>(window) > waveform.size())
        throw std::invalid_argument("spectrogram: window longer than the signal");
    Spectrogram sg;
    sg.window = window;
    sg.hop = hop;
    for (std::size_t start = 0; start + window <= waveform.size(); start += static_cast<std::size_t>(hop)) {
        cvec seg(static_cast<std::size_t>(window));
        for (int i = 0; i < window; ++i)
            seg[static_cast<std::size_t>(i)] =
                waveform[start + static_cast<std::size_t>(i)] * detail::window_value(taper, i, window);
        fft::dft_inplace(seg);
        rvec mag(static_cast<std::size_t>(window));
        for (int b = 0; b < window; ++b) {
            const int src = (b - window / 2 + window) % window;
            mag[static_cast<std::size_t>(b)] = std::abs(seg[static_cast<std::size_t>(src)]);
        }
        sg.magnitude.push_back(std::move(mag));
    }
    return sg;
}

inline void write_map_csv(std::ostream& os, const RangeDopplerMap& map) {
    os << "range_m,velocity_mps,power_db\n";
    for (std::size_t r = 0; r < map.power_db.size(); ++r)
        for (std::size_t d = 0; d < map.power_db[r].size(); ++d)
            os << map.range_axis_m[r] << ',' << map.velocity_axis_mps[d] << ',' << map.power_db[r][d]
               << '\n';
}

}  // namespace pecs
