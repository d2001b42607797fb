#pragma once

#include <chrono>
#include <functional>
#include <optional>

#include "pecs/mm_engine.hpp"

namespace pecs {

enum class DesignerKind { PECS, MISL_PECS, CAN_PECS };

inline const char* designer_name(DesignerKind k) {
    switch (k) {
        case DesignerKind::PECS: return "pecs";
        case DesignerKind::MISL_PECS: return "misl-pecs";
        case DesignerKind::CAN_PECS: return "can-pecs";
    }
    return "?";
}

/// Which basis the per-block least squares uses. Weighted scales the rows by
/// rho_m cos(theta_m) as the completed square demands; Unweighted solves on
/// the bare monomial basis. Both synthesize through the bare basis.
enum class LsVariant { Weighted, Unweighted };

/// How the sub-sequence lengths are chosen.
struct PartitionSpec {
    enum class Mode { Fixed, Uniform, Random } mode = Mode::Uniform;
    std::vector<int> fixed;  // Fixed: explicit lengths
    int m = 0;               // Uniform: common block length
    int m_min = 0, m_max = 0;  // Random: uniform draw per block

    static PartitionSpec fixed_lengths(std::vector<int> lengths) {
        PartitionSpec s;
        s.mode = Mode::Fixed;
        s.fixed = std::move(lengths);
        return s;
    }
    static PartitionSpec uniform(int m) {
        PartitionSpec s;
        s.mode = Mode::Uniform;
        s.m = m;
        return s;
    }
    static PartitionSpec random(int m_min, int m_max) {
        PartitionSpec s;
        s.mode = Mode::Random;
        s.m_min = m_min;
        s.m_max = m_max;
        return s;
    }

    Partition materialize(int n, std::uint64_t seed, int q) const {
        switch (mode) {
            case Mode::Fixed: return Partition(fixed);
            case Mode::Uniform: return Partition::uniform(n, m);
            case Mode::Random:
                return Partition::random(n, m_min, m_max, rng::derive_seed(seed, "partition"), q + 1);
        }
        throw std::invalid_argument("PartitionSpec: bad mode");
    }
};

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;  // lp norm for PECS, ISL for MISL/CAN
    double isl_db = 0.0;
    double psl_db = 0.0;
    double wall_ms = 0.0;
    const UnimodularSequence* x = nullptr;
    const PhasePolynomials* polys = nullptr;
    const Partition* partition = nullptr;
};

struct DesignConfig {
    int n = 0;
    PartitionSpec partition;
    int q = 2;
    double p = 2.0;  // PECS objective exponent; ignored by MISL/CAN
    DesignerKind designer = DesignerKind::PECS;
    StoppingRule stopping;
    std::uint64_t seed = 1;
    LsVariant ls_variant = LsVariant::Weighted;
    std::function<void(const IterationRecord&)> trace;  // optional observer

    void validate() const {
        if (n < 2) throw std::invalid_argument("DesignConfig: n >= 2 required");
        if (q < 0) throw std::invalid_argument("DesignConfig: q >= 0 required");
        if (p < 2.0) throw std::invalid_argument("DesignConfig: p >= 2 required");
        stopping.validate();
    }
};

struct DesignRun {
    UnimodularSequence x_final;
    PhasePolynomials polys_final;
    Partition partition;
    rvec objective_history;  // lp norm (PECS) or ISL (MISL/CAN), entry 0 = seed value
    rvec can_d_history;      // CAN alternation criterion per iteration
    int iterations = 0;
    bool converged = false;
    std::string converged_reason;
    int guard_fallbacks = 0;  // steps recomputed with the alternate LS basis
    int stalls = 0;           // steps rejected outright
    SidelobeMetrics final_metrics;
};

/// A constraint-satisfying starting point: x synthesized from polys.
struct DesignStart {
    Partition partition;
    PhasePolynomials polys;
    UnimodularSequence x;
};

/**
 * Random start: coefficients drawn so the top-degree term sweeps a uniformly
 * random (aliased) fraction of the full frequency range over its block. The
 * sequence is synthesized from the coefficients, so the polynomial-phase
 * constraint holds from iteration 0.
 */
inline DesignStart random_start(const DesignConfig& cfg) {
    cfg.validate();
    Partition part = cfg.partition.materialize(cfg.n, cfg.seed, cfg.q);
    if (part.total() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("random_start: partition does not sum to n");
    // Blocks shorter than Q+1 are allowed: the block solve degrades to a
    // min-norm interpolation and the block phases become fully free.

    std::mt19937_64 gen(rng::derive_seed(cfg.seed, "init-coeffs"));
    std::vector<rvec> rows(part.count());
    for (std::size_t l = 0; l < part.count(); ++l) {
        rvec a(static_cast<std::size_t>(cfg.q) + 1);
        a[0] = rng::next_uniform(gen, -kPi, kPi);
        const double m_l = static_cast<double>(part.lengths[l]);
        for (int q = 1; q <= cfg.q; ++q)
            a[static_cast<std::size_t>(q)] =
                rng::next_uniform(gen, -kTwoPi, kTwoPi) / (q * std::pow(m_l, q - 1));
        rows[l] = std::move(a);
    }
    DesignStart st;
    st.partition = std::move(part);
    st.polys = PhasePolynomials(cfg.q, std::move(rows));
    st.x = synthesize(st.partition, st.polys);
    return st;
}

namespace detail {

struct BlockFit {
    rvec coeffs;
    bool fallback = false;  // system was rank-deficient; kept previous coeffs
};

/**
 * One block of the subroutine: builds theta from the previous coefficients,
 * the completed-square target b_m = rho_m cos(theta_m)(psi_m + theta_m)
 * - rho_m sin(theta_m), and solves the least-squares problem on the scaled
 * monomial basis ((m/M)^q, coefficients rescaled afterwards).
 */
inline BlockFit fit_block(const double* psi, const double* rho, int m_count, const rvec& prev_coeffs,
                          int q, LsVariant variant) {
    const double scale = static_cast<double>(m_count);
    Eigen::MatrixXd basis(m_count, q + 1);
    Eigen::VectorXd rhs(m_count);
    for (int i = 0; i < m_count; ++i) {
        double theta = -psi[i];
        double mq = 1.0;
        for (int j = 0; j <= q; ++j) {
            theta += prev_coeffs[static_cast<std::size_t>(j)] * mq;
            mq *= static_cast<double>(i + 1);
        }
        const double gamma = rho[i] * std::cos(theta);
        const double b = gamma * (psi[i] + theta) - rho[i] * std::sin(theta);
        const double w = variant == LsVariant::Weighted ? gamma : 1.0;
        const double s = static_cast<double>(i + 1) / scale;
        double sq = 1.0;
        for (int j = 0; j <= q; ++j) {
            basis(i, j) = w * sq;
            sq *= s;
        }
        rhs(i) = b;
    }

    Eigen::VectorXd z;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    if (qr.rank() == q + 1) {
        z = qr.solve(rhs);
    } else {
        auto svd = basis.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-12);
        if (svd.rank() == 0) return {prev_coeffs, true};
        z = svd.solve(rhs);
    }

    BlockFit fit;
    fit.coeffs.resize(static_cast<std::size_t>(q) + 1);
    double pw = 1.0;
    for (int j = 0; j <= q; ++j) {
        if (!std::isfinite(z(j))) return {prev_coeffs, true};
        fit.coeffs[static_cast<std::size_t>(j)] = z(j) * pw;
        pw /= scale;
    }
    return fit;
}

}  // namespace detail

struct SubroutineResult {
    UnimodularSequence x;
    PhasePolynomials polys;
    int fallback_blocks = 0;
};

/**
 * The per-iteration projection onto the polynomial-phase constraint set:
 * splits y into blocks, solves the L independent least-squares problems, and
 * synthesizes each block as e^{j A z*} through the bare monomial basis.
 */
inline SubroutineResult pecs_subroutine(const cvec& y, const Partition& partition,
                                        const PhasePolynomials& polys_prev,
                                        LsVariant variant = LsVariant::Weighted) {
    if (y.size() != partition.total())
        throw std::invalid_argument("pecs_subroutine: |y| must equal the partition total");
    if (polys_prev.rows() != partition.count())
        throw std::invalid_argument("pecs_subroutine: partition does not match coefficient rows");

    const int q = polys_prev.degree;
    rvec psi(y.size());
    rvec rho(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        psi[i] = std::arg(y[i]);
        rho[i] = std::abs(y[i]);
    }

    std::vector<rvec> rows(partition.count());
    int fallbacks = 0;
    std::size_t off = 0;
    for (std::size_t l = 0; l < partition.count(); ++l) {
        const int m_count = partition.lengths[l];
        auto fit = detail::fit_block(psi.data() + off, rho.data() + off, m_count,
                                     polys_prev.coeffs[l], q, variant);
        if (fit.fallback) ++fallbacks;
        rows[l] = std::move(fit.coeffs);
        off += static_cast<std::size_t>(m_count);
    }

    SubroutineResult out;
    out.polys = PhasePolynomials(q, std::move(rows));
    out.x = synthesize(partition, out.polys);
    out.fallback_blocks = fallbacks;
    return out;
}

namespace detail {

inline double isl_of(const CorrelationProfile& prof) {
    double acc = 0.0;
    for (std::size_t k = 1; k < prof.lag_count(); ++k) acc += std::norm(prof.lags[k]);
    return acc;
}

struct RunState {
    cvec xc;
    Spectrum2N spect;
    CorrelationProfile prof;
};

inline RunState make_state(const UnimodularSequence& x) {
    RunState st;
    st.xc = x.to_complex();
    st.spect = correlate_2n(st.xc);
    st.prof.n = x.size();
    st.prof.lags.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) st.prof.lags[k] = std::conj(st.spect.rv[k]);
    return st;
}

inline DesignRun run_design(const DesignConfig& cfg, const DesignStart& start) {
    cfg.validate();
    if (start.x.size() != static_cast<std::size_t>(cfg.n))
        throw std::invalid_argument("run: start length != n");
    {
        const UnimodularSequence resynth = synthesize(start.partition, start.polys);
        for (std::size_t i = 0; i < resynth.size(); ++i)
            if (std::abs(resynth.sample(i) - start.x.sample(i)) > 1e-8)
                throw std::invalid_argument("run: x0 does not satisfy the polynomial-phase constraint");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = start.x.size();
    const double dn = static_cast<double>(n);
    const bool is_pecs = cfg.designer == DesignerKind::PECS;
    const bool is_can = cfg.designer == DesignerKind::CAN_PECS;
    const bool monotone_guard = !is_can;

    DesignRun run;
    run.partition = start.partition;
    run.polys_final = start.polys;
    run.x_final = start.x;

    UnimodularSequence x = start.x;
    PhasePolynomials polys = start.polys;
    RunState st = make_state(x);

    auto objective = [&](const CorrelationProfile& prof) {
        return is_pecs ? sidelobe_metrics(prof, cfg.p).lp : isl_of(prof);
    };

    double obj = objective(st.prof);
    run.objective_history.push_back(obj);

    auto emit_trace = [&](int iter) {
        if (!cfg.trace) return;
        const SidelobeMetrics sm = sidelobe_metrics(st.prof, std::max(cfg.p, 2.0));
        IterationRecord rec;
        rec.iter = iter;
        rec.objective = obj;
        rec.isl_db = sm.isl_db;
        rec.psl_db = sm.psl_db;
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rec.x = &x;
        rec.polys = &polys;
        rec.partition = &run.partition;
        cfg.trace(rec);
    };
    emit_trace(0);

    int iter = 0;
    while (iter < cfg.stopping.max_iters) {
        ++iter;

        // designer-specific target y
        cvec y;
        if (is_pecs) {
            const MajorizerParams mp = majorizer_params_from(st.xc, st.spect, cfg.p);
            if (mp.impulse) {
                run.converged = true;
                run.converged_reason = "impulse autocorrelation";
                break;
            }
            y = y_update(st.xc, mp);
        } else if (cfg.designer == DesignerKind::MISL_PECS) {
            // y = -A (Diag(f) - f_max I - N^2 I) A^H x via the 2N transform
            const std::size_t g2 = 2 * n;
            double fmax = 0.0;
            for (std::size_t g = 0; g < g2; ++g) fmax = std::max(fmax, std::norm(st.spect.f[g]));
            cvec v(g2);
            for (std::size_t g = 0; g < g2; ++g)
                v[g] = (std::norm(st.spect.f[g]) - fmax - dn * dn) * st.spect.f[g];
            fft::idft_inplace(v);
            y.resize(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = -2.0 * dn * v[i];
        } else {
            // CAN alternation: v aligns to the spectrum phase, d returns to
            // time domain, y is the unit-modulus phase of d
            const std::size_t g2 = 2 * n;
            cvec v(g2);
            double d2 = 0.0;
            const double inv_r2n = 1.0 / std::sqrt(2.0 * dn);
            for (std::size_t g = 0; g < g2; ++g) {
                const double a = std::abs(st.spect.f[g]);
                const double diff = a * inv_r2n - 1.0 / std::sqrt(2.0);
                d2 += diff * diff;
                v[g] = a > 0.0 ? st.spect.f[g] / a : cplx(1.0, 0.0);
            }
            run.can_d_history.push_back(std::sqrt(d2));
            fft::idft_inplace(v);
            y.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double a = std::abs(v[i]);
                y[i] = a > 0.0 ? v[i] / a : cplx(1.0, 0.0);
            }
        }

        // constrained projection, with the monotonicity safeguard: a step that
        // raises the true objective is redone on the alternate basis, and kept
        // only if it does not ascend
        const double slack = obj * 4.0 * std::numeric_limits<double>::epsilon();
        SubroutineResult cand = pecs_subroutine(y, run.partition, polys, cfg.ls_variant);
        RunState cand_st = make_state(cand.x);
        double cand_obj = objective(cand_st.prof);
        bool accepted = true;
        if (monotone_guard && cand_obj > obj + slack) {
            const LsVariant alt =
                cfg.ls_variant == LsVariant::Weighted ? LsVariant::Unweighted : LsVariant::Weighted;
            cand = pecs_subroutine(y, run.partition, polys, alt);
            cand_st = make_state(cand.x);
            cand_obj = objective(cand_st.prof);
            if (cand_obj > obj + slack) {
                accepted = false;
                ++run.stalls;
            } else {
                ++run.guard_fallbacks;
            }
        }

        double max_phase_step = 0.0;
        if (accepted) {
            if (cfg.stopping.abs_phase_tol > 0.0)
                for (std::size_t i = 0; i < n; ++i)
                    max_phase_step = std::max(
                        max_phase_step, std::abs(std::remainder(cand.x.phases[i] - x.phases[i], kTwoPi)));
            x = std::move(cand.x);
            polys = std::move(cand.polys);
            st = std::move(cand_st);
            obj = cand_obj;
        }
        run.objective_history.push_back(obj);
        emit_trace(iter);

        if (cfg.stopping.abs_phase_tol > 0.0 && accepted && max_phase_step < cfg.stopping.abs_phase_tol) {
            run.converged = true;
            run.converged_reason = "phase_tol";
            break;
        }
        const auto w = static_cast<std::size_t>(StoppingRule::kWindow);
        if (run.objective_history.size() > w) {
            const double prev = run.objective_history[run.objective_history.size() - 1 - w];
            if (std::abs(prev - obj) <= cfg.stopping.rel_obj_tol * std::max(prev, 1e-300)) {
                run.converged = true;
                run.converged_reason = "objective_window";
                break;
            }
        }
    }

    if (!run.converged) run.converged_reason = "max_iters";
    run.iterations = iter;
    run.x_final = std::move(x);
    run.polys_final = std::move(polys);
    run.final_metrics = sidelobe_metrics(st.prof, cfg.p);
    return run;
}

}  // namespace detail

inline DesignRun run_pecs(const DesignConfig& cfg, const DesignStart& start) {
    DesignConfig c = cfg;
    c.designer = DesignerKind::PECS;
    return detail::run_design(c, start);
}

inline DesignRun run_misl_pecs(const DesignConfig& cfg, const DesignStart& start) {
    DesignConfig c = cfg;
    c.designer = DesignerKind::MISL_PECS;
    return detail::run_design(c, start);
}

inline DesignRun run_can_pecs(const DesignConfig& cfg, const DesignStart& start) {
    DesignConfig c = cfg;
    c.designer = DesignerKind::CAN_PECS;
    return detail::run_design(c, start);
}

/// Runs the configured designer from a seeded random start.
inline DesignRun run_designer(const DesignConfig& cfg) {
    return detail::run_design(cfg, random_start(cfg));
}

}  // namespace pecs
