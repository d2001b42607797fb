#pragma once

#include "pecs/metrics.hpp"

namespace pecs {

/**
 * Stopping rule for the iterative designers. The run stops at max_iters, or
 * earlier when the objective changed by less than rel_obj_tol (relative) over
 * a 50-iteration window, or when no phase moved by more than abs_phase_tol in
 * one iteration (0 disables the phase test).
 */
struct StoppingRule {
    int max_iters = 100000;
    double rel_obj_tol = 1e-10;
    double abs_phase_tol = 0.0;

    static constexpr int kWindow = 50;

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("StoppingRule: max_iters >= 1 required");
        if (rel_obj_tol < 0.0 || abs_phase_tol < 0.0)
            throw std::invalid_argument("StoppingRule: tolerances must be >= 0");
    }
};

namespace detail {

/**
 * Normalized curvature g(s) = [1 + (p-1) s^p - p s^{p-1}] / (1-s)^2 of the
 * quadratic bound on u^p over [0,1], with s = |r_k|/t. Near s = 1 the direct
 * form cancels catastrophically, so a series in h = 1-s takes over:
 * g = p(p-1)/2 * (1 - 2(p-2)h/3 + ...).
 */
inline double lp_curvature(double s, double p) {
    if (p == 2.0) return 1.0;
    const double h = 1.0 - s;
    if (h < 1e-5) return 0.5 * p * (p - 1.0) * (1.0 - 2.0 * (p - 2.0) * h / 3.0);
    const double num = 1.0 + (p - 1.0) * std::pow(s, p) - p * std::pow(s, p - 1.0);
    return num / (h * h);
}

/// Slope term b(s) = p s^{p-1} - 2 g(s) s of the same bound; b <= 0 on [0,1].
inline double lp_slope(double s, double p) {
    return p * std::pow(s, p - 1.0) - 2.0 * lp_curvature(s, p) * s;
}

/// Majorizer minus majorized power, in t-normalized units; >= 0 on u in [0,1].
inline double lp_majorizer_gap(double s, double u, double p) {
    const double g = lp_curvature(s, p);
    const double val = g * u * u + lp_slope(s, p) * u + g * s * s - (p - 1.0) * std::pow(s, p);
    return val - std::pow(u, p);
}

}  // namespace detail

/**
 * Supporting parameters for one majorization step of the lp sidelobe
 * objective, all in the t^p-normalized convention so that arbitrarily large
 * p stays inside double range. Scalings cancel in the phase-only update, so
 * the iterates are unaffected by the normalization.
 */
struct MajorizerParams {
    std::size_t n = 0;
    double p = 2.0;
    double t = 0.0;          // lp norm of the sidelobe lags
    bool impulse = false;    // all sidelobes zero; nothing to majorize
    rvec alpha;              // alpha_k, k = 1..N-1 (normalized)
    rvec beta;               // beta_k <= 0, k = 1..N-1 (normalized)
    rvec w_hat;              // w_k = alpha_k + beta_k / (2 |r_k|), k = 1..N-1
    double lambda_l = 0.0;   // max_k alpha_k (N - k)
    double lambda_u = 0.0;   // half-sum of the even/odd maxima of mu
    rvec mu;                 // DFT of the weighted correlation vector (real)
    cvec f;                  // DFT_{2N}([x; 0])
    CorrelationProfile corr; // autocorrelation of the iterate
};

namespace detail {

inline MajorizerParams majorizer_params_from(const cvec& xc, const Spectrum2N& s, double p) {
    const std::size_t n = xc.size();
    MajorizerParams mp;
    mp.n = n;
    mp.p = p;
    mp.f = s.f;
    mp.corr.n = n;
    mp.corr.lags.resize(n);
    for (std::size_t k = 0; k < n; ++k) mp.corr.lags[k] = std::conj(s.rv[k]);

    const SidelobeMetrics sm = sidelobe_metrics(mp.corr, p);
    mp.t = sm.lp;
    if (mp.t <= 0.0) {
        mp.impulse = true;
        return mp;
    }

    mp.alpha.resize(n - 1);
    mp.beta.resize(n - 1);
    mp.w_hat.resize(n - 1);
    const double t = mp.t;
    const double inv_t2 = 1.0 / (t * t);
    mp.lambda_l = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double rk = std::abs(mp.corr.lags[k]);
        const double sk = rk / t;
        const double a = lp_curvature(sk, p) * inv_t2;
        mp.alpha[k - 1] = a;
        mp.beta[k - 1] = lp_slope(sk, p) / t;
        mp.w_hat[k - 1] = 0.5 * p * inv_t2 * std::pow(sk, p - 2.0);
        mp.lambda_l = std::max(mp.lambda_l, a * static_cast<double>(n - k));
    }

    // weighted correlation vector: zero weight on the mainlobe slot and on
    // the empty lag-N slot, symmetric weights elsewhere
    cvec c(2 * n, cplx(0.0, 0.0));
    for (std::size_t k = 1; k < n; ++k) {
        c[k] = mp.w_hat[k - 1] * s.rv[k];
        c[2 * n - k] = mp.w_hat[k - 1] * s.rv[2 * n - k];
    }
    fft::dft_inplace(c);
    mp.mu.resize(2 * n);
    double even_max = -std::numeric_limits<double>::infinity();
    double odd_max = even_max;
    for (std::size_t g = 0; g < 2 * n; ++g) {
        mp.mu[g] = c[g].real();
        ((g & 1U) ? odd_max : even_max) = std::max((g & 1U) ? odd_max : even_max, mp.mu[g]);
    }
    mp.lambda_u = 0.5 * (even_max + odd_max);
    return mp;
}

}  // namespace detail

inline MajorizerParams majorizer_params(const UnimodularSequence& x, double p) {
    if (p < 2.0) throw std::invalid_argument("majorizer_params: p >= 2 required");
    const cvec xc = x.to_complex();
    return detail::majorizer_params_from(xc, detail::correlate_2n(xc), p);
}

/**
 * Unconstrained minimizer target of the majorized problem,
 * y = x - F_{1:N}^H (mu o f) / (2N (lambda_l N + lambda_u)), evaluated with
 * one 2N inverse transform and no dense matrix.
 */
inline cvec y_update(const cvec& xc, const MajorizerParams& mp) {
    const std::size_t n = xc.size();
    if (mp.n != n) throw std::invalid_argument("y_update: params/sequence size mismatch");
    if (mp.impulse) return xc;

    const double denom = mp.lambda_l * static_cast<double>(n) + mp.lambda_u;
    if (!std::isfinite(denom) || denom <= 0.0)
        throw numerical_error("y_update: majorizer normalization is not positive finite");

    cvec u(2 * n);
    for (std::size_t g = 0; g < 2 * n; ++g) u[g] = mp.mu[g] * mp.f[g];
    fft::idft_inplace(u);

    cvec y(n);
    const double inv = 1.0 / denom;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = xc[i] - u[i] * inv;
        if (!std::isfinite(y[i].real()) || !std::isfinite(y[i].imag()))
            throw numerical_error("y_update: non-finite intermediate");
    }
    return y;
}

inline cvec y_update(const UnimodularSequence& x, const MajorizerParams& mp) {
    return y_update(x.to_complex(), mp);
}

/**
 * Verifies that the quadratic bound built at r_prev dominates |r|^p at every
 * sidelobe lag of r_test (valid for |r_test| <= t). Equality holds at
 * r_test = r_prev up to 1e-9 in normalized units.
 */
inline bool check_majorizer(const CorrelationProfile& r_prev, const CorrelationProfile& r_test, double p) {
    if (r_prev.lag_count() != r_test.lag_count())
        throw std::invalid_argument("check_majorizer: profiles must have equal length");
    const SidelobeMetrics sm = sidelobe_metrics(r_prev, p);
    const double t = sm.lp;
    if (t <= 0.0) return true;
    for (std::size_t k = 1; k < r_prev.lag_count(); ++k) {
        const double s = std::abs(r_prev.lags[k]) / t;
        const double u = std::abs(r_test.lags[k]) / t;
        if (u > 1.0 + 1e-12) throw std::invalid_argument("check_majorizer: |r_test| exceeds t");
        if (detail::lp_majorizer_gap(s, std::min(u, 1.0), p) < -1e-9) return false;
    }
    return true;
}

}  // namespace pecs
