#include "pecs/mm_engine.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

using namespace pecs;

namespace {

// Dense reference for the majorized quadratic term: R = sum_{k=1}^{N-1}
// w_k (r_{-k} U_k + r_k U_k^T) with U_k the Toeplitz matrix holding ones on
// the k-th subdiagonal (row - col = k), weights and lambdas from the params.
cvec dense_y(const cvec& x, const MajorizerParams& mp) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXcd r_mat = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        const cplx rk = mp.corr.lags[static_cast<std::size_t>(k)];
        const double w = mp.w_hat[static_cast<std::size_t>(k - 1)];
        for (Eigen::Index i = k; i < n; ++i) {
            r_mat(i, i - k) += w * std::conj(rk);  // U_k carries r_{-k} = r_k^*
            r_mat(i - k, i) += w * rk;             // U_{-k} carries r_{+k}
        }
    }
    Eigen::VectorXcd xv(n);
    for (Eigen::Index i = 0; i < n; ++i) xv(i) = x[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd rx = r_mat * xv;
    const double denom = mp.lambda_l * static_cast<double>(n) + mp.lambda_u;
    cvec y(x.size());
    for (Eigen::Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = xv(i) - rx(i) / denom;
    return y;
}

}  // namespace

TEST(MajorizerParams, P2WeightsAreOneOverTSquared) {
    const auto x = random_unimodular(24, 4);
    const auto mp = majorizer_params(x, 2.0);
    for (double w : mp.w_hat) EXPECT_NEAR(w, 1.0 / (mp.t * mp.t), 1e-12);
}

TEST(MajorizerParams, AllOnesExample) {
    const auto mp = majorizer_params(UnimodularSequence(rvec(4, 0.0)), 2.0);
    EXPECT_NEAR(mp.t, std::sqrt(14.0), 1e-12);
    ASSERT_EQ(mp.w_hat.size(), 3u);
    for (double w : mp.w_hat) EXPECT_NEAR(w, 1.0 / 14.0, 1e-12);
    ASSERT_EQ(mp.corr.lags.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_NEAR(std::abs(mp.corr.lags[k] - cplx(4.0 - k, 0.0)), 0.0, 1e-9);
}

TEST(MajorizerParams, SignConditions) {
    const auto mp = majorizer_params(random_unimodular(32, 12), 10.0);
    for (std::size_t k = 0; k < mp.alpha.size(); ++k) {
        EXPECT_GE(mp.alpha[k], 0.0);
        EXPECT_LE(mp.beta[k], 1e-15);
        // w = alpha + beta / (2 |r_k|) row identity; alpha and beta/(2r)
        // nearly cancel, so the tolerance tracks their magnitude, not w's
        const double rk = std::abs(mp.corr.lags[k + 1]);
        if (rk > 1e-12)
            EXPECT_NEAR(mp.w_hat[k], mp.alpha[k] + mp.beta[k] / (2.0 * rk), 1e-10 * mp.alpha[k] + 1e-15);
    }
}

TEST(MajorizerParams, MuIsRealUpToResidue) {
    const auto x = random_unimodular(48, 3);
    const cvec xc = x.to_complex();
    const auto s = detail::correlate_2n(xc);
    const auto mp = detail::majorizer_params_from(xc, s, 5.0);
    cvec c(2 * x.size(), cplx(0.0, 0.0));
    for (std::size_t k = 1; k < x.size(); ++k) {
        c[k] = mp.w_hat[k - 1] * s.rv[k];
        c[2 * x.size() - k] = mp.w_hat[k - 1] * s.rv[2 * x.size() - k];
    }
    fft::dft_inplace(c);
    for (const auto& v : c) EXPECT_LT(std::abs(v.imag()), 1e-9);
}

TEST(MajorizerParams, ImpulseProfileSignalsConvergence) {
    detail::Spectrum2N s;
    const std::size_t n = 6;
    s.f.assign(2 * n, cplx(1.0, 0.0));
    s.rv.assign(2 * n, cplx(0.0, 0.0));
    s.rv[0] = cplx(static_cast<double>(n), 0.0);
    cvec xc(n, cplx(1.0, 0.0));
    const auto mp = detail::majorizer_params_from(xc, s, 2.0);
    EXPECT_TRUE(mp.impulse);
    EXPECT_EQ(mp.t, 0.0);
}

TEST(YUpdate, ZeroWeightsKeepDirection) {
    const auto x = random_unimodular(8, 2);
    auto mp = majorizer_params(x, 2.0);
    std::fill(mp.mu.begin(), mp.mu.end(), 0.0);
    const cvec y = y_update(x, mp);
    const cvec xc = x.to_complex();
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(y[i] - xc[i]), 0.0, 1e-12);
}

TEST(YUpdate, MatchesDenseToeplitzOracle) {
    for (double p : {2.0, 7.0}) {
        const auto x = random_unimodular(16, 5);
        const auto mp = majorizer_params(x, p);
        const cvec got = y_update(x, mp);
        const cvec want = dense_y(x.to_complex(), mp);
        for (std::size_t i = 0; i < got.size(); ++i)
            ASSERT_NEAR(std::abs(got[i] - want[i]), 0.0, 1e-8) << "p=" << p << " i=" << i;
    }
}

TEST(YUpdate, PhaseProjectionReducesSurrogate) {
    const auto x = random_unimodular(32, 9);
    const auto mp = majorizer_params(x, 4.0);
    const cvec y = y_update(x, mp);
    const cvec xc = x.to_complex();
    double before = 0.0, after = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        before += std::norm(xc[i] - y[i]);
        const cplx proj = std::abs(y[i]) > 0.0 ? y[i] / std::abs(y[i]) : cplx(1.0, 0.0);
        after += std::norm(proj - y[i]);
    }
    EXPECT_LE(after, before + 1e-12);
}

// The engine drives the plain phase-only iteration x <- e^{j arg y}; the true
// objective sum |r_k|^p must then descend monotonically (the Eq.-12 chain).
TEST(YUpdate, UnconstrainedIterationDescends) {
    for (double p : {2.0, 10.0}) {
        UnimodularSequence x = random_unimodular(32, 17);
        double prev = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 300; ++it) {
            const auto mp = majorizer_params(x, p);
            ASSERT_FALSE(mp.impulse);
            ASSERT_LE(mp.t, prev * (1.0 + 1e-7)) << "p=" << p << " iter=" << it;
            prev = mp.t;
            const cvec y = y_update(x, mp);
            rvec phases(x.size());
            for (std::size_t i = 0; i < y.size(); ++i) phases[i] = std::arg(y[i]);
            x = UnimodularSequence(std::move(phases));
        }
        const auto final_t = majorizer_params(x, p).t;
        const auto seed_t = majorizer_params(random_unimodular(32, 17), p).t;
        EXPECT_LT(final_t, 0.8 * seed_t) << "p=" << p;
    }
}

TEST(CheckMajorizer, TouchingCondition) {
    const auto r = autocorr_fft(random_unimodular(24, 6));
    EXPECT_TRUE(check_majorizer(r, r, 3.0));
    const auto sm = sidelobe_metrics(r, 3.0);
    for (std::size_t k = 1; k < r.lag_count(); ++k) {
        const double s = std::abs(r.lags[k]) / sm.lp;
        EXPECT_NEAR(detail::lp_majorizer_gap(s, s, 3.0), 0.0, 1e-9);
    }
}

TEST(CheckMajorizer, ScaledProfileDominated) {
    const auto r = autocorr_fft(random_unimodular(24, 6));
    CorrelationProfile half = r;
    for (auto& v : half.lags) v *= 0.5;
    half.lags[0] = r.lags[0];
    EXPECT_TRUE(check_majorizer(r, half, 5.0));
}

TEST(CheckMajorizer, MonteCarloAudit) {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const double p = 2.0 + 8.0 * rng::next_unit(gen);
        const std::size_t n = 8;
        CorrelationProfile prev, test;
        prev.n = test.n = n;
        prev.lags.resize(n);
        test.lags.resize(n);
        prev.lags[0] = test.lags[0] = cplx(static_cast<double>(n), 0.0);
        for (std::size_t k = 1; k < n; ++k)
            prev.lags[k] = cplx(rng::next_uniform(gen, -1.0, 1.0), rng::next_uniform(gen, -1.0, 1.0));
        const double t = sidelobe_metrics(prev, p).lp;
        for (std::size_t k = 1; k < n; ++k) {
            const double mag = t * rng::next_unit(gen);
            const double ang = rng::next_uniform(gen, 0.0, kTwoPi);
            test.lags[k] = std::polar(mag, ang);
        }
        ASSERT_TRUE(check_majorizer(prev, test, p)) << "trial " << trial;
    }
}

TEST(CheckMajorizer, LargePStaysFinite) {
    const auto r = autocorr_fft(random_unimodular(64, 8));
    EXPECT_TRUE(check_majorizer(r, r, 1000.0));
    const auto mp = majorizer_params(random_unimodular(64, 8), 1000.0);
    EXPECT_TRUE(std::isfinite(mp.lambda_l));
    EXPECT_TRUE(std::isfinite(mp.lambda_u));
    for (double a : mp.alpha) EXPECT_TRUE(std::isfinite(a));
}
