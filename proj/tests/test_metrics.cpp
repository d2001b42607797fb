#include "pecs/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "pecs/codes.hpp"

using namespace pecs;

namespace {

UnimodularSequence ones(std::size_t n) {
    return UnimodularSequence(rvec(n, 0.0));
}

}  // namespace

TEST(AutocorrDirect, AllOnes) {
    const auto r = autocorr_direct(ones(4));
    ASSERT_EQ(r.lag_count(), 4u);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(r.lags[k] - cplx(4.0 - k, 0.0)), 0.0, 1e-12);
}

TEST(AutocorrDirect, MainlobeEqualsN) {
    const auto x = random_unimodular(33, 5);
    const auto r = autocorr_direct(x);
    EXPECT_NEAR(r.lags[0].real(), 33.0, 1e-9);
    EXPECT_NEAR(r.lags[0].imag(), 0.0, 1e-9);
}

TEST(AutocorrDirect, BinaryPair) {
    const auto r = autocorr_direct(UnimodularSequence({0.0, kPi}));
    EXPECT_NEAR(std::abs(r.lags[0] - cplx(2.0, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.lags[1] - cplx(-1.0, 0.0)), 0.0, 1e-12);
}

TEST(AutocorrFft, AllOnesMatchesOracle) {
    const auto r = autocorr_fft(ones(4));
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(r.lags[k] - cplx(4.0 - k, 0.0)), 0.0, 1e-10);
}

TEST(AutocorrFft, RandomMatchesOracle) {
    const auto x = random_unimodular(64, 3);
    const auto rf = autocorr_fft(x);
    const auto rd = autocorr_direct(x);
    for (std::size_t k = 0; k < 64; ++k)
        EXPECT_NEAR(std::abs(rf.lags[k] - rd.lags[k]), 0.0, 1e-9 * 64.0);
}

TEST(AutocorrFft, FrankMatchesOracle) {
    const auto x = generate({CodeKind::Frank, 4});
    const auto rf = autocorr_fft(x);
    const auto rd = autocorr_direct(x);
    for (std::size_t k = 0; k < rf.lag_count(); ++k)
        EXPECT_NEAR(std::abs(rf.lags[k] - rd.lags[k]), 0.0, 1e-9 * 16.0);
}

TEST(CrossCorrelation, SelfAtZeroLag) {
    const auto x = random_unimodular(16, 11);
    const cvec c = cross_correlation(x, x);
    ASSERT_EQ(c.size(), 31u);
    EXPECT_NEAR(std::abs(c[15] - cplx(16.0, 0.0)), 0.0, 1e-9);
    // degenerates to the autocorrelation on the nonnegative side
    const auto r = autocorr_direct(x);
    for (std::size_t k = 0; k < 16; ++k)
        EXPECT_NEAR(std::abs(c[15 + k] - r.lags[k]), 0.0, 1e-9);
}

TEST(CrossCorrelation, TwoElementExample) {
    const cvec c = cross_correlation(UnimodularSequence({0.0, 0.0}), UnimodularSequence({0.0, kPi}));
    ASSERT_EQ(c.size(), 3u);
    EXPECT_NEAR(std::abs(c[0] - cplx(1.0, 0.0)), 0.0, 1e-12);   // lag -1
    EXPECT_NEAR(std::abs(c[1] - cplx(0.0, 0.0)), 0.0, 1e-12);   // lag 0
    EXPECT_NEAR(std::abs(c[2] - cplx(-1.0, 0.0)), 0.0, 1e-12);  // lag +1
}

TEST(CrossCorrelation, RandomPairNormalizedPeakSmall) {
    const double peak = normalized_xcorr_peak(random_unimodular(100, 21), random_unimodular(100, 22));
    EXPECT_GT(peak, 0.0);
    EXPECT_LT(peak, 0.7);
}

TEST(SidelobeMetrics, KnownProfile) {
    CorrelationProfile r;
    r.n = 4;
    r.lags = {cplx(4, 0), cplx(3, 0), cplx(2, 0), cplx(1, 0)};
    const auto m = sidelobe_metrics(r, 2.0);
    EXPECT_NEAR(m.isl, 14.0, 1e-12);
    EXPECT_NEAR(m.psl, 3.0, 1e-12);
    EXPECT_NEAR(m.lp, std::sqrt(14.0), 1e-12);
    EXPECT_NEAR(m.isl_db, db10(14.0), 1e-12);
    EXPECT_NEAR(m.psl_db, db10(3.0), 1e-12);
}

TEST(SidelobeMetrics, ZeroSidelobes) {
    CorrelationProfile r;
    r.n = 3;
    r.lags = {cplx(3, 0), cplx(0, 0), cplx(0, 0)};
    const auto m = sidelobe_metrics(r, 5.0);
    EXPECT_EQ(m.isl, 0.0);
    EXPECT_EQ(m.psl, 0.0);
    EXPECT_EQ(m.lp, 0.0);
}

TEST(SidelobeMetrics, SmallPRejected) {
    CorrelationProfile r;
    r.n = 2;
    r.lags = {cplx(2, 0), cplx(1, 0)};
    EXPECT_THROW(sidelobe_metrics(r, 1.5), std::invalid_argument);
}

TEST(SidelobeMetrics, LargePApproachesPsl) {
    const auto r = autocorr_fft(random_unimodular(100, 77));
    const auto m = sidelobe_metrics(r, 1000.0);
    EXPECT_LT(std::abs(m.lp - m.psl) / m.psl, 0.01);
}

TEST(SidelobeMetrics, LpMonotoneInP) {
    const auto r = autocorr_fft(random_unimodular(64, 13));
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 1000.0}) {
        const auto m = sidelobe_metrics(r, p);
        EXPECT_LE(m.lp, prev * (1.0 + 1e-12));
        EXPECT_GE(m.lp, m.psl - 1e-12);
        prev = m.lp;
    }
}

TEST(PslrIslr, KnownProfile) {
    CorrelationProfile r;
    r.n = 4;
    r.lags = {cplx(4, 0), cplx(3, 0), cplx(2, 0), cplx(1, 0)};
    const auto out = pslr_islr(r);
    EXPECT_NEAR(out.pslr_db, db20(3.0 / 4.0), 1e-12);
    EXPECT_NEAR(out.islr_db, db20(14.0 / 4.0), 1e-12);
    const rvec want{1.0, 0.75, 0.5, 0.25};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(out.correlation_level[k], want[k], 1e-12);
}

TEST(PslrIslr, PerfectImpulseGivesNegInf) {
    CorrelationProfile r;
    r.n = 3;
    r.lags = {cplx(3, 0), cplx(0, 0), cplx(0, 0)};
    const auto out = pslr_islr(r);
    EXPECT_TRUE(std::isinf(out.pslr_db));
    EXPECT_LT(out.pslr_db, 0.0);
}

TEST(PslrIslr, ZeroMainlobeRejected) {
    CorrelationProfile r;
    r.n = 2;
    r.lags = {cplx(0, 0), cplx(1, 0)};
    EXPECT_THROW(pslr_islr(r), std::invalid_argument);
}

TEST(ProfileCsv, HeaderAndRows) {
    std::ostringstream os;
    write_profile_csv(os, autocorr_fft(ones(4)));
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("lag,re,im,abs,abs_db_rel_peak\n", 0), 0u);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);
}
