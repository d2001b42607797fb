#include "pecs/codes.hpp"

#include <gtest/gtest.h>

using namespace pecs;

TEST(Generate, FrankL2) {
    const auto x = generate({CodeKind::Frank, 2});
    ASSERT_EQ(x.size(), 4u);
    EXPECT_NEAR(x.phases[0], 0.0, 1e-15);
    EXPECT_NEAR(x.phases[1], 0.0, 1e-15);
    EXPECT_NEAR(x.phases[2], 0.0, 1e-15);
    EXPECT_NEAR(x.phases[3], kPi, 1e-15);
}

TEST(Generate, GolombM4) {
    CodeSpec spec;
    spec.kind = CodeKind::Golomb;
    spec.m = 4;
    spec.r = 1;
    const auto x = generate(spec);
    ASSERT_EQ(x.size(), 4u);
    EXPECT_NEAR(x.phases[0], 0.0, 1e-15);
    EXPECT_NEAR(x.phases[1], kPi / 2.0, 1e-15);
    EXPECT_NEAR(x.phases[2], 3.0 * kPi / 2.0, 1e-15);
    EXPECT_NEAR(x.phases[3], 3.0 * kPi, 1e-15);
}

// Quadratic trend of the Frank unwrapped phase, fitted over the alias-free
// prefix (group slopes below pi); the last groups wrap and bend back down.
TEST(Generate, FrankUnwrappedPhaseHasQuadraticTrend) {
    const int l = 4;
    const auto x = generate({CodeKind::Frank, l});
    rvec u = unwrap_phase(x);
    u.resize(static_cast<std::size_t>(l) * (l / 2 + 1));
    const PolyFit fit = fit_phase_polynomial(u, 2);
    const double range = *std::max_element(u.begin(), u.end()) - *std::min_element(u.begin(), u.end());
    EXPECT_LT(fit.residual / std::sqrt(static_cast<double>(u.size())), 0.12 * range);
    EXPECT_GT(fit.coeffs[2], 0.0);  // upward curvature like a chirp
}

TEST(Generate, AllKindsUnimodularWithStatedLength) {
    std::vector<CodeSpec> specs;
    specs.push_back({CodeKind::Frank, 5});
    specs.push_back({CodeKind::P1, 5});
    specs.push_back({CodeKind::Px, 5});
    specs.push_back({CodeKind::Px, 6});
    CodeSpec p2;
    p2.kind = CodeKind::P2;
    p2.m = 30;
    specs.push_back(p2);
    CodeSpec p4;
    p4.kind = CodeKind::P4;
    p4.m = 31;
    specs.push_back(p4);
    CodeSpec zad;
    zad.kind = CodeKind::Zadoff;
    zad.m = 30;
    zad.r = 7;
    zad.q = 3;
    specs.push_back(zad);
    CodeSpec gol;
    gol.kind = CodeKind::Golomb;
    gol.m = 29;
    gol.r = 1;
    specs.push_back(gol);

    for (const auto& s : specs) {
        const auto x = generate(s);
        EXPECT_EQ(x.size(), s.length()) << code_kind_name(s.kind);
        for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(std::abs(x.sample(i)), 1.0, 1e-15);
    }
}

TEST(Generate, ParameterValidation) {
    EXPECT_THROW(generate({CodeKind::Frank, 1}), std::invalid_argument);
    CodeSpec zad;
    zad.kind = CodeKind::Zadoff;
    zad.m = 30;
    zad.r = 6;  // gcd(6, 30) != 1
    EXPECT_THROW(generate(zad), std::invalid_argument);
    CodeSpec gol;
    gol.kind = CodeKind::Golomb;
    gol.m = 32;
    gol.r = 4;
    EXPECT_THROW(generate(gol), std::invalid_argument);
}

TEST(ReferenceMetrics, GolombN64IslMatchesKnownLevel) {
    CodeSpec spec;
    spec.kind = CodeKind::Golomb;
    spec.m = 64;
    spec.r = 1;
    const auto m = reference_metrics(spec);
    EXPECT_NEAR(m.isl_db, 22.05, 0.01);
}

TEST(ReferenceMetrics, GolombPrimeLengthSanityEnvelope) {
    CodeSpec spec;
    spec.kind = CodeKind::Golomb;
    spec.m = 61;
    spec.r = 1;
    const auto m = reference_metrics(spec);
    EXPECT_GT(m.isl, 0.0);
    EXPECT_LT(m.isl, 61.0 * 61.0 / 4.0);
    // profile agrees with the brute-force oracle
    const auto rd = autocorr_direct(generate(spec));
    const auto rf = autocorr_fft(generate(spec));
    for (std::size_t k = 0; k < rd.lag_count(); ++k)
        ASSERT_NEAR(std::abs(rd.lags[k] - rf.lags[k]), 0.0, 1e-9 * 61.0);
}

// Frozen from the O(N^2) oracle: Frank L=4 PSL is sqrt(2) and P4 M=16 PSL is
// 2 cos(pi/8) * ... = 1.8478; both codes stay under a 1.85 envelope.
TEST(ReferenceMetrics, FrankVsP4PslFixtures) {
    const auto frank = sidelobe_metrics(autocorr_direct(generate({CodeKind::Frank, 4})));
    CodeSpec p4spec;
    p4spec.kind = CodeKind::P4;
    p4spec.m = 16;
    const auto p4 = sidelobe_metrics(autocorr_direct(generate(p4spec)));
    EXPECT_NEAR(frank.psl, 1.414213562373, 1e-9);
    EXPECT_NEAR(p4.psl, 1.847759065023, 1e-9);
    EXPECT_LE(frank.psl, 1.85);
    EXPECT_LE(p4.psl, 1.85);
}
