#pragma once

#include <ostream>

#include "pecs/fft.hpp"
#include "pecs/seqcore.hpp"

namespace pecs {

/**
 * Aperiodic autocorrelation lags r_k = sum_{n=1}^{N-k} x_n x_{n+k}^*,
 * k = 0..N-1. Negative lags follow from r_{-k} = r_k^*.
 */
struct CorrelationProfile {
    cvec lags;  // r_0..r_{N-1}
    std::size_t n = 0;

    std::size_t lag_count() const { return lags.size(); }
};

struct SidelobeMetrics {
    double isl = 0.0;     // sum_{k>=1} |r_k|^2
    double psl = 0.0;     // max_{k>=1} |r_k|
    double lp = 0.0;      // (sum_{k>=1} |r_k|^p)^{1/p}
    double p = 2.0;
    double isl_db = 0.0;  // 10 log10
    double psl_db = 0.0;  // 10 log10
};

namespace detail {

/// f = DFT_{2N}([x; 0]) and rv = IDFT_{2N}(|f|^2).
/// rv[k] holds r_{-k} = r_k^* for k = 1..N-1; rv[0] = r_0; rv[N] = 0.
struct Spectrum2N {
    cvec f;   // length 2N
    cvec rv;  // length 2N
};

inline Spectrum2N correlate_2n(const cvec& x) {
    const std::size_t n = x.size();
    Spectrum2N s;
    s.f.assign(2 * n, cplx(0.0, 0.0));
    std::copy(x.begin(), x.end(), s.f.begin());
    fft::dft_inplace(s.f);
    s.rv.resize(2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) s.rv[k] = std::norm(s.f[k]);
    fft::idft_inplace(s.rv);
    return s;
}

}  // namespace detail

/// O(N^2) reference evaluation of the definition; kept as the test oracle.
inline CorrelationProfile autocorr_direct(const UnimodularSequence& x) {
    const std::size_t n = x.size();
    const cvec v = x.to_complex();
    CorrelationProfile prof;
    prof.n = n;
    prof.lags.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i + k < n; ++i) acc += v[i] * std::conj(v[i + k]);
        prof.lags[k] = acc;
    }
    return prof;
}

/// Production path: 2N zero-padded transform, r = IDFT(|DFT([x;0])|^2).
inline CorrelationProfile autocorr_fft(const UnimodularSequence& x) {
    const std::size_t n = x.size();
    const auto s = detail::correlate_2n(x.to_complex());
    CorrelationProfile prof;
    prof.n = n;
    prof.lags.resize(n);
    for (std::size_t k = 0; k < n; ++k) prof.lags[k] = std::conj(s.rv[k]);
    return prof;
}

/**
 * Cross-correlation c_k = sum_n x_n y_{n+k}^* over the valid overlap,
 * k = -(N-1)..N-1, returned in ascending lag order. Unequal lengths are
 * allowed; the shorter input is zero-padded to the longer one.
 */
inline cvec cross_correlation(const UnimodularSequence& x, const UnimodularSequence& y) {
    cvec a = x.to_complex();
    cvec b = y.to_complex();
    const std::size_t n = std::max(a.size(), b.size());
    if (n == 0) throw std::invalid_argument("cross_correlation: empty input");
    a.resize(n, cplx(0.0, 0.0));
    b.resize(n, cplx(0.0, 0.0));

    cvec fa(2 * n, cplx(0.0, 0.0));
    cvec fb(2 * n, cplx(0.0, 0.0));
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    fft::dft_inplace(fa);
    fft::dft_inplace(fb);
    for (std::size_t i = 0; i < 2 * n; ++i) fa[i] *= std::conj(fb[i]);
    fft::idft_inplace(fa);

    // fa[m] = c_{-m} for m = 0..N-1 and fa[2N-m] = c_{+m}
    cvec out(2 * n - 1);
    for (std::size_t k = 0; k < n; ++k) out[n - 1 - k] = fa[k];
    for (std::size_t k = 1; k < n; ++k) out[n - 1 + k] = fa[2 * n - k];
    return out;
}

/// max_k |c_k| / N for equal-length inputs; the paper's interference statistic.
inline double normalized_xcorr_peak(const UnimodularSequence& x, const UnimodularSequence& y) {
    const cvec c = cross_correlation(x, y);
    double peak = 0.0;
    for (const auto& v : c) peak = std::max(peak, std::abs(v));
    return peak / static_cast<double>(std::max(x.size(), y.size()));
}

/// Sidelobe metrics over lags 1..N-1 (the mainlobe r_0 is excluded).
/// The lp sum is evaluated in max-normalized form so large p stays finite.
inline SidelobeMetrics sidelobe_metrics(const CorrelationProfile& r, double p = 2.0) {
    if (p < 2.0) throw std::invalid_argument("sidelobe_metrics: p >= 2 required");
    SidelobeMetrics m;
    m.p = p;
    double peak = 0.0;
    for (std::size_t k = 1; k < r.lag_count(); ++k) {
        const double a = std::abs(r.lags[k]);
        m.isl += a * a;
        peak = std::max(peak, a);
    }
    m.psl = peak;
    if (peak > 0.0) {
        double acc = 0.0;
        for (std::size_t k = 1; k < r.lag_count(); ++k) {
            const double s = std::abs(r.lags[k]) / peak;
            if (s > 0.0) acc += std::pow(s, p);
        }
        m.lp = peak * std::pow(acc, 1.0 / p);
    }
    m.isl_db = m.isl > 0.0 ? db10(m.isl) : -std::numeric_limits<double>::infinity();
    m.psl_db = m.psl > 0.0 ? db10(m.psl) : -std::numeric_limits<double>::infinity();
    return m;
}

struct CorrelationRatios {
    double pslr_db;            // 20 log10(PSL / max_k |r_k|)
    double islr_db;            // 20 log10(ISL / max_k |r_k|)
    rvec correlation_level;    // |r_k / r_0| per lag
};

inline CorrelationRatios pslr_islr(const CorrelationProfile& r) {
    if (r.lag_count() == 0 || std::abs(r.lags[0]) == 0.0)
        throw std::invalid_argument("pslr_islr: r_0 must be nonzero");
    double peak_all = 0.0;
    double psl = 0.0;
    double isl = 0.0;
    for (std::size_t k = 0; k < r.lag_count(); ++k) {
        const double a = std::abs(r.lags[k]);
        peak_all = std::max(peak_all, a);
        if (k >= 1) {
            psl = std::max(psl, a);
            isl += a * a;
        }
    }
    CorrelationRatios out;
    const double ninf = -std::numeric_limits<double>::infinity();
    out.pslr_db = psl > 0.0 ? db20(psl / peak_all) : ninf;
    out.islr_db = isl > 0.0 ? db20(isl / peak_all) : ninf;
    out.correlation_level.resize(r.lag_count());
    const double r0 = std::abs(r.lags[0]);
    for (std::size_t k = 0; k < r.lag_count(); ++k)
        out.correlation_level[k] = std::abs(r.lags[k]) / r0;
    return out;
}

inline void write_profile_csv(std::ostream& os, const CorrelationProfile& r) {
    os << "lag,re,im,abs,abs_db_rel_peak\n";
    const double r0 = std::abs(r.lags.empty() ? cplx(1.0, 0.0) : r.lags[0]);
    for (std::size_t k = 0; k < r.lag_count(); ++k) {
        const double a = std::abs(r.lags[k]);
        os << k << ',' << r.lags[k].real() << ',' << r.lags[k].imag() << ',' << a << ','
           << (a > 0.0 ? db20(a / r0) : -999.0) << '\n';
    }
}

}  // namespace pecs
