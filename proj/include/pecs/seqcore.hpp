#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pecs/common.hpp"

namespace pecs {

/**
 * Constant-modulus sequence stored as a phase vector (radians).
 *
 * Storing phases instead of complex pairs makes unimodularity structural:
 * the n-th sample is e^{j phases[n]} by definition. Phases are kept as given
 * (possibly outside (-pi, pi]); wrapping only happens on demand.
 */
struct UnimodularSequence {
    rvec phases;

    UnimodularSequence() = default;
    explicit UnimodularSequence(rvec p) : phases(std::move(p)) {
        if (phases.size() < 2) throw std::invalid_argument("UnimodularSequence: N >= 2 required");
        for (double v : phases)
            if (!std::isfinite(v)) throw std::invalid_argument("UnimodularSequence: non-finite phase");
    }

    std::size_t size() const { return phases.size(); }

    cplx sample(std::size_t n) const { return cplx(std::cos(phases[n]), std::sin(phases[n])); }

    cvec to_complex() const {
        cvec out(phases.size());
        for (std::size_t n = 0; n < phases.size(); ++n) out[n] = sample(n);
        return out;
    }
};

/// Sub-sequence lengths M_1..M_L; the associated sequence has N = sum M_l.
struct Partition {
    std::vector<int> lengths;

    Partition() = default;
    explicit Partition(std::vector<int> m) : lengths(std::move(m)) {
        if (lengths.empty()) throw std::invalid_argument("Partition: L >= 1 required");
        for (int v : lengths)
            if (v < 1) throw std::invalid_argument("Partition: every M_l >= 1 required");
    }

    std::size_t count() const { return lengths.size(); }

    std::size_t total() const {
        return static_cast<std::size_t>(std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0}));
    }

    /// Uniform split into blocks of length m (last block takes the remainder).
    static Partition uniform(int n, int m) {
        if (n < 1 || m < 1) throw std::invalid_argument("Partition::uniform: positive n, m required");
        std::vector<int> out;
        int left = n;
        while (left > 0) {
            out.push_back(std::min(m, left));
            left -= m;
        }
        return Partition(std::move(out));
    }

    /**
     * Lengths drawn uniformly from [m_min, m_max]; the last block is trimmed
     * so the total equals n. A trimmed tail shorter than min_tail is folded
     * into the previous block (keeps every block usable for a degree-Q fit).
     */
    static Partition random(int n, int m_min, int m_max, std::uint64_t seed, int min_tail = 1) {
        if (m_min < 1 || m_max < m_min || n < m_min)
            throw std::invalid_argument("Partition::random: need 1 <= m_min <= m_max <= n");
        std::mt19937_64 gen(seed);
        std::vector<int> out;
        int left = n;
        while (left > 0) {
            int m = static_cast<int>(rng::next_int(gen, m_min, m_max));
            if (m >= left) {
                m = left;
                if (m < min_tail && !out.empty()) {
                    out.back() += m;
                    left = 0;
                    break;
                }
            }
            out.push_back(m);
            left -= m;
        }
        return Partition(std::move(out));
    }
};

/// Per-sub-sequence phase polynomial coefficients a_{q,l}, q = 0..Q.
struct PhasePolynomials {
    int degree = 0;                  // Q
    std::vector<rvec> coeffs;        // L rows, each of length Q+1

    PhasePolynomials() = default;
    PhasePolynomials(int q, std::vector<rvec> a) : degree(q), coeffs(std::move(a)) {
        if (q < 0) throw std::invalid_argument("PhasePolynomials: Q >= 0 required");
        for (const auto& row : coeffs)
            if (row.size() != static_cast<std::size_t>(q) + 1)
                throw std::invalid_argument("PhasePolynomials: row length must be Q+1");
    }

    std::size_t rows() const { return coeffs.size(); }

    /// Phase at sample index m (1-based within the sub-sequence).
    double eval(std::size_t l, int m) const {
        const rvec& a = coeffs[l];
        double acc = 0.0;
        double mq = 1.0;
        for (int q = 0; q <= degree; ++q) {
            acc += a[static_cast<std::size_t>(q)] * mq;
            mq *= static_cast<double>(m);
        }
        return acc;
    }
};

/**
 * Builds the sequence whose l-th block has phase sum_q a_{q,l} m^q at the
 * 1-based in-block index m, blocks concatenated in order l = 1..L.
 */
inline UnimodularSequence synthesize(const Partition& partition, const PhasePolynomials& polys) {
    if (polys.rows() != partition.count())
        throw std::invalid_argument("synthesize: coefficient rows != partition blocks");
    rvec phases;
    phases.reserve(partition.total());
    for (std::size_t l = 0; l < partition.count(); ++l)
        for (int m = 1; m <= partition.lengths[l]; ++m) phases.push_back(polys.eval(l, m));
    return UnimodularSequence(std::move(phases));
}

/// Principal phase in (-pi, pi].
inline double wrap_phase(double phi) {
    return std::atan2(std::sin(phi), std::cos(phi));
}

/**
 * Standard unwrap of arg(x_n): first element in (-pi, pi], then 2 pi
 * corrections so consecutive outputs never jump by more than pi.
 */
inline rvec unwrap_phase(const UnimodularSequence& x) {
    const std::size_t n = x.size();
    rvec out(n);
    double prev_arg = wrap_phase(x.phases[0]);
    out[0] = prev_arg;
    for (std::size_t i = 1; i < n; ++i) {
        const double a = wrap_phase(x.phases[i]);
        out[i] = out[i - 1] + std::remainder(a - prev_arg, kTwoPi);
        prev_arg = a;
    }
    return out;
}

struct PolyFit {
    rvec coeffs;      // a_0..a_Q
    double residual;  // l2 norm of the fit residual
};

/**
 * Least-squares fit of sum_q a_q m^q to the given phases over m = 1..M.
 *
 * The solve runs on the scaled basis (m/M)^q and the coefficients are scaled
 * back, since the raw monomial basis is too ill-conditioned for M in the
 * hundreds with Q up to 6. Falls back to a truncated SVD when the scaled
 * system is still rank-deficient.
 */
inline PolyFit fit_phase_polynomial(const rvec& phases, int q) {
    const auto m_count = static_cast<Eigen::Index>(phases.size());
    if (q < 0) throw std::invalid_argument("fit_phase_polynomial: Q >= 0 required");
    if (m_count < q + 1) throw std::invalid_argument("fit_phase_polynomial: need at least Q+1 samples");

    const double scale = static_cast<double>(m_count);
    Eigen::MatrixXd basis(m_count, q + 1);
    for (Eigen::Index i = 0; i < m_count; ++i) {
        const double s = static_cast<double>(i + 1) / scale;
        double sq = 1.0;
        for (int j = 0; j <= q; ++j) {
            basis(i, j) = sq;
            sq *= s;
        }
    }
    Eigen::VectorXd rhs(m_count);
    for (Eigen::Index i = 0; i < m_count; ++i) rhs(i) = phases[static_cast<std::size_t>(i)];

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    Eigen::VectorXd z;
    if (qr.rank() == q + 1) {
        z = qr.solve(rhs);
    } else {
        auto svd = basis.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-12);
        z = svd.solve(rhs);
    }

    PolyFit fit;
    fit.coeffs.resize(static_cast<std::size_t>(q) + 1);
    double pw = 1.0;
    for (int j = 0; j <= q; ++j) {
        fit.coeffs[static_cast<std::size_t>(j)] = z(j) * pw;
        pw /= scale;
    }
    fit.residual = (basis * z - rhs).norm();
    return fit;
}

/// Phases i.i.d. uniform on [0, 2 pi); identical seed gives an identical sequence.
inline UnimodularSequence random_unimodular(int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_unimodular: N >= 2 required");
    std::mt19937_64 gen(seed);
    rvec phases(static_cast<std::size_t>(n));
    for (auto& p : phases) p = kTwoPi * rng::next_unit(gen);
    return UnimodularSequence(std::move(phases));
}

}  // namespace pecs
