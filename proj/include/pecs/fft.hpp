#pragma once

#include <cstddef>
#include <memory>
#include <unordered_map>

#include "pecs/common.hpp"

namespace pecs::fft {

namespace detail {

inline bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Iterative in-place radix-2 transform for power-of-two lengths.
/// Twiddles and the bit-reversal permutation are precomputed per size.
class Pow2Plan {
public:
    explicit Pow2Plan(std::size_t n) : n_(n), rev_(n), tw_(n / 2) {
        unsigned levels = 0;
        while ((std::size_t{1} << levels) < n) ++levels;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (unsigned b = 0; b < levels; ++b) r |= ((i >> b) & 1U) << (levels - 1 - b);
            rev_[i] = r;
        }
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            tw_[k] = cplx(std::cos(a), std::sin(a));
        }
    }

    void forward(cplx* data) const {
        const std::size_t n = n_;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = rev_[i];
            if (i < j) std::swap(data[i], data[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n / len;
            for (std::size_t i = 0; i < n; i += len) {
                const cplx* w = tw_.data();
                for (std::size_t k = 0; k < half; ++k, w += step) {
                    const cplx u = data[i + k];
                    const cplx v = data[i + k + half] * (*w);
                    data[i + k] = u + v;
                    data[i + k + half] = u - v;
                }
            }
        }
    }

private:
    std::size_t n_;
    std::vector<std::size_t> rev_;
    cvec tw_;
};

class Plan;
inline const Plan& plan_for(std::size_t n);

/**
 * Transform plan for an arbitrary length.
 *
 * Power-of-two lengths run the radix-2 kernel directly; everything else goes
 * through Bluestein's chirp-z identity nk = (n^2 + k^2 - (k-n)^2)/2, which
 * turns the DFT into one circular convolution at the next power of two
 * >= 2n-1. The chirp phase n^2/(2n) turns is reduced modulo 2n in exact
 * integer arithmetic before the sin/cos evaluation.
 */
class Plan {
public:
    explicit Plan(std::size_t n) : n_(n) {
        if (is_pow2(n)) {
            core_ = std::make_unique<Pow2Plan>(n);
            return;
        }
        m_ = next_pow2(2 * n - 1);
        core_ = std::make_unique<Pow2Plan>(m_);
        chirp_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
            const double a = -kPi * static_cast<double>(k2) / static_cast<double>(n);
            chirp_[k] = cplx(std::cos(a), std::sin(a));
        }
        bfft_.assign(m_, cplx(0.0, 0.0));
        bfft_[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k) {
            bfft_[k] = std::conj(chirp_[k]);
            bfft_[m_ - k] = std::conj(chirp_[k]);
        }
        core_->forward(bfft_.data());
    }

    std::size_t size() const { return n_; }

    void forward(cplx* data) const {
        if (m_ == 0) {
            core_->forward(data);
            return;
        }
        cvec a(m_, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n_; ++k) a[k] = data[k] * chirp_[k];
        core_->forward(a.data());
        for (std::size_t k = 0; k < m_; ++k) a[k] *= bfft_[k];
        // inverse convolution FFT via conjugation
        for (auto& v : a) v = std::conj(v);
        core_->forward(a.data());
        const double inv_m = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k) data[k] = std::conj(a[k]) * inv_m * chirp_[k];
    }

    void inverse(cplx* data) const {
        for (std::size_t k = 0; k < n_; ++k) data[k] = std::conj(data[k]);
        forward(data);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t k = 0; k < n_; ++k) data[k] = std::conj(data[k]) * inv_n;
    }

private:
    std::size_t n_;
    std::size_t m_ = 0;  // 0 marks the direct power-of-two path
    std::unique_ptr<Pow2Plan> core_;
    cvec chirp_;
    cvec bfft_;
};

inline const Plan& plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<Plan>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Plan>(n)).first;
    return *it->second;
}

}  // namespace detail

/// Unnormalized forward DFT, X_k = sum_n x_n e^{-j 2 pi n k / N}.
inline void dft_inplace(cvec& v) {
    if (v.empty()) throw std::invalid_argument("fft: empty input");
    detail::plan_for(v.size()).forward(v.data());
}

/// Inverse DFT with the 1/N factor, so idft(dft(x)) == x.
inline void idft_inplace(cvec& v) {
    if (v.empty()) throw std::invalid_argument("fft: empty input");
    detail::plan_for(v.size()).inverse(v.data());
}

inline cvec dft(cvec v) {
    dft_inplace(v);
    return v;
}

inline cvec idft(cvec v) {
    idft_inplace(v);
    return v;
}

}  // namespace pecs::fft
