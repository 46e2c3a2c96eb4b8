#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"

#include <fftw3.h>

#include <array>
#include <complex>
#include <vector>

namespace bubblelab {

/// Aperiodic convolution on an n0 x n1 x n2 grid with a translation-invariant
/// kernel w(i-j), via zero padding to 2n and FFTW. Plans use FFTW_ESTIMATE so
/// results do not depend on timing.
class GridConvolution {
public:
    /// kernel(di, dj, dk) for offsets in (-n, n).
    template <typename Kernel>
    GridConvolution(std::array<int, 3> n, Kernel kernel) : n_(n), p_{2 * n[0], 2 * n[1], 2 * n[2]} {
        const std::size_t total = static_cast<std::size_t>(p_[0]) * p_[1] * p_[2];
        buf_ = fftw_alloc_complex(total);
        khat_.resize(total);
        require(buf_ != nullptr, ErrorKind::numeric, "FFTW allocation failed");
        fwd_ = fftw_plan_dft_3d(p_[2], p_[1], p_[0], buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_3d(p_[2], p_[1], p_[0], buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        require(fwd_ && bwd_, ErrorKind::numeric, "FFTW plan creation failed");
        for (int k = 0; k < p_[2]; ++k)
            for (int j = 0; j < p_[1]; ++j)
                for (int i = 0; i < p_[0]; ++i) {
                    const int di = i < n_[0] ? i : i - p_[0];
                    const int dj = j < n_[1] ? j : j - p_[1];
                    const int dk = k < n_[2] ? k : k - p_[2];
                    cplx w = 0.0;
                    if (std::abs(di) < n_[0] && std::abs(dj) < n_[1] && std::abs(dk) < n_[2]) w = kernel(di, dj, dk);
                    set(index(i, j, k), w);
                }
        fftw_execute(fwd_);
        for (std::size_t q = 0; q < total; ++q) khat_[q] = get(q) / static_cast<double>(total);
    }

    GridConvolution(const GridConvolution&) = delete;
    GridConvolution& operator=(const GridConvolution&) = delete;

    ~GridConvolution() {
        if (fwd_) fftw_destroy_plan(fwd_);
        if (bwd_) fftw_destroy_plan(bwd_);
        if (buf_) fftw_free(buf_);
    }

    /// out[i] = sum_j w(i - j) in[j] on the unpadded grid (lexicographic, i fastest).
    void apply(const std::vector<cplx>& in, std::vector<cplx>& out) {
        const std::size_t total = static_cast<std::size_t>(p_[0]) * p_[1] * p_[2];
        for (std::size_t q = 0; q < total; ++q) set(q, 0.0);
        for (int k = 0; k < n_[2]; ++k)
            for (int j = 0; j < n_[1]; ++j)
                for (int i = 0; i < n_[0]; ++i) set(index(i, j, k), in[small(i, j, k)]);
        fftw_execute(fwd_);
        for (std::size_t q = 0; q < total; ++q) set(q, get(q) * khat_[q]);
        fftw_execute(bwd_);
        out.resize(in.size());
        for (int k = 0; k < n_[2]; ++k)
            for (int j = 0; j < n_[1]; ++j)
                for (int i = 0; i < n_[0]; ++i) out[small(i, j, k)] = get(index(i, j, k));
    }

private:
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * p_[1] + static_cast<std::size_t>(j)) * p_[0] + static_cast<std::size_t>(i);
    }
    std::size_t small(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * n_[1] + static_cast<std::size_t>(j)) * n_[0] + static_cast<std::size_t>(i);
    }
    void set(std::size_t q, cplx v) {
        buf_[q][0] = v.real();
        buf_[q][1] = v.imag();
    }
    cplx get(std::size_t q) const { return {buf_[q][0], buf_[q][1]}; }

    std::array<int, 3> n_, p_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
    std::vector<cplx> khat_;
};

} // namespace bubblelab
