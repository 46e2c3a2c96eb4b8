#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace bubblelab {

/// Density K >= 0: a constant or samples on a regular grid with multilinear
/// interpolation (trilinear in space, bilinear when the grid has nz = 1 and
/// is evaluated in chart parameters). Outside the grid the nearest sample wins.
class DensityField {
public:
    enum class Kind { constant, grid };

    DensityField() = default;

    static DensityField constant(double value, double lambda_K = 1.0) {
        require(std::isfinite(value) && value >= 0.0, ErrorKind::config, "density K must be finite and non-negative");
        DensityField d;
        d.kind_ = Kind::constant;
        d.value_ = value;
        d.lambda_ = lambda_K;
        return d;
    }

    static DensityField grid(const Vec3& origin, const Vec3& spacing, std::array<int, 3> dims, std::vector<double> samples,
                             double lambda_K = 1.0) {
        require(dims[0] >= 1 && dims[1] >= 1 && dims[2] >= 1, ErrorKind::config, "density grid dims must be positive");
        require(samples.size() == static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], ErrorKind::config,
                "density grid sample count does not match dims");
        for (double v : samples)
            require(std::isfinite(v) && v >= 0.0, ErrorKind::config, "density grid has a negative or non-finite sample");
        for (int k = 0; k < 3; ++k)
            require(dims[static_cast<std::size_t>(k)] == 1 || spacing[k] > 0.0, ErrorKind::config,
                    "density grid spacing must be positive");
        DensityField d;
        d.kind_ = Kind::grid;
        d.origin_ = origin;
        d.spacing_ = spacing;
        d.dims_ = dims;
        d.samples_ = std::move(samples);
        d.lambda_ = lambda_K;
        return d;
    }

    Kind kind() const noexcept { return kind_; }
    double lambda_K() const noexcept { return lambda_; }

    double max_value() const {
        if (kind_ == Kind::constant) return value_;
        return *std::max_element(samples_.begin(), samples_.end());
    }

    /// sup [K + 1], the largest per-cell bubble count.
    int max_count() const { return static_cast<int>(std::floor(max_value())) + 1; }

    double operator()(const Vec3& x) const {
        if (kind_ == Kind::constant) return value_;
        std::array<int, 3> i0{};
        std::array<double, 3> f{};
        for (int k = 0; k < 3; ++k) {
            const auto K = static_cast<std::size_t>(k);
            if (dims_[K] == 1) {
                i0[K] = 0;
                f[K] = 0.0;
                continue;
            }
            const double u = std::clamp((x[k] - origin_[k]) / spacing_[k], 0.0, dims_[K] - 1.0);
            i0[K] = std::min(static_cast<int>(std::floor(u)), dims_[K] - 2);
            f[K] = u - i0[K];
        }
        double acc = 0.0;
        for (int c = 0; c < 8; ++c) {
            double w = 1.0;
            std::array<int, 3> idx{};
            bool skip = false;
            for (int k = 0; k < 3; ++k) {
                const auto K = static_cast<std::size_t>(k);
                const int bit = (c >> k) & 1;
                if (dims_[K] == 1 && bit) {
                    skip = true;
                    break;
                }
                idx[K] = i0[K] + bit;
                w *= bit ? f[K] : 1.0 - f[K];
            }
            if (skip || w == 0.0) continue;
            acc += w * samples_[(static_cast<std::size_t>(idx[2]) * dims_[1] + idx[1]) * dims_[0] + idx[0]];
        }
        return acc;
    }

    /// Chart-parameter evaluation (u, v) for surface densities.
    double at_param(double u, double v) const { return (*this)(Vec3(u, v, 0.0)); }

    const Vec3& origin() const noexcept { return origin_; }
    const Vec3& spacing() const noexcept { return spacing_; }
    const std::array<int, 3>& dims() const noexcept { return dims_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    double value() const noexcept { return value_; }

private:
    Kind kind_ = Kind::constant;
    double value_ = 0.0;
    double lambda_ = 1.0;
    Vec3 origin_ = Vec3::Zero();
    Vec3 spacing_ = Vec3::Ones();
    std::array<int, 3> dims_{1, 1, 1};
    std::vector<double> samples_;
};

} // namespace bubblelab
