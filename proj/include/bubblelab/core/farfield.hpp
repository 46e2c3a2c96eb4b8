#pragma once

#include "bubblelab/core/error.hpp"
#include "bubblelab/core/types.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bubblelab {

/// Far-field pattern sampled on a direction grid. Every solver in the library
/// uses the kernel e^{-i k xhat.y}, i.e. values are 4 pi times the amplitude
/// in the e^{ik|x|}/|x| normalization.
struct FarField {
    std::vector<Vec3> directions;
    std::vector<cplx> values;

    std::size_t size() const noexcept { return values.size(); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Fibonacci-lattice directions on the unit sphere.
inline std::vector<Vec3> fibonacci_sphere(std::size_t n) {
    std::vector<Vec3> dirs;
    dirs.reserve(n);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return dirs;
}

/// max_i |a_i - b_i|; the two patterns must share a direction grid.
inline double sup_difference(const FarField& a, const FarField& b) {
    require(a.size() == b.size(), ErrorKind::numeric, "far fields sampled on different grids");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        require((a.directions[i] - b.directions[i]).norm() < 1e-12, ErrorKind::numeric,
                "far fields sampled on different directions");
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
    return m;
}

inline double relative_sup_error(const FarField& approx, const FarField& reference) {
    return sup_difference(approx, reference) / reference.max_abs();
}

inline void write_farfield_csv(std::ostream& os, const FarField& ff) {
    os << "x_hat_x,x_hat_y,x_hat_z,re,im\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < ff.size(); ++i) {
        const auto& d = ff.directions[i];
        os << d.x() << ',' << d.y() << ',' << d.z() << ',' << ff.values[i].real() << ','
           << ff.values[i].imag() << '\n';
    }
}

inline void write_farfield_csv(const std::string& path, const FarField& ff) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path);
    write_farfield_csv(os, ff);
}

inline FarField read_farfield_csv(const std::string& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
    std::string line;
    std::getline(is, line);
    require(line == "x_hat_x,x_hat_y,x_hat_z,re,im", ErrorKind::io, "bad far-field header in " + path);
    FarField ff;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, y, z, re, im;
        require(static_cast<bool>(ls >> x >> y >> z >> re >> im), ErrorKind::io,
                "malformed far-field row in " + path);
        ff.directions.emplace_back(x, y, z);
        ff.values.emplace_back(re, im);
    }
    return ff;
}

} // namespace bubblelab
