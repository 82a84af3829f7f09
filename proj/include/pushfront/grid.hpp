#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pushfront/errors.hpp"

namespace pushfront {

/// Uniform 1-D grid x_i = x_min + i*dx, i = 0..n-1.
struct UniformGrid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    /// Symmetric grid on [-L', L'] with L' >= half_width and 0 as a node.
    static UniformGrid symmetric(double half_width, double dx) {
        if (!(dx > 0.0) || !(half_width > 0.0)) throw InvalidArgument("grid needs positive extent and spacing");
        const auto m = static_cast<std::size_t>(std::ceil(half_width / dx - 1e-9));
        return {-static_cast<double>(m) * dx, dx, 2 * m + 1};
    }

    /// Grid on [lo, hi]; hi is rounded so that (hi - lo)/dx is an integer.
    static UniformGrid span(double lo, double hi, double dx) {
        if (!(dx > 0.0) || !(hi > lo)) throw InvalidArgument("grid needs hi > lo and dx > 0");
        const auto cells = static_cast<std::size_t>(std::llround((hi - lo) / dx));
        return {lo, dx, cells + 1};
    }

    double operator[](std::size_t i) const noexcept { return x_min + dx * static_cast<double>(i); }
    double x_max() const noexcept { return (*this)[n - 1]; }
    std::size_t size() const noexcept { return n; }

    std::vector<double> nodes() const {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (*this)[i];
        return x;
    }

    /// Index of the node nearest to x, clamped to the grid.
    std::size_t nearest(double x) const noexcept {
        const double s = std::round((x - x_min) / dx);
        if (s <= 0) return 0;
        return std::min(n - 1, static_cast<std::size_t>(s));
    }
};

/// Linear interpolation of grid values; nullopt outside the grid.
inline std::optional<double> interpolate(const UniformGrid& grid, std::span<const double> v, double x) {
    const double s = (x - grid.x_min) / grid.dx;
    if (s < -1e-12 || s > static_cast<double>(grid.n - 1) + 1e-12) return std::nullopt;
    if (s <= 0.0) return v.front();
    const auto i = static_cast<std::size_t>(std::floor(s));
    if (i >= grid.n - 1) return v.back();
    const double t = s - static_cast<double>(i);
    return (1.0 - t) * v[i] + t * v[i + 1];
}

/// Outermost crossing of `level`; from the left end when from_left, otherwise
/// from the right end. Linear interpolation between the bracketing nodes.
inline std::optional<double> level_crossing(const UniformGrid& grid, std::span<const double> v, double level,
                                            bool from_left) {
    const std::size_t n = v.size();
    if (n < 2) return std::nullopt;
    auto cross = [&](std::size_t i) -> std::optional<double> {
        const double a = v[i] - level, b = v[i + 1] - level;
        if (a == 0.0) return grid[i];
        if ((a < 0.0) != (b < 0.0) || b == 0.0) {
            if (b == 0.0) return grid[i + 1];
            return grid[i] + grid.dx * a / (a - b);
        }
        return std::nullopt;
    };
    if (from_left) {
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (auto x = cross(i)) return x;
    } else {
        for (std::size_t i = n - 1; i-- > 0;)
            if (auto x = cross(i)) return x;
    }
    return std::nullopt;
}

}  // namespace pushfront
