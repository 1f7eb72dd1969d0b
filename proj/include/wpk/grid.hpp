#pragma once

#include <cstddef>
#include <vector>

#include "wpk/numerics.hpp"

namespace wpk {

/// Uniform periodic grid on [-L, L)^n with N points per axis.
/// Node coordinates along an axis: x_i = -L + i * (2L/N).
struct UniformGrid {
    int dim = 1;
    double half_width = 1.0;  // L
    std::size_t points = 2;   // N per axis

    UniformGrid() = default;
    UniformGrid(int n, double L, std::size_t N);

    double step() const { return 2.0 * half_width / static_cast<double>(points); }
    double cell_volume() const;
    std::size_t total_points() const;
    double coord(std::size_t i) const { return -half_width + step() * static_cast<double>(i); }
    Vec point(std::size_t flat_index) const;  // row-major
    double nyquist() const;                   // pi / step

    /// Angular wavenumbers in DFT storage order (0, 1, ..., -1) * (pi/L).
    std::vector<double> wavenumbers() const;

    bool operator==(const UniformGrid&) const = default;
};

}  // namespace wpk
