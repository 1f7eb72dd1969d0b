#include "wpk/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpk {

UniformGrid::UniformGrid(int n, double L, std::size_t N) : dim(n), half_width(L), points(N) {
    if (n < 1) throw std::invalid_argument("UniformGrid: dim must be >= 1");
    if (!(L > 0.0)) throw std::invalid_argument("UniformGrid: half width must be positive");
    if (N < 2) throw std::invalid_argument("UniformGrid: need at least 2 points per axis");
}

double UniformGrid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= step();
    return v;
}

std::size_t UniformGrid::total_points() const {
    std::size_t t = 1;
    for (int d = 0; d < dim; ++d) t *= points;
    return t;
}

Vec UniformGrid::point(std::size_t flat) const {
    Vec x(dim);
    for (int d = dim - 1; d >= 0; --d) {
        x[d] = coord(flat % points);
        flat /= points;
    }
    return x;
}

double UniformGrid::nyquist() const { return std::numbers::pi / step(); }

std::vector<double> UniformGrid::wavenumbers() const {
    std::vector<double> k(points);
    const double dk = std::numbers::pi / half_width;  // 2*pi / (2L)
    const std::size_t half = points / 2;
    for (std::size_t i = 0; i < points; ++i) {
        const double idx = (i < half) ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(points);
        k[i] = dk * idx;
    }
    return k;
}

}  // namespace wpk
