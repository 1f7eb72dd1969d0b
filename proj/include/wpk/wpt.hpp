#pragma once

#include <string>
#include <vector>

#include "wpk/numerics.hpp"
#include "wpk/propagator.hpp"
#include "wpk/signals.hpp"
#include "wpk/windows.hpp"

namespace wpk {

/// Windowed transform W(x, xi) = integral conj(phi(y-x)) f(y) e^{-i y xi} dy,
/// unnormalized e^{-i y xi} convention throughout.

struct WptSlice {
    std::vector<Vec> x_points;
    std::vector<Vec> xi_points;
    std::vector<Complex> values;  // x-major: values[ix * xi_points.size() + ixi]
    std::string window_descriptor;
    std::string signal_descriptor;
    bool fast_path = true;  // false when a non-uniform xi set forced fallback

    Complex at(std::size_t ix, std::size_t ixi) const;
};

/// Uniform 1-D xi grid commensurate with the signal grid when
/// spacing = m * pi/L for integer m >= 1 (offset arbitrary: handled by
/// baseband modulation).
struct XiGrid {
    double offset = 0.0;
    double spacing = 0.0;
    std::size_t count = 0;
    std::vector<Vec> points() const;
};

/// Quadrature of the defining integral over the signal grid. Checks that the
/// grid resolves the modulated window: |xi| + window bandwidth must stay
/// below the grid Nyquist frequency.
Complex wpt_point(const WaveField& f, const EvolvedWindow& w, const Vec& x, const Vec& xi);

/// Same transform against closed-form 1-D data (adaptive panel count,
/// oscillation-resolving Gauss-Legendre quadrature).
Complex wpt_point_analytic(const AnalyticSignal& f, const EvolvedWindow& w, double x, double xi);

/// One DFT per x over the commensurate xi grid; falls back to per-point
/// quadrature (fast_path=false) when the xi set is not commensurate.
WptSlice wpt_grid(const WaveField& f, const EvolvedWindow& w, const std::vector<Vec>& xs,
                  const XiGrid& xis);
WptSlice wpt_grid(const WaveField& f, const EvolvedWindow& w, const std::vector<Vec>& xs,
                  const std::vector<Vec>& xi_set);

/// sum |W|^2 dx dxi over the slice (x cells from the signal grid spacing).
double slice_energy(const WptSlice& slice, double dx, double dxi);

}  // namespace wpk
