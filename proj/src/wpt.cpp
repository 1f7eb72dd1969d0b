#include "wpk/wpt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wpk/errors.hpp"
#include "wpk/fft.hpp"

namespace wpk {

Complex WptSlice::at(std::size_t ix, std::size_t ixi) const {
    return values[ix * xi_points.size() + ixi];
}

std::vector<Vec> XiGrid::points() const {
    std::vector<Vec> p;
    p.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        p.push_back({offset + spacing * static_cast<double>(i)});
    return p;
}

namespace {

void check_nyquist(const WaveField& f, const EvolvedWindow& w, const Vec& xi) {
    const double budget = f.grid.nyquist();
    const double need = norm2(xi) + w.bandwidth();
    if (need > budget)
        throw NumericError("wpt: Nyquist violation: |xi| + window bandwidth = " +
                           std::to_string(need) + " exceeds grid limit " +
                           std::to_string(budget));
}

}  // namespace

Complex wpt_point(const WaveField& f, const EvolvedWindow& w, const Vec& x, const Vec& xi) {
    if (f.values.empty()) throw std::invalid_argument("wpt_point: empty signal");
    if (f.values.size() != f.grid.total_points())
        throw std::invalid_argument("wpt_point: sample count does not match grid");
    if (static_cast<int>(x.size()) != f.grid.dim || static_cast<int>(xi.size()) != f.grid.dim ||
        w.dim() != f.grid.dim)
        throw std::invalid_argument("wpt_point: dimension mismatch");
    check_nyquist(f, w, xi);

    const double cell = f.grid.cell_volume();
    Complex acc = 0.0;
    if (f.grid.dim == 1) {
        // restrict to the window's essential support
        const double reach = w.support_halfwidth();
        const double h = f.grid.step();
        const double L = f.grid.half_width;
        const std::size_t n = f.grid.points;
        std::size_t i0 = 0, i1 = n;
        if (x[0] - reach > -L)
            i0 = static_cast<std::size_t>(std::floor((x[0] - reach + L) / h));
        if (x[0] + reach < L)
            i1 = std::min<std::size_t>(
                n, static_cast<std::size_t>(std::ceil((x[0] + reach + L) / h)) + 1);
        for (std::size_t i = i0; i < i1; ++i) {
            const double y = f.grid.coord(i);
            acc += std::conj(w.value1d(y - x[0])) * f.values[i] *
                   std::exp(Complex(0.0, -y * xi[0]));
        }
        return acc * cell;
    }
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Vec y = f.grid.point(i);
        Vec off(y.size());
        double phase = 0.0;
        for (std::size_t d = 0; d < y.size(); ++d) {
            off[d] = y[d] - x[d];
            phase -= y[d] * xi[d];
        }
        acc += std::conj(w.value(off)) * f.values[i] * std::exp(Complex(0.0, phase));
    }
    return acc * cell;
}

Complex wpt_point_analytic(const AnalyticSignal& f, const EvolvedWindow& w, double x, double xi) {
    if (w.dim() != 1) throw std::invalid_argument("wpt_point_analytic: 1-D only");
    const double reach = w.support_halfwidth();
    double lo = std::max(x - reach, f.support_lo());
    double hi = std::min(x + reach, f.support_hi());
    if (!(hi > lo)) return 0.0;
    const double fmax =
        std::abs(xi) + w.chirp_rate() * reach + f.max_frequency() + 2.0;
    const double periods = (hi - lo) * fmax / (2.0 * std::numbers::pi);
    const std::size_t panels =
        std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(2.2 * periods)));
    return integrate_gl8(
        [&](double y) {
            return std::conj(w.value1d(y - x)) * f.eval(y) * std::exp(Complex(0.0, -y * xi));
        },
        lo, hi, panels);
}

WptSlice wpt_grid(const WaveField& f, const EvolvedWindow& w, const std::vector<Vec>& xs,
                  const XiGrid& xis) {
    if (f.grid.dim != 1) throw std::invalid_argument("wpt_grid: fast path is 1-D");
    if (xis.count == 0 || xs.empty()) throw std::invalid_argument("wpt_grid: empty grids");
    f.validate();
    const double L = f.grid.half_width;
    const double dk = std::numbers::pi / L;
    const double ratio = xis.spacing / dk;
    const double m_real = std::round(ratio);
    if (std::abs(ratio - m_real) > 1e-9 || m_real < 1.0)
        throw std::invalid_argument("wpt_grid: xi spacing not commensurate with the grid");
    const std::size_t m = static_cast<std::size_t>(m_real);
    const std::size_t n = f.grid.points;
    if (xis.count * m > n)
        throw std::invalid_argument("wpt_grid: xi grid exceeds one Nyquist band");
    // the fast path is the exact discrete transform of the windowed signal;
    // it only requires the requested band to fit (per-point continuum
    // fidelity is wpt_point's stricter check)
    const double xi_max =
        std::max(std::abs(xis.offset),
                 std::abs(xis.offset + xis.spacing * static_cast<double>(xis.count - 1)));
    if (xi_max > f.grid.nyquist() * (1.0 + 1e-12))
        throw NumericError("wpt_grid: requested xi beyond the grid band");

    WptSlice slice;
    slice.x_points = xs;
    slice.xi_points = xis.points();
    slice.values.resize(xs.size() * xis.count);
    slice.fast_path = true;

    SpectralWorkspace ws({n});
    const double h = f.grid.step();
    std::vector<Complex> g(n);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const double x0 = xs[ix][0];
        // baseband shift by the offset, then DFT; bin k*m carries
        // xi = offset + k*spacing
        for (std::size_t i = 0; i < n; ++i) {
            const double y = f.grid.coord(i);
            g[i] = std::conj(w.value1d(y - x0)) * f.values[i] *
                   std::exp(Complex(0.0, -y * xis.offset));
        }
        ws.forward(g);
        for (std::size_t k = 0; k < xis.count; ++k) {
            const std::size_t km = k * m;
            // e^{-i y_i xi} = e^{+iL xi} e^{-i i h xi} with L*xi_rel = km*pi,
            // so the origin factor is exactly (-1)^{km}
            const double front = (km % 2 == 0) ? 1.0 : -1.0;
            slice.values[ix * xis.count + k] = h * front * g[km % n];
        }
    }
    return slice;
}

WptSlice wpt_grid(const WaveField& f, const EvolvedWindow& w, const std::vector<Vec>& xs,
                  const std::vector<Vec>& xi_set) {
    if (xi_set.empty() || xs.empty()) throw std::invalid_argument("wpt_grid: empty grids");
    bool uniform = f.grid.dim == 1 && xi_set.size() >= 2;
    double spacing = 0.0;
    if (uniform) {
        spacing = xi_set[1][0] - xi_set[0][0];
        for (std::size_t i = 1; i + 1 < xi_set.size(); ++i)
            uniform = uniform && std::abs((xi_set[i + 1][0] - xi_set[i][0]) - spacing) <
                                     1e-9 * std::max(1.0, std::abs(spacing));
        const double dk = std::numbers::pi / f.grid.half_width;
        const double ratio = spacing / dk;
        uniform = uniform && spacing > 0.0 && std::abs(ratio - std::round(ratio)) < 1e-9 &&
                  std::round(ratio) >= 1.0 && xi_set.size() * std::round(ratio) <= f.grid.points;
    }
    if (uniform) {
        XiGrid xg{xi_set[0][0], spacing, xi_set.size()};
        return wpt_grid(f, w, xs, xg);
    }
    // fallback: direct quadrature per point, flagged in the result
    WptSlice slice;
    slice.x_points = xs;
    slice.xi_points = xi_set;
    slice.values.resize(xs.size() * xi_set.size());
    slice.fast_path = false;
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        for (std::size_t ik = 0; ik < xi_set.size(); ++ik)
            slice.values[ix * xi_set.size() + ik] = wpt_point(f, w, xs[ix], xi_set[ik]);
    return slice;
}

double slice_energy(const WptSlice& slice, double dx, double dxi) {
    double s = 0.0;
    for (const Complex& v : slice.values) s += std::norm(v);
    return s * dx * dxi;
}

}  // namespace wpk
