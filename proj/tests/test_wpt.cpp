#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wpk/errors.hpp"
#include "wpk/propagator.hpp"
#include "wpk/signals.hpp"
#include "wpk/windows.hpp"
#include "wpk/wpt.hpp"

using namespace wpk;

namespace {

const double kPi = std::numbers::pi;

WaveField gaussian_field(double L, std::size_t N) {
    return WaveField::from_function(UniformGrid(1, L, N),
                                    [](const Vec& x) { return std::exp(-x[0] * x[0] / 2.0); });
}

// independent quadrature oracle on its own fine grid
Complex wpt_oracle(const std::function<Complex(double)>& f,
                   const std::function<Complex(double)>& phi, double x, double xi, double R,
                   std::size_t n) {
    const double h = 2.0 * R / static_cast<double>(n);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = -R + h * (0.5 + i);
        acc += std::conj(phi(y - x)) * f(y) * std::exp(Complex(0.0, -y * xi));
    }
    return acc * h;
}

// closed form for gaussian window (lambda=1, t=0) against gaussian signal:
// W(x, xi) = sqrt(pi) exp(-x^2/4 - xi^2/4 - i x xi / 2)
Complex gaussian_pair_closed_form(double x, double xi) {
    return std::sqrt(kPi) *
           std::exp(Complex(-x * x / 4.0 - xi * xi / 4.0, -x * xi / 2.0));
}

}  // namespace

TEST_CASE("zero signal transforms to zero") {
    WaveField f = WaveField::from_function(UniformGrid(1, 16.0, 256),
                                           [](const Vec&) { return Complex(0.0, 0.0); });
    f.values[0] = 1e-300;  // keep the field valid (positive norm)
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    CHECK(std::abs(wpt_point(f, w, {0.0}, {1.0})) < 1e-250);
}

TEST_CASE("gaussian pair at the phase-space origin equals sqrt(pi)") {
    const WaveField f = gaussian_field(16.0, 2048);
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    const Complex got = wpt_point(f, w, {0.0}, {0.0});
    CHECK(std::abs(got - std::sqrt(kPi)) < 1e-10);
    // quadrature oracle on an unrelated grid
    const Complex oracle = wpt_oracle([](double y) { return std::exp(-y * y / 2.0); },
                                      [](double z) { return std::exp(-z * z / 2.0); }, 0.0, 0.0,
                                      13.7, 100001);
    CHECK(std::abs(got - oracle) < 1e-8);
}

TEST_CASE("gaussian pair matches the closed form at random phase-space points") {
    const WaveField f = gaussian_field(16.0, 2048);
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uxi(-6.0, 6.0);
    for (int k = 0; k < 100; ++k) {
        const double x = ux(rng), xi = uxi(rng);
        const Complex got = wpt_point(f, w, {x}, {xi});
        CHECK(std::abs(got - gaussian_pair_closed_form(x, xi)) < 1e-8);
    }
}

TEST_CASE("modulation covariance: W[f e^{i y eta}](x, xi) = W[f](x, xi - eta)") {
    const double eta = 2.0;
    const UniformGrid g(1, 16.0, 2048);
    const WaveField f = gaussian_field(16.0, 2048);
    const WaveField fm = WaveField::from_function(g, [&](const Vec& x) {
        return std::exp(-x[0] * x[0] / 2.0) * std::exp(Complex(0.0, eta * x[0]));
    });
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    for (double x : {-0.7, 0.0, 1.1})
        for (double xi : {-1.0, 0.5, 3.0}) {
            const Complex lhs = wpt_point(fm, w, {x}, {xi});
            const Complex rhs = wpt_point(f, w, {x}, {xi - eta});
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
}

TEST_CASE("translation covariance on grid-aligned shifts") {
    const UniformGrid g(1, 16.0, 2048);
    const double shift = 64.0 * g.step();  // exactly representable shift
    const WaveField f = gaussian_field(16.0, 2048);
    const WaveField fs = WaveField::from_function(
        g, [&](const Vec& x) { return std::exp(-(x[0] - shift) * (x[0] - shift) / 2.0); });
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    for (double x : {-0.5, 0.3})
        for (double xi : {-2.0, 1.0}) {
            const Complex lhs = wpt_point(fs, w, {x}, {xi});
            const Complex rhs =
                std::exp(Complex(0.0, -shift * xi)) * wpt_point(f, w, {x - shift}, {xi});
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
}

TEST_CASE("fast grid path agrees with per-point quadrature") {
    const UniformGrid g(1, 16.0, 2048);
    const WaveField f = gaussian_field(16.0, 2048);
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 4.0), 0.0);
    const double dk = kPi / g.half_width;
    XiGrid xig{-3.0 + 0.123, 4.0 * dk, 17};  // offset not on the lattice
    std::vector<Vec> xs{{-1.2}, {0.0}, {0.77}};
    const WptSlice slice = wpt_grid(f, w, xs, xig);
    CHECK(slice.fast_path);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> px(0, xs.size() - 1), pk(0, xig.count - 1);
    for (int i = 0; i < 100; ++i) {
        const std::size_t ix = px(rng), ik = pk(rng);
        const Complex direct = wpt_point(f, w, xs[ix], slice.xi_points[ik]);
        CHECK(std::abs(slice.at(ix, ik) - direct) <= 1e-8);
    }
}

TEST_CASE("slices are linear in the signal") {
    const UniformGrid g(1, 16.0, 1024);
    const WaveField f = gaussian_field(16.0, 1024);
    const WaveField h = WaveField::from_function(g, [](const Vec& x) {
        return std::exp(-(x[0] - 0.5) * (x[0] - 0.5)) * Complex(0.3, 0.4);
    });
    WaveField sum = f;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += h.values[i];
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    const double dk = kPi / g.half_width;
    XiGrid xig{0.0, dk, 32};
    std::vector<Vec> xs{{-0.4}, {0.2}, {1.0}};
    const auto sf = wpt_grid(f, w, xs, xig);
    const auto sh = wpt_grid(h, w, xs, xig);
    const auto ss = wpt_grid(sum, w, xs, xig);
    double worst = 0.0;
    for (std::size_t i = 0; i < ss.values.size(); ++i)
        worst = std::max(worst, std::abs(ss.values[i] - sf.values[i] - sh.values[i]));
    CHECK(worst <= 1e-10);
}

TEST_CASE("energy identity: sum |W|^2 dx dxi = 2 pi |phi|^2 |f|^2") {
    const UniformGrid g(1, 16.0, 2048);
    const WaveField f = gaussian_field(16.0, 2048);
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    // x on the signal grid, xi over one full Nyquist band
    std::vector<Vec> xs;
    for (std::size_t i = 0; i < g.points; ++i) xs.push_back({g.coord(i)});
    const double dk = kPi / g.half_width;
    XiGrid xig{-g.nyquist(), dk, g.points};
    const WptSlice slice = wpt_grid(f, w, xs, xig);
    const double lhs = slice_energy(slice, g.step(), dk);
    const double nf = f.l2_norm();
    const double nphi = w.norm_quadrature();
    const double rhs = 2.0 * kPi * nphi * nphi * nf * nf;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
}

TEST_CASE("conjugate-window consistency: |W| is even in x for even real data") {
    const WaveField f = gaussian_field(16.0, 1024);
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    for (double x : {0.3, 0.9})
        for (double xi : {0.7, 2.0}) {
            const double a = std::abs(wpt_point(f, w, {x}, {xi}));
            const double b = std::abs(wpt_point(f, w, {-x}, {xi}));
            CHECK(a == doctest::Approx(b).epsilon(1e-9));
        }
}

TEST_CASE("nyquist violations and empty signals are rejected") {
    const WaveField f = gaussian_field(16.0, 256);  // nyquist = pi / (1/8) ~ 25.1
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 4.0), 0.0);
    CHECK_THROWS_AS(wpt_point(f, w, {0.0}, {20.0}), NumericError);
    WaveField empty;
    empty.grid = UniformGrid(1, 16.0, 256);
    CHECK_THROWS_AS(wpt_point(empty, w, {0.0}, {0.1}), std::invalid_argument);
}

TEST_CASE("non-uniform xi sets fall back to quadrature with a warning flag") {
    const WaveField f = gaussian_field(16.0, 512);
    const auto w = free_evolve_window(WindowSpec::gaussian(1), 0.0);
    const std::vector<Vec> xi_set{{0.1}, {0.3}, {0.9}, {2.7}};
    const WptSlice slice = wpt_grid(f, w, {{0.0}, {0.5}}, xi_set);
    CHECK_FALSE(slice.fast_path);
    CHECK(std::abs(slice.at(0, 2) - wpt_point(f, w, {0.0}, {0.9})) < 1e-14);
}

TEST_CASE("analytic quadrature matches the sampled path for smooth data") {
    const AnalyticSignal sig = AnalyticSignal::gaussian();
    const WaveField f = gaussian_field(16.0, 2048);
    for (double lam : {1.0, 4.0, 16.0}) {
        const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), lam), -0.4);
        for (double x : {-0.6, 0.4})
            for (double xi : {1.0, 6.0}) {
                const Complex a = wpt_point_analytic(sig, w, x, xi);
                const Complex b = wpt_point(f, w, {x}, {xi});
                CHECK(std::abs(a - b) < 1e-8);
            }
    }
}

TEST_CASE("analytic quadrature handles the half-line signal") {
    const AnalyticSignal sig = AnalyticSignal::heaviside();
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 16.0), 0.0);
    // oracle: substituted lambda-free integrand, u = sqrt(lambda) y
    const double lam = 16.0, x = 0.1, xi = lam * 1.0;
    const Complex got = wpt_point_analytic(sig, w, x, xi);
    const double rt = std::sqrt(lam);
    const Complex oracle =
        integrate_gl8(
            [&](double u) {
                return std::exp(-(u - rt * x) * (u - rt * x) / 2.0) *
                       std::exp(Complex(0.0, -u * xi / rt));
            },
            0.0, rt * x + 12.0, 400) /
        std::pow(lam, 0.25);
    CHECK(std::abs(got - oracle) < 1e-9);
}
