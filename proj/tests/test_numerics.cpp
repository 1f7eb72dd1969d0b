#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wpk/grid.hpp"
#include "wpk/fft.hpp"
#include "wpk/numerics.hpp"
#include "wpk/ode.hpp"

using namespace wpk;

TEST_CASE("linear fit recovers exact lines") {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(-2.0 * v + 0.7);
    const LinearFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(f.residual_rms < 1e-12);
}

TEST_CASE("gl8 panels integrate oscillatory integrands") {
    // int_0^1 e^{i w y} dy = (e^{iw} - 1) / (i w)
    const double w = 200.0;
    const Complex exact = (std::exp(Complex(0, w)) - Complex(1, 0)) / Complex(0, w);
    const Complex got = integrate_gl8([&](double y) { return std::exp(Complex(0, w * y)); }, 0.0,
                                      1.0, 80);
    CHECK(std::abs(got - exact) < 1e-12);
}

TEST_CASE("cumulative integral is 4th order") {
    const std::size_t n = 401;
    const double h = 1.0 / (n - 1);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(i * h);
    const auto c = cumulative_integral(v, h);
    for (std::size_t i : {std::size_t(100), std::size_t(400)})
        CHECK(c[i] == doctest::Approx(std::exp(i * h) - 1.0).epsilon(1e-9));
}

TEST_CASE("grid wavenumbers and fft round trip") {
    UniformGrid g(1, 8.0, 64);
    CHECK(g.step() == doctest::Approx(0.25));
    CHECK(g.nyquist() == doctest::Approx(std::numbers::pi / 0.25));
    auto k = g.wavenumbers();
    CHECK(k[0] == 0.0);
    CHECK(k[1] == doctest::Approx(std::numbers::pi / 8.0));
    CHECK(k[63] == doctest::Approx(-std::numbers::pi / 8.0));

    SpectralWorkspace ws({64});
    std::vector<Complex> data(64);
    for (std::size_t i = 0; i < 64; ++i) data[i] = Complex(std::sin(0.3 * i), std::cos(0.1 * i));
    auto copy = data;
    ws.forward(data);
    ws.inverse(data);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(data[i] - copy[i]) < 1e-13);
}

TEST_CASE("dp5 integrates a stiff-ish oscillator to tolerance") {
    // y'' = -w^2 y as a system; exact y = cos(w t)
    const double w = 12.0;
    OdeRhs rhs = [&](double, const Vec& y, Vec& dy) {
        dy = {y[1], -w * w * y[0]};
    };
    OdeOptions opts;
    opts.rtol = 1e-11;
    opts.atol = 1e-13;
    std::vector<double> evals{0.4, 0.9, 1.7, 2.0};
    const auto sol = integrate_dp5(rhs, 0.0, {1.0, 0.0}, 2.0, evals, opts);
    REQUIRE(sol.times.size() == evals.size());
    for (std::size_t i = 0; i < evals.size(); ++i) {
        CHECK(sol.states[i][0] == doctest::Approx(std::cos(w * evals[i])).epsilon(1e-8));
    }
    CHECK(sol.stats.steps_accepted > 10);
}

TEST_CASE("dp5 dense output matches a direct solve mid-interval") {
    OdeRhs rhs = [](double s, const Vec& y, Vec& dy) { dy = {y[0] * std::cos(s)}; };
    const auto sol = integrate_dp5(rhs, 0.0, {1.0}, 3.0, {0.5, 1.25, 2.75});
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const double exact = std::exp(std::sin(sol.times[i]));
        CHECK(sol.states[i][0] == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("dp5 integrates backward") {
    OdeRhs rhs = [](double, const Vec& y, Vec& dy) { dy = {-y[0]}; };
    const auto sol = integrate_dp5(rhs, 1.0, {std::exp(-1.0)}, 0.0, {0.5, 0.0});
    CHECK(sol.states.back()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.states.front()[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}
