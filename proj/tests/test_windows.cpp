#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wpk/errors.hpp"
#include "wpk/windows.hpp"

using namespace wpk;

namespace {

// quadrature oracle for the L2 norm, independent of the library path
double norm_oracle(const std::function<Complex(double)>& f, double R, std::size_t n) {
    const double h = 2.0 * R / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(f(-R + h * (0.5 + i)));
    return std::sqrt(s * h);
}

std::shared_ptr<SampledWindowData> sample_gaussian(double lambda, double L, std::size_t N) {
    auto data = std::make_shared<SampledWindowData>();
    data->grid = UniformGrid(1, L, N);
    data->values.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = data->grid.coord(i);
        data->values[i] = std::pow(lambda, 0.25) * std::exp(-lambda * x * x / 2.0);
    }
    return data;
}

}  // namespace

TEST_CASE("scale one leaves the base window unchanged") {
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 1.0), 0.0);
    CHECK(w.value1d(0.7).real() == doctest::Approx(std::exp(-0.7 * 0.7 / 2.0)));
    CHECK(w.value1d(0.7).imag() == 0.0);
}

TEST_CASE("scaled gaussian peak value") {
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 4.0), 0.0);
    CHECK(w.value1d(0.0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(w.value1d(0.0).imag() == 0.0);
}

TEST_CASE("scaling preserves the L2 norm") {
    const double base_norm = std::pow(std::numbers::pi, 0.25);
    for (double lam : {1.0, 4.0, 64.0}) {
        const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), lam), 0.0);
        const double n = norm_oracle([&](double x) { return w.value1d(x); },
                                     w.support_halfwidth(), 200000);
        CHECK(n == doctest::Approx(base_norm).epsilon(1e-10));
    }
}

TEST_CASE("lambda below one is rejected") {
    CHECK_THROWS_AS(scaled_window(WindowSpec::gaussian(1), 0.5), std::invalid_argument);
}

TEST_CASE("zero evolution time is the identity") {
    const auto spec = scaled_window(WindowSpec::poly_gaussian(1, {0.0, 1.0}), 4.0);
    const auto w = free_evolve_window(spec, 0.0);
    for (double x : {-1.0, -0.3, 0.0, 0.4, 1.2}) {
        const double expect = std::pow(4.0, 0.25) * 2.0 * x * std::exp(-4.0 * x * x / 2.0);
        CHECK(w.value1d(x).real() == doctest::Approx(expect).epsilon(1e-13));
        CHECK(std::abs(w.value1d(x).imag()) < 1e-15);
    }
}

TEST_CASE("evolved gaussian magnitude at the origin") {
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 1.0), 1.0);
    CHECK(std::abs(w.value1d(0.0)) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-13));
}

TEST_CASE("free evolution preserves the L2 norm") {
    const double base_norm = std::pow(std::numbers::pi, 0.25);
    for (double t : {0.5, 1.0, 2.0}) {
        const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(1), 4.0), t);
        const double n = norm_oracle([&](double x) { return w.value1d(x); },
                                     w.support_halfwidth(), 400000);
        CHECK(n == doctest::Approx(base_norm).epsilon(1e-8));
    }
    // polynomial base as well
    const auto wp = free_evolve_window(scaled_window(WindowSpec::poly_gaussian(1, {0.0, 1.0}), 2.0), 1.0);
    const auto w0 = free_evolve_window(scaled_window(WindowSpec::poly_gaussian(1, {0.0, 1.0}), 2.0), 0.0);
    const double n0 = norm_oracle([&](double x) { return w0.value1d(x); }, w0.support_halfwidth(), 400000);
    const double n1 = norm_oracle([&](double x) { return wp.value1d(x); }, wp.support_halfwidth(), 400000);
    CHECK(n1 == doctest::Approx(n0).epsilon(1e-8));
}

TEST_CASE("window samples: peak, symmetry, finite offsets") {
    const auto w = free_evolve_window(scaled_window(WindowSpec::gaussian(2), 9.0), 0.0);
    const auto vals = window_samples(w, {{0.0, 0.0}, {0.3, -0.2}, {-0.3, 0.2}});
    CHECK(vals[0].real() == doctest::Approx(std::pow(9.0, 2.0 / 4.0)).epsilon(1e-13));
    CHECK(std::abs(vals[1] - vals[2]) < 1e-14);  // even base window
    CHECK_THROWS_AS(window_samples(w, {{std::nan(""), 0.0}}), std::invalid_argument);
}

TEST_CASE("closed form agrees with the spectral strategy") {
    const double lam = 2.0, t = 0.7;
    const auto closed = free_evolve_window(scaled_window(WindowSpec::gaussian(1), lam), t);
    const auto spec = WindowSpec::sampled(sample_gaussian(lam, 32.0, 4096));
    const auto spectral = free_evolve_window(spec, t);
    double worst = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.37) {
        worst = std::max(worst, std::abs(closed.value1d(x) - spectral.value1d(x)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("spectral evolution satisfies the semigroup property") {
    const double lam = 2.0;
    const auto stage1 = free_evolve_window(WindowSpec::sampled(sample_gaussian(lam, 32.0, 4096)), 0.6);
    auto mid = std::make_shared<SampledWindowData>(stage1.table());
    const auto stage2 = free_evolve_window(WindowSpec::sampled(mid), 0.9);
    const auto direct = free_evolve_window(WindowSpec::sampled(sample_gaussian(lam, 32.0, 4096)), 1.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.table().values.size(); ++i)
        worst = std::max(worst, std::abs(stage2.table().values[i] - direct.table().values[i]));
    CHECK(worst <= 1e-8);
}

TEST_CASE("under-resolved sampled windows fail the aliasing check") {
    // lambda = 64 gaussian needs ~sqrt(64)*9 rad/unit of bandwidth; a very
    // coarse table cannot carry it
    const auto coarse = sample_gaussian(64.0, 16.0, 64);
    CHECK_THROWS_AS(free_evolve_window(WindowSpec::sampled(coarse), 0.5), NumericError);
}

TEST_CASE("samples outside a table's coverage are rejected") {
    const auto spec = WindowSpec::sampled(sample_gaussian(1.0, 16.0, 1024));
    const auto w = free_evolve_window(spec, 0.3);
    CHECK_THROWS_AS(w.value1d(17.0), std::invalid_argument);
}

TEST_CASE("base windows must not vanish identically") {
    WindowSpec s;
    s.dim = 1;
    s.kind = WindowKind::PolyGaussian;
    s.poly = {{0.0, 0.0}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
