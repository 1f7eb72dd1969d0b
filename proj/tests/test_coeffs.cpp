#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "wpk/coeffs.hpp"

using namespace wpk;

namespace {

// centered finite differences, step 1e-5
double fd_partial(const std::function<double(const Vec&)>& f, Vec x, int d, double h = 1e-5) {
    x[d] += h;
    const double up = f(x);
    x[d] -= 2 * h;
    const double dn = f(x);
    return (up - dn) / (2 * h);
}

}  // namespace

TEST_CASE("flat model metric is the identity") {
    const auto m = CoefficientModel::flat(2);
    const auto a = m.metric_at(0.3, {1.7, -2.2});
    CHECK(a[0] == 1.0);
    CHECK(a[3] == 1.0);
    CHECK(a[1] == 0.0);
    CHECK(a[2] == 0.0);
}

TEST_CASE("gaussian bump metric at the origin") {
    const auto m = CoefficientModel::metric_gaussian(1, 1.5, 0.1);
    CHECK(m.metric_at(7.0, {0.0})[0] == doctest::Approx(1.1).epsilon(1e-15));
}

TEST_CASE("metric is symmetric for off-diagonal models") {
    const auto m = CoefficientModel::metric_algebraic(3, 1.5, 0.1, 0.05);
    const Vec x{0.4, -1.1, 2.0};
    const auto a = m.metric_at(0.2, x);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(a[j * 3 + k] == a[k * 3 + j]);
}

TEST_CASE("metric_at rejects dimension mismatch") {
    const auto m = CoefficientModel::flat(2);
    CHECK_THROWS_AS(m.metric_at(0.0, {1.0}), std::invalid_argument);
}

TEST_CASE("hamiltonian derivatives: free case") {
    const auto m = CoefficientModel::flat(2);
    Vec dxi, dx;
    m.hamiltonian_derivatives(0.0, {0.3, 0.4}, {1.0, -2.0}, dxi, dx);
    CHECK(dxi[0] == 1.0);
    CHECK(dxi[1] == -2.0);
    CHECK(dx[0] == 0.0);
    CHECK(dx[1] == 0.0);
}

TEST_CASE("hamiltonian derivatives: zero momentum leaves only the potential gradient") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.1, 0.2);
    Vec dxi, dx;
    m.hamiltonian_derivatives(0.0, {0.7}, {0.0}, dxi, dx);
    CHECK(dxi[0] == 0.0);
    CHECK(dx[0] == doctest::Approx(m.grad_potential(0.0, {0.7})[0]).epsilon(1e-14));
}

TEST_CASE("hamiltonian derivatives match finite differences of h") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.1, 0.1);
    const double t = 0.0;
    const Vec x{0.5}, xi{1.0};
    Vec dxi, dx;
    m.hamiltonian_derivatives(t, x, xi, dxi, dx);
    const double fd_x = fd_partial([&](const Vec& p) { return m.hamiltonian(t, p, xi); }, x, 0);
    const double fd_xi = fd_partial([&](const Vec& p) { return m.hamiltonian(t, x, p); }, xi, 0);
    CHECK(dx[0] == doctest::Approx(fd_x).epsilon(1e-6));
    CHECK(dxi[0] == doctest::Approx(fd_xi).epsilon(1e-6));
}

TEST_CASE("analytic spatial derivatives match finite differences in 2-D") {
    const auto models = {CoefficientModel::metric_gaussian(2, 1.5, 0.1, 0.04),
                         CoefficientModel::metric_algebraic(2, 1.3, 0.12, 0.0),
                         CoefficientModel::potential_algebraic(2, 1.5, 0.2),
                         CoefficientModel::potential_cross(2.0, 0.2)};
    const std::vector<Vec> points{{0.3, -0.8}, {1.5, 0.2}, {-2.0, 2.5}};
    for (const auto& m : models) {
        for (const Vec& x : points) {
            for (int d = 0; d < 2; ++d) {
                MultiIndex alpha{0, 0};
                alpha[d] = 1;
                const double exact = m.potential_deriv(0.0, x, alpha);
                const double fd =
                    fd_partial([&](const Vec& p) { return m.potential(0.0, p); }, x, d);
                CHECK(exact == doctest::Approx(fd).epsilon(1e-6));
                const double exact_a = m.metric_deriv(0.0, x, 0, 1, alpha);
                const double fd_a = fd_partial(
                    [&](const Vec& p) { return m.metric_entry(0.0, p, 0, 1); }, x, d);
                CHECK(exact_a == doctest::Approx(fd_a).epsilon(5e-6));
            }
            // second derivatives: d2/dx0 dx1
            MultiIndex mixed{1, 1};
            const double exact = m.potential_deriv(0.0, x, mixed);
            const double fd = fd_partial(
                [&](const Vec& p) {
                    MultiIndex a1{1, 0};
                    return m.potential_deriv(0.0, p, a1);
                },
                x, 1);
            CHECK(exact == doctest::Approx(fd).epsilon(5e-6));
        }
    }
}

TEST_CASE("time modulation is bounded and applied") {
    auto m = CoefficientModel::metric_gaussian(1, 1.5, 0.2);
    m.tmod = TimeModulation::Cosine;
    m.tmod_omega = 2.0;
    CHECK(m.metric_entry(0.0, {0.0}, 0, 0) == doctest::Approx(1.2));
    const double quarter = std::numbers::pi / 4.0;
    CHECK(m.metric_entry(quarter, {0.0}, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decay validation: flat model passes with zero suprema") {
    const auto m = CoefficientModel::flat(1);
    const auto rep = validate_decay(m, 2, radial_log_samples(1, 50.0));
    CHECK(rep.pass);
    for (const auto& e : rep.entries) {
        CHECK(e.metric_sup == 0.0);
        CHECK(e.potential_sup == 0.0);
    }
}

TEST_CASE("decay validation: long-range metric with gaussian potential passes") {
    auto m = CoefficientModel::metric_algebraic(1, 1.5, 0.1);
    m.potential_family = PotentialFamily::GaussianBump;
    m.potential_eps = 0.1;
    std::vector<Vec> samples;
    for (int i = 0; i <= 2000; ++i) samples.push_back({-50.0 + 0.05 * i});
    const auto rep = validate_decay(m, 2, samples);
    CHECK(rep.pass);
}

TEST_CASE("decay validation: built-in families pass on the default radial grid") {
    for (const auto& m : {CoefficientModel::metric_gaussian(1, 1.5, 0.1),
                          CoefficientModel::metric_algebraic(1, 1.25, 0.2),
                          CoefficientModel::potential_algebraic(1, 1.5, 0.3),
                          CoefficientModel::potential_cross(1.5, 0.2),
                          CoefficientModel::bump(1, 2.0, 0.1, 0.2)}) {
        const auto rep = validate_decay(m, 2, radial_log_samples(m.dim));
        CHECK_MESSAGE(rep.pass, m.label);
    }
}

TEST_CASE("decay validation: quadratic potential fails with growing supremum") {
    const auto m = CoefficientModel::potential_quadratic(1, 0.1);
    const auto rep_far = validate_decay(m, 1, radial_log_samples(1, 1e3));
    CHECK_FALSE(rep_far.pass);
    // supremum grows with the sample radius
    const auto rep_near = validate_decay(m, 1, radial_log_samples(1, 10.0));
    CHECK(rep_far.entries[0].potential_sup > rep_near.entries[0].potential_sup);
}

TEST_CASE("decay validation is monotone under sample refinement") {
    const auto m = CoefficientModel::metric_algebraic(1, 1.5, 0.1);
    auto small = radial_log_samples(1, 100.0, 6);
    auto big = radial_log_samples(1, 100.0, 6);
    big.push_back({333.0});
    big.push_back({777.0});
    const auto rs = validate_decay(m, 2, small);
    const auto rb = validate_decay(m, 2, big);
    for (std::size_t i = 0; i < rs.entries.size(); ++i) {
        CHECK(rb.entries[i].metric_sup >= rs.entries[i].metric_sup);
        CHECK(rb.entries[i].potential_sup >= rs.entries[i].potential_sup);
    }
    // a failing report cannot become passing with more samples
    const auto q = CoefficientModel::potential_quadratic(1, 0.1);
    const auto qf = validate_decay(q, 1, radial_log_samples(1, 1e3));
    auto plus = radial_log_samples(1, 1e3);
    plus.push_back({2000.0});
    const auto qf2 = validate_decay(q, 1, plus);
    CHECK_FALSE(qf.pass);
    CHECK_FALSE(qf2.pass);
}

TEST_CASE("validate_decay rejects unavailable derivative orders and empty samples") {
    const auto m = CoefficientModel::flat(1);
    CHECK_THROWS_AS(validate_decay(m, 3, radial_log_samples(1, 10.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate_decay(m, 2, {}), std::invalid_argument);
}

TEST_CASE("model validation guards ellipticity and parameters") {
    CHECK_THROWS_AS(CoefficientModel::metric_gaussian(1, 1.5, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientModel::metric_gaussian(1, 0.9, 0.1), std::invalid_argument);
    CoefficientModel m = CoefficientModel::potential_cross(1.5, 0.2);
    m.dim = 1;  // cross-term potential needs two axes
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
