#include <doctest.h>

#include <cmath>

#include "wpk/coeffs.hpp"
#include "wpk/flow.hpp"
#include "wpk/ode.hpp"

using namespace wpk;

namespace {

std::vector<double> decreasing_times(double t0, int count) {
    std::vector<double> s(count);
    for (int i = 0; i < count; ++i)
        s[i] = t0 - t0 * static_cast<double>(i) / static_cast<double>(count - 1);
    return s;
}

// independent reference solve: fixed-step classical RK4, halved until stable
Vec rk4_reference(const CoefficientModel& model, double t0, const Vec& x, const Vec& xi,
                  double s_target, std::size_t steps) {
    const int n = model.dim;
    OdeRhs rhs = [&](double s, const Vec& z, Vec& dz) {
        Vec px(z.begin(), z.begin() + n), pxi(z.begin() + n, z.end());
        Vec dxi_h, dx_h;
        model.hamiltonian_derivatives(s, px, pxi, dxi_h, dx_h);
        dz.resize(2 * n);
        for (int d = 0; d < n; ++d) {
            dz[d] = dxi_h[d];
            dz[n + d] = -dx_h[d];
        }
    };
    Vec z(x);
    z.insert(z.end(), xi.begin(), xi.end());
    return integrate_rk4_fixed(rhs, t0, z, s_target, steps);
}

}  // namespace

TEST_CASE("free flow is exact for the flat model") {
    const auto m = CoefficientModel::flat(1);
    const double t = 1.0;
    const auto tr = solve_bicharacteristics(m, t, {0.3}, {2.0}, decreasing_times(t, 21));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double s = tr.times[i];
        CHECK(std::abs(tr.states[i].x[0] - (0.3 + (s - t) * 2.0)) <= 1e-12);
        CHECK(std::abs(tr.states[i].xi[0] - 2.0) <= 1e-12);
    }
}

TEST_CASE("free flow is exact through the generic integrator too") {
    // zero-strength bump goes through the adaptive path, not the shortcut
    const auto m = CoefficientModel::metric_gaussian(1, 1.5, 0.0);
    const double t = 1.0;
    const auto tr = solve_bicharacteristics(m, t, {0.3}, {2.0}, decreasing_times(t, 9));
    CHECK_FALSE(tr.closed_form);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double s = tr.times[i];
        CHECK(std::abs(tr.states[i].x[0] - (0.3 + (s - t) * 2.0)) <= 1e-12);
        CHECK(std::abs(tr.states[i].xi[0] - 2.0) <= 1e-12);
    }
}

TEST_CASE("autonomous models conserve the hamiltonian along orbits") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.1, 0.2);
    const double t = 1.0;
    const auto tr = solve_bicharacteristics(m, t, {0.2}, {1.3}, decreasing_times(t, 41));
    const double h0 = m.hamiltonian(0.0, {0.2}, {1.3});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double h = m.hamiltonian(0.0, tr.states[i].x, tr.states[i].xi);
        CHECK(std::abs(h - h0) <= 1e-9);
    }
}

TEST_CASE("endpoint agrees with a half-step reference solve") {
    const auto m = CoefficientModel::metric_gaussian(1, 1.5, 0.1);
    const auto tr = solve_bicharacteristics(m, 1.0, {0.0}, {1.0}, {1.0, 0.5, 0.0});
    const Vec ref = rk4_reference(m, 1.0, {0.0}, {1.0}, 0.0, 40000);
    const Vec ref2 = rk4_reference(m, 1.0, {0.0}, {1.0}, 0.0, 80000);
    REQUIRE(std::abs(ref[0] - ref2[0]) < 1e-11);  // reference is converged
    CHECK(std::abs(tr.states.back().x[0] - ref[0]) < 1e-8);
    CHECK(std::abs(tr.states.back().xi[0] - ref[1]) < 1e-8);
}

TEST_CASE("eval times outside the span are rejected") {
    const auto m = CoefficientModel::flat(1);
    CHECK_THROWS_AS(solve_bicharacteristics(m, 1.0, {0.0}, {1.0}, {1.5}),
                    std::invalid_argument);
}

TEST_CASE("picard iterate zero is the free scaled orbit") {
    const auto m = CoefficientModel::metric_gaussian(1, 1.5, 0.1);
    const double t0 = 0.3, lambda = 4.0;
    const auto its = picard_iterates(m, t0, {0.2}, {1.0}, lambda, 0, 0.0, 513);
    REQUIRE(its.size() == 1);
    const auto& it0 = its[0];
    for (std::size_t i = 0; i < it0.times.size(); ++i) {
        const double s = it0.times[i];
        CHECK(it0.states[i].x[0] ==
              doctest::Approx(0.2 + lambda * (s - t0) * 1.0).epsilon(1e-14));
        CHECK(it0.states[i].xi[0] == doctest::Approx(lambda).epsilon(1e-14));
    }
}

TEST_CASE("picard iteration is stationary for the flat model") {
    const auto m = CoefficientModel::flat(1);
    const auto its = picard_iterates(m, 0.5, {0.1}, {1.0}, 2.0, 1, 0.0, 257);
    REQUIRE(its.size() == 2);
    for (std::size_t i = 0; i < its[0].times.size(); ++i) {
        CHECK(std::abs(its[1].states[i].x[0] - its[0].states[i].x[0]) < 1e-13);
        CHECK(std::abs(its[1].states[i].xi[0] - its[0].states[i].xi[0]) < 1e-13);
    }
}

TEST_CASE("picard iterates approach the adaptive solution monotonically") {
    const auto m = CoefficientModel::metric_gaussian(1, 1.5, 0.1);
    const double t0 = 0.3, lambda = 4.0;
    const Vec x{0.1}, xi{1.0};
    const auto its = picard_iterates(m, t0, x, xi, lambda, 4, 0.0, 2049);
    // reference on the same grid
    const auto ref =
        solve_bicharacteristics(m, t0, x, scaled(xi, lambda), its[0].times);
    std::vector<double> sup;
    for (const auto& it : its) {
        double worst = 0.0;
        for (std::size_t i = 0; i < it.times.size(); ++i) {
            worst = std::max(worst, dist2(it.states[i].x, ref.states[i].x));
            worst = std::max(worst, dist2(it.states[i].xi, ref.states[i].xi));
        }
        sup.push_back(worst);
    }
    for (std::size_t k = 1; k < sup.size(); ++k) CHECK(sup[k] < sup[k - 1]);
    CHECK(sup.back() < 1e-6);
}

TEST_CASE("orbit envelope bounds hold for the flat model at every lambda >= 2") {
    const auto m = CoefficientModel::flat(1);
    const Ball K{{0.0}, 0.4};
    const Cone G{{1.0}, 0.3};
    for (double lam : {2.0, 8.0, 64.0, 1024.0}) {
        const auto rep = orbit_bound_report(m, 1.0, K, G, 2.0, lam);
        CHECK_MESSAGE(rep.pass, "lambda = " << lam);
        CHECK(rep.worst_position_low >= 0.5);
        CHECK(rep.worst_position_high <= 2.0);
        CHECK(rep.worst_momentum_low >= 0.5);
        CHECK(rep.worst_momentum_high <= 2.0);
    }
}

TEST_CASE("pass is exactly the two-sided ratio condition") {
    const auto m = CoefficientModel::flat(1);
    const auto rep = orbit_bound_report(m, 1.0, Ball{{0.0}, 0.4}, Cone{{1.0}, 0.3}, 2.0, 16.0);
    const bool in_band = rep.worst_position_low >= 0.5 && rep.worst_position_high <= 2.0 &&
                         rep.worst_momentum_low >= 0.5 && rep.worst_momentum_high <= 2.0;
    CHECK(rep.pass == in_band);
}

TEST_CASE("a deep potential well fails the momentum bound at small lambda") {
    auto m = CoefficientModel::potential_gaussian(1, 1.5, -3.0);
    const Ball K{{0.0}, 0.4};
    const Cone G{{1.0}, 0.3};
    const auto rep = orbit_bound_report(m, 1.0, K, G, 2.0, 1.0);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.violation.has_value());
    CHECK((rep.violation->which == "momentum" || rep.violation->which == "position"));
    const auto sweep =
        orbit_bound_sweep(m, 1.0, K, G, 2.0, geometric_grid(1.0, 1024.0, 11));
    REQUIRE(sweep.lambda0.has_value());
    CHECK(*sweep.lambda0 > 1.0);
    CHECK(*sweep.lambda0 <= 64.0);
}

TEST_CASE("forward orbit from shifted data closes the loop for the flat model") {
    const auto m = CoefficientModel::flat(2);
    const auto end = forward_orbit_from_shift(m, 0.7, {0.3, -0.4}, {1.0, 2.0});
    CHECK(end.x[0] == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(end.x[1] == doctest::Approx(-0.4).epsilon(1e-13));
    CHECK(end.xi[0] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("forward orbit at t = 0 returns the data unchanged") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.1, 0.1);
    const auto end = forward_orbit_from_shift(m, 0.0, {0.4}, {1.5});
    CHECK(end.x[0] == 0.4);
    CHECK(end.xi[0] == 1.5);
}

TEST_CASE("scaled displacement decays at the long-range rate") {
    // cross-term potential saturates the decay hypotheses at every rho
    for (double rho : {1.25, 1.5, 2.0}) {
        const auto m = CoefficientModel::potential_cross(rho, 0.2);
        Vec eta{1.0, 0.3};
        const double ne = norm2(eta);
        for (double& c : eta) c /= ne;
        const auto sweep = forward_shift_rate(m, 1.0, {0.3, -0.2}, eta,
                                              geometric_grid(8.0, 1024.0, 8));
        CHECK_MESSAGE(std::abs(sweep.displacement_fit.slope + (rho - 1.0)) <= 0.25,
                      "rho = " << rho << " slope = " << sweep.displacement_fit.slope);
    }
}

TEST_CASE("roundtrip identity: flat model is exact") {
    const auto m = CoefficientModel::flat(1);
    const auto rr = roundtrip_residual(m, 1.0, {0.5}, {2.0});
    CHECK(rr.dx <= 1e-12);
    CHECK(rr.dxi <= 1e-12);
}

TEST_CASE("roundtrip identity on the bump model") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.1, 0.1);
    const auto rr = roundtrip_residual(m, 1.0, {0.3}, {2.0});
    CHECK(rr.dx <= 1e-8);
    CHECK(rr.dxi <= 1e-8);
}

TEST_CASE("roundtrip residuals over the reference sample set") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.1, 0.1);
    FlowOptions opts;
    opts.rtol = 1e-10;
    double worst = 0.0;
    for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0})
        for (double eta : {-2.0, -1.0, 0.5, 1.0, 2.0})
            for (double t : {0.4, 0.7, 1.0, 1.3, 1.6}) {
                const auto rr = roundtrip_residual(m, t, {y}, {eta}, opts);
                worst = std::max({worst, rr.dx, rr.dxi});
            }
    CHECK(worst <= 100.0 * opts.rtol);
}

TEST_CASE("roundtrip residual shrinks when rtol is tightened") {
    const auto m = CoefficientModel::bump(1, 1.5, 0.15, 0.2);
    FlowOptions loose, tight;
    loose.rtol = 1e-8;
    loose.atol = 1e-14;
    tight.rtol = 1e-10;
    tight.atol = 1e-14;
    const auto rl = roundtrip_residual(m, 1.0, {0.3}, {2.0}, loose);
    const auto rt = roundtrip_residual(m, 1.0, {0.3}, {2.0}, tight);
    CHECK(rt.dx < 0.5 * rl.dx);
}

TEST_CASE("cone membership and lattice construction") {
    const Cone G{{1.0, 0.0}, 0.3};
    CHECK(G.contains({2.0, 0.1}));
    CHECK_FALSE(G.contains({-1.0, 0.0}));
    const auto lattice = phase_lattice(Ball{{0.0, 0.0}, 0.5}, G, 2.0, {3, 3, 3, 5});
    CHECK(lattice.size() > 0);
    for (const auto& p : lattice) {
        CHECK(dist2(p.x, {0.0, 0.0}) <= 0.5 * (1 + 1e-9));
        CHECK(G.contains(p.xi));
        const double r = norm2(p.xi);
        CHECK(r >= 0.5 - 1e-12);
        CHECK(r <= 2.0 + 1e-12);
    }
}
