#include "wpk/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpk/errors.hpp"
#include "wpk/wpt.hpp"

namespace wpk {

double phase_term(const CoefficientModel& model, double t, const Vec& x, const Vec& xi) {
    model.validate();
    const int n = model.dim;
    if (static_cast<int>(x.size()) != n || static_cast<int>(xi.size()) != n)
        throw std::invalid_argument("phase_term: dimension mismatch");
    MultiIndex alpha(static_cast<std::size_t>(n), 0);
    double quad = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            double a = model.metric_entry(t, x, j, k);
            double xda = 0.0;  // x . grad_x a_jk
            for (int l = 0; l < n; ++l) {
                alpha[l] = 1;
                xda += x[l] * model.metric_deriv(t, x, j, k, alpha);
                alpha[l] = 0;
            }
            quad += (a - xda) * xi[j] * xi[k];
        }
    }
    const double V = model.potential(t, x);
    const double xdV = dot(x, model.grad_potential(t, x));
    return -0.5 * quad + V - xdV;
}

PhaseLog phase_integral(const CoefficientModel& model, const Trajectory& orbit,
                        double tolerance) {
    if (orbit.anchor != OrbitAnchor::TerminalAtT)
        throw std::invalid_argument("phase_integral: orbit must be terminal-anchored");
    const double t = orbit.anchor_time;
    if (!orbit.times.empty()) {
        const double lo = *std::min_element(orbit.times.begin(), orbit.times.end());
        const double hi = *std::max_element(orbit.times.begin(), orbit.times.end());
        const double span_lo = std::min(0.0, t), span_hi = std::max(0.0, t);
        if (lo > span_lo + 1e-9 || hi < span_hi - 1e-9)
            throw std::invalid_argument("phase_integral: orbit does not cover [0, t]");
    }

    PhaseLog log;
    log.times = orbit.times;
    for (std::size_t i = 0; i < orbit.times.size(); ++i)
        log.integrand.push_back(
            phase_term(model, orbit.times[i], orbit.states[i].x, orbit.states[i].xi));

    if (t == 0.0) return log;

    // re-integrate the characteristic system augmented with the phase;
    // theta(t) = 0 backward to s = 0 gives integral = -theta(0)
    const int n = model.dim;
    OdeRhs rhs = [&model, n](double s, const Vec& z, Vec& dz) {
        Vec x(z.begin(), z.begin() + n), xi(z.begin() + n, z.begin() + 2 * n);
        Vec dxi_h, dx_h;
        model.hamiltonian_derivatives(s, x, xi, dxi_h, dx_h);
        dz.resize(2 * static_cast<std::size_t>(n) + 1);
        for (int d = 0; d < n; ++d) {
            dz[d] = dxi_h[d];
            dz[n + d] = -dx_h[d];
        }
        dz[2 * n] = phase_term(model, s, x, xi);
    };
    Vec z0(orbit.anchor_point.x);
    z0.insert(z0.end(), orbit.anchor_point.xi.begin(), orbit.anchor_point.xi.end());
    z0.push_back(0.0);
    OdeOptions oo;
    oo.rtol = std::min(1e-10, tolerance);
    oo.atol = tolerance * 1e-3;
    OdeSolution sol = integrate_dp5(rhs, t, z0, 0.0, {0.0}, oo);
    log.stats = sol.stats;
    log.integral = -sol.states.back()[2 * static_cast<std::size_t>(n)];
    return log;
}

namespace {

std::size_t next_pow2(double x) {
    std::size_t n = 2;
    while (static_cast<double>(n) < x) n *= 2;
    return n;
}

}  // namespace

TransportResidualResult transport_residual_given(const CoefficientModel& model,
                                                 const WaveField& u0, const WaveField& ut,
                                                 const WindowSpec& window_base, double lambda,
                                                 double t, const Vec& x, const Vec& xi,
                                                 const FlowOptions& flow_opts) {
    if (model.dim != 1 || u0.grid.dim != 1)
        throw std::invalid_argument("transport_residual: 1-D fields");
    const WindowSpec wl = scaled_window(window_base, lambda);
    const Vec lxi = scaled(xi, lambda);

    // flow backward from terminal (x, lambda xi) at time t, with phase
    Trajectory orbit = solve_bicharacteristics(model, t, x, lxi, {t, 0.0}, flow_opts);
    const PhasePoint& z0 = orbit.at_time(0.0, 1e-9);
    const PhaseLog phase = phase_integral(model, orbit);

    // forward side: unevolved window on u(t) at (x, lambda xi)
    const EvolvedWindow w_now = free_evolve_window(wl, 0.0);
    const EvolvedWindow w_back = free_evolve_window(wl, -t);

    // resample so both transforms satisfy the Nyquist budget
    auto ensure_budget = [&](const WaveField& f, const EvolvedWindow& w, const Vec& at_xi) {
        const double need = 1.15 * (norm2(at_xi) + w.bandwidth());
        if (need <= f.grid.nyquist()) return f;
        const double ratio = need / f.grid.nyquist();
        return resample(f, next_pow2(static_cast<double>(f.grid.points) * ratio));
    };
    const WaveField ut_fine = ensure_budget(ut, w_now, lxi);
    const WaveField u0_fine = ensure_budget(u0, w_back, z0.xi);

    TransportResidualResult res;
    res.flow_start = z0;
    res.phase = phase.integral;
    res.forward = wpt_point(ut_fine, w_now, x, lxi);
    res.back = wpt_point(u0_fine, w_back, z0.x, z0.xi);
    res.residual = std::abs(res.forward - std::exp(Complex(0.0, res.phase)) * res.back);
    return res;
}

TransportResidualResult transport_residual(const CoefficientModel& model, const WaveField& u0,
                                           const WindowSpec& window_base, double lambda, double t,
                                           const Vec& x, const Vec& xi, const SolverConfig& cfg,
                                           const FlowOptions& flow_opts) {
    WaveField ut = (t == 0.0) ? u0 : propagate(model, u0, 0.0, t, cfg);
    return transport_residual_given(model, u0, ut, window_base, lambda, t, x, xi, flow_opts);
}

}  // namespace wpk
