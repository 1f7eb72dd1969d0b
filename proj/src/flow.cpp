#include "wpk/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpk/errors.hpp"

namespace wpk {

namespace {

OdeRhs hamilton_rhs(const CoefficientModel& model) {
    const int n = model.dim;
    return [&model, n](double s, const Vec& z, Vec& dz) {
        Vec x(z.begin(), z.begin() + n), xi(z.begin() + n, z.end());
        Vec dxi_h, dx_h;
        model.hamiltonian_derivatives(s, x, xi, dxi_h, dx_h);
        dz.resize(2 * static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) {
            dz[d] = dxi_h[d];       // dx/ds = grad_xi h
            dz[n + d] = -dx_h[d];   // dxi/ds = -grad_x h
        }
    };
}

PhasePoint split_state(const Vec& z, int n) {
    return {Vec(z.begin(), z.begin() + n), Vec(z.begin() + n, z.end())};
}

Vec join_state(const Vec& x, const Vec& xi) {
    Vec z(x);
    z.insert(z.end(), xi.begin(), xi.end());
    return z;
}

}  // namespace

const PhasePoint& Trajectory::at_time(double s, double tol) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - s) <= tol) return states[i];
    throw std::invalid_argument("Trajectory::at_time: no sample at requested time");
}

Trajectory solve_bicharacteristics(const CoefficientModel& model, double t_terminal, const Vec& x,
                                   const Vec& xi, const std::vector<double>& s_eval,
                                   const FlowOptions& opts) {
    model.validate();
    const int n = model.dim;
    if (static_cast<int>(x.size()) != n || static_cast<int>(xi.size()) != n)
        throw std::invalid_argument("solve_bicharacteristics: dimension mismatch");
    const double lo = std::min(0.0, t_terminal), hi = std::max(0.0, t_terminal);
    for (double s : s_eval)
        if (s < lo - 1e-12 || s > hi + 1e-12)
            throw std::invalid_argument("solve_bicharacteristics: eval time outside [0, t]");

    Trajectory tr;
    tr.anchor = OrbitAnchor::TerminalAtT;
    tr.anchor_time = t_terminal;
    tr.anchor_point = {x, xi};
    tr.rtol = opts.rtol;
    tr.atol = opts.atol;

    if (model.is_exactly_flat()) {
        tr.closed_form = true;
        for (double s : s_eval) {
            tr.times.push_back(s);
            tr.states.push_back({axpy(x, s - t_terminal, xi), xi});
        }
        if (s_eval.empty()) {
            tr.times.push_back(t_terminal);
            tr.states.push_back({x, xi});
        }
        return tr;
    }

    OdeOptions oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    // integrate toward the farthest requested time, evaluating in direction
    // order, then hand samples back in the caller's order
    std::vector<std::size_t> order(s_eval.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const bool backward = t_terminal > 0.0;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return backward ? s_eval[a] > s_eval[b] : s_eval[a] < s_eval[b];
    });
    std::vector<double> sorted;
    sorted.reserve(s_eval.size());
    for (std::size_t i : order) sorted.push_back(s_eval[i]);
    const double target = sorted.empty() ? 0.0 : sorted.back();
    OdeSolution sol =
        integrate_dp5(hamilton_rhs(model), t_terminal, join_state(x, xi), target, sorted, oo);
    tr.stats = sol.stats;
    tr.times.resize(sol.times.size());
    tr.states.resize(sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        tr.times[order[i]] = sol.times[i];
        tr.states[order[i]] = split_state(sol.states[i], n);
    }
    return tr;
}

PhasePoint forward_orbit_from_shift(const CoefficientModel& model, double t, const Vec& y,
                                    const Vec& eta, const FlowOptions& opts) {
    model.validate();
    const int n = model.dim;
    if (static_cast<int>(y.size()) != n || static_cast<int>(eta.size()) != n)
        throw std::invalid_argument("forward_orbit_from_shift: dimension mismatch");
    const Vec y0 = axpy(y, -t, eta);
    if (model.is_exactly_flat() || t == 0.0) {
        // free orbit returns exactly to (y, eta)
        if (model.is_exactly_flat()) return {y, eta};
        return {y0, eta};
    }
    OdeOptions oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    OdeSolution sol = integrate_dp5(hamilton_rhs(model), 0.0, join_state(y0, eta), t, {t}, oo);
    return split_state(sol.states.back(), n);
}

RoundtripResidual roundtrip_residual(const CoefficientModel& model, double t, const Vec& y,
                                     const Vec& eta, const FlowOptions& opts) {
    const PhasePoint fwd = forward_orbit_from_shift(model, t, y, eta, opts);
    const Trajectory back = solve_bicharacteristics(model, t, fwd.x, fwd.xi, {0.0}, opts);
    const PhasePoint& z0 = back.states.back();
    return {dist2(z0.x, axpy(y, -t, eta)), dist2(z0.xi, eta)};
}

std::vector<Trajectory> picard_iterates(const CoefficientModel& model, double t0, const Vec& x,
                                        const Vec& xi, double lambda, int iterations, double s_lo,
                                        std::size_t grid_points) {
    model.validate();
    if (iterations < 0) throw std::invalid_argument("picard_iterates: iterations must be >= 0");
    if (lambda < 1.0) throw std::invalid_argument("picard_iterates: lambda must be >= 1");
    const int n = model.dim;
    const std::size_t m = grid_points;
    const double step = (t0 - s_lo) / static_cast<double>(m - 1);
    std::vector<double> grid(m);
    for (std::size_t i = 0; i < m; ++i) grid[i] = s_lo + step * static_cast<double>(i);

    auto make_traj = [&](const std::vector<Vec>& xs, const std::vector<Vec>& xis) {
        Trajectory tr;
        tr.anchor = OrbitAnchor::TerminalAtT;
        tr.anchor_time = t0;
        tr.anchor_point = {x, scaled(xi, lambda)};
        tr.times = grid;
        for (std::size_t i = 0; i < m; ++i) tr.states.push_back({xs[i], xis[i]});
        return tr;
    };

    std::vector<Trajectory> out;
    std::vector<Vec> xs(m), xis(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = axpy(x, lambda * (grid[i] - t0), xi);
        xis[i] = scaled(xi, lambda);
    }
    out.push_back(make_traj(xs, xis));

    for (int k = 1; k <= iterations; ++k) {
        // force samples F(s) = -(0.5 sum grad a_jk xi_j xi_k + grad V)(prev)
        // and drift D(s) = (A(prev) - E) xi_prev
        std::vector<Vec> force(m), drift(m);
        for (std::size_t i = 0; i < m; ++i) {
            Vec dxi_h, dx_h;
            model.hamiltonian_derivatives(grid[i], xs[i], xis[i], dxi_h, dx_h);
            force[i] = scaled(dx_h, -1.0);
            drift[i] = axpy(dxi_h, -1.0, xis[i]);  // (A - E) xi
        }
        // xi_k(s) = lambda xi + int_{t0}^{s} force;  cumulative from grid start
        std::vector<Vec> cf = cumulative_integral(force, step);
        std::vector<Vec> next_xi(m);
        const Vec cf_t0 = cf.back();  // integral from s_lo to t0
        for (std::size_t i = 0; i < m; ++i) {
            next_xi[i] = Vec(n);
            for (int d = 0; d < n; ++d)
                next_xi[i][d] = lambda * xi[d] + (cf[i][d] - cf_t0[d]);
        }
        // x_k(s) = x + int_{t0}^{s} xi_k + int_{t0}^{s} drift
        std::vector<Vec> cxi = cumulative_integral(next_xi, step);
        std::vector<Vec> cdr = cumulative_integral(drift, step);
        const Vec cxi_t0 = cxi.back(), cdr_t0 = cdr.back();
        std::vector<Vec> next_x(m);
        for (std::size_t i = 0; i < m; ++i) {
            next_x[i] = Vec(n);
            for (int d = 0; d < n; ++d)
                next_x[i][d] = x[d] + (cxi[i][d] - cxi_t0[d]) + (cdr[i][d] - cdr_t0[d]);
        }
        xs = std::move(next_x);
        xis = std::move(next_xi);
        out.push_back(make_traj(xs, xis));
    }
    return out;
}

bool Cone::contains(const Vec& xi) const {
    const double na = norm2(axis), nx = norm2(xi);
    if (na == 0.0 || nx == 0.0) return false;
    return dot(axis, xi) / (na * nx) > 1.0 - gamma;
}

namespace {

std::vector<Vec> cone_directions(const Cone& gamma_cone, int count) {
    const int n = static_cast<int>(gamma_cone.axis.size());
    const Vec axis_unit = scaled(gamma_cone.axis, 1.0 / norm2(gamma_cone.axis));
    if (n == 1 || count <= 1) return {axis_unit};
    const double theta_max = 0.9 * std::acos(std::clamp(1.0 - gamma_cone.gamma, -1.0, 1.0));
    // orthonormal transverse frame by Gram-Schmidt against the axis
    std::vector<Vec> frame;
    for (int d = 0; d < n && static_cast<int>(frame.size()) < n - 1; ++d) {
        Vec e(n, 0.0);
        e[d] = 1.0;
        Vec v = axpy(e, -dot(e, axis_unit), axis_unit);
        for (const Vec& f : frame) v = axpy(v, -dot(v, f), f);
        const double nv = norm2(v);
        if (nv > 1e-10) frame.push_back(scaled(v, 1.0 / nv));
    }
    std::vector<Vec> dirs{axis_unit};
    for (int i = 1; i < count; ++i) {
        const double frac = static_cast<double>((i + 1) / 2) /
                            static_cast<double>(std::max(1, (count - 1 + 1) / 2));
        const double theta = theta_max * std::min(1.0, frac);
        const Vec& f = frame[(i - 1) % frame.size()];
        const double sign = (n == 2 && i % 2 == 0) ? -1.0 : 1.0;
        Vec d(n);
        for (int dd = 0; dd < n; ++dd)
            d[dd] = std::cos(theta) * axis_unit[dd] + sign * std::sin(theta) * f[dd];
        dirs.push_back(d);
    }
    return dirs;
}

}  // namespace

std::vector<PhasePoint> phase_lattice(const Ball& K, const Cone& Gamma, double a,
                                      const LatticeCounts& counts) {
    if (!(a >= 1.0)) throw std::invalid_argument("phase_lattice: a must be >= 1");
    const int n = static_cast<int>(K.center.size());
    // axis-aligned lattice in the enclosing cube, filtered to the ball
    std::vector<Vec> xs;
    const int kpa = std::max(1, counts.points_per_axis);
    std::vector<double> offs(kpa);
    for (int i = 0; i < kpa; ++i)
        offs[i] = (kpa == 1) ? 0.0
                             : -K.radius + 2.0 * K.radius * static_cast<double>(i) /
                                               static_cast<double>(kpa - 1);
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(kpa);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        Vec x = K.center;
        for (int d = 0; d < n; ++d) {
            x[d] += offs[c % static_cast<std::size_t>(kpa)];
            c /= static_cast<std::size_t>(kpa);
        }
        if (dist2(x, K.center) <= K.radius * (1.0 + 1e-12)) xs.push_back(x);
    }
    const std::vector<Vec> dirs = cone_directions(Gamma, counts.directions);
    std::vector<double> radii;
    const int nr = std::max(1, counts.radii);
    for (int i = 0; i < nr; ++i) {
        const double fr = (nr == 1) ? 0.5 : static_cast<double>(i) / static_cast<double>(nr - 1);
        radii.push_back(std::pow(a, -1.0 + 2.0 * fr));
    }
    std::vector<PhasePoint> lattice;
    lattice.reserve(xs.size() * dirs.size() * radii.size());
    for (const Vec& x : xs)
        for (const Vec& d : dirs)
            for (double r : radii) lattice.push_back({x, scaled(d, r)});
    return lattice;
}

namespace {

// |s - t0| <= |t0| intersected with the orbit's domain: times between t0 and 0.
std::vector<double> bound_times(double t0, int count) {
    std::vector<double> s(count);
    for (int i = 0; i < count; ++i)
        s[i] = t0 - t0 * static_cast<double>(i) / static_cast<double>(std::max(1, count - 1));
    return s;  // from t0 toward 0 (integration direction)
}

}  // namespace

BoundReport orbit_bound_report(const CoefficientModel& model, double t0, const Ball& K,
                               const Cone& Gamma, double a, double lambda,
                               const LatticeCounts& counts, const FlowOptions& opts) {
    const auto lattice = phase_lattice(K, Gamma, a, counts);
    if (lattice.empty()) throw std::invalid_argument("orbit_bound_report: empty sample set");
    BoundReport rep;
    rep.lambda = lambda;
    rep.pass = true;
    const auto times = bound_times(t0, counts.times);
    for (const PhasePoint& p : lattice) {
        const double xin = norm2(p.xi);
        const Trajectory tr =
            solve_bicharacteristics(model, t0, p.x, scaled(p.xi, lambda), times, opts);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            const double s = tr.times[i];
            const double envelope =
                std::sqrt(1.0 + lambda * lambda * (s - t0) * (s - t0) * xin * xin);
            const double rp = (1.0 + norm2(tr.states[i].x)) / envelope;
            const double rm = norm2(tr.states[i].xi) / (lambda * xin);
            rep.worst_position_low = std::min(rep.worst_position_low, rp);
            rep.worst_position_high = std::max(rep.worst_position_high, rp);
            rep.worst_momentum_low = std::min(rep.worst_momentum_low, rm);
            rep.worst_momentum_high = std::max(rep.worst_momentum_high, rm);
            ++rep.samples;
            const bool pos_ok = rp >= 0.5 && rp <= 2.0;
            const bool mom_ok = rm >= 0.5 && rm <= 2.0;
            if ((!pos_ok || !mom_ok) && rep.pass) {
                rep.pass = false;
                BoundViolation v;
                v.sample = p;
                v.s = s;
                v.ratio = pos_ok ? rm : rp;
                v.which = pos_ok ? "momentum" : "position";
                rep.violation = v;
            }
        }
    }
    return rep;
}

BoundReport orbit_bound_sweep(const CoefficientModel& model, double t0, const Ball& K,
                              const Cone& Gamma, double a, const std::vector<double>& lambdas,
                              const LatticeCounts& counts, const FlowOptions& opts) {
    if (lambdas.empty()) throw std::invalid_argument("orbit_bound_sweep: empty lambda grid");
    auto passes = [&](double lam) {
        return orbit_bound_report(model, t0, K, Gamma, a, lam, counts, opts).pass;
    };
    // bisect for the first passing index, assuming pass is monotone in lambda
    std::size_t lo = 0, hi = lambdas.size();
    if (passes(lambdas[0])) {
        hi = 0;
    } else {
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (mid >= lambdas.size()) break;
            if (passes(lambdas[mid]))
                hi = mid;
            else
                lo = mid;
        }
    }
    BoundReport rep = orbit_bound_report(model, t0, K, Gamma, a, lambdas.back(), counts, opts);
    if (hi < lambdas.size()) {
        // verify every grid value from the candidate upward
        bool all = true;
        for (std::size_t i = hi; i < lambdas.size(); ++i) all = all && passes(lambdas[i]);
        if (all) rep.lambda0 = lambdas[hi];
    }
    rep.pass = rep.lambda0.has_value();
    return rep;
}

RateSweep forward_shift_rate(const CoefficientModel& model, double t, const Vec& y, const Vec& eta,
                             const std::vector<double>& lambdas, const FlowOptions& opts) {
    RateSweep sweep;
    sweep.lambdas = lambdas;
    std::vector<double> lx, ly;
    for (double lam : lambdas) {
        const PhasePoint end = forward_orbit_from_shift(model, t, y, scaled(eta, lam), opts);
        const double d = dist2(end.x, y);
        const double dm = dist2(end.xi, scaled(eta, lam));
        sweep.displacement.push_back(d);
        sweep.momentum_residual.push_back(dm);
        if (d > 0.0) {
            lx.push_back(std::log(lam));
            ly.push_back(std::log(d));
        }
    }
    if (lx.size() >= 2) sweep.displacement_fit = fit_line(lx, ly);
    return sweep;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
    if (count < 1 || !(lo > 0.0) || !(hi >= lo))
        throw std::invalid_argument("geometric_grid: bad parameters");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * static_cast<double>(i));
    return g;
}

}  // namespace wpk
