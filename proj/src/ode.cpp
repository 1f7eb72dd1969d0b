#include "wpk/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wpk/errors.hpp"

namespace wpk {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool all_finite(const Vec& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

OdeSolution integrate_dp5(const OdeRhs& rhs, double s0, const Vec& y0, double s1,
                          const std::vector<double>& eval_times, const OdeOptions& opts) {
    const std::size_t n = y0.size();
    OdeSolution sol;
    sol.stats = {};

    const double span = s1 - s0;
    const double dir = (span >= 0.0) ? 1.0 : -1.0;
    auto record = [&](double s, const Vec& y) {
        sol.times.push_back(s);
        sol.states.push_back(y);
    };

    std::size_t next_eval = 0;

    if (std::abs(span) < 1e-300) {
        for (std::size_t i = 0; i < eval_times.size(); ++i) record(eval_times[i], y0);
        if (eval_times.empty()) record(s0, y0);
        return sol;
    }

    Vec y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n), err(n);
    double s = s0;
    rhs(s, y, k1);
    ++sol.stats.rhs_evals;

    // initial step guess
    double h = dir * std::min(std::abs(span),
                              std::max(1e-8, 0.01 * std::abs(span)));
    if (opts.max_step > 0.0) h = dir * std::min(std::abs(h), opts.max_step);

    const double underflow = 1e-14 * std::max(1.0, std::abs(span));
    std::size_t iter = 0;
    bool last = false;

    while (true) {
        if (++iter > opts.max_steps) throw NumericError("ode: exceeded max step count");
        if (dir * (s + h - s1) > 0.0) {
            h = s1 - s;
            last = true;
        } else {
            last = std::abs(s + h - s1) < 1e-15 * std::max(1.0, std::abs(s1));
        }
        if (std::abs(h) < underflow) {
            throw NumericError("ode: step size underflow at s = " + std::to_string(s));
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(s + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(s + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(s + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(s + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(s + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(s + h, y5, k7);
        sol.stats.rhs_evals += 6;

        double errnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double q = err[i] / sc;
            errnorm += q * q;
        }
        errnorm = std::sqrt(errnorm / static_cast<double>(n));
        if (!std::isfinite(errnorm) || !all_finite(y5))
            throw NumericError("ode: non-finite state encountered");

        if (errnorm <= 1.0) {
            // dense output for eval times inside [s, s+h]
            if (!eval_times.empty()) {
                Vec rc2(n), rc3(n), rc4(n), rc5(n);
                bool dense_ready = false;
                while (next_eval < eval_times.size()) {
                    const double se = eval_times[next_eval];
                    const double tol = 1e-12 * std::max(1.0, std::abs(s + h));
                    if (dir * (se - (s + h)) > tol && !last) break;
                    if (!dense_ready) {
                        for (std::size_t i = 0; i < n; ++i) {
                            const double dy = y5[i] - y[i];
                            const double bspl = h * k1[i] - dy;
                            rc2[i] = dy;
                            rc3[i] = bspl;
                            rc4[i] = dy - h * k7[i] - bspl;
                            rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                          d6 * k6[i] + d7 * k7[i]);
                        }
                        dense_ready = true;
                    }
                    const double theta = std::clamp((se - s) / h, 0.0, 1.0);
                    Vec yi(n);
                    for (std::size_t i = 0; i < n; ++i) {
                        yi[i] = y[i] + theta * (rc2[i] + (1.0 - theta) *
                                                             (rc3[i] + theta * (rc4[i] +
                                                                                (1.0 - theta) *
                                                                                    rc5[i])));
                    }
                    record(se, yi);
                    ++next_eval;
                }
            }
            s += h;
            y = y5;
            k1 = k7;  // FSAL
            ++sol.stats.steps_accepted;
            if (last || dir * (s - s1) >= 0.0) break;
            double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, 10.0);
            h *= fac;
            if (opts.max_step > 0.0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;
        } else {
            ++sol.stats.steps_rejected;
            last = false;
            const double fac = std::clamp(0.9 * std::pow(errnorm, -0.2), 0.1, 0.9);
            h *= fac;
        }
    }

    if (eval_times.empty()) record(s, y);
    // any eval times numerically equal to the endpoint
    while (next_eval < eval_times.size()) {
        record(eval_times[next_eval], y);
        ++next_eval;
    }
    return sol;
}

Vec integrate_rk4_fixed(const OdeRhs& rhs, double s0, const Vec& y0, double s1,
                        std::size_t nsteps) {
    const std::size_t n = y0.size();
    Vec y = y0, k1(n), k2(n), k3(n), k4(n), ytmp(n);
    const double h = (s1 - s0) / static_cast<double>(nsteps);
    double s = s0;
    for (std::size_t step = 0; step < nsteps; ++step) {
        rhs(s, y, k1);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(s + 0.5 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(s + 0.5 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
        rhs(s + h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        s += h;
    }
    return y;
}

}  // namespace wpk
