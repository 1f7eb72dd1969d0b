#pragma once

#include <functional>
#include <vector>

#include "wpk/numerics.hpp"

namespace wpk {

/// Right-hand side f(s, y) -> dy/ds.
using OdeRhs = std::function<void(double, const Vec&, Vec&)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;  // 0 => no cap
    std::size_t max_steps = 2'000'000;
};

struct OdeStats {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::size_t rhs_evals = 0;
};

/// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) with a 5th-order
/// dense-output interpolant. Integrates from s0 to s1 (either direction)
/// and evaluates the solution at `eval_times` (must lie between s0 and s1,
/// in monotone order matching the integration direction).
///
/// Throws NumericError on step-size underflow or non-finite state.
struct OdeSolution {
    std::vector<double> times;
    std::vector<Vec> states;
    OdeStats stats;
};

OdeSolution integrate_dp5(const OdeRhs& rhs, double s0, const Vec& y0, double s1,
                          const std::vector<double>& eval_times, const OdeOptions& opts = {});

/// Fixed-step classical RK4 over `nsteps` uniform steps; plain reference
/// integrator used by convergence checks.
Vec integrate_rk4_fixed(const OdeRhs& rhs, double s0, const Vec& y0, double s1,
                        std::size_t nsteps);

}  // namespace wpk
