#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpk/coeffs.hpp"
#include "wpk/numerics.hpp"
#include "wpk/ode.hpp"

namespace wpk {

struct PhasePoint {
    Vec x;
    Vec xi;
};

enum class OrbitAnchor { TerminalAtT, InitialShifted };

/// Time-sampled solution of the characteristic system
///   dx/ds = grad_xi h,  dxi/ds = -grad_x h,
/// anchored either by terminal data (x(t), xi(t)) = (x, xi) or by the
/// shifted initial data (y - t*eta, eta) at s = 0.
struct Trajectory {
    std::vector<double> times;       // strictly monotone
    std::vector<PhasePoint> states;  // same length
    OrbitAnchor anchor = OrbitAnchor::TerminalAtT;
    double anchor_time = 0.0;  // t above
    PhasePoint anchor_point;   // (x, xi) resp. (y, eta)
    OdeStats stats;
    double rtol = 0.0, atol = 0.0;
    bool closed_form = false;  // exactly-flat models use the free orbit

    const PhasePoint& at_time(double s, double tol = 1e-9) const;
};

struct FlowOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
};

/// Orbit with terminal condition (x(t_terminal), xi(t_terminal)) = (x, xi),
/// sampled at s_eval (each in [min(0, t), max(0, t)], ordered toward the
/// integration direction, i.e. decreasing when t_terminal > 0).
Trajectory solve_bicharacteristics(const CoefficientModel& model, double t_terminal, const Vec& x,
                                   const Vec& xi, const std::vector<double>& s_eval,
                                   const FlowOptions& opts = {});

/// Forward orbit with data (y - t*eta, eta) at s = 0, integrated to s = t.
PhasePoint forward_orbit_from_shift(const CoefficientModel& model, double t, const Vec& y,
                                    const Vec& eta, const FlowOptions& opts = {});

/// Forward then backward: |x(0) - (y - t*eta)| and |xi(0) - eta|.
struct RoundtripResidual {
    double dx = 0.0;
    double dxi = 0.0;
};
RoundtripResidual roundtrip_residual(const CoefficientModel& model, double t, const Vec& y,
                                     const Vec& eta, const FlowOptions& opts = {});

/// Successive integral-equation iterates for the orbit with terminal data
/// (x, lambda*xi) at s = t0, starting from the free orbit
///   x_0(s) = x + lambda*(s - t0)*xi,  xi_0(s) = lambda*xi.
/// Iterate k is sampled on a dense uniform grid over [s_lo, t0].
std::vector<Trajectory> picard_iterates(const CoefficientModel& model, double t0, const Vec& x,
                                        const Vec& xi, double lambda, int iterations,
                                        double s_lo = 0.0, std::size_t grid_points = 2048);

/// Cone of directions around xi0 with cosine threshold 1 - gamma.
struct Cone {
    Vec axis;      // xi0 (nonzero)
    double gamma;  // in (0,1)
    bool contains(const Vec& xi) const;
};

struct Ball {
    Vec center;
    double radius;
};

struct LatticeCounts {
    int points_per_axis = 5;  // in the ball K
    int directions = 5;       // in the cone
    int radii = 3;            // in [1/a, a]
    int times = 9;            // in [t0 - |t0|, t0]
};

/// Sample lattice for (x, xi) in K x Gamma with 1/a <= |xi| <= a.
std::vector<PhasePoint> phase_lattice(const Ball& K, const Cone& Gamma, double a,
                                      const LatticeCounts& counts);

struct BoundViolation {
    PhasePoint sample;
    double s = 0.0;
    double ratio = 0.0;
    std::string which;  // "position" or "momentum"
};

/// Two-sided envelope check along scaled orbits: with terminal data
/// (x, lambda*xi) at t0 and W(s) = sqrt(1 + lambda^2 (s-t0)^2 |xi|^2),
///   position ratio (1 + |x(s)|) / W(s)      in [1/2, 2]
///   momentum ratio |xi(s)| / (lambda |xi|)  in [1/2, 2].
struct BoundReport {
    double lambda = 0.0;
    std::optional<double> lambda0;  // smallest tested lambda passing (sweeps)
    double worst_position_low = 1e300, worst_position_high = 0.0;
    double worst_momentum_low = 1e300, worst_momentum_high = 0.0;
    bool pass = false;
    std::optional<BoundViolation> violation;
    std::size_t samples = 0;
};

BoundReport orbit_bound_report(const CoefficientModel& model, double t0, const Ball& K,
                               const Cone& Gamma, double a, double lambda,
                               const LatticeCounts& counts = {}, const FlowOptions& opts = {});

/// Sweep a geometric lambda grid, bisect for the smallest passing lambda,
/// and verify all larger grid values pass. Result carries lambda0.
BoundReport orbit_bound_sweep(const CoefficientModel& model, double t0, const Ball& K,
                              const Cone& Gamma, double a, const std::vector<double>& lambdas,
                              const LatticeCounts& counts = {}, const FlowOptions& opts = {});

/// |y(t;t,y,lambda*eta) - y| over a lambda grid, with the log-log slope.
struct RateSweep {
    std::vector<double> lambdas;
    std::vector<double> displacement;  // position residual
    std::vector<double> momentum_residual;
    LinearFit displacement_fit;
};
RateSweep forward_shift_rate(const CoefficientModel& model, double t, const Vec& y, const Vec& eta,
                             const std::vector<double>& lambdas, const FlowOptions& opts = {});

std::vector<double> geometric_grid(double lo, double hi, int count);

}  // namespace wpk
