#pragma once

#include <vector>

#include "wpk/coeffs.hpp"
#include "wpk/flow.hpp"
#include "wpk/numerics.hpp"
#include "wpk/propagator.hpp"
#include "wpk/windows.hpp"

namespace wpk {

/// Phase rate along the characteristic transport of the windowed transform:
///   f(t,x,xi) = -0.5 sum_jk (a_jk - x . grad a_jk) xi_j xi_k
///               + V - x . grad V.
double phase_term(const CoefficientModel& model, double t, const Vec& x, const Vec& xi);

struct PhaseLog {
    std::vector<double> times;
    std::vector<double> integrand;  // f(s, x(s), xi(s)) at orbit samples
    double integral = 0.0;          // int_0^t f ds (real by construction)
    OdeStats stats;
};

/// Integral of the phase rate along an orbit anchored at terminal time t
/// (re-integrated with the orbit at quadrature accuracy). The orbit's
/// samples must cover [0, t].
PhaseLog phase_integral(const CoefficientModel& model, const Trajectory& orbit,
                        double tolerance = 1e-9);

struct TransportResidualResult {
    double residual = 0.0;   // | W_t - e^{i phase} W_0 |
    Complex forward = 0.0;   // W at time t, unevolved window, at (x, lambda xi)
    Complex back = 0.0;      // W of the data, window evolved by -t, at the flowed point
    double phase = 0.0;
    PhasePoint flow_start;   // (x(0), xi(0))
};

/// Residual of the transport identity connecting the windowed transform of
/// u(t) at (x, lambda xi) to the transform of the data at the flowed point:
/// zero for the flat free case, the aggregate correction otherwise.
/// Propagates u0 with the given solver config, upsampling internally for the
/// transform's Nyquist budget.
TransportResidualResult transport_residual(const CoefficientModel& model, const WaveField& u0,
                                           const WindowSpec& window_base, double lambda, double t,
                                           const Vec& x, const Vec& xi,
                                           const SolverConfig& cfg = {},
                                           const FlowOptions& flow_opts = {});

/// Same computation but reusing a precomputed propagated field (must satisfy
/// ut.time == t relative to u0.time); used by sweeps over lambda.
TransportResidualResult transport_residual_given(const CoefficientModel& model,
                                                 const WaveField& u0, const WaveField& ut,
                                                 const WindowSpec& window_base, double lambda,
                                                 double t, const Vec& x, const Vec& xi,
                                                 const FlowOptions& flow_opts = {});

}  // namespace wpk
