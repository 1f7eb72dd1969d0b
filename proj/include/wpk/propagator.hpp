#pragma once

#include <functional>
#include <vector>

#include "wpk/coeffs.hpp"
#include "wpk/grid.hpp"
#include "wpk/numerics.hpp"
#include "wpk/signals.hpp"

namespace wpk {

/// Complex field samples on a uniform periodic grid at a given time.
struct WaveField {
    UniformGrid grid;
    std::vector<Complex> values;  // row-major over grid axes
    double time = 0.0;

    void validate() const;
    double l2_norm() const;  // grid quadrature norm

    static WaveField from_function(const UniformGrid& grid,
                                   const std::function<Complex(const Vec&)>& f, double time = 0.0);
    /// Sample 1-D analytic data; discontinuous kinds are smoothed at the
    /// grid scale (Gaussian spectral mollifier, width ~2 cells).
    static WaveField from_signal(const UniformGrid& grid, const AnalyticSignal& s, bool mollify);
};

struct SolverConfig {
    double dt_factor = 0.5;       // dt = dt_factor * (L/N)^2
    double norm_tolerance = 1e-5; // relative drift abort threshold
    std::size_t norm_check_every = 16;

    double time_step(const UniformGrid& g) const;
    void validate() const;
};

struct PropagationLog {
    std::vector<double> times;
    std::vector<double> norms;
    std::size_t steps = 0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double max_relative_drift = 0.0;
};

/// Exact free propagator: spectral multiplier exp(-i t |k|^2 / 2).
WaveField free_propagate(const WaveField& field, double t);

/// Method-of-lines solver for
///   i du/dt + 0.5 sum_jk d_j(a_jk(t,x) d_k u) - V(t,x) u = 0
/// with spectral spatial derivatives and classical RK4 in time.
/// Monitors the L2 norm; aborts (NumericError) on drift beyond tolerance
/// or non-finite values.
WaveField propagate(const CoefficientModel& model, const WaveField& field, double t0, double t1,
                    const SolverConfig& cfg, PropagationLog* log = nullptr);

/// Band-limited resampling to a finer grid (spectral zero padding).
WaveField resample(const WaveField& field, std::size_t new_points);

}  // namespace wpk
