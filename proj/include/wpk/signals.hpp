#pragma once

#include <string>

#include "wpk/grid.hpp"
#include "wpk/numerics.hpp"

namespace wpk {

struct WaveField;

/// Closed-form 1D test data, evaluable anywhere. Used by the detection
/// pipeline at t = 0 so rough data needs no mollified grid.
struct AnalyticSignal {
    enum class Kind { Gaussian, Heaviside, ModulatedGaussian };

    Kind kind = Kind::Gaussian;
    double center = 0.0;
    double width = 1.0;      // Gaussian std scale
    double momentum = 0.0;   // modulation e^{i k0 y}
    double amplitude = 1.0;

    Complex eval(double y) const;
    /// Interval outside which |signal * gaussian tail| is negligible;
    /// half-open supports use +/-infinity.
    double support_lo() const;
    double support_hi() const;
    double max_frequency() const;
    bool smooth() const { return kind != Kind::Heaviside; }
    std::string describe() const;

    static AnalyticSignal gaussian(double center = 0.0, double width = 1.0);
    static AnalyticSignal heaviside(double jump = 0.0);
    static AnalyticSignal modulated_gaussian(double center, double width, double momentum);
};

}  // namespace wpk
