#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "wpk/grid.hpp"
#include "wpk/numerics.hpp"

namespace wpk {

enum class WindowKind { Gaussian, PolyGaussian, Sampled };

/// Tabulated 1D base window on a uniform grid (for the spectral strategy).
struct SampledWindowData {
    UniformGrid grid;  // dim 1
    std::vector<Complex> values;
    std::vector<Complex> spectrum;  // unnormalized DFT of values, may be empty
};

/// Base window phi0 with dilation scale. At t = 0 the realized window is
///   lambda^(n/4) * phi0(sqrt(lambda) x),
/// with phi0(x) = p(x) exp(-|x|^2/2), p a per-axis polynomial product
/// (p == 1 for the plain Gaussian).
struct WindowSpec {
    int dim = 1;
    WindowKind kind = WindowKind::Gaussian;
    std::vector<std::vector<double>> poly;  // per-axis coefficients, may be empty
    double lambda = 1.0;
    double time = 0.0;
    std::shared_ptr<const SampledWindowData> table;  // Sampled kind only

    void validate() const;
    static WindowSpec gaussian(int n);
    /// p(x) = coefficients applied on axis 0; remaining axes Gaussian.
    static WindowSpec poly_gaussian(int n, const std::vector<double>& axis0_coeffs);
    static WindowSpec sampled(std::shared_ptr<const SampledWindowData> data);
};

/// Window after dilation and free evolution, with an attached evaluation
/// strategy: closed form for (poly-)Gaussian bases, spectral table otherwise.
/// Immutable after construction; concurrent sampling is safe.
class EvolvedWindow {
public:
    const WindowSpec& spec() const { return spec_; }
    double lambda() const { return spec_.lambda; }
    double time() const { return spec_.time; }
    int dim() const { return spec_.dim; }
    bool closed_form() const { return closed_form_; }

    Complex value(const Vec& offset) const;
    Complex value1d(double offset) const;

    /// Half-width of the essential support: beyond it the envelope is below
    /// ~1e-18 of the peak.
    double support_halfwidth() const;
    /// Frequency-content bound (the free multiplier preserves |spectrum|).
    double bandwidth() const;
    /// Largest local oscillation rate of the window phase over |z| <= zmax.
    double chirp_rate() const;

    /// L2 norm by direct quadrature at reference resolution.
    double norm_quadrature() const;

    const SampledWindowData& table() const;

    friend EvolvedWindow free_evolve_window(const WindowSpec& spec, double t);

private:
    WindowSpec spec_;
    bool closed_form_ = true;
    // closed form, per axis: amp * Q(z) * exp(-z^2 / (2 w))
    Complex width_w_{1.0, 0.0};
    Complex axis_amp_{1.0, 0.0};
    std::vector<std::vector<Complex>> axis_poly_;  // Q coefficients per axis
    // spectral strategy
    std::shared_ptr<const SampledWindowData> evolved_table_;
};

/// L2-preserving dilation: lambda^(n/4) phi0(sqrt(lambda) x). Requires
/// lambda >= 1.
WindowSpec scaled_window(const WindowSpec& base, double lambda);

/// Free evolution by time t (multiplier exp(-i t |k|^2 / 2) on the spectrum).
/// Gaussian-type bases evolve in closed form; sampled bases go through the
/// spectral path and are checked for aliasing first.
EvolvedWindow free_evolve_window(const WindowSpec& spec, double t);

/// Values of the evolved window at the given offsets.
std::vector<Complex> window_samples(const EvolvedWindow& w, const std::vector<Vec>& offsets);

}  // namespace wpk
