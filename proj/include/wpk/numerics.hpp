#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace wpk {

using Vec = std::vector<double>;
using Complex = std::complex<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);                  // Euclidean norm
double dist2(const Vec& a, const Vec& b);    // Euclidean distance

/// a + s*b
Vec axpy(const Vec& a, double s, const Vec& b);
Vec scaled(const Vec& a, double s);

/// Ordinary least squares y = slope*x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t count = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Composite Gauss-Legendre quadrature of a complex integrand over [lo, hi].
/// `panels` subintervals, 8 nodes each; exact through polynomial degree 15
/// per panel, so ~2 panels per oscillation period suffice at double accuracy.
Complex integrate_gl8(const std::function<Complex(double)>& f, double lo, double hi,
                      std::size_t panels);

/// Cumulative integral of samples on a uniform grid (local quadratic rule,
/// 4th order). out[k] = integral from grid[0] to grid[k].
std::vector<double> cumulative_integral(const std::vector<double>& values, double step);
std::vector<Vec> cumulative_integral(const std::vector<Vec>& values, double step);

/// Run fn(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to preallocated storage indexed by i; the call order within a
/// thread is ascending, so reductions done afterwards are deterministic.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace wpk
