#pragma once

#include <string>
#include <vector>

#include "wpk/numerics.hpp"

namespace wpk {

enum class MetricFamily { Flat, GaussianBump, Algebraic };
enum class PotentialFamily { None, GaussianBump, Algebraic, CrossTerm, Quadratic };
enum class TimeModulation { None, Cosine };

using MultiIndex = std::vector<int>;

int multi_order(const MultiIndex& alpha);
std::string multi_to_string(const MultiIndex& alpha);
/// All multi-indices of order <= max_order in dimension n, lexicographic.
std::vector<MultiIndex> multi_indices_up_to(int n, int max_order);

/// Time-dependent metric perturbation and potential with analytic spatial
/// derivatives up to order 2 and a long-range decay exponent rho.
///
///   a_jk(t,x) = delta_jk + m(t) * g(x) * (eps*delta_jk + eps_off*(1-delta_jk))
///   V(t,x)    = m(t) * potential profile
///
/// Built-in families keep the metric uniformly elliptic (A >= 0.5*I).
struct CoefficientModel {
    int dim = 1;
    double rho = 1.5;

    MetricFamily metric_family = MetricFamily::Flat;
    double metric_eps = 0.0;
    double metric_offdiag = 0.0;

    PotentialFamily potential_family = PotentialFamily::None;
    double potential_eps = 0.0;

    TimeModulation tmod = TimeModulation::None;
    double tmod_omega = 1.0;

    int derivative_order = 2;
    std::string label;

    void validate() const;  // throws std::invalid_argument
    bool is_exactly_flat() const;
    bool time_dependent() const;
    double time_factor(double t) const;

    double metric_entry(double t, const Vec& x, int j, int k) const;
    /// Row-major n x n matrix (a_jk(t,x)); symmetric by construction.
    std::vector<double> metric_at(double t, const Vec& x) const;
    double metric_deriv(double t, const Vec& x, int j, int k, const MultiIndex& alpha) const;

    double potential(double t, const Vec& x) const;
    double potential_deriv(double t, const Vec& x, const MultiIndex& alpha) const;
    Vec grad_potential(double t, const Vec& x) const;

    /// h(t,x,xi) = 0.5 * sum a_jk xi_j xi_k + V.
    double hamiltonian(double t, const Vec& x, const Vec& xi) const;
    /// grad_xi h = A xi,  grad_x h = 0.5 * sum d_x a_jk xi_j xi_k + grad V.
    void hamiltonian_derivatives(double t, const Vec& x, const Vec& xi, Vec& dxi_out,
                                 Vec& dx_out) const;

    /// Nominal decay constants per derivative order (desk-scale calibration
    /// of the family profile, fixed safety margin).
    double metric_decay_constant(int order) const;
    double potential_decay_constant(int order) const;

    // Built-in factories.
    static CoefficientModel flat(int n);
    static CoefficientModel metric_gaussian(int n, double rho, double eps, double offdiag = 0.0);
    static CoefficientModel metric_algebraic(int n, double rho, double eps, double offdiag = 0.0);
    static CoefficientModel potential_gaussian(int n, double rho, double eps);
    static CoefficientModel potential_algebraic(int n, double rho, double eps);
    static CoefficientModel potential_cross(double rho, double eps);  // n = 2
    static CoefficientModel potential_quadratic(int n, double eps);   // negative fixture
    static CoefficientModel bump(int n, double rho, double metric_eps, double pot_eps);
};

struct DecayEntry {
    MultiIndex alpha;
    double metric_sup = 0.0;      // sup |d^a (a - delta)| (1+|x|)^(rho+|a|)
    double metric_bound = 0.0;    // declared constant
    double potential_sup = 0.0;   // sup |d^a V| (1+|x|)^(rho-2+|a|)
    double potential_bound = 0.0; // declared constant
    bool pass = true;
};

struct DecayReport {
    int alpha_max = 0;
    std::vector<DecayEntry> entries;
    bool pass = true;
    std::string sample_descriptor;
    std::size_t sample_count = 0;
};

/// Checks the long-range bounds on the given spatial sample set (and a fixed
/// list of evaluation times). Deterministic for a fixed sample set; adding
/// samples can only raise the observed suprema.
DecayReport validate_decay(const CoefficientModel& model, int alpha_max,
                           const std::vector<Vec>& samples,
                           const std::vector<double>& times = {0.0, 0.37, -0.71, 1.0, 2.3});

/// Log-spaced radial sample set out to |x| = r_max (per axis direction and
/// diagonals), the default grid for decay validation.
std::vector<Vec> radial_log_samples(int dim, double r_max = 1e3, int per_decade = 12);

}  // namespace wpk
