#include "wpk/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wpk {

int multi_order(const MultiIndex& alpha) {
    int s = 0;
    for (int a : alpha) s += a;
    return s;
}

std::string multi_to_string(const MultiIndex& alpha) {
    std::ostringstream os;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) os << ",";
        os << alpha[i];
    }
    return os.str();
}

std::vector<MultiIndex> multi_indices_up_to(int n, int max_order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    // counting in base (max_order+1), keep |alpha| <= max_order
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (int d = 0; d < n; ++d) t *= static_cast<std::size_t>(max_order + 1);
        return t;
    }();
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (int d = 0; d < n; ++d) {
            cur[d] = static_cast<int>(c % static_cast<std::size_t>(max_order + 1));
            c /= static_cast<std::size_t>(max_order + 1);
        }
        if (multi_order(cur) <= max_order) out.push_back(cur);
    }
    std::sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        const int oa = multi_order(a), ob = multi_order(b);
        if (oa != ob) return oa < ob;
        return a < b;
    });
    return out;
}

namespace {

double sq_norm(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// Radial profiles F(s), s = |x|^2, with dF/ds and d2F/ds2.
struct RadialProfile {
    double f = 0.0, f1 = 0.0, f2 = 0.0;
};

RadialProfile gaussian_profile(double s) {
    const double e = std::exp(-s);
    return {e, -e, e};
}

RadialProfile algebraic_profile(double s, double p) {
    // (1+s)^(-p/2)
    const double b = 1.0 + s;
    const double f = std::pow(b, -p / 2.0);
    return {f, -(p / 2.0) * f / b, (p / 2.0) * (p / 2.0 + 1.0) * f / (b * b)};
}

RadialProfile growth_profile(double s, double q) {
    // (1+s)^(q/2)
    const double b = 1.0 + s;
    const double f = std::pow(b, q / 2.0);
    return {f, (q / 2.0) * f / b, (q / 2.0) * (q / 2.0 - 1.0) * f / (b * b)};
}

// Derivative of a radial function F(|x|^2) for |alpha| <= 2.
double radial_deriv(const RadialProfile& pr, const Vec& x, const MultiIndex& alpha) {
    const int order = multi_order(alpha);
    if (order == 0) return pr.f;
    if (order == 1) {
        for (std::size_t d = 0; d < alpha.size(); ++d)
            if (alpha[d] == 1) return pr.f1 * 2.0 * x[d];
    }
    // order 2: either d_i d_j (i != j) or d_i^2
    int i = -1, j = -1;
    for (std::size_t d = 0; d < alpha.size(); ++d) {
        if (alpha[d] == 2) { i = j = static_cast<int>(d); break; }
        if (alpha[d] == 1) (i < 0 ? i : j) = static_cast<int>(d);
    }
    const double xi = x[i], xj = x[j];
    const double kron = (i == j) ? 1.0 : 0.0;
    return pr.f2 * 4.0 * xi * xj + pr.f1 * 2.0 * kron;
}

// Cross-term potential x1*x2*G(|x|^2), G = (1+s)^(-rho/2).
double cross_deriv(const Vec& x, double rho, double eps, const MultiIndex& alpha) {
    const double s = sq_norm(x);
    const RadialProfile g = algebraic_profile(s, rho);
    const int order = multi_order(alpha);
    const double x1 = x[0], x2 = x[1];
    auto d1 = [&](int j) {  // d_j (x1 x2 G)
        const double lead = (j == 0 ? x2 : (j == 1 ? x1 : 0.0));
        return lead * g.f + x1 * x2 * g.f1 * 2.0 * x[j];
    };
    if (order == 0) return eps * x1 * x2 * g.f;
    if (order == 1) {
        for (std::size_t d = 0; d < alpha.size(); ++d)
            if (alpha[d] == 1) return eps * d1(static_cast<int>(d));
    }
    int i = -1, j = -1;
    for (std::size_t d = 0; d < alpha.size(); ++d) {
        if (alpha[d] == 2) { i = j = static_cast<int>(d); break; }
        if (alpha[d] == 1) (i < 0 ? i : j) = static_cast<int>(d);
    }
    const double li = (i == 0 ? x2 : (i == 1 ? x1 : 0.0));
    const double lj = (j == 0 ? x2 : (j == 1 ? x1 : 0.0));
    const double mixed = ((i == 0 && j == 1) || (i == 1 && j == 0)) ? 1.0 : 0.0;
    const double kron = (i == j) ? 1.0 : 0.0;
    double v = mixed * g.f;
    v += li * g.f1 * 2.0 * x[j] + lj * g.f1 * 2.0 * x[i];
    v += x1 * x2 * (g.f2 * 4.0 * x[i] * x[j] + g.f1 * 2.0 * kron);
    return eps * v;
}

// sup over r in [0, 20] of w(r), dense scan with safety margin; the built-in
// profiles attain their weighted supremum at desk scale.
template <typename F>
double scan_sup(F&& w) {
    double best = 0.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        const double r = 20.0 * static_cast<double>(i) / n;
        best = std::max(best, w(r));
    }
    return 1.5 * best;
}

}  // namespace

void CoefficientModel::validate() const {
    if (dim < 1) throw std::invalid_argument("model: dim must be >= 1");
    if (!(rho > 1.0)) throw std::invalid_argument("model: rho must be > 1");
    if (potential_family == PotentialFamily::CrossTerm && dim < 2)
        throw std::invalid_argument("model: cross-term potential needs dim >= 2");
    if (metric_family != MetricFamily::Flat) {
        const double slack =
            std::abs(metric_eps) + (dim - 1) * std::abs(metric_offdiag);
        if (slack > 0.45)
            throw std::invalid_argument("model: metric perturbation too strong for ellipticity");
    }
    if (derivative_order < 1 || derivative_order > 2)
        throw std::invalid_argument("model: derivative order must be 1 or 2");
}

bool CoefficientModel::is_exactly_flat() const {
    return metric_family == MetricFamily::Flat && potential_family == PotentialFamily::None;
}

bool CoefficientModel::time_dependent() const { return tmod != TimeModulation::None; }

double CoefficientModel::time_factor(double t) const {
    switch (tmod) {
        case TimeModulation::None: return 1.0;
        case TimeModulation::Cosine: return std::cos(tmod_omega * t);
    }
    return 1.0;
}

namespace {
RadialProfile metric_profile(const CoefficientModel& m, double s) {
    switch (m.metric_family) {
        case MetricFamily::Flat: return {0.0, 0.0, 0.0};
        case MetricFamily::GaussianBump: return gaussian_profile(s);
        case MetricFamily::Algebraic: return algebraic_profile(s, m.rho);
    }
    return {};
}
}  // namespace

double CoefficientModel::metric_entry(double t, const Vec& x, int j, int k) const {
    const double kron = (j == k) ? 1.0 : 0.0;
    if (metric_family == MetricFamily::Flat) return kron;
    const double g = metric_profile(*this, sq_norm(x)).f;
    const double strength = (j == k) ? metric_eps : metric_offdiag;
    return kron + time_factor(t) * strength * g;
}

std::vector<double> CoefficientModel::metric_at(double t, const Vec& x) const {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("metric_at: point dimension mismatch");
    std::vector<double> a(static_cast<std::size_t>(dim) * dim);
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) a[static_cast<std::size_t>(j) * dim + k] = metric_entry(t, x, j, k);
    return a;
}

double CoefficientModel::metric_deriv(double t, const Vec& x, int j, int k,
                                      const MultiIndex& alpha) const {
    if (static_cast<int>(x.size()) != dim || static_cast<int>(alpha.size()) != dim)
        throw std::invalid_argument("metric_deriv: dimension mismatch");
    if (multi_order(alpha) > derivative_order)
        throw std::invalid_argument("metric_deriv: derivative order unavailable");
    const int order = multi_order(alpha);
    if (metric_family == MetricFamily::Flat) return (order == 0 && j == k) ? 1.0 : 0.0;
    const RadialProfile pr = metric_profile(*this, sq_norm(x));
    const double strength = (j == k) ? metric_eps : metric_offdiag;
    double v = time_factor(t) * strength * radial_deriv(pr, x, alpha);
    if (order == 0 && j == k) v += 1.0;
    return v;
}

double CoefficientModel::potential(double t, const Vec& x) const {
    MultiIndex zero(static_cast<std::size_t>(dim), 0);
    return potential_deriv(t, x, zero);
}

double CoefficientModel::potential_deriv(double t, const Vec& x, const MultiIndex& alpha) const {
    if (static_cast<int>(x.size()) != dim || static_cast<int>(alpha.size()) != dim)
        throw std::invalid_argument("potential_deriv: dimension mismatch");
    if (multi_order(alpha) > derivative_order)
        throw std::invalid_argument("potential_deriv: derivative order unavailable");
    const double m = time_factor(t);
    const double s = sq_norm(x);
    switch (potential_family) {
        case PotentialFamily::None: return 0.0;
        case PotentialFamily::GaussianBump:
            return m * potential_eps * radial_deriv(gaussian_profile(s), x, alpha);
        case PotentialFamily::Algebraic:
            return m * potential_eps * radial_deriv(growth_profile(s, 2.0 - rho), x, alpha);
        case PotentialFamily::CrossTerm: return m * cross_deriv(x, rho, potential_eps, alpha);
        case PotentialFamily::Quadratic:
            return m * potential_eps * radial_deriv({s, 1.0, 0.0}, x, alpha);
    }
    return 0.0;
}

Vec CoefficientModel::grad_potential(double t, const Vec& x) const {
    Vec g(dim);
    MultiIndex alpha(static_cast<std::size_t>(dim), 0);
    for (int d = 0; d < dim; ++d) {
        alpha[d] = 1;
        g[d] = potential_deriv(t, x, alpha);
        alpha[d] = 0;
    }
    return g;
}

double CoefficientModel::hamiltonian(double t, const Vec& x, const Vec& xi) const {
    const auto a = metric_at(t, x);
    double q = 0.0;
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) q += a[static_cast<std::size_t>(j) * dim + k] * xi[j] * xi[k];
    return 0.5 * q + potential(t, x);
}

void CoefficientModel::hamiltonian_derivatives(double t, const Vec& x, const Vec& xi,
                                               Vec& dxi_out, Vec& dx_out) const {
    if (static_cast<int>(x.size()) != dim || static_cast<int>(xi.size()) != dim)
        throw std::invalid_argument("hamiltonian_derivatives: dimension mismatch");
    dxi_out.assign(dim, 0.0);
    dx_out.assign(dim, 0.0);
    const auto a = metric_at(t, x);
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            dxi_out[j] += a[static_cast<std::size_t>(j) * dim + k] * xi[k];
    // 0.5 * sum_jk d_l a_jk xi_j xi_k
    if (metric_family != MetricFamily::Flat) {
        const RadialProfile pr = metric_profile(*this, sq_norm(x));
        const double mt = time_factor(t);
        // a_jk = delta + m g (eps delta + off (1-delta)):
        // sum_jk d_l a_jk xi_j xi_k = m * 2 x_l g' * [eps |xi|^2 + off ((sum xi)^2 - |xi|^2)]
        double sum_xi = 0.0, xi2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            sum_xi += xi[d];
            xi2 += xi[d] * xi[d];
        }
        const double quad = metric_eps * xi2 + metric_offdiag * (sum_xi * sum_xi - xi2);
        for (int l = 0; l < dim; ++l) dx_out[l] = 0.5 * mt * quad * pr.f1 * 2.0 * x[l];
    }
    const Vec gV = grad_potential(t, x);
    for (int l = 0; l < dim; ++l) dx_out[l] += gV[l];
}

double CoefficientModel::metric_decay_constant(int order) const {
    if (metric_family == MetricFamily::Flat) return 1.0;
    const double eps = std::max(std::abs(metric_eps), std::abs(metric_offdiag));
    const double m = rho + order;
    auto weight = [&](double r) { return std::pow(1.0 + r, m); };
    switch (metric_family) {
        case MetricFamily::GaussianBump: {
            // |d^a e^{-r^2}| <= (2 + 2r + 4r^2) e^{-r^2} for |a| <= 2
            return scan_sup([&](double r) {
                const double env = (order == 0 ? 1.0 : (order == 1 ? 2.0 * r : 2.0 + 4.0 * r * r));
                return eps * env * std::exp(-r * r) * weight(r);
            });
        }
        case MetricFamily::Algebraic: {
            const double p = rho;
            return scan_sup([&](double r) {
                const double b = 1.0 + r * r;
                double env = std::pow(b, -p / 2.0);
                if (order == 1) env = p * r * std::pow(b, -p / 2.0 - 1.0);
                if (order == 2) env = (p + p * (p + 2.0) * r * r / b) * std::pow(b, -p / 2.0 - 1.0);
                return eps * env * weight(r);
            });
        }
        default: return 1.0;
    }
}

double CoefficientModel::potential_decay_constant(int order) const {
    if (potential_family == PotentialFamily::None) return 1.0;
    const double eps = std::abs(potential_eps);
    const double m = std::max(0.0, rho - 2.0 + order);
    auto weight = [&](double r) { return std::pow(1.0 + r, m); };
    switch (potential_family) {
        case PotentialFamily::GaussianBump:
            return scan_sup([&](double r) {
                const double env = (order == 0 ? 1.0 : (order == 1 ? 2.0 * r : 2.0 + 4.0 * r * r));
                return eps * env * std::exp(-r * r) * weight(r);
            });
        case PotentialFamily::Algebraic: {
            const double q = 2.0 - rho;
            return scan_sup([&](double r) {
                const double b = 1.0 + r * r;
                double env = std::pow(b, q / 2.0);
                if (order == 1) env = std::abs(q) * r * std::pow(b, q / 2.0 - 1.0);
                if (order == 2)
                    env = std::abs(q) * (1.0 + std::abs(q - 2.0) * r * r / b) * std::pow(b, q / 2.0 - 1.0);
                return eps * env * weight(r);
            });
        }
        case PotentialFamily::CrossTerm: {
            const double p = rho;
            return scan_sup([&](double r) {
                const double b = 1.0 + r * r;
                double env = 0.5 * r * r * std::pow(b, -p / 2.0);
                if (order == 1) env = (r + 0.5 * p * r * r * r / b) * std::pow(b, -p / 2.0);
                if (order == 2)
                    env = (1.0 + 3.0 * p * r * r / b + 0.5 * p * (p + 2.0) * r * r * r * r / (b * b)) *
                          std::pow(b, -p / 2.0);
                return eps * env * weight(r);
            });
        }
        case PotentialFamily::Quadratic:
            // nominal unit-scale constant; the weighted supremum grows with
            // the sample radius, so this family fails validation by design
            return eps;
        default: return 1.0;
    }
}

DecayReport validate_decay(const CoefficientModel& model, int alpha_max,
                           const std::vector<Vec>& samples, const std::vector<double>& times) {
    model.validate();
    if (alpha_max > model.derivative_order)
        throw std::invalid_argument("validate_decay: requested derivative order unavailable");
    if (samples.empty()) throw std::invalid_argument("validate_decay: empty sample set");
    DecayReport rep;
    rep.alpha_max = alpha_max;
    rep.sample_count = samples.size();
    {
        std::ostringstream os;
        os << samples.size() << " spatial samples, " << times.size() << " times";
        rep.sample_descriptor = os.str();
    }
    for (const MultiIndex& alpha : multi_indices_up_to(model.dim, alpha_max)) {
        DecayEntry e;
        e.alpha = alpha;
        const int order = multi_order(alpha);
        e.metric_bound = model.metric_decay_constant(order);
        e.potential_bound = model.potential_decay_constant(order);
        for (const Vec& x : samples) {
            const double r = norm2(x);
            const double wm = std::pow(1.0 + r, model.rho + order);
            const double wv = std::pow(1.0 + r, model.rho - 2.0 + order);
            for (double t : times) {
                for (int j = 0; j < model.dim; ++j)
                    for (int k = j; k < model.dim; ++k) {
                        double d = model.metric_deriv(t, x, j, k, alpha);
                        if (order == 0 && j == k) d -= 1.0;
                        e.metric_sup = std::max(e.metric_sup, std::abs(d) * wm);
                    }
                e.potential_sup =
                    std::max(e.potential_sup, std::abs(model.potential_deriv(t, x, alpha)) * wv);
            }
        }
        e.pass = e.metric_sup <= e.metric_bound && e.potential_sup <= e.potential_bound;
        rep.pass = rep.pass && e.pass;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

std::vector<Vec> radial_log_samples(int dim, double r_max, int per_decade) {
    std::vector<double> radii{0.0};
    const int decades = static_cast<int>(std::ceil(std::log10(r_max))) + 3;  // from 1e-3
    for (int i = 0; i <= decades * per_decade; ++i) {
        const double r = 1e-3 * std::pow(10.0, static_cast<double>(i) / per_decade);
        if (r > r_max * (1.0 + 1e-12)) break;
        radii.push_back(r);
    }
    std::vector<Vec> dirs;
    for (int d = 0; d < dim; ++d) {
        Vec e(dim, 0.0);
        e[d] = 1.0;
        dirs.push_back(e);
        e[d] = -1.0;
        dirs.push_back(e);
    }
    if (dim > 1) {
        Vec diag(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
        dirs.push_back(diag);
        Vec anti = diag;
        anti[0] = -anti[0];
        dirs.push_back(anti);
    }
    std::vector<Vec> out;
    out.reserve(radii.size() * dirs.size());
    for (double r : radii)
        for (const Vec& e : dirs) out.push_back(scaled(e, r));
    return out;
}

CoefficientModel CoefficientModel::flat(int n) {
    CoefficientModel m;
    m.dim = n;
    m.label = "flat";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::metric_gaussian(int n, double rho, double eps, double offdiag) {
    CoefficientModel m;
    m.dim = n;
    m.rho = rho;
    m.metric_family = MetricFamily::GaussianBump;
    m.metric_eps = eps;
    m.metric_offdiag = offdiag;
    m.label = "metric-gaussian";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::metric_algebraic(int n, double rho, double eps, double offdiag) {
    CoefficientModel m;
    m.dim = n;
    m.rho = rho;
    m.metric_family = MetricFamily::Algebraic;
    m.metric_eps = eps;
    m.metric_offdiag = offdiag;
    m.label = "metric-algebraic";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::potential_gaussian(int n, double rho, double eps) {
    CoefficientModel m;
    m.dim = n;
    m.rho = rho;
    m.potential_family = PotentialFamily::GaussianBump;
    m.potential_eps = eps;
    m.label = "potential-gaussian";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::potential_algebraic(int n, double rho, double eps) {
    CoefficientModel m;
    m.dim = n;
    m.rho = rho;
    m.potential_family = PotentialFamily::Algebraic;
    m.potential_eps = eps;
    m.label = "potential-algebraic";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::potential_cross(double rho, double eps) {
    CoefficientModel m;
    m.dim = 2;
    m.rho = rho;
    m.potential_family = PotentialFamily::CrossTerm;
    m.potential_eps = eps;
    m.label = "potential-cross";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::potential_quadratic(int n, double eps) {
    CoefficientModel m;
    m.dim = n;
    m.potential_family = PotentialFamily::Quadratic;
    m.potential_eps = eps;
    m.label = "potential-quadratic";
    m.validate();
    return m;
}

CoefficientModel CoefficientModel::bump(int n, double rho, double metric_eps, double pot_eps) {
    CoefficientModel m;
    m.dim = n;
    m.rho = rho;
    m.metric_family = MetricFamily::GaussianBump;
    m.metric_eps = metric_eps;
    m.potential_family = PotentialFamily::GaussianBump;
    m.potential_eps = pot_eps;
    m.label = "bump";
    m.validate();
    return m;
}

}  // namespace wpk
