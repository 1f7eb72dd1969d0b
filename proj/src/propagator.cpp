#include "wpk/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "wpk/errors.hpp"
#include "wpk/fft.hpp"

namespace wpk {

void WaveField::validate() const {
    if (values.size() != grid.total_points())
        throw std::invalid_argument("WaveField: sample count does not match grid");
    const double n = l2_norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("WaveField: norm must be positive and finite");
}

double WaveField::l2_norm() const {
    double s = 0.0;
    for (const Complex& v : values) s += std::norm(v);
    return std::sqrt(s * grid.cell_volume());
}

WaveField WaveField::from_function(const UniformGrid& g,
                                   const std::function<Complex(const Vec&)>& f, double time) {
    WaveField w;
    w.grid = g;
    w.time = time;
    w.values.resize(g.total_points());
    for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = f(g.point(i));
    return w;
}

WaveField WaveField::from_signal(const UniformGrid& g, const AnalyticSignal& s, bool mollify) {
    if (g.dim != 1) throw std::invalid_argument("from_signal: analytic signals are 1-D");
    WaveField w = from_function(g, [&](const Vec& x) { return s.eval(x[0]); });
    if (mollify && !s.smooth()) {
        SpectralWorkspace ws({g.points});
        ws.forward(w.values);
        const auto ks = g.wavenumbers();
        const double sigma = 2.0 * g.step();
        for (std::size_t i = 0; i < w.values.size(); ++i)
            w.values[i] *= std::exp(-0.5 * sigma * sigma * ks[i] * ks[i]);
        ws.inverse(w.values);
    }
    return w;
}

double SolverConfig::time_step(const UniformGrid& g) const {
    const double ln = g.half_width / static_cast<double>(g.points);
    return dt_factor * ln * ln;
}

void SolverConfig::validate() const {
    if (!(dt_factor > 0.0) || dt_factor > 0.5)
        throw std::invalid_argument("solver: dt_factor must be in (0, 0.5]");
    if (!(norm_tolerance > 0.0)) throw std::invalid_argument("solver: bad norm tolerance");
}

WaveField free_propagate(const WaveField& field, double t) {
    field.validate();
    WaveField out = field;
    if (t == 0.0) return out;
    std::vector<std::size_t> shape(static_cast<std::size_t>(field.grid.dim), field.grid.points);
    SpectralWorkspace ws(shape);
    ws.forward(out.values);
    const auto ks = field.grid.wavenumbers();
    const std::size_t n = field.grid.points;
    const int dim = field.grid.dim;
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t c = flat;
        double k2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double k = ks[c % n];
            k2 += k * k;
            c /= n;
        }
        out.values[flat] *= std::exp(Complex(0.0, -0.5 * t * k2));
    }
    ws.inverse(out.values);
    out.time = field.time + t;
    return out;
}

namespace {

/// Spectral evaluation of i*(0.5 sum_jk d_j(a_jk d_k u) - V u).
class SchrodingerRhs {
public:
    SchrodingerRhs(const CoefficientModel& model, const UniformGrid& grid)
        : model_(model), grid_(grid),
          shape_(static_cast<std::size_t>(grid.dim), grid.points), ws_(shape_) {
        const std::size_t total = grid.total_points();
        const auto ks = grid.wavenumbers();
        kaxis_.resize(static_cast<std::size_t>(grid.dim));
        for (int d = 0; d < grid.dim; ++d) {
            kaxis_[d].resize(total);
            for (std::size_t flat = 0; flat < total; ++flat) {
                std::size_t c = flat;
                // row-major: last axis varies fastest
                double k = 0.0;
                for (int dd = grid.dim - 1; dd >= 0; --dd) {
                    if (dd == d) k = ks[c % grid.points];
                    c /= grid.points;
                }
                kaxis_[d][flat] = k;
            }
        }
        if (!model.time_dependent()) cache_coefficients(0.0);
    }

    void cache_coefficients(double t) {
        const std::size_t total = grid_.total_points();
        const int n = grid_.dim;
        metric_.assign(static_cast<std::size_t>(n) * n, std::vector<double>(total));
        pot_.resize(total);
        for (std::size_t i = 0; i < total; ++i) {
            const Vec x = grid_.point(i);
            const auto a = model_.metric_at(t, x);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    metric_[static_cast<std::size_t>(j) * n + k][i] =
                        a[static_cast<std::size_t>(j) * n + k];
            pot_[i] = model_.potential(t, x);
        }
        cached_time_ = t;
    }

    void operator()(double t, const std::vector<Complex>& u, std::vector<Complex>& out) {
        if (model_.time_dependent() && t != cached_time_) cache_coefficients(t);
        const std::size_t total = u.size();
        const int n = grid_.dim;
        std::vector<Complex> uhat = u;
        ws_.forward(uhat);
        std::vector<Complex> acc(total, Complex(0.0, 0.0));
        std::vector<Complex> v(total), w(total);
        for (int k = 0; k < n; ++k) {
            // v = d_k u
            for (std::size_t i = 0; i < total; ++i)
                v[i] = uhat[i] * Complex(0.0, kaxis_[k][i]);
            ws_.inverse(v);
            for (int j = 0; j < n; ++j) {
                const auto& ajk = metric_[static_cast<std::size_t>(j) * n + k];
                for (std::size_t i = 0; i < total; ++i) w[i] = ajk[i] * v[i];
                ws_.forward(w);
                for (std::size_t i = 0; i < total; ++i)
                    acc[i] += w[i] * Complex(0.0, kaxis_[j][i]);
            }
        }
        ws_.inverse(acc);
        out.resize(total);
        for (std::size_t i = 0; i < total; ++i)
            out[i] = Complex(0.0, 1.0) * (0.5 * acc[i] - pot_[i] * u[i]);
    }

private:
    const CoefficientModel& model_;
    UniformGrid grid_;
    std::vector<std::size_t> shape_;
    SpectralWorkspace ws_;
    std::vector<std::vector<double>> kaxis_;
    std::vector<std::vector<double>> metric_;
    std::vector<double> pot_;
    double cached_time_ = 0.0;
};

double field_norm(const std::vector<Complex>& v, double cell) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s * cell);
}

}  // namespace

WaveField propagate(const CoefficientModel& model, const WaveField& field, double t0, double t1,
                    const SolverConfig& cfg, PropagationLog* log) {
    model.validate();
    field.validate();
    cfg.validate();
    if (model.dim != field.grid.dim)
        throw std::invalid_argument("propagate: model/grid dimension mismatch");

    WaveField out = field;
    out.time = t1;
    if (t0 == t1) return out;

    const double span = t1 - t0;
    const double dt_mag = cfg.time_step(field.grid);
    const std::size_t nsteps = static_cast<std::size_t>(std::ceil(std::abs(span) / dt_mag));
    const double dt = span / static_cast<double>(nsteps);

    SchrodingerRhs rhs(model, field.grid);
    const double cell = field.grid.cell_volume();
    const double norm0 = field_norm(field.values, cell);

    if (log) {
        log->times.clear();
        log->norms.clear();
        log->steps = nsteps;
        log->initial_norm = norm0;
        log->max_relative_drift = 0.0;
        log->times.push_back(t0);
        log->norms.push_back(norm0);
    }

    std::vector<Complex>& u = out.values;
    std::vector<Complex> k1, k2, k3, k4, tmp(u.size());
    double t = t0;
    for (std::size_t step = 0; step < nsteps; ++step) {
        rhs(t, u, k1);
        for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
        rhs(t + 0.5 * dt, tmp, k2);
        for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
        rhs(t + 0.5 * dt, tmp, k3);
        for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
        rhs(t + dt, tmp, k4);
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = t0 + span * static_cast<double>(step + 1) / static_cast<double>(nsteps);

        if ((step + 1) % cfg.norm_check_every == 0 || step + 1 == nsteps) {
            const double nn = field_norm(u, cell);
            if (!std::isfinite(nn))
                throw NumericError("propagate: non-finite field at step " + std::to_string(step));
            const double drift = std::abs(nn - norm0) / norm0;
            if (log) {
                log->times.push_back(t);
                log->norms.push_back(nn);
                log->max_relative_drift = std::max(log->max_relative_drift, drift);
            }
            if (drift > cfg.norm_tolerance)
                throw NumericError("propagate: norm drift " + std::to_string(drift) +
                                   " beyond tolerance at step " + std::to_string(step));
        }
    }
    if (log) log->final_norm = field_norm(u, cell);
    out.time = t1;
    return out;
}

WaveField resample(const WaveField& field, std::size_t new_points) {
    field.validate();
    if (field.grid.dim != 1)
        throw std::invalid_argument("resample: implemented for 1-D fields");
    const std::size_t n = field.grid.points;
    if (new_points == n) return field;
    if (new_points < n) throw std::invalid_argument("resample: only upsampling is supported");
    std::vector<Complex> spec = field.values;
    SpectralWorkspace ws({n});
    ws.forward(spec);
    std::vector<Complex> bigspec(new_points, Complex(0.0, 0.0));
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) bigspec[i] = spec[i];
    for (std::size_t i = half + 1; i < n; ++i) bigspec[new_points - n + i] = spec[i];
    // split the Nyquist bin symmetrically
    bigspec[half] = 0.5 * spec[half];
    bigspec[new_points - n + half] = 0.5 * spec[half];
    const double scale = static_cast<double>(new_points) / static_cast<double>(n);
    for (Complex& z : bigspec) z *= scale;
    SpectralWorkspace ws2({new_points});
    ws2.inverse(bigspec);
    WaveField out;
    out.grid = UniformGrid(1, field.grid.half_width, new_points);
    out.time = field.time;
    out.values = std::move(bigspec);
    return out;
}

}  // namespace wpk
