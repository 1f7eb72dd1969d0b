#include "wpk/windows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wpk/errors.hpp"
#include "wpk/fft.hpp"

namespace wpk {

namespace {

// Polynomials P_k with d^k/dz^k exp(-z^2/(2w)) = P_k(z) exp(-z^2/(2w)):
// P_0 = 1, P_{k+1} = P_k' - (z/w) P_k.
std::vector<std::vector<Complex>> derivative_basis(std::size_t kmax, Complex w) {
    std::vector<std::vector<Complex>> basis(kmax + 1);
    basis[0] = {Complex(1.0, 0.0)};
    for (std::size_t k = 0; k < kmax; ++k) {
        const auto& p = basis[k];
        std::vector<Complex> q(p.size() + 1, Complex(0.0, 0.0));
        for (std::size_t m = 0; m + 1 < p.size(); ++m) q[m] = static_cast<double>(m + 1) * p[m + 1];
        for (std::size_t m = 0; m < p.size(); ++m) q[m + 1] -= p[m] / w;
        basis[k + 1] = std::move(q);
    }
    return basis;
}

Complex eval_poly(const std::vector<Complex>& c, Complex z) {
    Complex v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

// Solve q(z) = sum_k c_k P_k(z) for c (triangular: deg P_k = k, leading
// coefficient (-1/w)^k).
std::vector<Complex> to_derivative_basis(const std::vector<Complex>& q,
                                         const std::vector<std::vector<Complex>>& basis,
                                         Complex w) {
    std::vector<Complex> rem = q, c(q.size(), Complex(0.0, 0.0));
    for (std::size_t k = q.size(); k-- > 0;) {
        const Complex lead = std::pow(-1.0 / w, static_cast<double>(k));
        const Complex ck = rem[k] / lead;
        c[k] = ck;
        for (std::size_t m = 0; m <= k; ++m) rem[m] -= ck * basis[k][m];
    }
    return c;
}

}  // namespace

void WindowSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("window: dim must be >= 1");
    if (!(lambda >= 1.0)) throw std::invalid_argument("window: lambda must be >= 1");
    if (kind == WindowKind::Sampled) {
        if (!table || table->values.empty())
            throw std::invalid_argument("window: sampled kind needs a table");
        if (dim != 1) throw std::invalid_argument("window: sampled kind is 1-D");
        double peak = 0.0;
        for (const Complex& v : table->values) peak = std::max(peak, std::abs(v));
        if (peak == 0.0) throw std::invalid_argument("window: base window is identically zero");
    }
    if (kind == WindowKind::PolyGaussian) {
        bool nonzero = false;
        for (const auto& axis : poly)
            for (double c : axis) nonzero = nonzero || c != 0.0;
        if (!poly.empty() && !nonzero)
            throw std::invalid_argument("window: base window is identically zero");
    }
}

WindowSpec WindowSpec::gaussian(int n) {
    WindowSpec s;
    s.dim = n;
    s.validate();
    return s;
}

WindowSpec WindowSpec::poly_gaussian(int n, const std::vector<double>& axis0) {
    WindowSpec s;
    s.dim = n;
    s.kind = WindowKind::PolyGaussian;
    s.poly.assign(static_cast<std::size_t>(n), {1.0});
    s.poly[0] = axis0;
    s.validate();
    return s;
}

WindowSpec WindowSpec::sampled(std::shared_ptr<const SampledWindowData> data) {
    WindowSpec s;
    s.dim = 1;
    s.kind = WindowKind::Sampled;
    s.table = std::move(data);
    s.validate();
    return s;
}

WindowSpec scaled_window(const WindowSpec& base, double lambda) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("scaled_window: lambda must be >= 1");
    WindowSpec s = base;
    s.lambda = lambda;
    s.time = 0.0;
    s.validate();
    return s;
}

EvolvedWindow free_evolve_window(const WindowSpec& spec, double t) {
    spec.validate();
    EvolvedWindow w;
    w.spec_ = spec;
    w.spec_.time = t;
    const double lam = spec.lambda;

    if (spec.kind != WindowKind::Sampled) {
        w.closed_form_ = true;
        const Complex w0(1.0 / lam, 0.0);
        const Complex wt = w0 + Complex(0.0, t);
        w.width_w_ = wt;
        // (w0/wt)^(1/2), principal branch (Re w0 > 0 keeps it continuous in t)
        w.axis_amp_ = std::sqrt(w0 / wt) * std::pow(lam, 0.25);
        w.axis_poly_.resize(static_cast<std::size_t>(spec.dim));
        for (int d = 0; d < spec.dim; ++d) {
            std::vector<double> p{1.0};
            if (spec.kind == WindowKind::PolyGaussian && d < static_cast<int>(spec.poly.size()) &&
                !spec.poly[d].empty())
                p = spec.poly[d];
            // scaled polynomial: coefficient of z^m gains lambda^(m/2)
            std::vector<Complex> q(p.size());
            for (std::size_t m = 0; m < p.size(); ++m)
                q[m] = p[m] * std::pow(lam, 0.5 * static_cast<double>(m));
            const auto basis0 = derivative_basis(q.size() - 1, w0);
            const auto c = to_derivative_basis(q, basis0, w0);
            const auto basis_t = derivative_basis(q.size() - 1, wt);
            std::vector<Complex> Q(q.size(), Complex(0.0, 0.0));
            for (std::size_t k = 0; k < c.size(); ++k)
                for (std::size_t m = 0; m < basis_t[k].size(); ++m) Q[m] += c[k] * basis_t[k][m];
            w.axis_poly_[d] = std::move(Q);
        }
        return w;
    }

    // spectral strategy
    w.closed_form_ = false;
    const auto& base = *spec.table;
    const std::size_t n = base.grid.points;
    std::vector<Complex> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = base.values[i];
    SpectralWorkspace ws({n});
    ws.forward(buf);
    // aliasing check: relative energy in the top 20% of the band
    double tail = 0.0, total = 0.0;
    const auto ks = base.grid.wavenumbers();
    const double kmax = base.grid.nyquist();
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::norm(buf[i]);
        total += e;
        if (std::abs(ks[i]) > 0.8 * kmax) tail += e;
    }
    if (total == 0.0 || tail / total > 1e-10)
        throw NumericError("free_evolve_window: sampled base is under-resolved (aliasing)");
    for (std::size_t i = 0; i < n; ++i)
        buf[i] *= std::exp(Complex(0.0, -0.5 * t * ks[i] * ks[i]));
    auto evolved = std::make_shared<SampledWindowData>();
    evolved->grid = base.grid;
    evolved->spectrum = buf;
    ws.inverse(buf);
    evolved->values = std::move(buf);
    w.evolved_table_ = std::move(evolved);
    return w;
}

Complex EvolvedWindow::value1d(double z) const {
    if (dim() != 1) throw std::invalid_argument("value1d: window is not 1-D");
    return value({z});
}

Complex EvolvedWindow::value(const Vec& offset) const {
    if (static_cast<int>(offset.size()) != dim())
        throw std::invalid_argument("window value: offset dimension mismatch");
    if (closed_form_) {
        Complex v = 1.0;
        for (int d = 0; d < dim(); ++d) {
            const double z = offset[d];
            const Complex g = std::exp(-z * z / (2.0 * width_w_));
            v *= axis_amp_ * eval_poly(axis_poly_[d], Complex(z, 0.0)) * g;
        }
        return v;
    }
    const auto& tab = *evolved_table_;
    const double L = tab.grid.half_width;
    if (std::abs(offset[0]) > L)
        throw std::invalid_argument("window value: offset outside sampled coverage");
    const double h = tab.grid.step();
    const double idx = (offset[0] + L) / h;
    const double nearest = std::round(idx);
    if (std::abs(idx - nearest) < 1e-9 && nearest >= 0.0 &&
        nearest < static_cast<double>(tab.grid.points)) {
        std::size_t i = static_cast<std::size_t>(nearest);
        if (i == tab.grid.points) i = 0;
        return tab.values[i];
    }
    // band-limited evaluation through the table's modes
    const std::size_t n = tab.grid.points;
    if (tab.spectrum.size() != n)
        throw std::logic_error("window value: sampled table lacks a spectrum");
    const auto ks = tab.grid.wavenumbers();
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += tab.spectrum[i] * std::exp(Complex(0.0, ks[i] * (offset[0] + L)));
    return acc / static_cast<double>(n);
}

double EvolvedWindow::support_halfwidth() const {
    if (!closed_form_) return evolved_table_->grid.half_width;
    const double lam = lambda();
    const double t = time();
    const double sigma = std::sqrt((1.0 + lam * lam * t * t) / lam);
    std::size_t deg = 1;
    for (const auto& p : axis_poly_) deg = std::max(deg, p.size());
    return sigma * (9.2 + static_cast<double>(deg));
}

double EvolvedWindow::bandwidth() const {
    if (!closed_form_) return 0.8 * evolved_table_->grid.nyquist();
    std::size_t deg = 1;
    for (const auto& p : axis_poly_) deg = std::max(deg, p.size());
    return std::sqrt(lambda()) * (9.2 + static_cast<double>(deg));
}

double EvolvedWindow::chirp_rate() const {
    if (!closed_form_) return 0.0;
    return std::abs((1.0 / width_w_).imag());
}

double EvolvedWindow::norm_quadrature() const {
    const double R = support_halfwidth();
    const std::size_t n1d = 4096;
    const double h = 2.0 * R / static_cast<double>(n1d);
    if (dim() == 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < n1d; ++i) s += std::norm(value({-R + h * (0.5 + i)}));
        return std::sqrt(s * h);
    }
    // closed-form windows factor across axes
    double prod = 1.0;
    for (int d = 0; d < dim(); ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < n1d; ++i) {
            const double z = -R + h * (0.5 + i);
            const Complex g = std::exp(-z * z / (2.0 * width_w_));
            s += std::norm(axis_amp_ * eval_poly(axis_poly_[d], Complex(z, 0.0)) * g);
        }
        prod *= s * h;
    }
    return std::sqrt(prod);
}

const SampledWindowData& EvolvedWindow::table() const {
    if (closed_form_ || !evolved_table_)
        throw std::logic_error("EvolvedWindow::table: closed-form strategy has no table");
    return *evolved_table_;
}

std::vector<Complex> window_samples(const EvolvedWindow& w, const std::vector<Vec>& offsets) {
    std::vector<Complex> out;
    out.reserve(offsets.size());
    for (const Vec& y : offsets) {
        for (double c : y)
            if (!std::isfinite(c))
                throw std::invalid_argument("window_samples: non-finite offset");
        out.push_back(w.value(y));
    }
    return out;
}

}  // namespace wpk
