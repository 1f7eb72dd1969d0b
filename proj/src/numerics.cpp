#include "wpk/numerics.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wpk {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vec axpy(const Vec& a, double s, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
}

Vec scaled(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        rss += r * r;
    }
    f.residual_rms = std::sqrt(rss / n);
    f.count = x.size();
    return f;
}

namespace {
// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
}  // namespace

Complex integrate_gl8(const std::function<Complex(double)>& f, double lo, double hi,
                      std::size_t panels) {
    if (panels == 0) panels = 1;
    const double h = (hi - lo) / static_cast<double>(panels);
    Complex total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + h * static_cast<double>(p);
        const double mid = a + 0.5 * h;
        Complex acc = 0.0;
        for (int q = 0; q < 8; ++q) acc += kGlWeight[q] * f(mid + 0.5 * h * kGlNode[q]);
        total += 0.5 * h * acc;
    }
    return total;
}

std::vector<double> cumulative_integral(const std::vector<double>& v, double step) {
    const std::size_t n = v.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * step * (v[0] + v[1]);
        return out;
    }
    // Integrate the local quadratic through three consecutive samples.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double inc;
        if (k + 2 < n)
            inc = step * (5.0 * v[k] + 8.0 * v[k + 1] - v[k + 2]) / 12.0;
        else
            inc = step * (-v[k - 1] + 8.0 * v[k] + 5.0 * v[k + 1]) / 12.0;
        out[k + 1] = out[k] + inc;
    }
    return out;
}

std::vector<Vec> cumulative_integral(const std::vector<Vec>& v, double step) {
    const std::size_t n = v.size();
    std::vector<Vec> out(n);
    if (n == 0) return out;
    const std::size_t m = v[0].size();
    std::vector<double> comp(n), ci;
    for (std::size_t k = 0; k < n; ++k) out[k].resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < n; ++k) comp[k] = v[k][j];
        ci = cumulative_integral(comp, step);
        for (std::size_t k = 0; k < n; ++k) out[k][j] = ci[k];
    }
    return out;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned workers =
        std::min<unsigned>(static_cast<unsigned>(jobs), static_cast<unsigned>(count));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wpk
