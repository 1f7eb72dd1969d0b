#include "wpk/signals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wpk {

Complex AnalyticSignal::eval(double y) const {
    switch (kind) {
        case Kind::Gaussian: {
            const double z = (y - center) / width;
            return amplitude * std::exp(-0.5 * z * z);
        }
        case Kind::Heaviside:
            if (y > center) return amplitude;
            if (y < center) return 0.0;
            return 0.5 * amplitude;
        case Kind::ModulatedGaussian: {
            const double z = (y - center) / width;
            return amplitude * std::exp(-0.5 * z * z) * std::exp(Complex(0.0, momentum * y));
        }
    }
    return 0.0;
}

double AnalyticSignal::support_lo() const {
    if (kind == Kind::Heaviside) return center;
    return center - 9.5 * width;
}

double AnalyticSignal::support_hi() const {
    if (kind == Kind::Heaviside) return std::numeric_limits<double>::infinity();
    return center + 9.5 * width;
}

double AnalyticSignal::max_frequency() const {
    if (kind == Kind::Heaviside) return 0.0;  // jump handled by interval clipping
    return std::abs(momentum) + 9.5 / width;
}

std::string AnalyticSignal::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Gaussian: os << "gaussian(center=" << center << ",width=" << width << ")"; break;
        case Kind::Heaviside: os << "heaviside(jump=" << center << ")"; break;
        case Kind::ModulatedGaussian:
            os << "modulated-gaussian(center=" << center << ",width=" << width
               << ",momentum=" << momentum << ")";
            break;
    }
    return os.str();
}

AnalyticSignal AnalyticSignal::gaussian(double center, double width) {
    AnalyticSignal s;
    s.kind = Kind::Gaussian;
    s.center = center;
    s.width = width;
    return s;
}

AnalyticSignal AnalyticSignal::heaviside(double jump) {
    AnalyticSignal s;
    s.kind = Kind::Heaviside;
    s.center = jump;
    return s;
}

AnalyticSignal AnalyticSignal::modulated_gaussian(double center, double width, double momentum) {
    AnalyticSignal s;
    s.kind = Kind::ModulatedGaussian;
    s.center = center;
    s.width = width;
    s.momentum = momentum;
    return s;
}

}  // namespace wpk
