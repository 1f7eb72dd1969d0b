#include "wpk/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace wpk {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralWorkspace::SpectralWorkspace(const std::vector<std::size_t>& shape) : shape_(shape) {
    if (shape.empty()) throw std::invalid_argument("SpectralWorkspace: empty shape");
    total_ = 1;
    std::vector<int> dims;
    dims.reserve(shape.size());
    for (std::size_t s : shape) {
        if (s < 2) throw std::invalid_argument("SpectralWorkspace: axis size must be >= 2");
        total_ *= s;
        dims.push_back(static_cast<int>(s));
    }
    buffer_.resize(total_);
    auto* io = reinterpret_cast<fftw_complex*>(buffer_.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), io, io, FFTW_FORWARD,
                         FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), io, io, FFTW_BACKWARD,
                         FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("SpectralWorkspace: plan creation failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void SpectralWorkspace::execute(void* plan, std::vector<std::complex<double>>& data) const {
    if (data.size() != total_)
        throw std::invalid_argument("SpectralWorkspace: data size does not match plan shape");
    buffer_ = data;
    fftw_execute_dft(static_cast<fftw_plan>(plan),
                     reinterpret_cast<fftw_complex*>(buffer_.data()),
                     reinterpret_cast<fftw_complex*>(buffer_.data()));
    data = buffer_;
}

void SpectralWorkspace::forward(std::vector<std::complex<double>>& data) const {
    execute(fwd_, data);
}

void SpectralWorkspace::inverse(std::vector<std::complex<double>>& data) const {
    execute(bwd_, data);
    const double inv = 1.0 / static_cast<double>(total_);
    for (auto& z : data) z *= inv;
}

}  // namespace wpk
