#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wpk {

/// Owns FFTW plans for an n-dimensional complex transform of fixed shape.
/// Transforms are unnormalized in the forward direction; inverse() divides
/// by the total size, so inverse(forward(x)) == x.
///
/// Instances are independent; plan creation is internally serialized so
/// separate workspaces may be built from concurrent threads. A single
/// instance must not be used from two threads at once.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const std::vector<std::size_t>& shape);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    void forward(std::vector<std::complex<double>>& data) const;
    void inverse(std::vector<std::complex<double>>& data) const;

    std::size_t size() const { return total_; }

private:
    void execute(void* plan, std::vector<std::complex<double>>& data) const;

    std::vector<std::size_t> shape_;
    std::size_t total_ = 0;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
    mutable std::vector<std::complex<double>> buffer_;
};

}  // namespace wpk
