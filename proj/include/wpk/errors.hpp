#pragma once

#include <stdexcept>
#include <string>

namespace wpk {

/// Bad or inconsistent run configuration (unknown key, missing file, bad value).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime numerical failure (Nyquist budget, step-size underflow, norm blowup, NaN).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wpk
