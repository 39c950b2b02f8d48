#pragma once

#include <stdexcept>
#include <string>

namespace pwlab {

// Failures of the numerics themselves (quadrature stall, log-domain value
// too large to convert). The CLI maps these to exit code 2, as opposed to
// usage errors (exit 1).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pwlab
