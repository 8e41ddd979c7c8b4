#pragma once

#include <stdexcept>
#include <string>

namespace rvsm {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A vector norm fell below the representable threshold (1e-12); the angle
// and the loss are undefined there.
struct DegenerateVector : Error {
    explicit DegenerateVector(const std::string& msg) : Error(msg) {}
};

// Vector lengths do not agree (or an input cannot be split into patches).
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

struct InvalidBeta : Error {
    explicit InvalidBeta(const std::string& msg) : Error(msg) {}
};

struct InvalidRadius : Error {
    explicit InvalidRadius(const std::string& msg) : Error(msg) {}
};

struct InvalidRange : Error {
    explicit InvalidRange(const std::string& msg) : Error(msg) {}
};

// An iteration produced NaN/Inf. Carries the iteration index.
struct NonFinite : Error {
    NonFinite(const std::string& msg, int iter)
        : Error(msg + " (iteration " + std::to_string(iter) + ")"), iteration(iter) {}
    int iteration;
};

// A trajectory ended on the iteration budget with step norm above tolerance,
// so it cannot be treated as a limit point.
struct NotConverged : Error {
    explicit NotConverged(const std::string& msg) : Error(msg) {}
};

// Iterate norms escaped every admissible annulus around the truth norm.
struct AnnulusViolation : Error {
    explicit AnnulusViolation(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace rvsm
