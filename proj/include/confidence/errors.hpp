#pragma once

#include <stdexcept>
#include <string>

namespace confidence {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter or evaluation point lies outside the admissible domain.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Malformed arguments (empty inputs, out-of-range configuration values).
class argument_error : public error {
public:
    explicit argument_error(const std::string& msg) : error(msg) {}
};

// A target value is outside the achievable range of a monotone map.
// Carries the achievable extremes so callers can map the failure to
// degenerate set estimates.
class range_error : public error {
public:
    range_error(const std::string& msg, double achievable_lo, double achievable_hi)
        : error(msg + " (achievable range [" + std::to_string(achievable_lo) + ", " +
                std::to_string(achievable_hi) + "])"),
          achievable_lo(achievable_lo),
          achievable_hi(achievable_hi) {}
    double achievable_lo;
    double achievable_hi;
};

// Requested accuracy could not be met; carries the best estimate found.
class accuracy_error : public error {
public:
    accuracy_error(const std::string& msg, double best_estimate)
        : error(msg), best_estimate(best_estimate) {}
    double best_estimate;
};

// The requested integral/moment does not exist (or could not be shown to).
class moment_error : public error {
public:
    explicit moment_error(const std::string& msg) : error(msg) {}
};

// The object does not support the requested operation (no simulator,
// wrong observation space, non-invertible CDF, refused sampling).
class capability_error : public error {
public:
    explicit capability_error(const std::string& msg) : error(msg) {}
};

// A density maximizer was requested but the maximum is not unique.
class multimodality_error : public error {
public:
    explicit multimodality_error(const std::string& msg) : error(msg) {}
};

} // namespace confidence
