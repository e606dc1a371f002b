#ifndef MGKAN_ERRORS_HPP
#define MGKAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mgkan {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (carries a line number in the message).
struct ParseError : Error {
    using Error::Error;
};

/// Invalid configuration, including dimension mismatches between tensors.
struct ConfigError : Error {
    using Error::Error;
};

struct DimensionError : ConfigError {
    using ConfigError::ConfigError;
};

/// API used out of order (e.g. backward before forward, empty loss batch).
struct UsageError : Error {
    using Error::Error;
};

/// Metric undefined for the given inputs (e.g. AUROC with one class).
struct MetricError : Error {
    using Error::Error;
};

/// Invalid request parameters (out-of-range index, K too large).
struct RequestError : Error {
    using Error::Error;
};

/// Training diverged or otherwise failed.
struct TrainError : Error {
    using Error::Error;
};

/// Checkpoint unreadable or incompatible with the configuration.
struct CheckpointError : Error {
    using Error::Error;
};

} // namespace mgkan

#endif // MGKAN_ERRORS_HPP
