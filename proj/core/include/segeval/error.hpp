#pragma once

#include <stdexcept>
#include <string>

namespace segeval {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File could not be read, written, or has an unsupported format.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration value or malformed config/manifest input.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Precondition violation on an operation's inputs.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// A mask produced no contour pixels. Carries which side failed so a model
/// that predicts nothing surfaces as a named failure, not a silent zero.
class EmptyContourError : public Error {
public:
    enum class Side { GroundTruth, Prediction };

    explicit EmptyContourError(Side side)
        : Error(side == Side::GroundTruth ? "empty GT contour"
                                          : "empty prediction contour"),
          side_(side) {}

    Side side() const noexcept { return side_; }

private:
    Side side_;
};

} // namespace segeval
