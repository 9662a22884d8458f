#ifndef BRL_ERROR_HPP_
#define BRL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace brl {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dimension/shape mismatch between tensors. Message names both shapes.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

/// Invalid argument value (non-positive std, bad rank, unknown id, ...).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration detected at construction time.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Non-finite values or numerically degenerate inputs.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// File format or I/O failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

/// An optimization loop failed to reach its contract (e.g. accuracy target).
class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& msg) : Error(msg) {}
};

}  // namespace brl

#endif  // BRL_ERROR_HPP_
