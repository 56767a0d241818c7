#ifndef CARPET_ERROR_HPP
#define CARPET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace carpet {

// Error classes map one-to-one onto CLI exit codes (see cli.hpp).
enum class ErrorKind {
  Input,        // malformed argument or config
  Validation,   // a structural check failed (contraction, OSC, hypothesis)
  Resource,     // a cap or budget was exceeded
  Precision,    // finite data cannot resolve the requested quantity
  Unsupported,  // the hypotheses of the underlying theorem do not hold
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorKind::Input, w) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorKind::Validation, w) {}
};
struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ErrorKind::Resource, w) {}
};
struct PrecisionError : Error {
  explicit PrecisionError(const std::string& w) : Error(ErrorKind::Precision, w) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& w) : Error(ErrorKind::Unsupported, w) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};

}  // namespace carpet

#endif  // CARPET_ERROR_HPP
