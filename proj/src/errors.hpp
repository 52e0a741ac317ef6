#pragma once

#include <stdexcept>
#include <string>

namespace kgm {

// Error codes shared with the C API (see include/kagomevqe.h).
enum class ErrorCode : int {
  Ok = 0,
  Name = 1,         // unknown patch name
  Spec = 2,         // degenerate / invalid specification
  Covering = 3,     // no valid dimer covering
  Embed = 4,        // patch not embeddable in the implemented pattern
  Dim = 5,          // dimension / shape mismatch
  Argument = 6,     // bad argument value
  Convergence = 7,  // iterative solver failed to converge
  Estimation = 8,   // estimator has no usable samples
  Io = 9,           // file / format problem
  Internal = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct NameError : Error {
  explicit NameError(const std::string& w) : Error(ErrorCode::Name, w) {}
};
struct SpecError : Error {
  explicit SpecError(const std::string& w) : Error(ErrorCode::Spec, w) {}
};
struct CoveringError : Error {
  explicit CoveringError(const std::string& w) : Error(ErrorCode::Covering, w) {}
};
struct EmbedError : Error {
  explicit EmbedError(const std::string& w) : Error(ErrorCode::Embed, w) {}
};
struct DimError : Error {
  explicit DimError(const std::string& w) : Error(ErrorCode::Dim, w) {}
};
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorCode::Argument, w) {}
};
struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& w) : Error(ErrorCode::Convergence, w) {}
};
struct EmptyOperatorError : Error {
  explicit EmptyOperatorError(const std::string& w) : Error(ErrorCode::Argument, w) {}
};
struct EstimationError : Error {
  explicit EstimationError(const std::string& w) : Error(ErrorCode::Estimation, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::Io, w) {}
};

}  // namespace kgm
