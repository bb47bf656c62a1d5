#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqtll {

enum class ErrorKind {
  InvalidArgument,
  NonFinite,
  NonDiagonalizable,
  SingularFloquet,
  DegeneratePoint,
  GaplessParameters,
  NonRealWinding,
  QuantizationFailure,
  NonQuartet,
  GaplessOBC,
  Config,
};

// snake_case name used in sweep status columns ("error:<name>").
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace pqtll
