#include "pqtll/errors.hpp"

namespace pqtll {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::NonDiagonalizable: return "non_diagonalizable";
    case ErrorKind::SingularFloquet: return "singular_floquet";
    case ErrorKind::DegeneratePoint: return "degenerate_point";
    case ErrorKind::GaplessParameters: return "gapless_parameters";
    case ErrorKind::NonRealWinding: return "non_real_winding";
    case ErrorKind::QuantizationFailure: return "quantization_failure";
    case ErrorKind::NonQuartet: return "non_quartet";
    case ErrorKind::GaplessOBC: return "gapless_obc";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace pqtll
