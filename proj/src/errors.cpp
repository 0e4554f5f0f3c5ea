#include "phasespace/errors.hpp"

namespace phasespace {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidDensity: return "invalid-density";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::SingularOrder: return "singular-order";
    case ErrorKind::OutOfFamily: return "out-of-family";
    case ErrorKind::Singular: return "singular-element";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::Stability: return "stability";
    case ErrorKind::TraceDrift: return "trace-drift";
    case ErrorKind::TailBound: return "tail-bound";
    case ErrorKind::OrderMismatch: return "order-mismatch";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace phasespace
