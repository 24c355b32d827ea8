#ifndef PERV_ERROR_HPP
#define PERV_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace perv {

enum class ErrorKind {
  DegenerateDirection,
  NotInvertible,
  NotUnipotent,
  DegenerateInterval,
  UnknownPoint,
  ShapeError,
  HorizontalPair,
  EmptyObject,
  NotConvex,
  WordLength,
  StokesDirection,
  InvalidPerturbation,
  EventOnPath,
  DegenerateFunction,
  PrecisionExhausted,
  ParseError,
  UnknownObject,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotUnipotent: return "NotUnipotent";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::HorizontalPair: return "HorizontalPair";
    case ErrorKind::EmptyObject: return "EmptyObject";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::WordLength: return "WordLength";
    case ErrorKind::StokesDirection: return "StokesDirection";
    case ErrorKind::InvalidPerturbation: return "InvalidPerturbation";
    case ErrorKind::EventOnPath: return "EventOnPath";
    case ErrorKind::DegenerateFunction: return "DegenerateFunction";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownObject: return "UnknownObject";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; `kind()`
/// is the stable, machine-checkable part, `what()` carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace perv

#endif  // PERV_ERROR_HPP
