#include "qbiperm/error.hpp"

namespace qbiperm {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NotUnital: return "NotUnital";
    case ErrorKind::NotStarHom: return "NotStarHom";
    case ErrorKind::NotCPU: return "NotCPU";
    case ErrorKind::NotCPTP: return "NotCPTP";
    case ErrorKind::NotSingleBlockCodomain: return "NotSingleBlockCodomain";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::WitnessInfeasible: return "WitnessInfeasible";
    case ErrorKind::WitnessNotNormalized: return "WitnessNotNormalized";
    case ErrorKind::SameComponent: return "SameComponent";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace qbiperm
