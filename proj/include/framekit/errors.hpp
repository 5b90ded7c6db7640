#pragma once

#include <stdexcept>
#include <string>

namespace framekit {

enum class Errc {
  DimensionMismatch,
  NotAFrame,
  InvalidShape,
  NumericallySingular,
  InvalidPerturbation,
  NoFreedom,
  IndexOutOfRange,
  HypothesisViolated,
  InvalidM,
  TailNotABasis,
  ShapeMismatch,
  NotAProjection,
  ZeroRange,
  OverlappingSets,
  NoBridge,
  MissingCoefficient,
  InvalidPlan,
  NotOrthonormal,
  ParseError,
  IoError,
  NumericalFailure,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotAFrame: return "NotAFrame";
    case Errc::InvalidShape: return "InvalidShape";
    case Errc::NumericallySingular: return "NumericallySingular";
    case Errc::InvalidPerturbation: return "InvalidPerturbation";
    case Errc::NoFreedom: return "NoFreedom";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::InvalidM: return "InvalidM";
    case Errc::TailNotABasis: return "TailNotABasis";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotAProjection: return "NotAProjection";
    case Errc::ZeroRange: return "ZeroRange";
    case Errc::OverlappingSets: return "OverlappingSets";
    case Errc::NoBridge: return "NoBridge";
    case Errc::MissingCoefficient: return "MissingCoefficient";
    case Errc::InvalidPlan: return "InvalidPlan";
    case Errc::NotOrthonormal: return "NotOrthonormal";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Thrown by frame validation; carries the deficient rank and the singular
/// value that fell below the rank threshold.
class NotAFrameError : public Error {
 public:
  NotAFrameError(int rank, double sigma, const std::string& msg)
      : Error(Errc::NotAFrame, msg), rank_(rank), sigma_(sigma) {}

  int rank() const { return rank_; }
  double offending_singular_value() const { return sigma_; }

 private:
  int rank_;
  double sigma_;
};

/// Thrown when a bridge equation has no solution within tolerance.
class NoBridgeError : public Error {
 public:
  NoBridgeError(double residual, const std::string& msg)
      : Error(Errc::NoBridge, msg), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace framekit
