#pragma once

#include <stdexcept>

namespace framekit {

/// Numerical policy attached to every frame.
///
/// rank_tol is a relative singular-value threshold: a matrix counts as
/// full-rank / invertible iff sigma_min > rank_tol * max(sigma_max, 1).
/// eq_tol is an absolute entrywise residual threshold for equality checks.
struct ToleranceConfig {
  double rank_tol = 1e-10;
  double eq_tol = 1e-8;

  void validate() const {
    if (!(rank_tol > 0.0) || !(eq_tol > 0.0)) {
      throw std::invalid_argument("ToleranceConfig: tolerances must be positive");
    }
  }

  /// Threshold against which a singular value certifies invertibility.
  double rank_threshold(double sigma_max) const {
    return rank_tol * (sigma_max > 1.0 ? sigma_max : 1.0);
  }
};

}  // namespace framekit
