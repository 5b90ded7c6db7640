#pragma once

#include <string>
#include <utility>

#include "framekit/frame.hpp"

namespace framekit {

struct DualCheck {
  bool ok = false;
  double residual = 0.0;
};

/// true iff Theta_G^* Theta_F = I within eq_tol; the residual is the largest
/// absolute entry of the defect.
inline DualCheck is_dual_pair(const Frame& f, const Frame& g) {
  if (f.dim() != g.dim() || f.size() != g.size()) {
    throw Error(Errc::DimensionMismatch, "dual candidate must match dim and vector count");
  }
  const Matrix defect = g.synthesis() * f.analysis() - Matrix::Identity(f.dim(), f.dim());
  const double residual = max_abs(defect);
  return DualCheck{residual <= f.tol().eq_tol, residual};
}

/// Two frames certified to satisfy the reconstruction identity
/// f = sum_i <f, f_i> g_i for all f.
class DualPair {
 public:
  static DualPair certify(Frame primary, Frame dual) {
    const DualCheck check = is_dual_pair(primary, dual);
    if (!check.ok) {
      throw Error(Errc::InvalidPlan, "frames are not a dual pair (residual " +
                                         std::to_string(check.residual) + ")");
    }
    return DualPair(std::move(primary), std::move(dual));
  }

  const Frame& primary() const { return primary_; }
  const Frame& dual() const { return dual_; }
  Index dim() const { return primary_.dim(); }
  Index size() const { return primary_.size(); }
  const ToleranceConfig& tol() const { return primary_.tol(); }

  /// Same pair with encoding and decoding roles exchanged (G is a dual of F
  /// iff F is a dual of G).
  DualPair swapped() const { return DualPair(dual_, primary_); }

 private:
  DualPair(Frame primary, Frame dual) : primary_(std::move(primary)), dual_(std::move(dual)) {}

  Frame primary_;
  Frame dual_;
};

/// Perturbation u_1..u_N of the canonical dual; valid iff
/// sum_i <f, u_i> f_i = 0 for all f, i.e. F U^H = 0.
struct DualPerturbation {
  Matrix vectors;  // d x N, column i = u_i

  double constraint_residual(const Frame& f) const {
    return max_abs(f.synthesis() * vectors.adjoint());
  }
};

inline DualPair canonical_dual(const Frame& f) {
  const Matrix s = frame_operator(f);
  if (!is_invertible(s, f.tol())) {
    throw Error(Errc::NumericallySingular, "frame operator failed the invertibility threshold");
  }
  Matrix dual = s.ldlt().solve(f.synthesis());
  return DualPair::certify(f, Frame::validate(std::move(dual), f.tol(), f.field()));
}

inline DualPair perturbed_dual(const DualPair& pair, const DualPerturbation& u) {
  const Frame& f = pair.primary();
  if (u.vectors.rows() != f.dim() || u.vectors.cols() != f.size()) {
    throw Error(Errc::DimensionMismatch, "perturbation shape must match the frame");
  }
  const double residual = u.constraint_residual(f);
  if (residual > f.tol().eq_tol) {
    throw Error(Errc::InvalidPerturbation,
                "perturbation constraint residual " + std::to_string(residual));
  }
  Matrix dual = canonical_dual(f).dual().synthesis() + u.vectors;
  return DualPair::certify(f, Frame::validate(std::move(dual), f.tol()));
}

/// Seeded Gaussian coefficients projected onto the null space of the
/// synthesis map; the only valid perturbations when N = dim are zero, which
/// is reported as NoFreedom.
inline DualPerturbation random_dual_perturbation(const Frame& f, std::uint64_t seed) {
  if (f.size() <= f.dim()) {
    throw Error(Errc::NoFreedom, "a basis admits only the canonical dual");
  }
  Rng rng(seed);
  const Matrix coeffs = gaussian_matrix(f.dim(), f.size(), rng);
  // projector onto null(F): I - F^H S^{-1} F
  const Matrix s = frame_operator(f);
  const Matrix proj = Matrix::Identity(f.size(), f.size()) -
                      f.analysis() * s.ldlt().solve(f.synthesis());
  return DualPerturbation{coeffs * proj};
}

/// Unitary equivalence of dual pairs, decided by equality of the three
/// cross-Gramians Theta_F Theta_F^*, Theta_G Theta_G^*, Theta_F Theta_G^*.
inline bool pairs_unitarily_equivalent(const DualPair& p1, const DualPair& p2) {
  if (p1.size() != p2.size()) {
    throw Error(Errc::DimensionMismatch, "pairs must have the same number of vectors");
  }
  const double eq_tol = p1.tol().eq_tol;
  const auto gram = [](const Frame& a, const Frame& b) -> Matrix {
    return a.analysis() * b.synthesis();
  };
  return max_abs(gram(p1.primary(), p1.primary()) - gram(p2.primary(), p2.primary())) <= eq_tol &&
         max_abs(gram(p1.dual(), p1.dual()) - gram(p2.dual(), p2.dual())) <= eq_tol &&
         max_abs(gram(p1.primary(), p1.dual()) - gram(p2.primary(), p2.dual())) <= eq_tol;
}

}  // namespace framekit
