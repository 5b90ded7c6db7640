#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "framekit/linalg.hpp"

namespace framekit {

// Conventions used throughout:
//   - frame vectors f_1..f_N are the columns of the synthesis matrix (d x N)
//   - the analysis matrix is its conjugate transpose (N x d)
//   - frame operator  S = synthesis * analysis          (d x d)
//   - Gramian         G = analysis * synthesis          (N x N), G(k,i) = <f_i, f_k>
//   - inner products are conjugate-linear in the second slot

enum class ScalarField { Real, Complex };

struct FrameBounds {
  double lower = 0.0;  // smallest eigenvalue of the frame operator
  double upper = 0.0;  // largest eigenvalue

  bool tight(double eq_tol) const { return std::abs(upper - lower) <= eq_tol; }
  bool parseval(double eq_tol) const {
    return std::abs(lower - 1.0) <= eq_tol && std::abs(upper - 1.0) <= eq_tol;
  }
};

/// Coefficient sequence index-aligned with a frame.
struct CoefficientVector {
  Vector entries;

  Index size() const { return entries.size(); }
  Complex operator[](Index i) const { return entries(i); }
};

/// A spanning family of N >= dim vectors in a dim-dimensional space,
/// validated on construction.
class Frame {
 public:
  /// Validates that the columns of `synthesis` span the ambient space.
  static Frame validate(Matrix synthesis, ToleranceConfig tol = {},
                        ScalarField field = ScalarField::Complex) {
    tol.validate();
    if (synthesis.rows() < 1 || synthesis.cols() < 1) {
      throw Error(Errc::InvalidShape, "frame needs at least one vector in dimension >= 1");
    }
    const RankInfo info = rank_info(synthesis, tol);
    if (info.rank < synthesis.rows()) {
      throw NotAFrameError(static_cast<int>(info.rank), info.sigma_rank,
                           "vectors span a subspace of rank " + std::to_string(info.rank) +
                               " < dim " + std::to_string(synthesis.rows()) +
                               " (offending singular value " + std::to_string(info.sigma_rank) +
                               ")");
    }
    return Frame(std::move(synthesis), tol, field);
  }

  static Frame validate(const std::vector<Vector>& vectors, ToleranceConfig tol = {},
                        ScalarField field = ScalarField::Complex) {
    if (vectors.empty()) throw Error(Errc::InvalidShape, "empty vector list");
    const Index dim = vectors.front().size();
    Matrix synthesis(dim, static_cast<Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != dim) {
        throw Error(Errc::DimensionMismatch,
                    "vector " + std::to_string(i + 1) + " has length " +
                        std::to_string(vectors[i].size()) + ", expected " + std::to_string(dim));
      }
      synthesis.col(static_cast<Index>(i)) = vectors[i];
    }
    return validate(std::move(synthesis), tol, field);
  }

  Index dim() const { return synthesis_.rows(); }
  Index size() const { return synthesis_.cols(); }  // N

  const Matrix& synthesis() const { return synthesis_; }
  Matrix analysis() const { return synthesis_.adjoint(); }
  Vector vec(Index i) const { return synthesis_.col(i); }

  const ToleranceConfig& tol() const { return tol_; }
  ScalarField field() const { return field_; }

  /// Same vectors with a different ambient operator applied to each.
  Frame transformed(const Matrix& op) const {
    return Frame::validate(op * synthesis_, tol_, ScalarField::Complex);
  }

 private:
  Frame(Matrix synthesis, ToleranceConfig tol, ScalarField field)
      : synthesis_(std::move(synthesis)), tol_(tol), field_(field) {}

  Matrix synthesis_;
  ToleranceConfig tol_;
  ScalarField field_;
};

inline CoefficientVector analysis(const Frame& f, const Vector& x) {
  if (x.size() != f.dim()) {
    throw Error(Errc::DimensionMismatch, "signal has length " + std::to_string(x.size()) +
                                             ", frame dim is " + std::to_string(f.dim()));
  }
  return CoefficientVector{f.analysis() * x};
}

inline Vector synthesis(const Frame& f, const CoefficientVector& c) {
  if (c.size() != f.size()) {
    throw Error(Errc::DimensionMismatch, "coefficient vector has length " +
                                             std::to_string(c.size()) + ", frame has " +
                                             std::to_string(f.size()) + " vectors");
  }
  return f.synthesis() * c.entries;
}

inline Matrix frame_operator(const Frame& f) { return f.synthesis() * f.analysis(); }

inline Matrix gramian(const Frame& f) { return f.analysis() * f.synthesis(); }

inline FrameBounds frame_bounds(const Frame& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(frame_operator(f), Eigen::EigenvaluesOnly);
  return FrameBounds{es.eigenvalues()(0), es.eigenvalues()(f.dim() - 1)};
}

enum class FrameKind { Generic, Parseval, Tight };

/// Deterministic seeded frame generator. `Generic` draws i.i.d. standard
/// complex Gaussian coordinates (full spark with probability 1), `Parseval`
/// applies S^{-1/2} to a generic draw, `Tight` scales a Parseval frame by a
/// sampled constant.
inline Frame random_frame(Index dim, Index count, std::uint64_t seed,
                          FrameKind kind = FrameKind::Generic, ToleranceConfig tol = {}) {
  if (dim < 1 || count < dim) {
    throw Error(Errc::InvalidShape, "need count >= dim >= 1, got dim=" + std::to_string(dim) +
                                        " count=" + std::to_string(count));
  }
  Rng rng(seed);
  Matrix synthesis = gaussian_matrix(dim, count, rng);
  if (kind != FrameKind::Generic) {
    synthesis = hermitian_inv_sqrt(synthesis * synthesis.adjoint(), tol) * synthesis;
    if (kind == FrameKind::Tight) synthesis *= rng.uniform(0.5, 2.0);
  }
  return Frame::validate(std::move(synthesis), tol);
}

namespace fixtures {

/// Standard orthonormal basis of C^2.
inline Frame E2() {
  Matrix m = Matrix::Identity(2, 2);
  return Frame::validate(std::move(m), {}, ScalarField::Real);
}

/// Mercedes-Benz frame: three unit vectors at 120 degrees, S = (3/2) I.
inline Frame M3() {
  Matrix m(2, 3);
  const double s = std::sqrt(3.0) / 2.0;
  m << Complex(1, 0), Complex(-0.5, 0), Complex(-0.5, 0),
       Complex(0, 0), Complex(s, 0), Complex(-s, 0);
  return Frame::validate(std::move(m), {}, ScalarField::Real);
}

/// {e1, e2, e1+e2}: the smallest frame with a one-dimensional dependency.
inline Frame U3() {
  Matrix m(2, 3);
  m << Complex(1, 0), Complex(0, 0), Complex(1, 0),
       Complex(0, 0), Complex(1, 0), Complex(1, 0);
  return Frame::validate(std::move(m), {}, ScalarField::Real);
}

}  // namespace fixtures

}  // namespace framekit
