#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "framekit/duals.hpp"

namespace framekit {

/// A set of erased frame indices (0-based here; the CLI and file formats use
/// 1-based indices). Must leave at least one index untouched.
class ErasureSet {
 public:
  ErasureSet() = default;

  static ErasureSet of(std::vector<Index> indices, Index frame_size) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (Index i : indices) {
      if (i < 0 || i >= frame_size) {
        throw Error(Errc::IndexOutOfRange, "erased index " + std::to_string(i + 1) +
                                               " outside 1.." + std::to_string(frame_size));
      }
    }
    if (static_cast<Index>(indices.size()) >= frame_size) {
      throw Error(Errc::IndexOutOfRange, "cannot erase every index");
    }
    ErasureSet set;
    set.indices_ = std::move(indices);
    set.frame_size_ = frame_size;
    return set;
  }

  const std::vector<Index>& indices() const { return indices_; }
  Index frame_size() const { return frame_size_; }
  Index count() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }

  bool contains(Index i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }

  std::vector<Index> complement() const {
    std::vector<Index> comp;
    comp.reserve(static_cast<std::size_t>(frame_size_ - count()));
    for (Index i = 0; i < frame_size_; ++i) {
      if (!contains(i)) comp.push_back(i);
    }
    return comp;
  }

 private:
  std::vector<Index> indices_;
  Index frame_size_ = 0;
};

inline Matrix select_columns(const Matrix& m, const std::vector<Index>& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = m.col(cols[j]);
  return out;
}

struct MrcVerdict {
  bool satisfied = false;
  double certificate = 0.0;  // smallest singular value of the reduced synthesis matrix
  double threshold = 0.0;
  bool marginal = false;     // certificate within 10x of the threshold
  std::optional<FrameBounds> reduced_bounds;
};

/// Minimal redundancy condition: do the surviving vectors still span?
inline MrcVerdict satisfies_mrc(const Frame& f, const ErasureSet& erased) {
  if (erased.frame_size() != f.size()) {
    throw Error(Errc::IndexOutOfRange, "erasure set built for a different frame size");
  }
  const Matrix reduced = select_columns(f.synthesis(), erased.complement());
  const RankInfo info = rank_info(reduced, f.tol());
  MrcVerdict verdict;
  // certificate is the dim-th singular value of the reduced synthesis; when
  // fewer than dim vectors survive it is zero, keeping
  // satisfied <=> certificate > threshold.
  verdict.certificate = reduced.cols() >= f.dim() ? info.sigma_min : 0.0;
  verdict.threshold = info.threshold;
  verdict.satisfied = info.rank == f.dim();
  verdict.marginal =
      verdict.certificate > verdict.threshold / 10.0 && verdict.certificate < verdict.threshold * 10.0;
  if (verdict.satisfied) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(reduced * reduced.adjoint(), Eigen::EigenvaluesOnly);
    verdict.reduced_bounds = FrameBounds{es.eigenvalues()(0), es.eigenvalues()(f.dim() - 1)};
  }
  return verdict;
}

/// sum_{i in complement} <., f_i> f_i; invertible exactly when the erasure
/// set satisfies the MRC.
inline Matrix partial_frame_operator(const Frame& f, const ErasureSet& erased) {
  if (erased.frame_size() != f.size()) {
    throw Error(Errc::IndexOutOfRange, "erasure set built for a different frame size");
  }
  const Matrix reduced = select_columns(f.synthesis(), erased.complement());
  return reduced * reduced.adjoint();
}

/// R_Lambda applied to received dual-side coefficients: synthesizes with the
/// primary frame against c_i = <f, g_i> over the surviving indices. Entries
/// at erased positions are ignored.
inline Vector partial_reconstruction(const DualPair& pair, const ErasureSet& erased,
                                     const CoefficientVector& c) {
  if (c.size() != pair.size()) {
    throw Error(Errc::DimensionMismatch, "coefficient vector length does not match the pair");
  }
  if (erased.frame_size() != pair.size()) {
    throw Error(Errc::IndexOutOfRange, "erasure set built for a different frame size");
  }
  Vector out = Vector::Zero(pair.dim());
  for (Index i : erased.complement()) out += c[i] * pair.primary().vec(i);
  return out;
}

/// I - sum_{i in Lambda} <., f_i> S^{-1} f_i. Its invertibility decides the
/// MRC for the canonical dual.
inline Matrix canonical_mrc_operator(const Frame& f, const ErasureSet& erased) {
  if (erased.frame_size() != f.size()) {
    throw Error(Errc::IndexOutOfRange, "erasure set built for a different frame size");
  }
  const Matrix s = frame_operator(f);
  const Matrix erased_cols = select_columns(f.synthesis(), erased.indices());
  return Matrix::Identity(f.dim(), f.dim()) -
         s.ldlt().solve(erased_cols) * erased_cols.adjoint();
}

/// The four-term operator whose invertibility decides the MRC for the
/// perturbed dual {S^{-1} f_i + h_i}:
///
///   (I - S^{-1} F_L F_L^H) S^{-1} - H_L F_L^H S^{-1} - S^{-1} F_L H_L^H + H_Lc H_Lc^H
///
/// It equals Theta_{G,Lc}^* Theta_{G,Lc} for the perturbed dual G, which the
/// tests check directly.
inline Matrix perturbed_dual_mrc_operator(const Frame& f, const DualPerturbation& h,
                                          const ErasureSet& erased) {
  if (h.vectors.rows() != f.dim() || h.vectors.cols() != f.size()) {
    throw Error(Errc::DimensionMismatch, "perturbation shape must match the frame");
  }
  const double residual = h.constraint_residual(f);
  if (residual > f.tol().eq_tol) {
    throw Error(Errc::InvalidPerturbation,
                "perturbation constraint residual " + std::to_string(residual));
  }
  if (!satisfies_mrc(f, erased).satisfied) {
    throw Error(Errc::HypothesisViolated,
                "erasure set does not satisfy the MRC for the primary frame");
  }
  const Index d = f.dim();
  const Matrix s = frame_operator(f);
  const auto s_solve = s.ldlt();
  const Matrix s_inv = s_solve.solve(Matrix::Identity(d, d));
  const Matrix f_erased = select_columns(f.synthesis(), erased.indices());
  const Matrix h_erased = select_columns(h.vectors, erased.indices());
  const Matrix h_kept = select_columns(h.vectors, erased.complement());
  return (Matrix::Identity(d, d) - s_solve.solve(f_erased * f_erased.adjoint())) * s_inv -
         h_erased * f_erased.adjoint() * s_inv - s_solve.solve(f_erased * h_erased.adjoint()) +
         h_kept * h_kept.adjoint();
}

}  // namespace framekit
