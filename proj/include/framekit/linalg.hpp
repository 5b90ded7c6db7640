#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include "framekit/errors.hpp"
#include "framekit/rng.hpp"
#include "framekit/tolerance.hpp"

namespace framekit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Inner product, conjugate-linear in the second slot: <f,g> = g^H f.
inline Complex inner(const Vector& f, const Vector& g) { return g.dot(f); }

/// Largest absolute entry; the entrywise residual used for equality checks.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct RankInfo {
  Index rank = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;      // smallest singular value overall
  double sigma_rank = 0.0;     // sigma_{rank+1}, the first one below threshold (0 if full rank)
  double threshold = 0.0;
};

/// Numerical rank with the relative threshold sigma > rank_tol * max(sigma_max, 1).
inline RankInfo rank_info(const Matrix& m, const ToleranceConfig& tol) {
  RankInfo info;
  if (m.size() == 0) return info;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  info.sigma_max = sv(0);
  info.sigma_min = sv(sv.size() - 1);
  info.threshold = tol.rank_threshold(info.sigma_max);
  while (info.rank < sv.size() && sv(info.rank) > info.threshold) ++info.rank;
  if (info.rank < sv.size()) info.sigma_rank = sv(info.rank);
  return info;
}

inline double min_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

inline bool is_invertible(const Matrix& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) return false;
  const RankInfo info = rank_info(m, tol);
  return info.rank == m.rows();
}

/// Orthonormal basis of the column space (thin SVD, left vectors up to rank).
inline Matrix range_basis(const Matrix& m, const ToleranceConfig& tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thr = tol.rank_threshold(sv.size() ? sv(0) : 0.0);
  Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return svd.matrixU().leftCols(r);
}

/// Orthonormal basis of the (right) null space: columns z with m z = 0.
inline Matrix null_space_basis(const Matrix& m, const ToleranceConfig& tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = tol.rank_threshold(sv.size() ? sv(0) : 0.0);
  Index r = 0;
  while (r < sv.size() && sv(r) > thr) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

/// Minimal-norm least-squares solution of A X = B.
inline Matrix pinv_solve(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double thr = tol.rank_threshold(sv.size() ? sv(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thr) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().adjoint() * b);
}

inline bool is_hermitian(const Matrix& m, double eq_tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= eq_tol;
}

inline bool is_orthogonal_projection(const Matrix& p, double eq_tol) {
  return is_hermitian(p, eq_tol) && max_abs(p * p - p) <= eq_tol;
}

/// Hermitian square root via eigendecomposition, eigenvalues clamped at
/// rank_tol before the root is taken.
inline Matrix hermitian_sqrt(const Matrix& m, const ToleranceConfig& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), tol.rank_tol));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Hermitian inverse square root, same clamping policy.
inline Matrix hermitian_inv_sqrt(const Matrix& m, const ToleranceConfig& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = 1.0 / std::sqrt(std::max(ev(i), tol.rank_tol));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

struct SubspaceCheck {
  bool equal = false;
  double max_residual = 0.0;
  Index dim_left = 0;
  Index dim_right = 0;
};

/// Subspace equality via mutual projection residuals of orthonormal bases.
inline SubspaceCheck subspaces_equal(const Matrix& q1, const Matrix& q2, double eq_tol) {
  SubspaceCheck check;
  check.dim_left = q1.cols();
  check.dim_right = q2.cols();
  const double r1 = max_abs(q1 * (q1.adjoint() * q2) - q2);
  const double r2 = max_abs(q2 * (q2.adjoint() * q1) - q1);
  check.max_residual = std::max(r1, r2);
  check.equal = (check.dim_left == check.dim_right) && check.max_residual <= eq_tol;
  return check;
}

/// d x n matrix with i.i.d. standard complex Gaussian entries.
inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian();
  }
  return m;
}

/// Seeded random unitary: modified Gram-Schmidt on a Gaussian matrix with
/// the diagonal phases normalized to be real positive, which makes the
/// factorization (and hence the result) unique.
inline Matrix random_unitary(Index dim, Rng& rng) {
  Matrix a = gaussian_matrix(dim, dim, rng);
  Matrix q(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    Vector v = a.col(j);
    for (Index k = 0; k < j; ++k) v -= q.col(k).dot(v) * q.col(k);
    const double nrm = v.norm();
    if (nrm < 1e-12) {
      // retry column with fresh randomness (measure-zero event)
      a.col(j) = gaussian_matrix(dim, 1, rng);
      --j;
      continue;
    }
    v /= nrm;
    // rotate so the first nonzero coordinate is real positive
    Index pivot = 0;
    while (pivot < dim && std::abs(v(pivot)) < 1e-12) ++pivot;
    if (pivot < dim) v *= std::conj(v(pivot)) / std::abs(v(pivot));
    q.col(j) = v;
  }
  return q;
}

/// Visits all k-subsets of {0..n-1} in lexicographic order. The callback
/// returns false to stop early. Returns the number of subsets visited.
template <class F>
std::uint64_t for_each_combination(Index n, Index k, F&& f) {
  if (k < 0 || k > n) return 0;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::uint64_t visited = 0;
  while (true) {
    ++visited;
    if (!f(static_cast<const std::vector<Index>&>(idx))) return visited;
    // advance
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return visited;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

/// C(n,k) saturating at 2^63-1.
inline std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (Index i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > (UINT64_MAX / 2) / num) return UINT64_MAX / 2;
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace framekit
