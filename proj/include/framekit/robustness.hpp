#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "framekit/mrc.hpp"

namespace framekit {

struct SubsetStrategy {
  enum class Kind { Auto, Exhaustive, Sampled };
  Kind kind = Kind::Auto;
  std::uint64_t budget = 100000;  // exhaustive iff C(N,m) <= budget
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
};

struct RobustnessReport {
  Index m = 0;
  bool robust = false;
  bool exhaustive = true;
  std::uint64_t checked_subsets = 0;
  std::uint64_t seed = 0;    // sampled strategy only
  std::uint64_t trials = 0;  // sampled strategy only
  std::optional<std::vector<Index>> failing_subset;  // lexicographically smallest failure seen
};

/// Robust to m erasures iff every m-subset removal leaves a frame. Exhaustive
/// enumeration visits every subset (so checked_subsets = C(N,m)); beyond the
/// budget a seeded sample is drawn and the verdict is probabilistic.
inline RobustnessReport is_m_erasure_robust(const Frame& f, Index m,
                                            SubsetStrategy strategy = {}) {
  const Index n = f.size();
  if (m < 0 || m >= n) {
    throw Error(Errc::InvalidM, "m must satisfy 0 <= m < N, got " + std::to_string(m));
  }
  RobustnessReport report;
  report.m = m;
  const std::uint64_t total = binomial(n, m);
  bool exhaustive = strategy.kind != SubsetStrategy::Kind::Sampled;
  if (strategy.kind == SubsetStrategy::Kind::Auto && total > strategy.budget) exhaustive = false;
  report.exhaustive = exhaustive;

  const auto check = [&](const std::vector<Index>& subset) {
    return satisfies_mrc(f, ErasureSet::of(subset, n)).satisfied;
  };

  if (exhaustive) {
    report.checked_subsets = for_each_combination(n, m, [&](const std::vector<Index>& subset) {
      if (!check(subset) && !report.failing_subset) report.failing_subset = subset;
      return true;  // keep going: the report counts every subset
    });
  } else {
    Rng rng(strategy.seed);
    report.seed = strategy.seed;
    report.trials = strategy.trials;
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (std::uint64_t t = 0; t < strategy.trials; ++t) {
      for (Index i = 0; i < m; ++i) {
        const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      std::vector<Index> subset(pool.begin(), pool.begin() + m);
      std::sort(subset.begin(), subset.end());
      ++report.checked_subsets;
      if (!check(subset)) {
        if (!report.failing_subset || subset < *report.failing_subset) {
          report.failing_subset = subset;
        }
      }
    }
  }
  report.robust = !report.failing_subset.has_value();
  return report;
}

/// Size of the smallest linearly dependent subfamily; N+1 when all vectors
/// are independent (only possible for a basis).
inline Index spark(const Frame& f) {
  const Index n = f.size();
  const Index cap = std::min(n, f.dim() + 1);
  for (Index s = 1; s <= cap; ++s) {
    std::optional<Index> found;
    for_each_combination(n, s, [&](const std::vector<Index>& subset) {
      const Matrix sub = select_columns(f.synthesis(), subset);
      if (rank_info(sub, f.tol()).rank < s) {
        found = s;
        return false;
      }
      return true;
    });
    if (found) return *found;
  }
  return n + 1;
}

struct ExcessReport {
  Index sup_excess = 0;      // N - dim: the most vectors any removal can spare
  Index uniform_excess = 0;  // largest m with every m-subset removable
};

inline ExcessReport excess(const Frame& f) {
  ExcessReport report;
  // greedy spanning-subset extraction
  std::vector<Index> kept;
  for (Index i = 0; i < f.size() && static_cast<Index>(kept.size()) < f.dim(); ++i) {
    kept.push_back(i);
    if (rank_info(select_columns(f.synthesis(), kept), f.tol()).rank <
        static_cast<Index>(kept.size())) {
      kept.pop_back();
    }
  }
  report.sup_excess = f.size() - static_cast<Index>(kept.size());
  for (Index m = 1; m <= report.sup_excess; ++m) {
    if (!is_m_erasure_robust(f, m).robust) break;
    report.uniform_excess = m;
  }
  return report;
}

/// Unique coefficients d_{i,j} with f_i = sum_{j>m} d_{i,j} f_j for i <= m,
/// defined when the tail {f_i}_{i>m} is a basis. Row i holds d_{i,.}.
inline Matrix expansion_coefficients(const Frame& f, Index m) {
  const Index n = f.size();
  if (m < 0 || m > n) throw Error(Errc::InvalidM, "m outside 0..N");
  if (n - m != f.dim()) {
    throw Error(Errc::TailNotABasis, "tail has " + std::to_string(n - m) +
                                         " vectors, a basis needs exactly " +
                                         std::to_string(f.dim()));
  }
  const Matrix tail = f.synthesis().rightCols(n - m);
  if (rank_info(tail, f.tol()).rank < f.dim()) {
    throw Error(Errc::TailNotABasis, "tail vectors are linearly dependent");
  }
  const Matrix head = f.synthesis().leftCols(m);
  const Matrix coeffs = tail.partialPivLu().solve(head);  // column i: d_{i,.}
  return coeffs.transpose();
}

/// m x N matrix [ I | -d* ] whose null space carries the analysis range.
struct GammaMatrix {
  Index m = 0;
  Matrix entries;
};

inline GammaMatrix build_gamma(const Frame& f, Index m) {
  GammaMatrix gamma;
  gamma.m = m;
  gamma.entries = Matrix(m, f.size());
  if (m == 0) return gamma;  // degenerate 0 x N matrix
  const Matrix d = expansion_coefficients(f, m);
  gamma.entries.leftCols(m) = Matrix::Identity(m, m);
  gamma.entries.rightCols(f.size() - m) = -d.conjugate();
  return gamma;
}

struct RangeNullspaceCheck {
  bool equal = false;
  double max_residual = 0.0;
  Index range_dim = 0;
  Index nullspace_dim = 0;
};

/// Checks TH = N(Gamma): the analysis range and the Gamma null space must be
/// the same subspace of C^N.
inline RangeNullspaceCheck verify_range_equals_nullspace(const Frame& f,
                                                         const GammaMatrix& gamma) {
  if (gamma.entries.cols() != f.size()) {
    throw Error(Errc::ShapeMismatch, "Gamma has " + std::to_string(gamma.entries.cols()) +
                                         " columns, frame has " + std::to_string(f.size()) +
                                         " vectors");
  }
  const Matrix range = range_basis(f.analysis(), f.tol());
  const Matrix nullsp = null_space_basis(gamma.entries, f.tol());
  const SubspaceCheck check = subspaces_equal(range, nullsp, f.tol().eq_tol);
  return RangeNullspaceCheck{check.equal, check.max_residual, check.dim_left, check.dim_right};
}

struct ColumnIndependenceReport {
  bool independent = false;
  bool exhaustive = true;
  std::uint64_t checked_subsets = 0;
  double min_sigma = 0.0;  // smallest sigma_min over the checked subsets
  std::optional<std::vector<Index>> witness;  // first dependent column subset
};

/// Every m-subset of Gamma's columns must be linearly independent
/// (Prop 4.2-style certificate). Budgeted like the robustness sweep.
inline ColumnIndependenceReport gamma_columns_independent(const GammaMatrix& gamma, Index m,
                                                          const ToleranceConfig& tol = {},
                                                          SubsetStrategy strategy = {}) {
  const Index n = gamma.entries.cols();
  if (m < 0 || m > gamma.entries.rows()) {
    throw Error(Errc::InvalidM,
                "m columns of an " + std::to_string(gamma.entries.rows()) + "-row matrix "
                "cannot be independent for m = " + std::to_string(m));
  }
  ColumnIndependenceReport report;
  report.min_sigma = std::numeric_limits<double>::infinity();
  const std::uint64_t total = binomial(n, m);
  bool exhaustive = strategy.kind != SubsetStrategy::Kind::Sampled;
  if (strategy.kind == SubsetStrategy::Kind::Auto && total > strategy.budget) exhaustive = false;
  report.exhaustive = exhaustive;

  const auto visit = [&](const std::vector<Index>& subset) {
    const Matrix sub = select_columns(gamma.entries, subset);
    const RankInfo info = rank_info(sub, tol);
    report.min_sigma = std::min(report.min_sigma, subset.empty() ? report.min_sigma : info.sigma_min);
    if (info.rank < m && !report.witness) report.witness = subset;
  };

  if (exhaustive) {
    report.checked_subsets = for_each_combination(n, m, [&](const std::vector<Index>& subset) {
      visit(subset);
      return true;
    });
  } else {
    Rng rng(strategy.seed);
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (std::uint64_t t = 0; t < strategy.trials; ++t) {
      for (Index i = 0; i < m; ++i) {
        const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      std::vector<Index> subset(pool.begin(), pool.begin() + m);
      std::sort(subset.begin(), subset.end());
      ++report.checked_subsets;
      visit(subset);
    }
  }
  if (!std::isfinite(report.min_sigma)) report.min_sigma = 0.0;
  report.independent = !report.witness.has_value();
  return report;
}

/// Compresses {P f_i} into an orthonormal basis of range(P), yielding a
/// valid frame of the reduced ambient dimension.
inline Frame project_frame(const Frame& f, const Matrix& p) {
  if (p.rows() != f.dim() || p.cols() != f.dim()) {
    throw Error(Errc::ShapeMismatch, "projection must be dim x dim");
  }
  if (!is_orthogonal_projection(p, f.tol().eq_tol)) {
    throw Error(Errc::NotAProjection, "matrix is not an orthogonal projection within eq_tol");
  }
  const Matrix basis = range_basis(p, f.tol());
  if (basis.cols() == 0) throw Error(Errc::ZeroRange, "projection has rank zero");
  return Frame::validate(basis.adjoint() * f.synthesis(), f.tol());
}

struct ReorderedFrame {
  Frame frame;
  std::vector<Index> permutation;  // permutation[k] = original index of position k
};

/// Permutes the frame so the last N-m vectors form a basis: the standing
/// assumption behind expansion_coefficients and build_gamma. The basis is
/// the lexicographically first invertible dim-subset, moved to the tail with
/// relative order preserved.
inline ReorderedFrame reorder_for_basis_tail(const Frame& f, Index m) {
  const Index n = f.size();
  if (n - m != f.dim()) {
    throw Error(Errc::TailNotABasis, "no ordering helps: N - m must equal dim");
  }
  std::optional<std::vector<Index>> basis;
  for_each_combination(n, f.dim(), [&](const std::vector<Index>& subset) {
    if (rank_info(select_columns(f.synthesis(), subset), f.tol()).rank == f.dim()) {
      basis = subset;
      return false;
    }
    return true;
  });
  if (!basis) throw Error(Errc::TailNotABasis, "no dim-subset of the vectors is a basis");
  std::vector<Index> perm;
  perm.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!std::binary_search(basis->begin(), basis->end(), i)) perm.push_back(i);
  }
  perm.insert(perm.end(), basis->begin(), basis->end());
  Matrix reordered(f.dim(), n);
  for (Index k = 0; k < n; ++k) reordered.col(k) = f.synthesis().col(perm[static_cast<std::size_t>(k)]);
  return ReorderedFrame{Frame::validate(std::move(reordered), f.tol(), f.field()), std::move(perm)};
}

}  // namespace framekit
