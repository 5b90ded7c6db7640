#pragma once

#include <optional>
#include <string>
#include <vector>

#include "framekit/robustness.hpp"

namespace framekit {

// Every finite frame dilates: the analysis isometry V of the Parseval
// rescaling S^{-1/2}F embeds the ambient space into C^N, and the projection
// P = V V^H onto its range satisfies P e_i = V (S^{-1/2} f_i) against the
// standard basis e_i. Robustness-to-one-erasure questions about F become
// statements about null vectors of the synthesis map, which is what the
// certificate and witness searches below exploit.

struct Dilation {
  Index big_dim = 0;   // N
  Matrix onb;          // orthonormal basis of the dilation space (standard basis)
  Matrix projection;   // N x N projection onto the embedded ambient space
  Matrix embedding;    // N x dim isometry carrying the ambient space into C^N
};

inline Dilation naimark_dilate(const Frame& f) {
  Dilation d;
  d.big_dim = f.size();
  d.onb = Matrix::Identity(f.size(), f.size());
  const Matrix parseval = hermitian_inv_sqrt(frame_operator(f), f.tol()) * f.synthesis();
  d.embedding = parseval.adjoint();  // analysis isometry of S^{-1/2} F
  d.projection = d.embedding * d.embedding.adjoint();
  return d;
}

/// {P e_i} expressed in an orthonormal basis of range(P): recovers the
/// Parseval rescaling of the dilated frame up to a basis isometry.
inline Frame onb_projection_frame(const Dilation& d, const ToleranceConfig& tol = {}) {
  // the embedding's columns are an orthonormal basis of range(P)
  return Frame::validate(d.embedding.adjoint() * (d.projection * d.onb), tol);
}

/// A dependency sum_i a_i f_i = 0 with every a_i nonzero, present exactly
/// when the frame survives any single erasure.
struct OneErasureCertificate {
  std::optional<Vector> coefficients;   // normalized to unit max entry
  std::optional<Index> witness_index;   // index whose erasure breaks the frame
  bool present() const { return coefficients.has_value(); }
};

namespace detail {

/// Deterministic generic-combination search: looks for a vector in the
/// column span of `basis` with no zero entry. Coefficients come from a
/// seeded sweep; an all-nonzero combination exists whenever every row of
/// `basis` is nonzero, so failure after max_attempts indicates tolerance
/// trouble rather than absence.
inline std::optional<Vector> all_nonzero_combination(const Matrix& basis, double eq_tol,
                                                     int max_attempts = 64) {
  if (basis.cols() == 0) return std::nullopt;
  Rng rng(0x0f21ac7eULL);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Vector coeffs(basis.cols());
    if (attempt == 0) {
      coeffs.setOnes();
    } else {
      for (Index j = 0; j < basis.cols(); ++j) {
        // small rational-style coefficients keep the sweep reproducible
        coeffs(j) = Complex(1.0 + rng.below(16), static_cast<double>(rng.below(16)) / 4.0);
      }
    }
    Vector v = basis * coeffs;
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale <= 0.0) continue;
    v /= scale;
    if (v.cwiseAbs().minCoeff() > eq_tol) return v;
  }
  return std::nullopt;
}

}  // namespace detail

inline OneErasureCertificate one_erasure_certificate(const Frame& f) {
  OneErasureCertificate cert;
  const Matrix nullsp = null_space_basis(f.synthesis(), f.tol());
  // Absent is declared only with the rank certificate: an index whose
  // removal drops the span, i.e. every dependency has a zero there.
  for (Index i = 0; i < f.size(); ++i) {
    std::vector<Index> kept;
    for (Index j = 0; j < f.size(); ++j) {
      if (j != i) kept.push_back(j);
    }
    if (rank_info(select_columns(f.synthesis(), kept), f.tol()).rank < f.dim()) {
      cert.witness_index = i;
      return cert;
    }
  }
  cert.coefficients = detail::all_nonzero_combination(nullsp, f.tol().eq_tol);
  if (!cert.coefficients) {
    throw Error(Errc::NumericalFailure,
                "every single erasure leaves a frame, but the generic certificate search "
                "failed; eq_tol is likely too coarse");
  }
  return cert;
}

/// A vector in range(I - P) whose coordinates against the dilation basis
/// are all nonzero. Present exactly when the projected frame is robust to
/// one erasure. Absence is certified by a rank drop of the projected frame,
/// never by search exhaustion.
inline std::optional<Vector> complement_witness(const Dilation& d,
                                                const ToleranceConfig& tol = {}) {
  const Matrix complement =
      Matrix::Identity(d.big_dim, d.big_dim) - d.projection;
  const Matrix basis = range_basis(complement, tol);
  if (basis.cols() == 0) return std::nullopt;
  // range(I-P) is the null space of the projected frame's synthesis map
  // (the embedding's adjoint), so a zero coordinate forced on every witness
  // shows up as a rank drop when that frame vector is removed.
  const Matrix projected = d.embedding.adjoint();
  for (Index i = 0; i < d.big_dim; ++i) {
    std::vector<Index> kept;
    for (Index j = 0; j < d.big_dim; ++j) {
      if (j != i) kept.push_back(j);
    }
    if (rank_info(select_columns(projected, kept), tol).rank < projected.rows()) {
      return std::nullopt;
    }
  }
  const auto witness = detail::all_nonzero_combination(basis, tol.eq_tol);
  if (!witness) {
    throw Error(Errc::NumericalFailure,
                "no single coordinate is forced to zero, but the generic witness search "
                "failed; eq_tol is likely too coarse");
  }
  return witness;
}

/// max_j | ||f_j||^2 - sum_i |<e_j, embedded f_i>|^2 | over the dilation of F.
inline double norm_identity_check(const Frame& f) {
  const Dilation d = naimark_dilate(f);
  const Matrix embedded = d.embedding * f.synthesis();  // column i = embedded f_i, in C^N
  double worst = 0.0;
  for (Index j = 0; j < f.size(); ++j) {
    // <e_j, embedded f_i> = conj(embedded(j, i))
    const double sum = embedded.row(j).cwiseAbs2().sum();
    worst = std::max(worst, std::abs(f.vec(j).squaredNorm() - sum));
  }
  return worst;
}

struct NormalFormResult {
  Frame normal_form;           // coordinates of S^{-1/2} f_i in the basis phi
  bool equivalent = false;     // Gramian equality against the Parseval rescaling
  double residual = 0.0;
};

/// Rewrites the frame in its dilation normal form against an orthonormal
/// basis phi of the ambient space, and certifies unitary equivalence by
/// Gramian comparison.
inline NormalFormResult unitary_equivalent_form(const Frame& f, const Matrix& phi) {
  if (phi.rows() != f.dim() || phi.cols() != f.dim()) {
    throw Error(Errc::NotOrthonormal, "phi must be a square basis of the ambient space");
  }
  if (max_abs(phi.adjoint() * phi - Matrix::Identity(f.dim(), f.dim())) > f.tol().eq_tol) {
    throw Error(Errc::NotOrthonormal, "phi is not orthonormal within eq_tol");
  }
  const Matrix parseval = hermitian_inv_sqrt(frame_operator(f), f.tol()) * f.synthesis();
  NormalFormResult result{Frame::validate(phi.adjoint() * parseval, f.tol()), false, 0.0};
  result.residual = max_abs(gramian(result.normal_form) -
                            parseval.adjoint() * parseval);
  result.equivalent = result.residual <= f.tol().eq_tol;
  return result;
}

}  // namespace framekit
