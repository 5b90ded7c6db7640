#pragma once

#include <string>
#include <vector>

#include "framekit/io.hpp"

namespace framekit {

// Seeded property suite over randomly generated frames. Each check pins one
// of the library's structural guarantees (duality and unitary invariance of
// the MRC, the perturbed-dual operator criterion, the Gamma null-space
// characterization, excess/robustness equivalence, bridged recovery, the
// one-erasure certificates, dilation fidelity) and reports instance counts,
// worst residuals, and the first counterexample when one exists. All
// randomness derives from the seed, so verdict payloads are byte-stable.

struct VerifyOptions {
  std::uint64_t seed = 0;
  ToleranceConfig tol;
  std::uint64_t subset_budget = 100000;
  int duality_frames = 200;
  int unitary_pairs = 100;
  int operator_frames = 100;
  int gamma_frames = 100;
  int excess_frames = 100;
  int bridge_pairs = 100;
  int bridge_signals = 100;
  int one_erasure_frames = 200;
  int one_erasure_engineered = 20;
  int dilation_frames = 100;
  int roundtrip_frames = 100;

  /// Uniformly rescale every instance count (used by fast CLI runs).
  void scale_counts(int n) {
    duality_frames = unitary_pairs = operator_frames = gamma_frames = excess_frames =
        bridge_pairs = one_erasure_frames = dilation_frames = roundtrip_frames = n;
    one_erasure_engineered = std::max(1, n / 10);
    bridge_signals = std::max(10, n);
  }
};

struct CheckResult {
  std::string id;
  std::string description;
  bool pass = false;
  std::uint64_t instances = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t marginal = 0;
  double worst_residual = 0.0;
  Json details = Json::object();

  Json to_json() const {
    return Json{{"id", id},           {"description", description},
                {"pass", pass},       {"instances", instances},
                {"disagreements", disagreements}, {"marginal", marginal},
                {"worst_residual", worst_residual}, {"details", details}};
  }
};

namespace detail {

inline Frame sample_frame(Rng rng, const ToleranceConfig& tol, Index min_dim = 2,
                          Index max_dim = 6, Index min_excess = 0, Index max_excess = 4) {
  const Index d = min_dim + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_dim - min_dim + 1)));
  const Index n = d + min_excess +
                  static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_excess - min_excess + 1)));
  return random_frame(d, n, rng.next_u64(), FrameKind::Generic, tol);
}

inline std::vector<Index> sample_subset(Rng& rng, Index n, Index k) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> subset(pool.begin(), pool.begin() + k);
  std::sort(subset.begin(), subset.end());
  return subset;
}

inline Json subset_json(const std::vector<Index>& subset) {
  Json out = Json::array();
  for (Index i : subset) out.push_back(i + 1);  // reports use 1-based indices
  return out;
}

/// A frame that contains one vector outside the span of the others, so a
/// single erasure can destroy completeness.
inline Frame isolated_vector_frame(Rng rng, const ToleranceConfig& tol) {
  const Index d = 2 + static_cast<Index>(rng.below(4));
  const Index n = d + 1 + static_cast<Index>(rng.below(3));
  Matrix synthesis = Matrix::Zero(d, n);
  Rng sub = rng.fork(1);
  synthesis.bottomRightCorner(d - 1, n - 1) = gaussian_matrix(d - 1, n - 1, sub);
  synthesis(0, 0) = Complex(1.0 + rng.uniform01(), 0.0);
  return Frame::validate(std::move(synthesis), tol);
}

}  // namespace detail

/// An erasure set satisfies the MRC for a frame exactly when it does for the
/// canonical dual. Marginal verdicts (certificate within 10x of the rank
/// threshold on either side) are excluded and counted.
inline CheckResult check_mrc_canonical_duality(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "mrc_canonical_duality";
  result.description = "MRC verdicts agree between a frame and its canonical dual";
  Rng root(opts.seed);
  Rng stream = root.fork(101);
  for (int t = 0; t < opts.duality_frames; ++t) {
    const Frame f = detail::sample_frame(stream.fork(static_cast<std::uint64_t>(t)), opts.tol);
    const Frame dual = canonical_dual(f).dual();
    const Index max_erase = f.size() - f.dim();
    for (Index k = 0; k <= max_erase; ++k) {
      for_each_combination(f.size(), k, [&](const std::vector<Index>& subset) {
        const ErasureSet erased = ErasureSet::of(subset, f.size());
        const MrcVerdict left = satisfies_mrc(f, erased);
        const MrcVerdict right = satisfies_mrc(dual, erased);
        if (left.marginal || right.marginal) {
          ++result.marginal;
          return true;
        }
        ++result.instances;
        if (left.satisfied != right.satisfied) {
          ++result.disagreements;
          if (!result.details.contains("counterexample")) {
            result.details["counterexample"] =
                Json{{"frame", t}, {"erased", detail::subset_json(subset)}};
          }
        }
        return true;
      });
    }
  }
  // marginal instances are excluded from the agreement count but must stay
  // rare (< 1% of the sweep)
  result.pass = result.disagreements == 0 &&
                result.marginal * 100 <= result.instances + result.marginal;
  return result;
}

/// MRC and robustness verdicts are invariant under unitary images of the
/// frame.
inline CheckResult check_unitary_invariance(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "unitary_invariance";
  result.description = "MRC and robustness verdicts agree between F and UF";
  Rng root(opts.seed);
  Rng stream = root.fork(102);
  for (int t = 0; t < opts.unitary_pairs; ++t) {
    Rng inst = stream.fork(static_cast<std::uint64_t>(t));
    const Frame f = detail::sample_frame(inst.fork(0), opts.tol);
    Rng urng = inst.fork(1);
    const Frame uf = f.transformed(random_unitary(f.dim(), urng));
    for (Index k = 0; k < f.size(); ++k) {
      for_each_combination(f.size(), k, [&](const std::vector<Index>& subset) {
        const ErasureSet erased = ErasureSet::of(subset, f.size());
        ++result.instances;
        if (satisfies_mrc(f, erased).satisfied != satisfies_mrc(uf, erased).satisfied) {
          ++result.disagreements;
          if (!result.details.contains("counterexample")) {
            result.details["counterexample"] =
                Json{{"frame", t}, {"erased", detail::subset_json(subset)}};
          }
        }
        return true;
      });
    }
    for (Index m = 0; m <= f.size() - f.dim(); ++m) {
      SubsetStrategy strategy;
      strategy.budget = opts.subset_budget;
      ++result.instances;
      if (is_m_erasure_robust(f, m, strategy).robust !=
          is_m_erasure_robust(uf, m, strategy).robust) {
        ++result.disagreements;
        if (!result.details.contains("counterexample")) {
          result.details["counterexample"] = Json{{"frame", t}, {"m", m}};
        }
      }
    }
  }
  result.pass = result.disagreements == 0;
  return result;
}

/// The four-term perturbed-dual operator must equal the direct partial
/// frame operator of the perturbed dual entrywise, and its invertibility
/// must reproduce the MRC verdict; the canonical-dual operator likewise.
inline CheckResult check_perturbed_dual_operator(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "perturbed_dual_operator";
  result.description =
      "operator invertibility matches the perturbed dual's MRC verdict, and the "
      "four-term expansion matches the direct computation";
  Rng root(opts.seed);
  Rng stream = root.fork(103);
  for (int t = 0; t < opts.operator_frames; ++t) {
    Rng inst = stream.fork(static_cast<std::uint64_t>(t));
    const Frame f = detail::sample_frame(inst.fork(0), opts.tol, 2, 6, 1, 4);
    const DualPerturbation h = random_dual_perturbation(f, inst.fork(1).next_u64());
    const DualPair pair = perturbed_dual(canonical_dual(f), h);
    const Index max_erase = f.size() - f.dim();
    Rng pick = inst.fork(2);
    const Index k = 1 + static_cast<Index>(pick.below(static_cast<std::uint64_t>(max_erase)));
    std::vector<Index> subset = detail::sample_subset(pick, f.size(), k);
    ErasureSet erased = ErasureSet::of(subset, f.size());
    if (!satisfies_mrc(f, erased).satisfied) continue;  // generic frames: measure zero

    const Matrix op = perturbed_dual_mrc_operator(f, h, erased);
    const Matrix direct = partial_frame_operator(pair.dual(), erased);
    result.worst_residual = std::max(result.worst_residual, max_abs(op - direct));

    const MrcVerdict dual_verdict = satisfies_mrc(pair.dual(), erased);
    const RankInfo op_rank = rank_info(op, opts.tol);
    const bool op_marginal = op_rank.sigma_min > op_rank.threshold / 10.0 &&
                             op_rank.sigma_min < op_rank.threshold * 10.0;
    if (dual_verdict.marginal || op_marginal) {
      ++result.marginal;
    } else {
      ++result.instances;
      if ((op_rank.rank == f.dim()) != dual_verdict.satisfied) {
        ++result.disagreements;
        if (!result.details.contains("counterexample")) {
          result.details["counterexample"] =
              Json{{"frame", t}, {"erased", detail::subset_json(subset)}};
        }
      }
    }

    // canonical-dual specialization: I - S^{-1} F_L F_L^H decides the MRC
    // for S^{-1}F
    const Matrix op0 = canonical_mrc_operator(f, erased);
    const MrcVerdict canon_verdict = satisfies_mrc(canonical_dual(f).dual(), erased);
    const RankInfo op0_rank = rank_info(op0, opts.tol);
    const bool op0_marginal = op0_rank.sigma_min > op0_rank.threshold / 10.0 &&
                              op0_rank.sigma_min < op0_rank.threshold * 10.0;
    if (canon_verdict.marginal || op0_marginal) {
      ++result.marginal;
    } else {
      ++result.instances;
      if ((op0_rank.rank == f.dim()) != canon_verdict.satisfied) {
        ++result.disagreements;
        if (!result.details.contains("counterexample_canonical")) {
          result.details["counterexample_canonical"] =
              Json{{"frame", t}, {"erased", detail::subset_json(subset)}};
        }
      }
    }
  }
  result.details["identity_residual"] = result.worst_residual;
  result.pass = result.disagreements == 0 && result.worst_residual <= 1e-8;
  return result;
}

/// For full-spark frames with the tail a basis, the analysis range equals
/// the null space of the Gamma matrix.
inline CheckResult check_gamma_nullspace(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "gamma_nullspace";
  result.description = "analysis range equals the Gamma null space (mutual projections)";
  Rng root(opts.seed);
  Rng stream = root.fork(104);
  for (int t = 0; t < opts.gamma_frames; ++t) {
    Rng inst = stream.fork(static_cast<std::uint64_t>(t));
    Frame f = detail::sample_frame(inst.fork(0), opts.tol, 2, 6, 1, 4);
    for (std::uint64_t retry = 1; spark(f) != f.dim() + 1; ++retry) {
      // resample the measure-zero non-generic draws
      f = detail::sample_frame(inst.fork(retry), opts.tol, 2, 6, 1, 4);
    }
    const Index m = f.size() - f.dim();
    const GammaMatrix gamma = build_gamma(f, m);
    const RangeNullspaceCheck check = verify_range_equals_nullspace(f, gamma);
    ++result.instances;
    result.worst_residual = std::max(result.worst_residual, check.max_residual);
    if (!(check.max_residual <= 1e-8) || check.range_dim != f.dim() ||
        check.nullspace_dim != f.dim()) {
      ++result.disagreements;
      if (!result.details.contains("counterexample")) {
        result.details["counterexample"] = Json{{"frame", t}, {"residual", check.max_residual}};
      }
    }
  }
  result.pass = result.disagreements == 0;
  return result;
}

/// Every m-column subset of the Gamma matrix of an m-erasure robust frame
/// has full rank.
inline CheckResult check_gamma_columns(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "gamma_column_independence";
  result.description = "every m-subset of Gamma's columns is linearly independent";
  Rng root(opts.seed);
  Rng stream = root.fork(104);  // same stream as check_gamma_nullspace: same frames
  double min_sigma = std::numeric_limits<double>::infinity();
  for (int t = 0; t < opts.gamma_frames; ++t) {
    Rng inst = stream.fork(static_cast<std::uint64_t>(t));
    Frame f = detail::sample_frame(inst.fork(0), opts.tol, 2, 6, 1, 4);
    for (std::uint64_t retry = 1; spark(f) != f.dim() + 1; ++retry) {
      f = detail::sample_frame(inst.fork(retry), opts.tol, 2, 6, 1, 4);
    }
    const Index m = f.size() - f.dim();
    const GammaMatrix gamma = build_gamma(f, m);
    SubsetStrategy strategy;
    strategy.budget = opts.subset_budget;
    const ColumnIndependenceReport report =
        gamma_columns_independent(gamma, m, opts.tol, strategy);
    ++result.instances;
    min_sigma = std::min(min_sigma, report.min_sigma);
    if (!report.independent || !(report.min_sigma > 1e-10)) {
      ++result.disagreements;
      if (!result.details.contains("counterexample")) {
        result.details["counterexample"] =
            Json{{"frame", t},
                 {"witness", report.witness ? detail::subset_json(*report.witness) : Json()}};
      }
    }
  }
  result.details["min_sigma"] = std::isfinite(min_sigma) ? min_sigma : 0.0;
  result.pass = result.disagreements == 0;
  return result;
}

/// Two clauses: (a) the expansion-based excess-m property holds exactly when
/// the frame is m-erasure robust; (b) after any m-erasure of a uniformly
/// m-excess frame the reduced lower frame bound stays above
/// A / (a m + 1) - 1e-8 with a the largest squared expansion coefficient.
inline CheckResult check_excess_robustness(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "excess_robustness";
  result.description =
      "excess/robustness equivalence and the reduced lower frame bound floor";
  Rng root(opts.seed);
  Rng stream = root.fork(105);

  std::vector<Frame> frames = {fixtures::E2(), fixtures::M3(), fixtures::U3()};
  for (int t = 0; t < opts.excess_frames; ++t) {
    frames.push_back(detail::sample_frame(stream.fork(static_cast<std::uint64_t>(t)), opts.tol));
  }

  std::uint64_t equivalence_failures = 0;
  std::uint64_t bound_failures = 0;
  std::uint64_t bound_instances = 0;
  double worst_margin = std::numeric_limits<double>::infinity();

  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Frame& f = frames[t];
    const Index n = f.size();
    const double full_lower = frame_bounds(f).lower;
    const Index sup = n - f.dim();

    // expansion route: every |Lambda| = m admits coefficients reproducing
    // the erased vectors from the survivors
    const auto has_expansion_property = [&](Index m) {
      bool ok = true;
      for_each_combination(n, m, [&](const std::vector<Index>& subset) {
        const ErasureSet erased = ErasureSet::of(subset, n);
        const Matrix survivors = select_columns(f.synthesis(), erased.complement());
        const Matrix lost = select_columns(f.synthesis(), subset);
        const Matrix coeffs = pinv_solve(survivors, lost, f.tol());
        if (max_abs(survivors * coeffs - lost) > f.tol().eq_tol) {
          ok = false;
          return false;
        }
        return true;
      });
      return ok;
    };

    Index uniform = 0;
    for (Index m = 0; m <= std::min(sup + 1, n - 1); ++m) {
      SubsetStrategy strategy;
      strategy.budget = opts.subset_budget;
      const bool robust = is_m_erasure_robust(f, m, strategy).robust;
      const bool expansion = has_expansion_property(m);
      ++result.instances;
      if (robust != expansion) {
        ++equivalence_failures;
        if (!result.details.contains("equivalence_counterexample")) {
          result.details["equivalence_counterexample"] = Json{{"frame", t}, {"m", m}};
        }
      }
      if (robust) uniform = m;
    }

    for (Index m = 1; m <= uniform; ++m) {
      for_each_combination(n, m, [&](const std::vector<Index>& subset) {
        const ErasureSet erased = ErasureSet::of(subset, n);
        const Matrix survivors = select_columns(f.synthesis(), erased.complement());
        const Matrix lost = select_columns(f.synthesis(), subset);
        const Matrix coeffs = pinv_solve(survivors, lost, f.tol());
        const double a = coeffs.size() == 0 ? 0.0 : coeffs.cwiseAbs2().maxCoeff();
        const double floor = full_lower / (a * static_cast<double>(m) + 1.0);
        const double reduced_lower = satisfies_mrc(f, erased).reduced_bounds->lower;
        ++bound_instances;
        worst_margin = std::min(worst_margin, reduced_lower - floor);
        if (reduced_lower < floor - 1e-8) {
          ++bound_failures;
          if (!result.details.contains("bound_counterexample")) {
            result.details["bound_counterexample"] =
                Json{{"frame", t},
                     {"erased", detail::subset_json(subset)},
                     {"reduced_lower", reduced_lower},
                     {"claimed_floor", floor},
                     {"max_sq_coefficient", a}};
          }
        }
        return true;
      });
    }
  }

  result.disagreements = equivalence_failures + bound_failures;
  result.details["equivalence_failures"] = equivalence_failures;
  result.details["bound_instances"] = bound_instances;
  result.details["bound_failures"] = bound_failures;
  result.details["worst_bound_margin"] =
      std::isfinite(worst_margin) ? worst_margin : 0.0;
  result.pass = equivalence_failures == 0 && bound_failures == 0;
  return result;
}

/// Bridge sets exist exactly for MRC-satisfying erasures; valid plans give a
/// nilpotent reduced error operator and exact recovery.
inline CheckResult check_bridging(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "bridge_recovery";
  result.description =
      "bridge-set existence matches the MRC; bridged recovery is exact and the "
      "reduced error operator is nilpotent";
  Rng root(opts.seed);
  Rng stream = root.fork(106);
  double worst_nilpotency = 0.0;
  double worst_recovery = 0.0;
  for (int t = 0; t < opts.bridge_pairs; ++t) {
    Rng inst = stream.fork(static_cast<std::uint64_t>(t));
    const Frame f = detail::sample_frame(inst.fork(0), opts.tol, 2, 5, 1, 4);
    DualPair pair = canonical_dual(f);
    if (t % 2 == 1) {
      DualPerturbation h = random_dual_perturbation(f, inst.fork(1).next_u64());
      h.vectors *= 0.5;
      pair = perturbed_dual(pair, h);
    }
    const Index n = f.size();
    const Index max_erase = n - f.dim();
    Rng pick = inst.fork(2);

    // MRC-satisfying erasure: bridge must exist, recovery must be exact
    const Index k = 1 + static_cast<Index>(pick.below(static_cast<std::uint64_t>(max_erase)));
    const ErasureSet erased = ErasureSet::of(detail::sample_subset(pick, n, k), n);
    ++result.instances;
    if (!satisfies_mrc(f, erased).satisfied) continue;
    try {
      const BridgePlan plan = find_bridge_set(pair, erased);
      const Matrix e = reduced_error_operator(pair, plan);
      worst_nilpotency = std::max(worst_nilpotency, (e * e).norm());
      Rng sig = inst.fork(3);
      for (int s = 0; s < opts.bridge_signals; ++s) {
        Vector signal(f.dim());
        for (Index i = 0; i < f.dim(); ++i) signal(i) = sig.complex_gaussian();
        const CoefficientVector coeffs = analysis(pair.dual(), signal);
        const Vector recovered =
            recover(pair, plan, ReceivedCoefficients::erase_from(coeffs, erased));
        worst_recovery =
            std::max(worst_recovery, (recovered - signal).norm() / signal.norm());
      }
    } catch (const Error& e) {
      ++result.disagreements;
      if (!result.details.contains("counterexample")) {
        result.details["counterexample"] =
            Json{{"pair", t},
                 {"erased", detail::subset_json(erased.indices())},
                 {"error", errc_name(e.code())}};
      }
      continue;
    }

    // MRC-violating erasure (too many indices): NoBridge is mandatory
    if (max_erase + 1 < n) {
      const ErasureSet bad =
          ErasureSet::of(detail::sample_subset(pick, n, max_erase + 1), n);
      ++result.instances;
      bool existence = true;
      try {
        find_bridge_set(pair, bad);
      } catch (const NoBridgeError&) {
        existence = false;
      }
      if (existence != satisfies_mrc(f, bad).satisfied) {
        ++result.disagreements;
        if (!result.details.contains("counterexample")) {
          result.details["counterexample"] =
              Json{{"pair", t}, {"erased", detail::subset_json(bad.indices())}};
        }
      }
    }

    // mixed-size agreement sweep
    Rng agree = inst.fork(4);
    const Index ka = 1 + static_cast<Index>(agree.below(static_cast<std::uint64_t>(n - 1)));
    const ErasureSet any = ErasureSet::of(detail::sample_subset(agree, n, ka), n);
    ++result.instances;
    bool existence = true;
    try {
      find_bridge_set(pair, any);
    } catch (const NoBridgeError&) {
      existence = false;
    }
    if (existence != satisfies_mrc(f, any).satisfied) {
      ++result.disagreements;
      if (!result.details.contains("counterexample")) {
        result.details["counterexample"] =
            Json{{"pair", t}, {"erased", detail::subset_json(any.indices())}};
      }
    }
  }
  result.details["worst_nilpotency"] = worst_nilpotency;
  result.details["worst_recovery_error"] = worst_recovery;
  result.worst_residual = std::max(worst_nilpotency, worst_recovery);
  result.pass =
      result.disagreements == 0 && worst_nilpotency <= 1e-8 && worst_recovery <= 1e-8;
  return result;
}

/// Three-way agreement: robustness to one erasure, existence of an
/// everywhere-nonzero dependency, and existence of a complement witness in
/// the dilation.
inline CheckResult check_one_erasure(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "one_erasure_threeway";
  result.description =
      "1-erasure robustness, nonzero-dependency certificates, and dilation "
      "complement witnesses coincide";
  Rng root(opts.seed);
  Rng stream = root.fork(107);
  std::vector<Frame> frames;
  for (int t = 0; t < opts.one_erasure_frames; ++t) {
    frames.push_back(detail::sample_frame(stream.fork(static_cast<std::uint64_t>(t)), opts.tol));
  }
  Rng eng = root.fork(108);
  for (int t = 0; t < opts.one_erasure_engineered; ++t) {
    frames.push_back(detail::isolated_vector_frame(eng.fork(static_cast<std::uint64_t>(t)), opts.tol));
  }
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Frame& f = frames[t];
    const bool robust = is_m_erasure_robust(f, 1).robust;
    const OneErasureCertificate cert = one_erasure_certificate(f);
    const auto witness = complement_witness(naimark_dilate(f), f.tol());
    ++result.instances;
    if (cert.present()) {
      result.worst_residual =
          std::max(result.worst_residual, max_abs(f.synthesis() * *cert.coefficients));
    }
    if (cert.present() != robust || witness.has_value() != robust) {
      ++result.disagreements;
      if (!result.details.contains("counterexample")) {
        result.details["counterexample"] = Json{{"frame", t},
                                                {"robust", robust},
                                                {"certificate", cert.present()},
                                                {"witness", witness.has_value()}};
      }
    }
  }
  result.pass = result.disagreements == 0 && result.worst_residual <= 1e-8;
  return result;
}

/// The dilation projection reproduces the Parseval rescaling on the
/// orthonormal basis, is idempotent, and satisfies the norm identity.
inline CheckResult check_dilation_fidelity(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "dilation_fidelity";
  result.description =
      "P e_i recovers the embedded Parseval vectors; P is a projection; the "
      "norm identity holds";
  Rng root(opts.seed);
  Rng stream = root.fork(109);
  double worst_pe = 0.0, worst_proj = 0.0, worst_norm = 0.0;
  for (int t = 0; t < opts.dilation_frames; ++t) {
    const Frame f = detail::sample_frame(stream.fork(static_cast<std::uint64_t>(t)), opts.tol);
    const Dilation d = naimark_dilate(f);
    const Matrix parseval = d.embedding.adjoint();  // columns S^{-1/2} f_i
    const Matrix defect = d.projection * d.onb - d.embedding * parseval;
    for (Index i = 0; i < f.size(); ++i) {
      worst_pe = std::max(worst_pe, defect.col(i).norm());
    }
    worst_proj = std::max(worst_proj, max_abs(d.projection * d.projection - d.projection));
    worst_norm = std::max(worst_norm, norm_identity_check(f));
    ++result.instances;
  }
  result.details["worst_projection_defect"] = worst_proj;
  result.details["worst_basis_defect"] = worst_pe;
  result.details["worst_norm_identity"] = worst_norm;
  result.worst_residual = std::max({worst_pe, worst_proj, worst_norm});
  result.pass = result.worst_residual <= 1e-8;
  return result;
}

/// Frame JSON round-trips preserve every coordinate bit-exactly.
inline CheckResult check_roundtrip(const VerifyOptions& opts) {
  CheckResult result;
  result.id = "json_roundtrip";
  result.description = "frame JSON round-trips at full double precision";
  Rng root(opts.seed);
  Rng stream = root.fork(110);
  for (int t = 0; t < opts.roundtrip_frames; ++t) {
    const Frame f = detail::sample_frame(stream.fork(static_cast<std::uint64_t>(t)), opts.tol);
    const std::string text = frame_to_json(f).dump();
    const Frame back = frame_from_json(Json::parse(text));
    ++result.instances;
    bool exact = back.dim() == f.dim() && back.size() == f.size();
    if (exact) {
      for (Index i = 0; exact && i < f.dim(); ++i) {
        for (Index j = 0; exact && j < f.size(); ++j) {
          exact = f.synthesis()(i, j).real() == back.synthesis()(i, j).real() &&
                  f.synthesis()(i, j).imag() == back.synthesis()(i, j).imag();
        }
      }
    }
    if (!exact) {
      ++result.disagreements;
      if (!result.details.contains("counterexample")) {
        result.details["counterexample"] = Json{{"frame", t}};
      }
    }
  }
  result.pass = result.disagreements == 0;
  return result;
}

inline std::vector<CheckResult> run_all_checks(const VerifyOptions& opts) {
  return {check_mrc_canonical_duality(opts), check_unitary_invariance(opts),
          check_perturbed_dual_operator(opts), check_gamma_nullspace(opts),
          check_gamma_columns(opts),          check_excess_robustness(opts),
          check_bridging(opts),               check_one_erasure(opts),
          check_dilation_fidelity(opts),      check_roundtrip(opts)};
}

inline Json checks_to_json(const std::vector<CheckResult>& checks) {
  Json out = Json::object();
  for (const auto& c : checks) out[c.id] = c.to_json();
  return out;
}

}  // namespace framekit
