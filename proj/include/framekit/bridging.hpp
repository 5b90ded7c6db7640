#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "framekit/mrc.hpp"

namespace framekit {

// Bridging replaces each erased dual vector g_j, j in Lambda, by
// g'_j = sum_{l in delta} c_l^{(j)} g_l drawn from a bridge set
// delta in Lambda^c, chosen so that <f_j, g_k - g'_k> = 0 for all j,k in
// Lambda. The coefficients solve the bridge equation
// Xi(F,G,Lambda,delta) C-bar = Xi(F,G,Lambda,Lambda), where Xi holds the
// inner products <f_lambda, g_delta>. Cross-orthogonality makes the reduced
// error operator nilpotent, which turns the bridged partial reconstruction
// into exact recovery.

/// Xi(F,G,Lambda,targets): entry (r,c) = <f_{lambda_r}, g_{targets_c}>.
/// `targets` is either a bridge set inside Lambda^c or Lambda itself (the
/// right-hand side of the bridge equation); anything partially overlapping
/// Lambda is rejected.
inline Matrix bridge_matrix(const DualPair& pair, const ErasureSet& erased,
                            const std::vector<Index>& targets) {
  if (erased.frame_size() != pair.size()) {
    throw Error(Errc::IndexOutOfRange, "erasure set built for a different frame size");
  }
  if (erased.empty() || targets.empty()) {
    throw Error(Errc::InvalidShape, "bridge matrix needs nonempty erased and target sets");
  }
  bool any_erased = false, any_kept = false;
  for (Index t : targets) {
    if (t < 0 || t >= pair.size()) {
      throw Error(Errc::IndexOutOfRange, "target index " + std::to_string(t + 1));
    }
    (erased.contains(t) ? any_erased : any_kept) = true;
  }
  if (any_erased && any_kept) {
    throw Error(Errc::OverlappingSets, "bridge set overlaps the erased set");
  }
  Matrix xi(erased.count(), static_cast<Index>(targets.size()));
  for (Index r = 0; r < erased.count(); ++r) {
    const Vector f_r = pair.primary().vec(erased.indices()[static_cast<std::size_t>(r)]);
    for (std::size_t c = 0; c < targets.size(); ++c) {
      xi(r, static_cast<Index>(c)) = inner(f_r, pair.dual().vec(targets[c]));
    }
  }
  return xi;
}

struct BridgePlan {
  ErasureSet erased;
  std::vector<Index> delta;        // bridge indices, subset of the complement
  Matrix coefficients;             // |delta| x |Lambda|, column k = c^{(lambda_k)}
  Matrix replacement_duals;        // dim x |Lambda|, column k = g'_{lambda_k}
  double residual = 0.0;           // bridge equation defect
};

/// Reduced error operator E~ with E~ f = sum_{j in Lambda} <f, g_j - g'_j> f_j.
/// Nilpotent (E~^2 = 0) whenever the plan's bridge equation holds.
inline Matrix reduced_error_operator(const DualPair& pair, const BridgePlan& plan) {
  Matrix e = Matrix::Zero(pair.dim(), pair.dim());
  for (Index k = 0; k < plan.erased.count(); ++k) {
    const Index j = plan.erased.indices()[static_cast<std::size_t>(k)];
    e += pair.primary().vec(j) * (pair.dual().vec(j) - plan.replacement_duals.col(k)).adjoint();
  }
  return e;
}

/// Solves the bridge equation for a given bridge set as one stacked
/// minimal-norm least-squares problem; the plan is valid only if the
/// residual stays within eq_tol.
inline BridgePlan solve_bridge(const DualPair& pair, const ErasureSet& erased,
                               const std::vector<Index>& delta) {
  for (Index t : delta) {
    if (erased.contains(t)) {
      throw Error(Errc::OverlappingSets, "bridge set overlaps the erased set");
    }
  }
  const Matrix xi = bridge_matrix(pair, erased, delta);
  const Matrix rhs = bridge_matrix(pair, erased, erased.indices());
  const Matrix c_bar = pinv_solve(xi, rhs, pair.tol());
  const double residual = max_abs(xi * c_bar - rhs);
  if (residual > pair.tol().eq_tol) {
    throw NoBridgeError(residual, "bridge equation unsolvable for this bridge set (residual " +
                                      std::to_string(residual) + ")");
  }
  BridgePlan plan;
  plan.erased = erased;
  plan.delta = delta;
  plan.coefficients = c_bar.conjugate();
  plan.replacement_duals = select_columns(pair.dual().synthesis(), delta) * plan.coefficients;
  plan.residual = residual;
  return plan;
}

/// Searches bridge sets by size, lexicographically within a size, and
/// returns the first plan that satisfies the bridge equation. A bridge set
/// exists iff the erased set satisfies the MRC, so the search stops at size
/// |Lambda|.
inline BridgePlan find_bridge_set(const DualPair& pair, const ErasureSet& erased) {
  if (erased.empty()) {
    // nothing erased: the empty plan recovers exactly
    BridgePlan plan;
    plan.erased = erased;
    plan.coefficients = Matrix(0, 0);
    plan.replacement_duals = Matrix(pair.dim(), 0);
    return plan;
  }
  if (!satisfies_mrc(pair.primary(), erased).satisfied) {
    throw NoBridgeError(0.0, "erased set violates the MRC; no bridge set exists");
  }
  const std::vector<Index> complement = erased.complement();
  const Index max_size = std::min<Index>(erased.count(), static_cast<Index>(complement.size()));
  for (Index size = 1; size <= max_size; ++size) {
    std::optional<BridgePlan> found;
    for_each_combination(static_cast<Index>(complement.size()), size,
                         [&](const std::vector<Index>& pick) {
                           std::vector<Index> delta;
                           delta.reserve(pick.size());
                           for (Index p : pick) delta.push_back(complement[static_cast<std::size_t>(p)]);
                           try {
                             found = solve_bridge(pair, erased, delta);
                             return false;
                           } catch (const NoBridgeError&) {
                             return true;
                           }
                         });
    if (found) return *found;
  }
  throw Error(Errc::NumericalFailure,
              "MRC holds but no bridge set passed the residual check; inconsistent tolerances");
}

/// Coefficient stream with erased entries: value i is present iff index i
/// was received.
struct ReceivedCoefficients {
  std::vector<std::optional<Complex>> values;

  static ReceivedCoefficients erase_from(const CoefficientVector& full,
                                         const ErasureSet& erased) {
    ReceivedCoefficients r;
    r.values.resize(static_cast<std::size_t>(full.size()));
    for (Index i = 0; i < full.size(); ++i) {
      if (!erased.contains(i)) r.values[static_cast<std::size_t>(i)] = full[i];
    }
    return r;
  }
};

/// Exact recovery from the surviving dual-side coefficients c_i = <f, g_i>:
/// computes f~ = R_Lambda + B_Lambda from the received entries, then applies
/// the nilpotency correction f^ = f~ + E~ f~.
inline Vector recover(const DualPair& pair, const BridgePlan& plan,
                      const ReceivedCoefficients& received) {
  if (static_cast<Index>(received.values.size()) != pair.size()) {
    throw Error(Errc::DimensionMismatch, "coefficient stream length does not match the pair");
  }
  if (plan.erased.frame_size() != pair.size()) {
    throw Error(Errc::InvalidPlan, "plan was built for a different frame size");
  }
  Vector partial = Vector::Zero(pair.dim());
  for (Index i : plan.erased.complement()) {
    const auto& v = received.values[static_cast<std::size_t>(i)];
    if (!v) {
      throw Error(Errc::MissingCoefficient,
                  "coefficient " + std::to_string(i + 1) + " was expected but not received");
    }
    partial += *v * pair.primary().vec(i);
  }
  // bridging supplement: <f, g'_j> = sum_l conj(c_l^{(j)}) c_l over the bridge set
  for (Index k = 0; k < plan.erased.count(); ++k) {
    const Index j = plan.erased.indices()[static_cast<std::size_t>(k)];
    Complex supplement(0, 0);
    for (std::size_t l = 0; l < plan.delta.size(); ++l) {
      const auto& v = received.values[static_cast<std::size_t>(plan.delta[l])];
      if (!v) {
        throw Error(Errc::MissingCoefficient, "bridge coefficient " +
                                                  std::to_string(plan.delta[l] + 1) +
                                                  " was expected but not received");
      }
      supplement += std::conj(plan.coefficients(static_cast<Index>(l), k)) * (*v);
    }
    partial += supplement * pair.primary().vec(j);
  }
  return partial + reduced_error_operator(pair, plan) * partial;
}

struct RandomErasures {
  double probability = 0.0;
  std::uint64_t seed = 0;
};
struct BurstErasure {
  Index start = 0;  // 0-based
  Index length = 0;
};
struct FixedErasures {
  std::vector<Index> indices;
};
using ErasureModel = std::variant<RandomErasures, BurstErasure, FixedErasures>;

struct ChannelRecord {
  Index signal = 0;
  std::vector<Index> erased;
  std::optional<Index> bridge_size;    // absent on failure
  std::optional<double> relative_error;
  std::optional<std::string> failure;  // e.g. "NoBridge"
};

struct ChannelReport {
  std::vector<ChannelRecord> records;
  Index failures = 0;
};

/// Draws an erasure set per signal, attempts bridged recovery, and reports
/// per-signal relative errors. Failures are report entries, not errors.
inline ChannelReport simulate_channel(const DualPair& pair, const std::vector<Vector>& signals,
                                      const ErasureModel& model) {
  ChannelReport report;
  Rng rng(std::holds_alternative<RandomErasures>(model)
              ? std::get<RandomErasures>(model).seed
              : 0);
  for (std::size_t s = 0; s < signals.size(); ++s) {
    ChannelRecord record;
    record.signal = static_cast<Index>(s);
    std::vector<Index> erased_indices;
    if (const auto* random = std::get_if<RandomErasures>(&model)) {
      Rng draw = rng.fork(static_cast<std::uint64_t>(s));
      for (Index i = 0; i < pair.size(); ++i) {
        if (draw.uniform01() < random->probability) erased_indices.push_back(i);
      }
      if (static_cast<Index>(erased_indices.size()) >= pair.size()) erased_indices.pop_back();
    } else if (const auto* burst = std::get_if<BurstErasure>(&model)) {
      for (Index i = burst->start; i < std::min(pair.size(), burst->start + burst->length); ++i) {
        erased_indices.push_back(i);
      }
    } else {
      erased_indices = std::get<FixedErasures>(model).indices;
    }
    record.erased = erased_indices;

    const Vector& signal = signals[s];
    try {
      const ErasureSet erased = ErasureSet::of(erased_indices, pair.size());
      const CoefficientVector coeffs = analysis(pair.dual(), signal);
      const BridgePlan plan = find_bridge_set(pair, erased);
      const Vector recovered =
          recover(pair, plan, ReceivedCoefficients::erase_from(coeffs, erased));
      record.bridge_size = static_cast<Index>(plan.delta.size());
      const double denom = std::max(signal.norm(), 1e-300);
      record.relative_error = (recovered - signal).norm() / denom;
    } catch (const Error& e) {
      record.failure = errc_name(e.code());
      ++report.failures;
    }
    report.records.push_back(std::move(record));
  }
  return report;
}

}  // namespace framekit
