#include <catch2/catch_amalgamated.hpp>

#include "framekit/robustness.hpp"

using namespace framekit;
using Catch::Approx;

namespace {

Frame duplicated_basis() {
  // {e1, e1, e2}
  Matrix m(2, 3);
  m << Complex(1, 0), Complex(1, 0), Complex(0, 0),
       Complex(0, 0), Complex(0, 0), Complex(1, 0);
  return Frame::validate(std::move(m));
}

Frame lopsided_c3() {
  // {e1, e1, e2, e3} in C^3: sup excess 1, but erasing e2 kills the span
  Matrix m(3, 4);
  m.setZero();
  m(0, 0) = m(0, 1) = Complex(1, 0);
  m(1, 2) = Complex(1, 0);
  m(2, 3) = Complex(1, 0);
  return Frame::validate(std::move(m));
}

}  // namespace

TEST_CASE("robustness verdicts on the fixtures", "[robustness]") {
  const RobustnessReport e2 = is_m_erasure_robust(fixtures::E2(), 1);
  REQUIRE_FALSE(e2.robust);
  REQUIRE(e2.exhaustive);
  REQUIRE(e2.failing_subset == std::vector<Index>{0});

  const RobustnessReport m3 = is_m_erasure_robust(fixtures::M3(), 1);
  REQUIRE(m3.robust);
  REQUIRE(m3.checked_subsets == 3);

  REQUIRE(is_m_erasure_robust(fixtures::U3(), 1).robust);
  const RobustnessReport u3_two = is_m_erasure_robust(fixtures::U3(), 2);
  REQUIRE_FALSE(u3_two.robust);
  REQUIRE(u3_two.failing_subset == std::vector<Index>{0, 1});

  REQUIRE_THROWS_AS(is_m_erasure_robust(fixtures::E2(), 2), Error);
  REQUIRE_THROWS_AS(is_m_erasure_robust(fixtures::E2(), -1), Error);
}

TEST_CASE("exhaustive reports count every subset", "[robustness]") {
  const RobustnessReport r = is_m_erasure_robust(random_frame(2, 6, 3), 2);
  REQUIRE(r.exhaustive);
  REQUIRE(r.checked_subsets == binomial(6, 2));
}

TEST_CASE("sampled strategy is deterministic and flagged", "[robustness]") {
  SubsetStrategy strategy;
  strategy.kind = SubsetStrategy::Kind::Sampled;
  strategy.seed = 9;
  strategy.trials = 50;
  const Frame f = random_frame(2, 8, 1);
  const RobustnessReport a = is_m_erasure_robust(f, 3, strategy);
  const RobustnessReport b = is_m_erasure_robust(f, 3, strategy);
  REQUIRE_FALSE(a.exhaustive);
  REQUIRE(a.checked_subsets == 50);
  REQUIRE(a.robust == b.robust);
  REQUIRE(a.failing_subset == b.failing_subset);
}

TEST_CASE("the auto strategy samples beyond the budget", "[robustness]") {
  SubsetStrategy strategy;
  strategy.budget = 10;  // force sampling (C(8,3) = 56 > 10)
  strategy.trials = 25;
  const RobustnessReport r = is_m_erasure_robust(random_frame(2, 8, 2), 3, strategy);
  REQUIRE_FALSE(r.exhaustive);
  REQUIRE(r.trials == 25);
}

TEST_CASE("spark on the fixtures", "[robustness]") {
  REQUIRE(spark(fixtures::E2()) == 3);  // independent set: N + 1
  REQUIRE(spark(fixtures::M3()) == 3);  // full spark
  REQUIRE(spark(duplicated_basis()) == 2);
}

TEST_CASE("spark detects a zero vector", "[robustness]") {
  Matrix m(2, 3);
  m << Complex(1, 0), Complex(0, 0), Complex(0, 0),
       Complex(0, 0), Complex(1, 0), Complex(0, 0);
  REQUIRE(spark(Frame::validate(std::move(m))) == 1);
}

TEST_CASE("excess on the fixtures", "[robustness]") {
  const ExcessReport e2 = excess(fixtures::E2());
  REQUIRE(e2.sup_excess == 0);
  REQUIRE(e2.uniform_excess == 0);

  const ExcessReport m3 = excess(fixtures::M3());
  REQUIRE(m3.sup_excess == 1);
  REQUIRE(m3.uniform_excess == 1);

  // the two excess notions can disagree
  const ExcessReport lop = excess(lopsided_c3());
  REQUIRE(lop.sup_excess == 1);
  REQUIRE(lop.uniform_excess == 0);
}

TEST_CASE("uniform excess means robust at exactly that depth", "[robustness]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Frame f = random_frame(2 + seed % 3, 4 + seed % 4, seed);
    const ExcessReport report = excess(f);
    REQUIRE(report.uniform_excess <= report.sup_excess);
    REQUIRE(report.sup_excess == f.size() - f.dim());
    REQUIRE(is_m_erasure_robust(f, report.uniform_excess).robust);
    if (report.uniform_excess < report.sup_excess) {
      REQUIRE_FALSE(is_m_erasure_robust(f, report.uniform_excess + 1).robust);
    }
  }
}

TEST_CASE("expansion coefficients on the fixtures", "[robustness]") {
  // U3: e1 = -1*e2 + 1*(e1+e2)
  const Matrix u3 = expansion_coefficients(fixtures::U3(), 1);
  REQUIRE(u3.rows() == 1);
  REQUIRE(u3.cols() == 2);
  REQUIRE(u3(0, 0).real() == Approx(-1.0));
  REQUIRE(u3(0, 1).real() == Approx(1.0));

  // M3: f1 = -f2 - f3
  const Matrix m3 = expansion_coefficients(fixtures::M3(), 1);
  REQUIRE(m3(0, 0).real() == Approx(-1.0));
  REQUIRE(m3(0, 1).real() == Approx(-1.0));

  try {
    expansion_coefficients(fixtures::E2(), 1);
    FAIL("expected TailNotABasis");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::TailNotABasis);
  }
}

TEST_CASE("expansion residual stays below eq_tol", "[robustness]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame f = random_frame(3, 5, seed);
    const Index m = 2;
    const Matrix d = expansion_coefficients(f, m);
    const Matrix tail = f.synthesis().rightCols(3);
    for (Index i = 0; i < m; ++i) {
      const Vector rebuilt = tail * d.row(i).transpose();
      REQUIRE((rebuilt - f.vec(i)).norm() <= f.tol().eq_tol);
    }
  }
}

TEST_CASE("gamma matrices of the fixtures", "[robustness]") {
  const GammaMatrix u3 = build_gamma(fixtures::U3(), 1);
  REQUIRE(u3.entries.rows() == 1);
  REQUIRE(u3.entries(0, 0).real() == Approx(1.0));
  REQUIRE(u3.entries(0, 1).real() == Approx(1.0));
  REQUIRE(u3.entries(0, 2).real() == Approx(-1.0));

  const GammaMatrix m3 = build_gamma(fixtures::M3(), 1);
  REQUIRE(m3.entries(0, 0).real() == Approx(1.0));
  REQUIRE(m3.entries(0, 1).real() == Approx(1.0));
  REQUIRE(m3.entries(0, 2).real() == Approx(1.0));

  const GammaMatrix degenerate = build_gamma(fixtures::M3(), 0);
  REQUIRE(degenerate.entries.rows() == 0);
  REQUIRE(degenerate.entries.cols() == 3);
}

TEST_CASE("gamma conjugates the expansion coefficients", "[robustness]") {
  Matrix m(2, 3);
  m << Complex(1, 0), Complex(0, 0), Complex(1, 1),
       Complex(0, 0), Complex(1, 0), Complex(0, 2);
  const Frame f = Frame::validate(std::move(m));
  const Matrix d = expansion_coefficients(f, 1);
  const GammaMatrix gamma = build_gamma(f, 1);
  for (Index j = 0; j < 2; ++j) {
    REQUIRE(gamma.entries(0, 1 + j) == -std::conj(d(0, j)));
  }
}

TEST_CASE("analysis range equals the gamma null space on the fixtures", "[robustness]") {
  const Frame u3 = fixtures::U3();
  const RangeNullspaceCheck u3_check = verify_range_equals_nullspace(u3, build_gamma(u3, 1));
  REQUIRE(u3_check.equal);
  REQUIRE(u3_check.max_residual <= 1e-10);
  REQUIRE(u3_check.range_dim == 2);
  REQUIRE(u3_check.nullspace_dim == 2);

  const Frame m3 = fixtures::M3();
  REQUIRE(verify_range_equals_nullspace(m3, build_gamma(m3, 1)).equal);

  // mismatched: U3's analysis range against M3's gamma
  const RangeNullspaceCheck crossed = verify_range_equals_nullspace(u3, build_gamma(m3, 1));
  REQUIRE_FALSE(crossed.equal);

  REQUIRE_THROWS_AS(verify_range_equals_nullspace(fixtures::E2(), build_gamma(m3, 1)), Error);
}

TEST_CASE("range equals null space for random full-spark frames", "[robustness]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame f = random_frame(3, 5, seed);
    if (spark(f) != 4) continue;  // generic draws are full spark
    const ReorderedFrame reordered = reorder_for_basis_tail(f, 2);
    const GammaMatrix gamma = build_gamma(reordered.frame, 2);
    const RangeNullspaceCheck check = verify_range_equals_nullspace(reordered.frame, gamma);
    REQUIRE(check.equal);
    REQUIRE(check.max_residual <= 1e-8);
  }
}

TEST_CASE("gamma column independence", "[robustness]") {
  const ColumnIndependenceReport u3 =
      gamma_columns_independent(build_gamma(fixtures::U3(), 1), 1);
  REQUIRE(u3.independent);
  REQUIRE(u3.checked_subsets == 3);
  REQUIRE(u3.min_sigma > 0.9);

  REQUIRE(gamma_columns_independent(build_gamma(fixtures::M3(), 1), 1).independent);

  GammaMatrix with_zero;
  with_zero.m = 1;
  with_zero.entries = Matrix(1, 3);
  with_zero.entries << Complex(1, 0), Complex(0, 0), Complex(-1, 0);
  const ColumnIndependenceReport bad = gamma_columns_independent(with_zero, 1);
  REQUIRE_FALSE(bad.independent);
  REQUIRE(bad.witness == std::vector<Index>{1});

  REQUIRE_THROWS_AS(gamma_columns_independent(with_zero, 2), Error);
}

TEST_CASE("projecting preserves the Gramian under the identity", "[robustness]") {
  const Frame m3 = fixtures::M3();
  const Frame projected = project_frame(m3, Matrix::Identity(2, 2));
  REQUIRE(projected.dim() == 2);
  REQUIRE(max_abs(gramian(projected) - gramian(m3)) <= 1e-10);
}

TEST_CASE("rank-one projection of M3 stays 1-erasure robust", "[robustness]") {
  Matrix p = Matrix::Zero(2, 2);
  p(0, 0) = Complex(1, 0);
  const Frame projected = project_frame(fixtures::M3(), p);
  REQUIRE(projected.dim() == 1);
  REQUIRE(projected.size() == 3);
  // entries 1, -1/2, -1/2 up to the sign of the chosen basis vector
  REQUIRE(std::abs(projected.synthesis()(0, 0)) == Approx(1.0));
  REQUIRE(std::abs(projected.synthesis()(0, 1)) == Approx(0.5));
  REQUIRE(std::abs(projected.synthesis()(0, 2)) == Approx(0.5));
  REQUIRE(is_m_erasure_robust(projected, 1).robust);
}

TEST_CASE("projection never lowers the robustness degree", "[robustness]") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Frame f = random_frame(4, 7, seed);
    Rng rng(seed + 23);
    const Matrix basis = range_basis(gaussian_matrix(4, 2, rng), f.tol());
    const Matrix p = basis * basis.adjoint();
    const Frame projected = project_frame(f, p);
    const auto degree = [](const Frame& fr) {
      Index best = 0;
      for (Index m = 1; m < fr.size(); ++m) {
        if (!is_m_erasure_robust(fr, m).robust) break;
        best = m;
      }
      return best;
    };
    REQUIRE(degree(projected) >= degree(f));
  }
}

TEST_CASE("project_frame rejects non-projections", "[robustness]") {
  Matrix skew(2, 2);
  skew << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  try {
    project_frame(fixtures::E2(), skew);
    FAIL("expected NotAProjection");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::NotAProjection);
  }
  try {
    project_frame(fixtures::E2(), Matrix::Zero(2, 2));
    FAIL("expected ZeroRange");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::ZeroRange);
  }
}

TEST_CASE("robustness is invariant under unitary images", "[robustness]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Frame f = random_frame(3, 6, seed);
    Rng rng(seed + 41);
    const Frame uf = f.transformed(random_unitary(3, rng));
    for (Index m = 0; m <= 3; ++m) {
      REQUIRE(is_m_erasure_robust(f, m).robust == is_m_erasure_robust(uf, m).robust);
    }
  }
}

TEST_CASE("uniform excess implies the MRC for every subset of that size", "[robustness]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Frame f = random_frame(2 + seed % 3, 5 + seed % 3, seed);
    const Index m = excess(f).uniform_excess;
    if (m == 0) continue;
    for_each_combination(f.size(), m, [&](const std::vector<Index>& subset) {
      REQUIRE(satisfies_mrc(f, ErasureSet::of(subset, f.size())).satisfied);
      return true;
    });
  }
}

TEST_CASE("reduced lower bound obeys the aggregate expansion floor", "[robustness]") {
  // The defensible floor after an m-erasure uses the total expansion weight:
  // lower >= A / (a m (N - m) + 1) with a the largest squared coefficient.
  // (The tighter m-only floor fails, e.g. for the Mercedes-Benz frame.)
  std::vector<Frame> frames = {fixtures::M3(), fixtures::U3()};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    frames.push_back(random_frame(2 + seed % 3, 4 + seed % 4, seed));
  }
  for (const Frame& f : frames) {
    const Index n = f.size();
    const Index m = excess(f).uniform_excess;
    if (m == 0) continue;
    const double full_lower = frame_bounds(f).lower;
    for_each_combination(n, m, [&](const std::vector<Index>& subset) {
      const ErasureSet erased = ErasureSet::of(subset, n);
      const Matrix survivors = select_columns(f.synthesis(), erased.complement());
      const Matrix lost = select_columns(f.synthesis(), subset);
      const Matrix coeffs = pinv_solve(survivors, lost, f.tol());
      const double a = coeffs.cwiseAbs2().maxCoeff();
      const double floor =
          full_lower / (a * static_cast<double>(m) * static_cast<double>(n - m) + 1.0);
      const double reduced = satisfies_mrc(f, erased).reduced_bounds->lower;
      REQUIRE(reduced >= floor - 1e-8);
      return true;
    });
  }
}

TEST_CASE("the m-only floor fails on the Mercedes-Benz frame", "[robustness]") {
  // erasing vector 1 leaves diag(1/2, 3/2); with a = 1 and m = 1 the floor
  // A/(am+1) = 0.75 exceeds the true reduced lower bound 0.5
  const Frame m3 = fixtures::M3();
  const ErasureSet erased = ErasureSet::of({0}, 3);
  const Matrix coeffs = expansion_coefficients(m3, 1);
  const double a = coeffs.cwiseAbs2().maxCoeff();
  REQUIRE(a == Approx(1.0));
  const double claimed_floor = frame_bounds(m3).lower / (a * 1 + 1);
  const double reduced = satisfies_mrc(m3, erased).reduced_bounds->lower;
  REQUIRE(claimed_floor == Approx(0.75));
  REQUIRE(reduced == Approx(0.5));
  REQUIRE(reduced < claimed_floor - 1e-8);
}

TEST_CASE("reorder_for_basis_tail records its permutation", "[robustness]") {
  Matrix m(2, 3);
  // tail {e1, 2e1} is dependent; a reorder must fix it
  m << Complex(0, 0), Complex(1, 0), Complex(2, 0),
       Complex(1, 0), Complex(0, 0), Complex(0, 0);
  const Frame f = Frame::validate(std::move(m));
  const ReorderedFrame reordered = reorder_for_basis_tail(f, 1);
  const Matrix tail = reordered.frame.synthesis().rightCols(2);
  REQUIRE(rank_info(tail, f.tol()).rank == 2);
  REQUIRE(reordered.permutation.size() == 3);
  for (Index k = 0; k < 3; ++k) {
    REQUIRE(max_abs(reordered.frame.synthesis().col(k) -
                    f.synthesis().col(reordered.permutation[static_cast<std::size_t>(k)])) == 0.0);
  }
}
