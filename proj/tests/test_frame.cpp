#include <catch2/catch_amalgamated.hpp>

#include "framekit/frame.hpp"

using namespace framekit;
using Catch::Approx;

namespace {

// independent rank oracle: full-pivot LU instead of the library's SVD path
Index lu_rank(const Matrix& m) {
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank();
}

Vector v2(double a, double b) {
  Vector v(2);
  v << Complex(a, 0), Complex(b, 0);
  return v;
}

}  // namespace

TEST_CASE("frame validation accepts spanning families", "[frame]") {
  const Frame e2 = fixtures::E2();
  REQUIRE(e2.dim() == 2);
  REQUIRE(e2.size() == 2);

  const Frame m3 = fixtures::M3();
  REQUIRE(m3.size() == 3);
  REQUIRE(lu_rank(m3.synthesis()) == 2);

  REQUIRE_NOTHROW(Frame::validate(std::vector<Vector>{v2(1, 0), v2(0, 1)}));
}

TEST_CASE("frame validation rejects rank-deficient families", "[frame]") {
  try {
    Frame::validate(std::vector<Vector>{v2(1, 0), v2(2, 0)});
    FAIL("expected NotAFrame");
  } catch (const NotAFrameError& e) {
    REQUIRE(e.rank() == 1);
    REQUIRE(e.offending_singular_value() <= 1e-10);
  }
}

TEST_CASE("frame validation rejects ragged input", "[frame]") {
  Vector v3(3);
  v3 << Complex(1, 0), Complex(0, 0), Complex(0, 0);
  try {
    Frame::validate(std::vector<Vector>{v2(1, 0), v3});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("analysis computes inner products against the frame", "[frame]") {
  const CoefficientVector onb = analysis(fixtures::E2(), v2(3, 4));
  REQUIRE(onb[0] == Complex(3, 0));
  REQUIRE(onb[1] == Complex(4, 0));

  const CoefficientVector mercedes = analysis(fixtures::M3(), v2(1, 0));
  REQUIRE(mercedes[0].real() == Approx(1.0));
  REQUIRE(mercedes[1].real() == Approx(-0.5));
  REQUIRE(mercedes[2].real() == Approx(-0.5));

  // U3 analysis is (a, b, a+b)
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Vector f(2);
    f << rng.complex_gaussian(), rng.complex_gaussian();
    const CoefficientVector c = analysis(fixtures::U3(), f);
    REQUIRE(std::abs(c[0] - f(0)) < 1e-14);
    REQUIRE(std::abs(c[1] - f(1)) < 1e-14);
    REQUIRE(std::abs(c[2] - (f(0) + f(1))) < 1e-14);
  }

  REQUIRE_THROWS_AS(analysis(fixtures::E2(), Vector::Zero(3)), Error);
}

TEST_CASE("synthesis sums weighted frame vectors", "[frame]") {
  Vector c(2);
  c << Complex(3, 0), Complex(4, 0);
  REQUIRE((synthesis(fixtures::E2(), CoefficientVector{c}) - v2(3, 4)).norm() == 0.0);

  Vector dependence(3);
  dependence << Complex(1, 0), Complex(1, 0), Complex(-1, 0);
  REQUIRE(synthesis(fixtures::U3(), CoefficientVector{dependence}).norm() <= 1e-15);

  REQUIRE(synthesis(fixtures::M3(), CoefficientVector{Vector::Zero(3)}).norm() == 0.0);
}

TEST_CASE("frame operator matches its closed forms", "[frame]") {
  REQUIRE(max_abs(frame_operator(fixtures::E2()) - Matrix::Identity(2, 2)) <= 1e-15);
  REQUIRE(max_abs(frame_operator(fixtures::M3()) - 1.5 * Matrix::Identity(2, 2)) <= 1e-15);

  Matrix u3_expected(2, 2);
  u3_expected << Complex(2, 0), Complex(1, 0), Complex(1, 0), Complex(2, 0);
  REQUIRE(max_abs(frame_operator(fixtures::U3()) - u3_expected) <= 1e-15);
}

TEST_CASE("frame operator equals synthesis times analysis", "[frame]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame f = random_frame(3, 6, seed);
    REQUIRE(max_abs(frame_operator(f) - f.synthesis() * f.analysis()) <= 1e-8);
  }
}

TEST_CASE("frame bounds are the extreme frame-operator eigenvalues", "[frame]") {
  const FrameBounds e2 = frame_bounds(fixtures::E2());
  REQUIRE(e2.lower == Approx(1.0));
  REQUIRE(e2.upper == Approx(1.0));
  REQUIRE(e2.parseval(1e-8));

  const FrameBounds m3 = frame_bounds(fixtures::M3());
  REQUIRE(m3.lower == Approx(1.5));
  REQUIRE(m3.upper == Approx(1.5));
  REQUIRE(m3.tight(1e-8));
  REQUIRE_FALSE(m3.parseval(1e-8));

  const FrameBounds u3 = frame_bounds(fixtures::U3());
  REQUIRE(u3.lower == Approx(1.0));
  REQUIRE(u3.upper == Approx(3.0));
}

TEST_CASE("frame bound inequality holds on random signals", "[frame]") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Frame f = random_frame(3, 5, seed);
    const FrameBounds bounds = frame_bounds(f);
    Rng rng(seed + 100);
    for (int t = 0; t < 100; ++t) {
      Vector x(3);
      for (Index i = 0; i < 3; ++i) x(i) = rng.complex_gaussian();
      const double energy = analysis(f, x).entries.squaredNorm();
      const double norm2 = x.squaredNorm();
      REQUIRE(energy >= bounds.lower * norm2 - 1e-8);
      REQUIRE(energy <= bounds.upper * norm2 + 1e-8);
    }
  }
}

TEST_CASE("gramian holds pairwise inner products", "[frame]") {
  REQUIRE(max_abs(gramian(fixtures::E2()) - Matrix::Identity(2, 2)) <= 1e-15);

  Matrix u3_expected(3, 3);
  u3_expected << Complex(1, 0), Complex(0, 0), Complex(1, 0),
                 Complex(0, 0), Complex(1, 0), Complex(1, 0),
                 Complex(1, 0), Complex(1, 0), Complex(2, 0);
  REQUIRE(max_abs(gramian(fixtures::U3()) - u3_expected) <= 1e-15);

  const Matrix m3 = gramian(fixtures::M3());
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      REQUIRE(m3(i, j).real() == Approx(i == j ? 1.0 : -0.5));
      REQUIRE(m3(i, j).imag() == Approx(0.0));
    }
  }
}

TEST_CASE("gramian is PSD with the frame operator's nonzero spectrum", "[frame]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Frame f = random_frame(2, 5, seed);
    const Matrix g = gramian(f);
    REQUIRE(max_abs(g - g.adjoint()) <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> eg(g, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> es(frame_operator(f), Eigen::EigenvaluesOnly);
    REQUIRE(eg.eigenvalues().minCoeff() >= -1e-10);
    // nonzero Gramian eigenvalues are the frame-operator eigenvalues
    for (Index i = 0; i < f.dim(); ++i) {
      REQUIRE(eg.eigenvalues()(f.size() - f.dim() + i) ==
              Approx(es.eigenvalues()(i)).margin(1e-8));
    }
    for (Index i = 0; i < f.size() - f.dim(); ++i) {
      REQUIRE(std::abs(eg.eigenvalues()(i)) <= 1e-8);
    }
  }
}

TEST_CASE("canonical reconstruction identity", "[frame]") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Frame f = random_frame(4, 7, seed);
    const Matrix s = frame_operator(f);
    Rng rng(seed + 17);
    for (int t = 0; t < 30; ++t) {
      Vector x(4);
      for (Index i = 0; i < 4; ++i) x(i) = rng.complex_gaussian();
      const Vector rebuilt = s.ldlt().solve(synthesis(f, analysis(f, x)));
      REQUIRE((rebuilt - x).norm() <= 1e-8);
    }
  }
}

TEST_CASE("random frames are deterministic in the seed", "[frame]") {
  const Frame a = random_frame(3, 6, 42);
  const Frame b = random_frame(3, 6, 42);
  REQUIRE(max_abs(a.synthesis() - b.synthesis()) == 0.0);
  const Frame c = random_frame(3, 6, 43);
  REQUIRE(max_abs(a.synthesis() - c.synthesis()) > 0.0);
}

TEST_CASE("generic random frames have full spark", "[frame]") {
  // spark oracle: brute-force subset rank via the LU path
  const Frame f = random_frame(2, 3, 7);
  Index smallest_dependent = 4;
  for (Index i = 0; i < 3 && smallest_dependent == 4; ++i) {
    if (lu_rank(f.synthesis().col(i)) < 1) smallest_dependent = 1;
  }
  for (Index i = 0; i < 3 && smallest_dependent == 4; ++i) {
    for (Index j = i + 1; j < 3 && smallest_dependent == 4; ++j) {
      Matrix two(2, 2);
      two.col(0) = f.synthesis().col(i);
      two.col(1) = f.synthesis().col(j);
      if (lu_rank(two) < 2) smallest_dependent = 2;
    }
  }
  if (smallest_dependent == 4 && lu_rank(f.synthesis()) < 3) smallest_dependent = 3;
  REQUIRE(smallest_dependent == 3);  // 3 vectors in dim 2 always carry a dependence
}

TEST_CASE("parseval generation yields an orthonormal basis when N = dim", "[frame]") {
  const Frame f = random_frame(3, 3, 11, FrameKind::Parseval);
  REQUIRE(max_abs(frame_operator(f) - Matrix::Identity(3, 3)) <= 1e-10);
  REQUIRE(max_abs(f.analysis() * f.synthesis() - Matrix::Identity(3, 3)) <= 1e-10);
}

TEST_CASE("tight generation scales a Parseval frame", "[frame]") {
  const Frame f = random_frame(2, 5, 5, FrameKind::Tight);
  const FrameBounds b = frame_bounds(f);
  REQUIRE(b.tight(1e-10));
  REQUIRE(b.lower > 0.0);
}

TEST_CASE("random_frame rejects bad shapes", "[frame]") {
  REQUIRE_THROWS_AS(random_frame(3, 2, 0), Error);
  REQUIRE_THROWS_AS(random_frame(0, 0, 0), Error);
}
