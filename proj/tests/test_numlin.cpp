#include <doctest.h>

#include <cmath>
#include <limits>

#include "isoflow/numlin.hpp"
#include "oracles.hpp"

using namespace isoflow;

namespace {

Matrix cols3(std::initializer_list<std::initializer_list<double>> columns, Index rows) {
  Matrix m = Matrix::Zero(rows, static_cast<Index>(columns.size()));
  Index c = 0;
  for (const auto& col : columns) {
    Index r = 0;
    for (double v : col) m(r++, c) = v;
    ++c;
  }
  return m;
}

Matrix e(Index n, Index i) {
  Matrix v = Matrix::Zero(n, 1);
  v(i, 0) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("orthonormal_basis of simple column sets") {
  const Subspace id = orthonormal_basis(identity(3));
  CHECK(id.dim() == 3);
  CHECK(residual_norm(id.basis(), identity(3)) == 0.0);

  CHECK(orthonormal_basis(Matrix::Zero(4, 2)).dim() == 0);

  const Matrix m = cols3({{1, 0, 0}, {2, 0, 0}, {0, 1, 0}}, 3);
  const Subspace s = orthonormal_basis(m);
  CHECK(s.dim() == oracle::gram_rank(m));
  CHECK(s.dim() == 2);
  CHECK(residual_norm(s.projector(), oracle::gram_projector(m)) < 1e-12);
  REQUIRE(s.coordinate_support() != nullptr);
  CHECK(*s.coordinate_support() == IndexSet{0, 1});
}

TEST_CASE("orthonormal_basis rejects non-finite input") {
  Matrix m = identity(2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(orthonormal_basis(m), InvalidInput);
}

TEST_CASE("Subspace validates its basis") {
  CHECK_THROWS_AS(Subspace(3, identity(2)), DimensionMismatch);
  CHECK_THROWS_AS(Subspace(2, cols3({{1, 1}}, 2)), InvalidInput);
}

TEST_CASE("intersect") {
  const Subspace a = Subspace::coordinates(4, {0, 1});
  const Subspace b = Subspace::coordinates(4, {1, 2});
  CHECK(same_subspace(intersect(a, a), a, 1e-12));
  const Subspace ab = intersect(a, b);
  CHECK(ab.dim() == 1);
  CHECK(residual_norm(ab.projector(), e(4, 1) * e(4, 1).adjoint()) < 1e-12);
  CHECK(intersect(Subspace::coordinates(4, {0}), Subspace::coordinates(4, {1})).dim() == 0);

  // Non-coordinate case against the projector-product oracle: P1 P2 P1 has
  // eigenvalue 1 exactly on the intersection.
  Matrix c = Matrix::Zero(4, 2);
  c(0, 0) = c(1, 0) = 1.0 / std::sqrt(2.0);
  c(2, 1) = 1.0;
  Matrix d = Matrix::Zero(4, 2);
  d(0, 0) = d(1, 0) = 1.0 / std::sqrt(2.0);
  d(3, 1) = 1.0;
  const Subspace cd = intersect(Subspace(4, c), Subspace(4, d));
  CHECK(cd.dim() == 1);
  const Matrix expected = c.col(0) * c.col(0).adjoint();
  CHECK(residual_norm(cd.projector(), expected) < 1e-10);
  CHECK_THROWS_AS(intersect(Subspace::zero(3), Subspace::zero(4)), DimensionMismatch);
}

TEST_CASE("complement") {
  const Subspace c = complement(Subspace::coordinates(2, {0}));
  CHECK(same_subspace(c, Subspace::coordinates(2, {1}), 0.0));
  CHECK(complement(Subspace::full(3)).dim() == 0);

  Matrix v(2, 1);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Subspace w = complement(Subspace(2, v));
  Matrix seed(2, 2);
  seed << v(0, 0), 1.0, v(1, 0), 0.0;
  const Matrix gs = oracle::gram_schmidt(seed);
  const Matrix expected = gs.col(1) * gs.col(1).adjoint();
  CHECK(w.dim() == 1);
  CHECK(residual_norm(w.projector(), expected) < 1e-12);
}

TEST_CASE("nullspace") {
  CHECK(nullspace(Matrix::Zero(2, 2)).dim() == 2);
  CHECK(nullspace(identity(3)).dim() == 0);
  Matrix ones = Matrix::Constant(2, 2, 1.0);
  const Subspace k = nullspace(ones);
  REQUIRE(k.dim() == 1);
  Matrix v(2, 1);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(residual_norm(k.projector(), v * v.adjoint()) < 1e-12);
  CHECK(spectral_norm(ones * k.basis()) < 1e-12);
}

TEST_CASE("residual_norm") {
  const Matrix a = identity(3);
  CHECK(residual_norm(a, a) == 0.0);
  CHECK(residual_norm(identity(2), Matrix::Zero(2, 2)) == doctest::Approx(1.0));
  Matrix d1 = Matrix::Zero(2, 2);
  d1(0, 0) = 3.0;
  d1(1, 1) = 1.0;
  CHECK(residual_norm(d1, identity(2)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(residual_norm(identity(2), identity(3)), DimensionMismatch);
}

TEST_CASE("relative_complement, span_union and angles") {
  const Subspace a = Subspace::coordinates(5, {0, 1, 2});
  const Subspace b = Subspace::coordinates(5, {1});
  const Subspace diff = relative_complement(a, b);
  CHECK(same_subspace(diff, Subspace::coordinates(5, {0, 2}), 0.0));
  CHECK(same_subspace(span_union(diff, b), a, 0.0));
  CHECK(overlap_norm(diff, b) == 0.0);
  CHECK(max_principal_angle(a, a) == 0.0);
  CHECK(max_principal_angle(Subspace::coordinates(2, {0}), Subspace::coordinates(2, {1})) ==
        doctest::Approx(std::acos(0.0)));
  CHECK(projector_distance(a, a) == 0.0);
}

TEST_CASE("to_local and to_ambient are inverse") {
  const Subspace frame = Subspace::coordinates(6, {1, 3, 4});
  const Subspace s = Subspace::coordinates(6, {3});
  const Subspace local = to_local(s, frame);
  CHECK(local.ambient() == 3);
  CHECK(same_subspace(to_ambient(local, frame), s, 0.0));
  CHECK_THROWS(to_local(Subspace::coordinates(6, {0}), frame));
}

TEST_CASE("Tolerances are validated") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.resid_abs = -1.0;
  CHECK_THROWS_AS(t.validate(), InvalidInput);
}
