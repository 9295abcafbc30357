#include <doctest.h>

#include "isoflow/semigroups.hpp"
#include "isoflow/windowed_map.hpp"

using namespace isoflow;

TEST_CASE("compose keeps only columns whose image is trusted") {
  const CellGrid1D g(1, 4);
  const WindowedMap s1 = halfline_shift(g, 1);
  const WindowedMap s2 = compose(s1, s1);
  CHECK(s2.faithful == IndexSet{0, 1});
  CHECK(residual_on_columns(s2.matrix, halfline_shift(g, 2).matrix, s2.faithful) == 0.0);
}

TEST_CASE("adjoint swaps trusted sets and is an involution") {
  const WindowedMap s = halfline_shift(CellGrid1D(2, 2), 1);
  const WindowedMap a = adjoint(s);
  CHECK(a.faithful == s.adj_faithful);
  CHECK(a.adj_faithful == s.faithful);
  const WindowedMap back = adjoint(a);
  CHECK(residual_norm(back.matrix, s.matrix) == 0.0);
  CHECK(back.faithful == s.faithful);
}

TEST_CASE("direct_sum and tensor_with_identity") {
  const std::vector<WindowedMap> ids{WindowedMap::identity(2), WindowedMap::identity(3)};
  const WindowedMap sum = direct_sum(std::span<const WindowedMap>(ids));
  CHECK(residual_norm(sum.matrix, identity(5)) == 0.0);
  CHECK(sum.faithful == index_range(5));

  // Kronecker index oracle: (A ⊗ I_2) e_{i*2+rho} = (A e_i) ⊗ e_rho.
  const WindowedMap s = halfline_shift(CellGrid1D(2, 2), 1);
  const WindowedMap t = tensor_with_identity(s, 2, FiberSide::Right);
  for (Index i = 0; i < 4; ++i) {
    for (Index rho = 0; rho < 2; ++rho) {
      for (Index k = 0; k < 4; ++k) {
        CHECK(t.matrix(k * 2 + rho, i * 2 + rho) == s.matrix(k, i));
        CHECK(t.matrix(k * 2 + (1 - rho), i * 2 + rho) == Complex(0.0));
      }
    }
  }
  CHECK(t.faithful == IndexSet{0, 1, 2, 3, 4, 5});
  const WindowedMap l = tensor_with_identity(s, 2, FiberSide::Left);
  CHECK(l.faithful == IndexSet{0, 1, 2, 4, 5, 6});
}

TEST_CASE("shift plus circulant is isometric on its trusted columns") {
  const std::vector<WindowedMap> parts{halfline_shift(CellGrid1D(1, 8), 1),
                                       WindowedMap::exact(circulant_unitary(4, 1))};
  const WindowedMap sum = direct_sum(std::span<const WindowedMap>(parts));
  CHECK(isometry_residual(sum) == 0.0);
  CHECK(sum.faithful.size() == 11);
}

TEST_CASE("compress and conjugate track trusted columns") {
  const WindowedMap s = halfline_shift(CellGrid1D(1, 4), 1);
  const Subspace first = Subspace::coordinates(4, {0, 1, 2});
  const WindowedMap c = compress(s, first);
  CHECK(c.faithful == IndexSet{0, 1, 2});
  CHECK(c.matrix(1, 0) == Complex(1.0));
  CHECK(c.matrix.col(2).norm() == 0.0);

  const Matrix p = circulant_unitary(4, 1);
  const WindowedMap moved = conjugate(s, p);
  CHECK(moved.faithful == IndexSet{1, 2, 3});
  CHECK_THROWS_AS(conjugate(s, identity(3)), DimensionMismatch);
}

TEST_CASE("invariance and reduction residuals") {
  const WindowedMap s = halfline_shift(CellGrid1D(1, 4), 1);
  const Subspace tail = Subspace::coordinates(4, {2, 3});
  CHECK(invariance_residual(s, tail) == 0.0);
  CHECK(reduction_residual(s, tail) == doctest::Approx(1.0));
  const WindowedMap c = WindowedMap::exact(circulant_unitary(4, 1));
  CHECK(reduction_residual(c, Subspace::full(4)) == 0.0);
}
