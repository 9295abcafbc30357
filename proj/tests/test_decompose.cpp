#include <doctest.h>

#include "isoflow/constructions.hpp"
#include "isoflow/decompose.hpp"
#include "oracles.hpp"

using namespace isoflow;

namespace {

SemigroupFamily shift_plus_circulant() {
  const std::vector<SemigroupFamily> parts{halfline_shift_family(CellGrid1D(1, 8)),
                                           circulant_family(4, 1, 1)};
  return direct_sum(std::span<const SemigroupFamily>(parts));
}

Matrix coordinate_swap(Index n) {
  Matrix z = Matrix::Zero(n * n, n * n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) z(b * n + a, a * n + b) = 1.0;
  }
  return z;
}

}  // namespace

TEST_CASE("Wold splitting of finite unitaries and shifts") {
  const WoldResult circ = wold_cooper(circulant_family(4, 1, 1), 4);
  CHECK(circ.stabilized);
  CHECK(circ.unitary_part.dim() == 4);
  CHECK(circ.cnu_part.dim() == 0);

  const WoldResult shift = wold_cooper(halfline_shift_family(CellGrid1D(1, 8)), 8);
  CHECK(shift.stabilized);
  CHECK(shift.unitary_part.dim() == 0);
  CHECK(shift.cnu_part.dim() == 8);
}

TEST_CASE("Wold splitting of shift plus circulant matches the range-intersection oracle") {
  const SemigroupFamily f = shift_plus_circulant();
  const WoldResult w = wold_cooper(f, 8);
  const auto next = oracle::as_index_map(f.generator().matrix);
  // Untrusted columns (the last shift cell) leave the window.
  std::vector<Index> trusted_next(next.size(), -1);
  for (Index c : f.generator().faithful) trusted_next[static_cast<std::size_t>(c)] = next[c];
  const std::set<Index> expected = oracle::range_intersection(trusted_next, 8);
  CHECK(w.unitary_part.dim() == static_cast<Index>(expected.size()));
  const Subspace block = Subspace::coordinates(12, {8, 9, 10, 11});
  CHECK(max_principal_angle(w.unitary_part, block) <= 1e-8);
  CHECK(w.stabilized);
  CHECK(w.reduction_residual == 0.0);
}

TEST_CASE("too small a step budget leaves the splitting unstabilized") {
  const WoldResult w = wold_cooper(halfline_shift_family(CellGrid1D(1, 8)), 3);
  CHECK_FALSE(w.stabilized);
  CHECK(w.unitary_part.dim() == 5);
}

TEST_CASE("is_cnu") {
  CHECK(is_cnu(halfline_shift_family(CellGrid1D(2, 3)), 6));
  CHECK_FALSE(is_cnu(circulant_family(3), 3));
  CHECK_FALSE(is_cnu(shift_plus_circulant(), 8));
}

TEST_CASE("classification of pairs") {
  const std::vector<Index> samples{1, 2};
  const CommutationReport bi = classify_pair(bishift_families(QuadrantGrid2D(1, 3)), samples);
  CHECK(bi.classified == Commutation::DoublyCommuting);
  CHECK(bi.comm_residual == 0.0);
  CHECK(bi.double_comm_residual == 0.0);

  const CommutationReport mb =
      classify_pair(modified_bishift_families(LRegionIndex(1, 3)), samples);
  CHECK(mb.classified == Commutation::Commuting);
  CHECK(mb.comm_residual == 0.0);

  // S S* and S* S differ on the first cell, so (S, S) is commuting only.
  const SemigroupFamily s = halfline_shift_family(CellGrid1D(1, 4));
  const CommutationReport ss = classify_pair(PairOfSemigroups(s, s), samples);
  CHECK(ss.classified == Commutation::Commuting);
  CHECK(ss.double_comm_residual == doctest::Approx(1.0));

  Matrix swap01 = identity(3);
  swap01(0, 0) = swap01(1, 1) = 0.0;
  swap01(0, 1) = swap01(1, 0) = 1.0;
  const PairOfSemigroups bad(
      SemigroupFamily::from_generator("p", 1, WindowedMap::exact(swap01)),
      SemigroupFamily::from_generator("c", 1, WindowedMap::exact(circulant_unitary(3, 1))));
  const std::vector<Index> one{1};
  CHECK(classify_pair(bad, one).classified == Commutation::Neither);
  CHECK_THROWS_AS(product_unitary_part(bad, 3), PreconditionFailed);
  CHECK_THROWS_AS(classify_pair(PairOfSemigroups(s, s), std::vector<Index>{4}), WindowTooSmall);
}

TEST_CASE("fourfold decomposition of the four-block pair") {
  const BlockPair bp = four_block_dc_pair(QuadrantGrid2D(1, 2), 3);
  const FourfoldResult ff = fourfold_decompose(bp.pair, 4);
  CHECK(ff.dims() == bp.block_dims);
  const std::vector<const Subspace*> got{&ff.pp, &ff.pu, &ff.up, &ff.uu};
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(max_principal_angle(*got[k], bp.blocks[k]) <= 1e-8);
  }
  CHECK(ff.max_reduction_residual <= 1e-10);
  CHECK(ff.orthogonality_residual <= 1e-10);
}

TEST_CASE("fourfold decomposition of the pure cases") {
  const QuadrantGrid2D g(1, 3);
  const FourfoldResult bi = fourfold_decompose(bishift_families(g), 3);
  CHECK(bi.dims() == std::vector<Index>{9, 0, 0, 0});
  const FourfoldResult cc = fourfold_decompose(circulant_pair(3, 2), 3);
  CHECK(cc.dims() == std::vector<Index>{0, 0, 0, 6});
  CHECK_THROWS_AS(fourfold_decompose(modified_bishift_families(LRegionIndex(1, 2)), 4),
                  PreconditionFailed);
}

TEST_CASE("BCL identification") {
  const std::vector<Index> one{4};
  const Report r1 = bcl_check(4, 4, 1, one);
  CHECK(r1.pass());
  const std::vector<Index> zero{0};
  CHECK(bcl_check(2, 3, 2, zero).pass());

  std::vector<Index> all;
  for (Index j = 0; j <= 12; ++j) all.push_back(j);
  const Report r = bcl_check(4, 4, 2, all);
  CHECK(r.pass());
  CHECK(r.max_residual() == 0.0);

  // Index-arithmetic oracle: cell c of the half-line sits at degree c / m,
  // cell c % m, and the multiplier moves it to cell c + j.
  const Index m = 4;
  const Index T = 4;
  const HardyCoeffSpace h(T - 1, m, 2);
  for (Index j : all) {
    const WindowedMap phi = phi_multiplier(h, j);
    for (Index c = 0; c + j < m * T; ++c) {
      for (Index f = 0; f < 2; ++f) {
        const Index col = h.index(c / m, c % m, f);
        const Index row = h.index((c + j) / m, (c + j) % m, f);
        CHECK(phi.matrix(row, col) == Complex(1.0));
        CHECK(phi.matrix.col(col).cwiseAbs().sum() == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("joint equivalence") {
  const PairOfSemigroups bi = bishift_families(QuadrantGrid2D(1, 3));
  const std::vector<Index> samples{1, 2};
  CHECK(verify_joint_equivalence(bi, bi, identity(9), samples).pass());

  // Lexicographic order makes the bishift the tensor pair (S ⊗ I, I ⊗ S);
  // swapping the coordinates exchanges the two factors.
  const PairOfSemigroups tensor = tensor_shift_pair(CellGrid1D(1, 3));
  CHECK(verify_joint_equivalence(bi, tensor, identity(9), samples).pass());
  const PairOfSemigroups swapped(tensor.second, tensor.first);
  CHECK(verify_joint_equivalence(bi, swapped, coordinate_swap(3), samples).pass());
  CHECK_FALSE(verify_joint_equivalence(bi, swapped, identity(9), samples).pass());

  const CellGrid1D grid(2, 3, 1);
  const SemigroupFamily s = halfline_shift_family(grid);
  const SemigroupFamily phi = phi_multiplier_family(HardyCoeffSpace(2, 2, 1));
  const std::vector<Index> steps{1, 2, 3};
  CHECK(verify_joint_equivalence(PairOfSemigroups(s, s), PairOfSemigroups(phi, phi),
                                 w_unitary(3, 2, 1), steps)
            .pass());
  CHECK_THROWS_AS(verify_joint_equivalence(bi, bi, 2.0 * identity(9), samples),
                  PreconditionFailed);
}

TEST_CASE("unitary part of the product semigroup") {
  CHECK(product_unitary_part(bishift_families(QuadrantGrid2D(1, 3)), 3).unitary_part().dim() ==
        0);
  CHECK(product_unitary_part(circulant_pair(2, 3), 3).unitary_part().dim() == 6);
  const BlockPair bp = four_block_dc_pair(QuadrantGrid2D(1, 2), 3);
  const ProductUnitaryResult pu = product_unitary_part(bp.pair, 4);
  CHECK(max_principal_angle(pu.unitary_part(), bp.blocks[3]) <= 1e-8);
  CHECK(pu.unitary_part().dim() == 9);
  CHECK(pu.reduction_first == 0.0);
  CHECK(pu.reduction_second == 0.0);
}
