#include "isoflow/constructions.hpp"

namespace isoflow {

PairOfSemigroups shift_circulant_pair(const CellGrid1D& grid, Index q) {
  const SemigroupFamily shift = halfline_shift_family(grid);
  const SemigroupFamily circ = circulant_family(q, 1, grid.m);
  return PairOfSemigroups(tensor_with_identity(shift, q, FiberSide::Right),
                          tensor_with_identity(circ, grid.dim(), FiberSide::Left));
}

PairOfSemigroups circulant_shift_pair(Index q, const CellGrid1D& grid) {
  const SemigroupFamily shift = halfline_shift_family(grid);
  const SemigroupFamily circ = circulant_family(q, 1, grid.m);
  return PairOfSemigroups(tensor_with_identity(circ, grid.dim(), FiberSide::Right),
                          tensor_with_identity(shift, q, FiberSide::Left));
}

PairOfSemigroups circulant_pair(Index q1, Index q2, Index steps_per_unit) {
  return PairOfSemigroups(
      tensor_with_identity(circulant_family(q1, 1, steps_per_unit), q2, FiberSide::Right),
      tensor_with_identity(circulant_family(q2, 1, steps_per_unit), q1, FiberSide::Left));
}

PairOfSemigroups tensor_shift_pair(const CellGrid1D& grid) {
  const SemigroupFamily shift = halfline_shift_family(grid);
  return PairOfSemigroups(tensor_with_identity(shift, grid.dim(), FiberSide::Right),
                          tensor_with_identity(shift, grid.dim(), FiberSide::Left));
}

BlockPair four_block_dc_pair(const QuadrantGrid2D& grid, Index q) {
  const CellGrid1D line(grid.m, grid.T, grid.r);
  const std::vector<PairOfSemigroups> parts{
      bishift_families(grid), shift_circulant_pair(line, q), circulant_shift_pair(q, line),
      circulant_pair(q, q, grid.m)};
  std::vector<Index> dims;
  Index total = 0;
  for (const auto& p : parts) {
    dims.push_back(p.dim());
    total += p.dim();
  }
  std::vector<Subspace> blocks;
  Index offset = 0;
  for (Index d : dims) {
    blocks.push_back(Subspace::coordinates(total, [&] {
      IndexSet s;
      for (Index i = 0; i < d; ++i) s.push_back(offset + i);
      return s;
    }()));
    offset += d;
  }
  return BlockPair{direct_sum(std::span<const PairOfSemigroups>(parts)), std::move(dims),
                   std::move(blocks)};
}

}  // namespace isoflow
