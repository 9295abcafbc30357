#pragma once

#include <vector>

#include "isoflow/semigroups.hpp"

namespace isoflow {

/// (S ⊗ I_q, I_N ⊗ C_q): a c.n.u. shift paired with a unitary circulant.
PairOfSemigroups shift_circulant_pair(const CellGrid1D& grid, Index q);
/// (C_q ⊗ I_N, I_q ⊗ S): the mirror of shift_circulant_pair.
PairOfSemigroups circulant_shift_pair(Index q, const CellGrid1D& grid);
/// (C_q1 ⊗ I_q2, I_q1 ⊗ C_q2).
PairOfSemigroups circulant_pair(Index q1, Index q2, Index steps_per_unit = 1);
/// (S ⊗ I_N, I_N ⊗ S) on C^N ⊗ C^N, the tensor form of the bishift.
PairOfSemigroups tensor_shift_pair(const CellGrid1D& grid);

struct BlockPair {
  PairOfSemigroups pair;
  /// Block sizes, in the order (pp, pu, up, uu).
  std::vector<Index> block_dims;
  /// The blocks as coordinate subspaces of the assembled space.
  std::vector<Subspace> blocks;
};

/// bishift ⊕ (shift, circulant) ⊕ (circulant, shift) ⊕ (circulant, circulant);
/// a doubly commuting pair whose fourfold splitting is known by construction.
BlockPair four_block_dc_pair(const QuadrantGrid2D& grid, Index q);

}  // namespace isoflow
