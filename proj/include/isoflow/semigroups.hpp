#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "isoflow/report.hpp"
#include "isoflow/spaces.hpp"
#include "isoflow/windowed_map.hpp"

namespace isoflow {

/// Converts a time t to a step count on the grid (1/m)Z_+. Off-grid or
/// negative times are rejected.
Index grid_steps(double t, Index m);
/// "j/m" (or "j" when m == 1).
std::string format_time(Index steps, Index m);

/// A discrete-time semigroup t = j/m, j >= 0, of windowed maps.
///
/// element(j) is produced by a direct constructor when one is supplied, so
/// the semigroup law can be tested against composition; power(k) is always
/// the k-fold composition of the generator element(1) and is memoized.
class SemigroupFamily {
 public:
  using Builder = std::function<WindowedMap(Index steps)>;

  SemigroupFamily(std::string label, Index steps_per_unit, Index dim, Builder builder);
  static SemigroupFamily from_generator(std::string label, Index steps_per_unit,
                                        WindowedMap generator);

  const std::string& label() const { return label_; }
  Index steps_per_unit() const { return steps_per_unit_; }
  Index dim() const { return dim_; }

  WindowedMap element(Index steps) const;
  WindowedMap power(Index k) const;
  WindowedMap generator() const { return power(1); }

 private:
  struct Cache;

  std::string label_;
  Index steps_per_unit_ = 1;
  Index dim_ = 0;
  Builder builder_;
  std::shared_ptr<Cache> cache_;
};

struct PairOfSemigroups {
  SemigroupFamily first;
  SemigroupFamily second;

  PairOfSemigroups(SemigroupFamily a, SemigroupFamily b);
  Index dim() const { return first.dim(); }
  const SemigroupFamily& operator[](int which) const { return which == 0 ? first : second; }
};

// Operator constructors. Step counts j stand for the time j/m.

/// Right shift on L^2([0, T), F): cell k goes to cell k + j, trusted iff k + j < mT.
WindowedMap halfline_shift(const CellGrid1D& grid, Index j);

/// The cut shift E0 and its wrap-around piece E1 on the m-cell interval with
/// fiber r, shift j/m. Both are exact partial isometries.
std::pair<Matrix, Matrix> partial_isometry_pair(Index m, Index j, Index r);

/// Multiplication by z^n E0 + z^(n+1) E1 on the truncated coefficient space,
/// n = floor(j/m); a column is trusted iff its image degree is <= d.
WindowedMap phi_multiplier(const HardyCoeffSpace& space, Index j);

/// The coordinate shifts on the quadrant grid.
std::pair<WindowedMap, WindowedMap> bishift_pair(const QuadrantGrid2D& grid, Index j);

/// The compressed translation pair on the L-shaped region, in the ordering of
/// LRegionIndex::region(). Cells whose source lies in the quadrant read 0.
std::pair<WindowedMap, WindowedMap> modified_bishift_pair(const LRegionIndex& region,
                                                          Index j);

/// Cyclic translation by (a, b) cells on the torus (fiber untouched).
Matrix torus_translation(const TorusGrid2D& grid, Index a, Index b);
/// The same permutation with trusted columns restricted to cells that do not
/// wrap around the torus (and likewise for the adjoint).
WindowedMap torus_translation_map(const TorusGrid2D& grid, Index a, Index b);

/// Cyclic shift e_i -> e_{i+k mod n}.
Matrix circulant_unitary(Index n, Index k);
/// Cyclic shift of n cells by k whose trusted columns exclude wrapped cells.
WindowedMap line_translation_map(Index n, Index k);

// Families.

SemigroupFamily halfline_shift_family(const CellGrid1D& grid);
SemigroupFamily phi_multiplier_family(const HardyCoeffSpace& space);
SemigroupFamily circulant_family(Index n, Index step = 1, Index steps_per_unit = 1);
PairOfSemigroups bishift_families(const QuadrantGrid2D& grid);
PairOfSemigroups modified_bishift_families(const LRegionIndex& region);

/// Block-diagonal family; all parts must share steps_per_unit.
SemigroupFamily direct_sum(std::span<const SemigroupFamily> parts);
PairOfSemigroups direct_sum(std::span<const PairOfSemigroups> parts);
SemigroupFamily tensor_with_identity(const SemigroupFamily& f, Index r, FiberSide side);
/// t -> first(t) second(t).
SemigroupFamily product_family(const PairOfSemigroups& pair);
/// Family of constant identities on n coordinates.
SemigroupFamily identity_family(Index n, Index steps_per_unit = 1);

/// For every ordered pair (s, t) of samples, compares element(s + t) with
/// element(s) ∘ element(t) on the composed trusted set.
Report check_semigroup_law(const SemigroupFamily& family, std::span<const Index> samples,
                           const Tolerances& tol = {});

}  // namespace isoflow
