#pragma once

#include "isoflow/numlin.hpp"

namespace isoflow {

/// Cells of width 1/m on [0, T) with an r-dimensional fiber; cell-major.
struct CellGrid1D {
  Index m = 1;
  Index T = 1;
  Index r = 1;

  CellGrid1D(Index m, Index T, Index r = 1);
  Index cells() const { return m * T; }
  Index dim() const { return m * T * r; }
  Index index(Index cell, Index fiber) const { return cell * r + fiber; }
};

/// Truncated coefficient space of polynomials of degree <= d with values in
/// the m-cell interval space with fiber r. Block n holds the z^n coefficient;
/// inside a block, interval-cell-major then fiber.
struct HardyCoeffSpace {
  Index d = 0;
  Index m = 1;
  Index r = 1;

  HardyCoeffSpace(Index d, Index m, Index r = 1);
  Index block_dim() const { return m * r; }
  Index dim() const { return (d + 1) * m * r; }
  Index index(Index degree, Index cell, Index fiber) const {
    return (degree * m + cell) * r + fiber;
  }
};

/// Cells of [0, T)^2 at resolution 1/m, lexicographic (k1, k2, fiber).
struct QuadrantGrid2D {
  Index m = 1;
  Index T = 1;
  Index r = 1;

  QuadrantGrid2D(Index m, Index T, Index r = 1);
  Index side() const { return m * T; }
  Index dim() const { return side() * side() * r; }
  Index index(Index k1, Index k2, Index fiber) const {
    return (k1 * side() + k2) * r + fiber;
  }
};

/// Cyclic n x n grid with fiber r; cell indices are reduced modulo n.
struct TorusGrid2D {
  Index n = 1;
  Index r = 1;

  TorusGrid2D(Index n, Index r = 1);
  Index cells() const { return n * n; }
  Index dim() const { return n * n * r; }
  Index wrap(Index i) const { return ((i % n) + n) % n; }
  Index index(Index i1, Index i2, Index fiber) const {
    return (wrap(i1) * n + wrap(i2)) * r + fiber;
  }
};

/// The L-shaped region [-T, T)^2 minus [0, T)^2 inside a torus of side 2mT.
/// Torus cell i covers [(i - mT)/m, (i - mT + 1)/m) on each axis.
struct LRegionIndex {
  TorusGrid2D parent;
  Index m = 1;
  Index T = 1;

  LRegionIndex(Index m, Index T, Index r = 1);
  Index half() const { return m * T; }
  /// Signed cell coordinate (cell units) of torus index i.
  Index coordinate(Index i) const { return i - half(); }
  Index torus_cell(Index coord) const { return coord + half(); }
  bool in_quadrant(Index i1, Index i2) const {
    return i1 >= half() && i2 >= half();
  }
  /// Torus coordinates (with fibers) of the L-region, ascending.
  IndexSet region() const;
  /// Torus coordinates (with fibers) of the quadrant [0, T)^2, ascending.
  IndexSet quadrant() const;
};

/// Permutation from CellGrid1D(m, T, r) onto HardyCoeffSpace(T - 1, m, r):
/// cell n*m + j goes to (degree n, cell j), fiber preserved.
Matrix w_unitary(Index T, Index m, Index r);

/// Permutation from fiber-major order (rho*m + k) to cell-major order (k*r + rho).
Matrix lambda_reorder(Index m, Index r);

/// Isometric 0/1 matrix placing the coordinates of `sub` at their positions
/// inside `ambient`. Both sets must be ascending.
Matrix region_injection(const IndexSet& sub, const IndexSet& ambient);

/// True iff every row and column has exactly one entry 1 and the rest are 0.
bool is_permutation_matrix(const Matrix& m);

}  // namespace isoflow
