#pragma once

#include <span>

#include "isoflow/numlin.hpp"

namespace isoflow {

/// A finite matrix together with the domain indices on which it agrees
/// exactly with the operator it truncates.
///
/// Column i is trusted iff i is in `faithful`; row i of the adjoint (that is,
/// matrix.adjoint() applied to e_i) is trusted iff i is in `adj_faithful`.
/// Columns outside `faithful` are stored as exact zeros by every constructor
/// in this library. All equality checks quantify over trusted indices only.
struct WindowedMap {
  Matrix matrix;
  IndexSet faithful;
  IndexSet adj_faithful;

  Index domain_dim() const { return matrix.cols(); }
  Index codomain_dim() const { return matrix.rows(); }

  /// A map that is exact everywhere (finite unitaries, identities).
  static WindowedMap exact(Matrix m);
  static WindowedMap identity(Index n);
};

enum class FiberSide {
  Right,  // A ⊗ I_r, index i*r + rho
  Left    // I_r ⊗ A, index rho*n + i
};

/// outer ∘ inner; trusted columns are those of `inner` whose image lies in
/// the trusted columns of `outer` (and dually for the adjoint).
WindowedMap compose(const WindowedMap& outer, const WindowedMap& inner);
WindowedMap adjoint(const WindowedMap& a);
/// Q* A Q for the orthonormal basis Q of s; basis vectors supported on
/// trusted columns stay trusted.
WindowedMap compress(const WindowedMap& a, const Subspace& s);
/// Z A Z* for a unitary Z.
WindowedMap conjugate(const WindowedMap& a, const Matrix& z);
WindowedMap direct_sum(std::span<const WindowedMap> parts);
WindowedMap tensor_with_identity(const WindowedMap& a, Index r, FiberSide side);

/// Indices of the entries of v with modulus above the support threshold.
IndexSet support(const Vector& v);
/// Columns c of `vectors` whose support lies inside `allowed`.
IndexSet columns_supported_in(const Matrix& vectors, const IndexSet& allowed);
bool is_subset(const IndexSet& sub, const IndexSet& super);

/// Spectral norm of (a - b) restricted to the given columns.
double residual_on_columns(const Matrix& a, const Matrix& b, const IndexSet& cols);
/// ‖A_F* A_F - I‖ over the trusted columns F.
double isometry_residual(const WindowedMap& a);
/// ‖(I - P) A Q‖ over basis vectors of s supported on trusted columns;
/// zero iff s is invariant under A within the window.
double invariance_residual(const WindowedMap& a, const Subspace& s);
/// max(‖(I - P) A Q‖, ‖(I - P) A* Q‖) over basis vectors of s supported on
/// trusted indices; zero iff s reduces A (as far as the window can tell).
double reduction_residual(const WindowedMap& a, const Subspace& s);

}  // namespace isoflow
