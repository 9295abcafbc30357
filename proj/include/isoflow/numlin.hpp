#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "isoflow/errors.hpp"

namespace isoflow {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Sorted, duplicate-free list of coordinate indices.
using IndexSet = std::vector<Index>;

struct Tolerances {
  double rank_rel = 1e-10;
  double resid_abs = 1e-10;
  double angle = 1.0 - 1e-8;  // principal-angle cosine threshold

  void validate() const;
};

/// Subspace of C^ambient held as an orthonormal column basis.
///
/// Subspaces that coincide (to 1e-12 in the projector diagonal) with a
/// coordinate subspace are stored in the canonical basis e_i, i ascending.
/// All constructions in this library are permutation-like, so this keeps
/// downstream compressions exact 0/1 matrices.
class Subspace {
 public:
  Subspace() = default;
  Subspace(Index ambient, Matrix basis);

  static Subspace zero(Index ambient);
  static Subspace full(Index ambient);
  static Subspace coordinates(Index ambient, const IndexSet& coords);

  Index ambient() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  Matrix projector() const;

  /// Coordinates spanning this subspace, if it is a coordinate subspace.
  const IndexSet* coordinate_support() const {
    return is_coordinate_ ? &coords_ : nullptr;
  }

 private:
  Index ambient_ = 0;
  Matrix basis_;
  bool is_coordinate_ = false;
  IndexSet coords_;
};

Matrix identity(Index n);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& m);

Subspace orthonormal_basis(const Matrix& m, const Tolerances& tol = {});
Subspace intersect(const Subspace& s1, const Subspace& s2,
                   const Tolerances& tol = {});
Subspace complement(const Subspace& s);
Subspace nullspace(const Matrix& m, const Tolerances& tol = {});

/// Spectral norm of a - b; exactly 0 for bit-identical inputs.
double residual_norm(const Matrix& a, const Matrix& b);
double spectral_norm(const Matrix& m);

/// Orthonormal basis of s1 ⊖ s2 (the part of s1 orthogonal to s2).
Subspace relative_complement(const Subspace& s1, const Subspace& s2,
                             const Tolerances& tol = {});
/// Orthonormal basis of span(s1 ∪ s2).
Subspace span_union(const Subspace& s1, const Subspace& s2,
                    const Tolerances& tol = {});

/// Spectral distance between the two orthogonal projectors.
double projector_distance(const Subspace& s1, const Subspace& s2);
/// Largest principal angle (radians); s1 and s2 must have equal dimension.
double max_principal_angle(const Subspace& s1, const Subspace& s2);
bool same_subspace(const Subspace& s1, const Subspace& s2, double tol);
/// ‖Q1* Q2‖, zero iff the subspaces are orthogonal.
double overlap_norm(const Subspace& s1, const Subspace& s2);

/// Express a subspace of span(frame) in the coordinates of `frame`.
Subspace to_local(const Subspace& s, const Subspace& frame);
/// Inverse of to_local.
Subspace to_ambient(const Subspace& local, const Subspace& frame);

IndexSet index_range(Index n);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);

}  // namespace isoflow
