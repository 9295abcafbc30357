#pragma once

#include <span>
#include <vector>

#include "isoflow/report.hpp"
#include "isoflow/semigroups.hpp"

namespace isoflow {

enum class StructureVerdict { FiberScalar, Other };

const char* to_string(StructureVerdict v);

/// Reconstruction residual at or below which an element counts as having
/// the fiber-scalar form.
inline constexpr double kStructureThreshold = 1e-8;

struct CommutantBasis {
  Index dim = 0;
  /// Orthonormal in the Frobenius inner product.
  std::vector<Matrix> basis;
  /// The fiber block of each basis element.
  std::vector<Matrix> fiber_blocks;
  StructureVerdict verdict = StructureVerdict::Other;
  double max_structure_residual = 0.0;
  double max_constraint_residual = 0.0;
};

/// A linear constraint B Y = Y B imposed on the entries (row, col) with
/// row in `rows` and col in `cols`.
struct CommutationConstraint {
  Matrix y;
  IndexSet rows;
  IndexSet cols;
};

/// Orthonormal basis of {B : the selected entries of BY - YB vanish for all
/// constraints}, via the nullspace of the stacked vectorized systems.
std::vector<Matrix> solve_commutant(Index n, std::span<const CommutationConstraint> constraints,
                                    const Tolerances& tol = {});

/// {B : B E0_j = E0_j B and B E1_j = E1_j B for 1 <= j < m} on the m-cell
/// interval with fiber r, with each element tested for the form
/// Λ (I ⊗ C) Λ*. Requires m >= 2.
CommutantBasis commutant_of_partial_isometries(Index m, Index r, const Tolerances& tol = {});

/// Θ* B Θ, where Θ sends x to the constant cell function with value x / sqrt(m).
Matrix theta_compress(const Matrix& b, Index m, Index r);

/// Λ (C ⊗ I_m) Λ*: the fiber operator C acting on every cell (cell-major).
Matrix fiber_scalar(const Matrix& c, Index m);

/// Commutant of M_z and M_z* on polynomials of degree <= d with values in
/// C^r, with equations restricted to the window where the truncation is
/// exact; each element is tested for the form I ⊗ ω. Requires d >= 1.
CommutantBasis doubly_commutant_of_mz(Index d, Index r, const Tolerances& tol = {});

/// Truncated M_z ⊗ I_r on degrees 0..d (degree-major, fiber last).
Matrix mz_matrix(Index d, Index r);

/// For A normal and V = shift ⊗ I_r: commuting samples must also commute with
/// V*, and then A(t) = I ⊗ B_t. Throws PreconditionFailed if some A(t) is not
/// normal.
Report fuglede_instance_check(const SemigroupFamily& a, const SemigroupFamily& v, Index r,
                              std::span<const Index> samples, const Tolerances& tol = {});

}  // namespace isoflow
