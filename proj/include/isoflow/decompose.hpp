#pragma once

#include <span>
#include <vector>

#include "isoflow/report.hpp"
#include "isoflow/semigroups.hpp"

namespace isoflow {

struct WoldResult {
  Subspace cnu_part;
  Subspace unitary_part;
  /// intersection_unchanged || reducing_unitary_certified
  bool stabilized = false;
  /// The running intersection did not move between the last two steps.
  bool intersection_unchanged = false;
  /// The running intersection reduces the generator, and the generator
  /// restricted to it is unitary; it then equals the unitary part.
  bool reducing_unitary_certified = false;
  Index steps_used = 0;
  double unitary_residual = 0.0;
  double reduction_residual = 0.0;
};

/// Cooper/Wold splitting of a windowed isometric semigroup: the unitary part
/// is the intersection over k = 1..K of the trusted ranges of the k-th power
/// of the generator, the c.n.u. part is its orthogonal complement.
WoldResult wold_cooper(const SemigroupFamily& v, Index max_steps,
                       const Tolerances& tol = {});

bool is_cnu(const SemigroupFamily& v, Index max_steps, const Tolerances& tol = {});

enum class Commutation { Neither, Commuting, DoublyCommuting };

const char* to_string(Commutation c);

struct CommutationReport {
  double comm_residual = 0.0;
  double double_comm_residual = 0.0;
  Commutation classified = Commutation::Neither;
  Index checked_columns = 0;
};

/// Largest residuals of V1(t)V2(s) - V2(s)V1(t) and V1(t)V2(s)* - V2(s)*V1(t)
/// over the sample grid, each on its composed trusted set.
CommutationReport classify_pair(const PairOfSemigroups& pair, std::span<const Index> samples,
                                const Tolerances& tol = {});

struct FourfoldResult {
  Subspace pp, pu, up, uu;
  WoldResult first_wold, second_wold;
  /// One entry per (summand, family, sample) in that order.
  std::vector<double> reduction_residuals;
  double max_reduction_residual = 0.0;
  double orthogonality_residual = 0.0;

  std::vector<Index> dims() const { return {pp.dim(), pu.dim(), up.dim(), uu.dim()}; }
};

/// H_ij = (i-part of V1) ∩ (j-part of V2) for a doubly commuting pair.
FourfoldResult fourfold_decompose(const PairOfSemigroups& pair, Index max_steps,
                                  const Tolerances& tol = {},
                                  std::span<const Index> samples = {});

/// Compares W S_t W* with the multiplier M_phi_t for every sampled step.
/// Both sides are partial permutations, so a pass means exactly zero.
Report bcl_check(Index T, Index m, Index r, std::span<const Index> samples,
                 const Tolerances& tol = {});

/// Residual of Z A_j(t) Z* - B_j(t) for j = 1, 2 on trusted columns.
Report verify_joint_equivalence(const PairOfSemigroups& a, const PairOfSemigroups& b,
                                const Matrix& z, std::span<const Index> samples,
                                const Tolerances& tol = {});

struct ProductUnitaryResult {
  WoldResult wold;
  double reduction_first = 0.0;
  double reduction_second = 0.0;

  const Subspace& unitary_part() const { return wold.unitary_part; }
};

/// Unitary part of t -> V1(t) V2(t), with its reduction residuals for V1, V2.
ProductUnitaryResult product_unitary_part(const PairOfSemigroups& pair, Index max_steps,
                                          const Tolerances& tol = {});

}  // namespace isoflow
