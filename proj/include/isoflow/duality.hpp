#pragma once

#include <span>
#include <string>
#include <vector>

#include "isoflow/decompose.hpp"
#include "isoflow/report.hpp"
#include "isoflow/semigroups.hpp"

namespace isoflow {

/// A commuting pair of unitaries on a finite ambient space together with a
/// subspace H whose compressions form the isometric pair under study.
///
/// u1 and u2 are the one-step generators; their trusted columns exclude the
/// coordinates whose image wraps around the finite ambient.
struct ExtensionSetup {
  std::string label;
  WindowedMap u1;
  WindowedMap u2;
  Subspace h;
  /// Ambient coordinates trusted by both generators and both adjoints.
  IndexSet physical_window;
  Index steps_per_unit = 1;

  Index ambient_dim() const { return u1.domain_dim(); }
  /// Throws InvalidInput unless u1, u2 are commuting unitaries, h lives in the
  /// ambient and the compressions are isometric on their trusted columns.
  void validate(const Tolerances& tol = {}) const;
};

/// (P_H U1 |_H, P_H U2 |_H) in the basis of H.
PairOfSemigroups compressed_pair(const ExtensionSetup& setup);

struct OrbitSpan {
  Subspace span;
  bool stabilized = false;
  /// Smallest A at which span{U1^a U2^b seed : |a|, |b| <= A} stopped growing.
  Index orbit_bound = 0;
};

/// Grows span{U1^a U2^b seed} one unit of |a|, |b| at a time until two
/// consecutive spans agree; gives up after max_orbit rounds.
OrbitSpan orbit_span(const Matrix& u1, const Matrix& u2, const Subspace& seed,
                     Index max_orbit, const Tolerances& tol = {});
OrbitSpan minimal_extension(const ExtensionSetup& setup, Index max_orbit,
                            const Tolerances& tol = {});

struct DualResult {
  Subspace ob_h;
  /// ob_h ⊖ h, invariant under U1* and U2*.
  Subspace wt_h;
  /// Compressions of U1*, U2* to wt_h, in the basis of wt_h.
  PairOfSemigroups dual;
  double invariance_residual = 0.0;
  Index orbit_bound = 0;
};

/// Throws PreconditionFailed if the extension does not stabilize.
DualResult dual_pair(const ExtensionSetup& setup, Index max_orbit, const Tolerances& tol = {});

/// The setup (U1*, U2*, wt_h) whose dual recovers the original pair.
ExtensionSetup dual_setup(const ExtensionSetup& setup, const DualResult& dual);

/// Passes iff the product semigroup of the dual has a trivial unitary part.
Report dual_cnu_check(const ExtensionSetup& setup, Index max_steps, Index max_orbit,
                      const Tolerances& tol = {});

/// Minimality of the dual extension, recovery of H and of the original pair.
/// Throws PreconditionFailed unless H != 0 and the original pair is c.n.u.
Report double_dual_check(const ExtensionSetup& setup, Index max_steps, Index max_orbit,
                         const Tolerances& tol = {});

struct DualFourfoldResult {
  /// Summands of H in ambient coordinates.
  Subspace h_m, h_pu, h_up, h_uu;
  /// Fourfold parts of the dual (ambient coordinates) and their orbit spans.
  Subspace tilde_pp, tilde_pu, tilde_up;
  Subspace hat_pp, hat_pu, hat_up;
  Report checks;

  std::vector<Index> dims() const { return {h_m.dim(), h_pu.dim(), h_up.dim(), h_uu.dim()}; }
};

/// H = H_m ⊕ H_pu ⊕ H_up ⊕ H_uu for a pair whose dual is doubly commuting.
/// Throws PreconditionFailed if the dual is not doubly commuting and
/// InternalInconsistency if the dual carries a nonzero unitary-unitary part.
DualFourfoldResult dual_fourfold(const ExtensionSetup& setup, Index max_steps,
                                 Index max_orbit, const Tolerances& tol = {});

/// Rebuilds the torus coordinates from the wandering space of the dual and
/// compares the original pair with the modified bishift tensored with the
/// fiber. Throws PreconditionFailed when the dual is not a bishift.
Report modified_bishift_model_check(const ExtensionSetup& setup, Index max_steps,
                                    Index max_orbit, const Tolerances& tol = {});

/// Doubly commuting and dual doubly commuting together hold iff
/// H = H_pu ⊕ H_up ⊕ H_uu; reports both classifications and the splitting.
Report simultaneous_dc_ddc_classify(const ExtensionSetup& setup, Index max_steps,
                                    Index max_orbit, const Tolerances& tol = {});

// Setups.

/// L-shaped region in the torus of side 2mT; U_i translate by one cell
/// towards the negative axis, so the compressions are the modified bishift.
ExtensionSetup l_region_setup(Index m, Index T, Index r = 1);
/// The quadrant [0, T)^2 in the same torus with U_i translating towards the
/// positive axis; the compressions are the bishift.
ExtensionSetup quadrant_setup(Index m, Index T, Index r = 1);
/// Negative half of a cyclic line of 2mT cells, tensored with C^q:
/// (translation compression ⊗ I, I ⊗ circulant).
ExtensionSetup shift_circulant_setup(Index m, Index T, Index q);
/// The mirror of shift_circulant_setup: (circulant ⊗ I, I ⊗ translation compression).
ExtensionSetup circulant_shift_setup(Index q, Index m, Index T);
/// (C_q1 ⊗ I, I ⊗ C_q2) with H the whole space.
ExtensionSetup circulant_pair_setup(Index q1, Index q2, Index steps_per_unit = 1);
/// Block-diagonal setup; all parts must share steps_per_unit.
ExtensionSetup direct_sum(std::span<const ExtensionSetup> parts);
/// Tensors every ingredient with the identity on C^r (fiber index last).
ExtensionSetup with_fiber(const ExtensionSetup& setup, Index r);

}  // namespace isoflow
