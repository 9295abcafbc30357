#include "isoflow/duality.hpp"

#include <algorithm>
#include <cmath>

namespace isoflow {

namespace {

double unitarity_residual(const Matrix& u) {
  return std::max(residual_norm(u.adjoint() * u, identity(u.cols())),
                  residual_norm(u * u.adjoint(), identity(u.rows())));
}

Subspace image(const Matrix& u, const Subspace& s) {
  return Subspace(s.ambient(), u * s.basis());
}

/// ‖(I - P_frame) Q_s‖: zero iff s lies inside frame.
double containment_residual(const Subspace& s, const Subspace& frame) {
  if (s.dim() == 0) return 0.0;
  const Matrix& q = frame.basis();
  return spectral_norm(s.basis() - q * (q.adjoint() * s.basis()));
}

/// Compares two windowed maps on the columns both trust.
double windowed_difference(const WindowedMap& a, const WindowedMap& b, IndexSet* cols) {
  *cols = set_intersection(a.faithful, b.faithful);
  return residual_on_columns(a.matrix, b.matrix, *cols);
}

std::vector<Index> default_samples(Index max_steps) {
  std::vector<Index> out;
  for (Index k = 1; k <= std::max<Index>(1, std::min<Index>(max_steps, 2)); ++k) {
    out.push_back(k);
  }
  return out;
}

}  // namespace

void ExtensionSetup::validate(const Tolerances& tol) const {
  const Index n = ambient_dim();
  if (u1.matrix.rows() != n || u2.matrix.rows() != n || u2.matrix.cols() != n) {
    throw InvalidInput("ExtensionSetup: generators must be square of equal size");
  }
  if (h.ambient() != n) throw InvalidInput("ExtensionSetup: subspace lives elsewhere");
  if (steps_per_unit < 1) throw InvalidInput("ExtensionSetup: steps_per_unit must be >= 1");
  if (unitarity_residual(u1.matrix) > tol.resid_abs ||
      unitarity_residual(u2.matrix) > tol.resid_abs) {
    throw InvalidInput("ExtensionSetup: generators are not unitary");
  }
  if (residual_norm(u1.matrix * u2.matrix, u2.matrix * u1.matrix) > tol.resid_abs) {
    throw InvalidInput("ExtensionSetup: generators do not commute");
  }
  if (isometry_residual(compress(u1, h)) > tol.resid_abs ||
      isometry_residual(compress(u2, h)) > tol.resid_abs) {
    throw InvalidInput("ExtensionSetup: compressions are not isometric on trusted columns");
  }
}

PairOfSemigroups compressed_pair(const ExtensionSetup& setup) {
  return PairOfSemigroups(
      SemigroupFamily::from_generator(setup.label + ".V1", setup.steps_per_unit,
                                      compress(setup.u1, setup.h)),
      SemigroupFamily::from_generator(setup.label + ".V2", setup.steps_per_unit,
                                      compress(setup.u2, setup.h)));
}

OrbitSpan orbit_span(const Matrix& u1, const Matrix& u2, const Subspace& seed,
                     Index max_orbit, const Tolerances& tol) {
  const Matrix u1s = u1.adjoint();
  const Matrix u2s = u2.adjoint();
  OrbitSpan out;
  out.span = orthonormal_basis(seed.basis(), tol);
  if (out.span.dim() == 0) out.span = Subspace::zero(seed.ambient());
  for (Index a = 1; a <= max_orbit; ++a) {
    // One more unit in each exponent: first along U1, then along U2.
    Subspace grown = span_union(out.span, image(u1, out.span), tol);
    grown = span_union(grown, image(u1s, out.span), tol);
    const Subspace along1 = grown;
    grown = span_union(grown, image(u2, along1), tol);
    grown = span_union(grown, image(u2s, along1), tol);
    if (grown.dim() == out.span.dim() &&
        same_subspace(grown, out.span, tol.resid_abs)) {
      out.stabilized = true;
      out.orbit_bound = a - 1;
      return out;
    }
    out.span = grown;
  }
  out.orbit_bound = max_orbit;
  return out;
}

OrbitSpan minimal_extension(const ExtensionSetup& setup, Index max_orbit,
                            const Tolerances& tol) {
  return orbit_span(setup.u1.matrix, setup.u2.matrix, setup.h, max_orbit, tol);
}

DualResult dual_pair(const ExtensionSetup& setup, Index max_orbit, const Tolerances& tol) {
  const OrbitSpan ext = minimal_extension(setup, max_orbit, tol);
  if (!ext.stabilized) {
    throw PreconditionFailed("dual_pair: minimal extension did not stabilize within " +
                             std::to_string(max_orbit) + " orbit steps");
  }
  const Subspace wt = relative_complement(ext.span, setup.h, tol);
  const WindowedMap a1 = adjoint(setup.u1);
  const WindowedMap a2 = adjoint(setup.u2);
  const double inv = std::max(invariance_residual(a1, wt), invariance_residual(a2, wt));
  PairOfSemigroups dual(
      SemigroupFamily::from_generator(setup.label + ".dual1", setup.steps_per_unit,
                                      compress(a1, wt)),
      SemigroupFamily::from_generator(setup.label + ".dual2", setup.steps_per_unit,
                                      compress(a2, wt)));
  return DualResult{ext.span, wt, std::move(dual), inv, ext.orbit_bound};
}

ExtensionSetup dual_setup(const ExtensionSetup& setup, const DualResult& dual) {
  ExtensionSetup out = setup;
  out.label = setup.label + ".dual";
  out.u1 = adjoint(setup.u1);
  out.u2 = adjoint(setup.u2);
  out.h = dual.wt_h;
  return out;
}

Report dual_cnu_check(const ExtensionSetup& setup, Index max_steps, Index max_orbit,
                      const Tolerances& tol) {
  Report report;
  const DualResult d = dual_pair(setup, max_orbit, tol);
  report.add("dual.invariance", d.invariance_residual, {d.wt_h.dim()},
             d.invariance_residual <= tol.resid_abs);
  if (d.wt_h.dim() == 0) {
    report.add("dual.cnu", 0.0, {0, 0}, true);
    return report;
  }
  const ProductUnitaryResult pu = product_unitary_part(d.dual, max_steps, tol);
  const Index u = pu.unitary_part().dim();
  const bool pass = pu.wold.stabilized && u == 0;
  std::string reason;
  if (!pu.wold.stabilized) reason = "window exhausted before the unitary part stabilized";
  else if (u != 0) reason = "dual product semigroup has a unitary part";
  report.add("dual.cnu", pu.wold.unitary_residual, {d.wt_h.dim(), u}, pass, reason);
  return report;
}

Report double_dual_check(const ExtensionSetup& setup, Index max_steps, Index max_orbit,
                         const Tolerances& tol) {
  if (setup.h.dim() == 0) {
    throw PreconditionFailed("double_dual_check: H = 0 carries no pair to recover");
  }
  const PairOfSemigroups original = compressed_pair(setup);
  const ProductUnitaryResult pu = product_unitary_part(original, max_steps, tol);
  if (!pu.wold.stabilized || pu.unitary_part().dim() != 0) {
    throw PreconditionFailed("double_dual_check: original pair is not c.n.u.");
  }
  Report report;
  const DualResult d = dual_pair(setup, max_orbit, tol);
  const ExtensionSetup ds = dual_setup(setup, d);

  const OrbitSpan ext2 = minimal_extension(ds, max_orbit, tol);
  const double minimality = ext2.span.dim() == d.ob_h.dim()
                                ? projector_distance(ext2.span, d.ob_h)
                                : 1.0;
  report.add("double_dual.minimality", minimality,
             {ext2.span.dim(), d.ob_h.dim(), ext2.orbit_bound},
             ext2.stabilized && minimality <= tol.resid_abs,
             ext2.stabilized ? "" : "orbit span of the dual space did not stabilize");

  const DualResult dd = dual_pair(ds, max_orbit, tol);
  const double space = dd.wt_h.dim() == setup.h.dim()
                           ? projector_distance(dd.wt_h, setup.h)
                           : 1.0;
  report.add("double_dual.space", space, {dd.wt_h.dim(), setup.h.dim()},
             space <= tol.resid_abs);
  if (space > tol.resid_abs) return report;

  // Basis change from the recovered space to the basis of H.
  const Matrix x = setup.h.basis().adjoint() * dd.wt_h.basis();
  for (int which = 0; which < 2; ++which) {
    for (Index k : default_samples(max_steps)) {
      const WindowedMap recovered = conjugate(dd.dual[which].power(k), x);
      const WindowedMap expected = original[which].power(k);
      IndexSet cols;
      const double resid = windowed_difference(recovered, expected, &cols);
      const bool same_window = recovered.faithful == expected.faithful;
      report.add("double_dual.V" + std::to_string(which + 1) + ".t=" +
                     format_time(k, setup.steps_per_unit),
                 resid, {static_cast<Index>(cols.size())},
                 same_window && resid <= tol.resid_abs,
                 same_window ? "" : "trusted columns differ");
    }
  }
  return report;
}

DualFourfoldResult dual_fourfold(const ExtensionSetup& setup, Index max_steps,
                                 Index max_orbit, const Tolerances& tol) {
  DualFourfoldResult out;
  const PairOfSemigroups original = compressed_pair(setup);
  const ProductUnitaryResult pu = product_unitary_part(original, max_steps, tol);
  out.h_uu = to_ambient(pu.unitary_part(), setup.h);

  ExtensionSetup rest = setup;
  rest.h = relative_complement(setup.h, out.h_uu, tol);
  const DualResult d = dual_pair(rest, max_orbit, tol);
  const Index one = 1;
  const CommutationReport cls =
      classify_pair(d.dual, std::span<const Index>(&one, 1), tol);
  if (cls.classified != Commutation::DoublyCommuting) {
    throw PreconditionFailed("dual_fourfold: the dual pair is not doubly commuting");
  }
  const FourfoldResult ff = fourfold_decompose(d.dual, max_steps, tol);
  if (ff.uu.dim() != 0) {
    throw InternalInconsistency(
        "dual_fourfold: the dual has a nonzero unitary-unitary part; the window is too "
        "small for the extension");
  }
  out.tilde_pp = to_ambient(ff.pp, d.wt_h);
  out.tilde_pu = to_ambient(ff.pu, d.wt_h);
  out.tilde_up = to_ambient(ff.up, d.wt_h);

  const auto lift = [&](const Subspace& s, const char* name) {
    const OrbitSpan o = orbit_span(setup.u1.matrix, setup.u2.matrix, s, max_orbit, tol);
    out.checks.add(std::string("dual_fourfold.lift.") + name, 0.0,
                   {s.dim(), o.span.dim(), o.orbit_bound}, o.stabilized,
                   o.stabilized ? "" : "orbit span did not stabilize");
    return o.span;
  };
  out.hat_pp = lift(out.tilde_pp, "pp");
  out.hat_pu = lift(out.tilde_pu, "pu");
  out.hat_up = lift(out.tilde_up, "up");
  out.h_m = relative_complement(out.hat_pp, out.tilde_pp, tol);
  out.h_pu = relative_complement(out.hat_pu, out.tilde_pu, tol);
  out.h_up = relative_complement(out.hat_up, out.tilde_up, tol);

  const double orth = std::max({overlap_norm(out.hat_pp, out.hat_pu),
                                overlap_norm(out.hat_pp, out.hat_up),
                                overlap_norm(out.hat_pu, out.hat_up),
                                overlap_norm(out.h_uu, out.hat_pp),
                                overlap_norm(out.h_uu, out.hat_pu),
                                overlap_norm(out.h_uu, out.hat_up)});
  out.checks.add("dual_fourfold.orthogonality", orth, {}, orth <= tol.resid_abs);

  const std::vector<std::pair<const char*, const Subspace*>> parts{
      {"m", &out.h_m}, {"pu", &out.h_pu}, {"up", &out.h_up}, {"uu", &out.h_uu}};
  double inside = 0.0;
  Matrix stacked(setup.ambient_dim(), 0);
  for (const auto& [name, s] : parts) {
    inside = std::max(inside, containment_residual(*s, setup.h));
    Matrix next(stacked.rows(), stacked.cols() + s->dim());
    next << stacked, s->basis();
    stacked = std::move(next);
  }
  const Index total = stacked.cols();
  const double exhaust =
      total == setup.h.dim() ? std::max(inside, projector_distance(
                                                    orthonormal_basis(stacked, tol), setup.h))
                             : 1.0;
  out.checks.add("dual_fourfold.exhaustive", exhaust, out.dims(),
                 exhaust <= tol.resid_abs,
                 total == setup.h.dim() ? "" : "summand dimensions do not add up to dim H");

  for (const auto& [name, s] : parts) {
    const Subspace local = to_local(*s, setup.h);
    const double red = std::max(reduction_residual(original.first.generator(), local),
                                reduction_residual(original.second.generator(), local));
    out.checks.add(std::string("dual_fourfold.reduces.") + name, red, {s->dim()},
                   red <= tol.resid_abs);
  }
  return out;
}

Report modified_bishift_model_check(const ExtensionSetup& setup, Index max_steps,
                                    Index max_orbit, const Tolerances& tol) {
  const DualResult d = dual_pair(setup, max_orbit, tol);
  const Index w = d.wt_h.dim();
  const Index one = 1;
  const CommutationReport cls = classify_pair(d.dual, std::span<const Index>(&one, 1), tol);
  if (w == 0 || cls.classified != Commutation::DoublyCommuting) {
    throw PreconditionFailed("modified_bishift_model_check: dual is not doubly commuting");
  }
  const FourfoldResult ff = fourfold_decompose(d.dual, max_steps, tol);
  if (ff.pp.dim() != w) {
    throw PreconditionFailed("modified_bishift_model_check: dual is not a bishift");
  }

  // Wandering space of the dual: common kernel of the adjoint generators.
  const Matrix g1s = d.dual.first.generator().matrix.adjoint();
  const Matrix g2s = d.dual.second.generator().matrix.adjoint();
  Matrix stacked(2 * w, w);
  stacked << g1s, g2s;
  const Subspace wander = nullspace(stacked, tol);
  const Index r = wander.dim();
  const Index m = setup.steps_per_unit;
  Index side = 0;
  if (r > 0) {
    side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(w / r))));
  }
  if (r == 0 || side * side * r != w || side % m != 0) {
    throw PreconditionFailed(
        "modified_bishift_model_check: dual is not a bishift on a square grid");
  }
  const Index T = side / m;
  const LRegionIndex model(m, T, r);
  const Index n = model.parent.n;
  const Subspace wander_amb = to_ambient(wander, d.wt_h);

  // Model coordinate (i1, i2, rho) -> U1*^(i1 - N) U2*^(i2 - N) w_rho.
  const Matrix& u1 = setup.u1.matrix;
  const Matrix& u2 = setup.u2.matrix;
  const auto translate = [](const Matrix& u, Vector v, Index power) {
    const Matrix us = u.adjoint();
    for (Index k = 0; k < power; ++k) v = us * v;
    for (Index k = 0; k < -power; ++k) v = u * v;
    return v;
  };
  Matrix y(setup.ambient_dim(), model.parent.dim());
  for (Index i1 = 0; i1 < n; ++i1) {
    for (Index rho = 0; rho < r; ++rho) {
      const Vector row = translate(u1, wander_amb.basis().col(rho), model.coordinate(i1));
      for (Index i2 = 0; i2 < n; ++i2) {
        y.col(model.parent.index(i1, i2, rho)) = translate(u2, row, model.coordinate(i2));
      }
    }
  }
  Report report;
  const double y_iso = residual_norm(y.adjoint() * y, identity(y.cols()));
  report.add("model.reindex_isometry", y_iso, {setup.ambient_dim(), y.cols(), r},
             y_iso <= tol.resid_abs);
  if (y_iso > tol.resid_abs) return report;

  const auto select = [&](const IndexSet& cols) {
    Matrix out(y.rows(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = y.col(cols[k]);
    return out;
  };
  const Matrix z_dual = select(model.quadrant()).adjoint() * d.wt_h.basis();
  const Matrix z = select(model.region()).adjoint() * setup.h.basis();
  const double dual_unitarity = unitarity_residual(z_dual);
  const double unitarity = unitarity_residual(z);
  report.add("model.reindex_unitary.dual", dual_unitarity, {z_dual.rows()},
             dual_unitarity <= tol.resid_abs);
  report.add("model.reindex_unitary", unitarity, {z.rows()}, unitarity <= tol.resid_abs);
  if (dual_unitarity > tol.resid_abs || unitarity > tol.resid_abs) return report;

  std::vector<Index> samples;
  for (Index k = 1; k <= std::min(max_steps, side); ++k) samples.push_back(k);
  const Report dual_equiv = verify_joint_equivalence(
      d.dual, bishift_families(QuadrantGrid2D(m, T, r)), z_dual, samples, tol);
  if (!dual_equiv.pass()) {
    throw PreconditionFailed("modified_bishift_model_check: dual is not a bishift");
  }
  for (const CheckEntry& e : dual_equiv.entries) {
    report.add("model.dual_bishift." + e.check_id, e.residual, e.dims, e.pass, e.reason);
  }
  const Report equiv = verify_joint_equivalence(compressed_pair(setup),
                                                modified_bishift_families(model), z, samples, tol);
  for (const CheckEntry& e : equiv.entries) {
    report.add("model.modified_bishift." + e.check_id, e.residual, e.dims, e.pass, e.reason);
  }
  return report;
}

Report simultaneous_dc_ddc_classify(const ExtensionSetup& setup, Index max_steps,
                                    Index max_orbit, const Tolerances& tol) {
  Report report;
  const Index one = 1;
  const std::span<const Index> samples(&one, 1);
  const PairOfSemigroups original = compressed_pair(setup);
  const CommutationReport c1 = classify_pair(original, samples, tol);
  const DualResult d = dual_pair(setup, max_orbit, tol);
  const CommutationReport c2 = classify_pair(d.dual, samples, tol);
  const bool dc = c1.classified == Commutation::DoublyCommuting;
  const bool ddc = c2.classified == Commutation::DoublyCommuting;
  report.add(std::string("classify.original.") + to_string(c1.classified),
             c1.double_comm_residual, {setup.h.dim()}, true);
  report.add(std::string("classify.dual.") + to_string(c2.classified), c2.double_comm_residual,
             {d.wt_h.dim()}, true);

  if (dc && ddc) {
    const FourfoldResult ff = fourfold_decompose(original, max_steps, tol);
    const DualFourfoldResult dff = dual_fourfold(setup, max_steps, max_orbit, tol);
    report.append(dff.checks);
    const bool three_part = ff.pp.dim() == 0 && dff.h_m.dim() == 0 &&
                            dff.h_pu.dim() + dff.h_up.dim() + dff.h_uu.dim() == setup.h.dim();
    report.add("corollary.three_part", dff.checks.max_residual(),
               {dff.h_pu.dim(), dff.h_up.dim(), dff.h_uu.dim()}, three_part,
               three_part ? "" : "both hypotheses hold but H_pp or H_m is nonzero");
  } else if (dc) {
    // Doubly commuting but not dual doubly commuting: H_pp must be nonzero.
    const FourfoldResult ff = fourfold_decompose(original, max_steps, tol);
    const bool ok = ff.pp.dim() > 0;
    report.add("corollary.only_if", 0.0, ff.dims(), ok,
               ok ? "" : "H_pp = 0 although the dual is not doubly commuting");
  } else {
    // A three-part splitting would make the pair doubly commuting.
    report.add("corollary.only_if", 0.0, {}, true);
  }
  return report;
}

}  // namespace isoflow
