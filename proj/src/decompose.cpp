#include "isoflow/decompose.hpp"

#include <algorithm>
#include <array>

namespace isoflow {

namespace {

Matrix trusted_columns(const WindowedMap& a) {
  Matrix out(a.codomain_dim(), static_cast<Index>(a.faithful.size()));
  for (std::size_t c = 0; c < a.faithful.size(); ++c) {
    out.col(static_cast<Index>(c)) = a.matrix.col(a.faithful[c]);
  }
  return out;
}

// Can the running intersection be certified as the unitary part? It must
// reduce the generator, and the generator restricted to it must be unitary.
bool certify_unitary(const WindowedMap& gen, const Subspace& candidate,
                     const Tolerances& tol, double& unitary_resid, double& reduction_resid) {
  unitary_resid = 0.0;
  reduction_resid = 0.0;
  if (candidate.dim() == 0) return true;
  const Matrix& q = candidate.basis();
  const Index k = q.cols();
  const bool trusted =
      static_cast<Index>(columns_supported_in(q, gen.faithful).size()) == k &&
      static_cast<Index>(columns_supported_in(q, gen.adj_faithful).size()) == k;
  const Matrix restricted = q.adjoint() * gen.matrix * q;
  unitary_resid = std::max(residual_norm(restricted.adjoint() * restricted, identity(k)),
                           residual_norm(restricted * restricted.adjoint(), identity(k)));
  reduction_resid = reduction_residual(gen, candidate);
  return trusted && unitary_resid <= tol.resid_abs && reduction_resid <= tol.resid_abs;
}

std::vector<Index> default_samples(std::span<const Index> samples) {
  if (samples.empty()) return {1};
  return {samples.begin(), samples.end()};
}

}  // namespace

const char* to_string(Commutation c) {
  switch (c) {
    case Commutation::DoublyCommuting:
      return "doubly_commuting";
    case Commutation::Commuting:
      return "commuting";
    case Commutation::Neither:
      break;
  }
  return "neither";
}

WoldResult wold_cooper(const SemigroupFamily& v, Index max_steps, const Tolerances& tol) {
  if (max_steps < 1) throw InvalidInput("wold_cooper: need at least one step");
  const Index n = v.dim();
  const WindowedMap gen = v.generator();
  WoldResult out;
  Subspace running = Subspace::full(n);
  Subspace previous = running;
  for (Index k = 1; k <= max_steps; ++k) {
    const Subspace range = orthonormal_basis(trusted_columns(v.power(k)), tol);
    previous = running;
    running = intersect(running, range, tol);
    out.steps_used = k;
    out.reducing_unitary_certified =
        certify_unitary(gen, running, tol, out.unitary_residual, out.reduction_residual);
    if (out.reducing_unitary_certified) break;
  }
  out.intersection_unchanged =
      out.steps_used >= 2 && same_subspace(running, previous, tol.resid_abs);
  out.stabilized = out.intersection_unchanged || out.reducing_unitary_certified;
  out.cnu_part = complement(running);
  out.unitary_part = std::move(running);
  return out;
}

bool is_cnu(const SemigroupFamily& v, Index max_steps, const Tolerances& tol) {
  const WoldResult w = wold_cooper(v, max_steps, tol);
  return w.stabilized && w.unitary_part.dim() == 0;
}

CommutationReport classify_pair(const PairOfSemigroups& pair, std::span<const Index> samples,
                                const Tolerances& tol) {
  CommutationReport out;
  const auto grid = default_samples(samples);
  for (Index t : grid) {
    const WindowedMap a = pair.first.element(t);
    for (Index s : grid) {
      const WindowedMap b = pair.second.element(s);
      const WindowedMap bs = adjoint(b);

      const WindowedMap ab = compose(a, b);
      const WindowedMap ba = compose(b, a);
      const IndexSet comm_cols = set_intersection(ab.faithful, ba.faithful);
      out.comm_residual =
          std::max(out.comm_residual, residual_on_columns(ab.matrix, ba.matrix, comm_cols));

      const WindowedMap abs = compose(a, bs);
      const WindowedMap bsa = compose(bs, a);
      const IndexSet dc_cols = set_intersection(abs.faithful, bsa.faithful);
      out.double_comm_residual = std::max(
          out.double_comm_residual, residual_on_columns(abs.matrix, bsa.matrix, dc_cols));
      out.checked_columns += static_cast<Index>(comm_cols.size() + dc_cols.size());
    }
  }
  if (pair.dim() > 0 && out.checked_columns == 0) {
    throw WindowTooSmall("classify_pair: no trusted columns at the sampled times");
  }
  if (out.comm_residual <= tol.resid_abs) {
    out.classified = out.double_comm_residual <= tol.resid_abs ? Commutation::DoublyCommuting
                                                               : Commutation::Commuting;
  }
  return out;
}

FourfoldResult fourfold_decompose(const PairOfSemigroups& pair, Index max_steps,
                                  const Tolerances& tol, std::span<const Index> samples) {
  const auto grid = default_samples(samples);
  const CommutationReport cls = classify_pair(pair, grid, tol);
  if (cls.classified != Commutation::DoublyCommuting) {
    throw PreconditionFailed(std::string("fourfold_decompose: pair is ") +
                             to_string(cls.classified) + ", not doubly commuting");
  }
  FourfoldResult out;
  out.first_wold = wold_cooper(pair.first, max_steps, tol);
  out.second_wold = wold_cooper(pair.second, max_steps, tol);
  const auto& w1 = out.first_wold;
  const auto& w2 = out.second_wold;
  out.pp = intersect(w1.cnu_part, w2.cnu_part, tol);
  out.pu = intersect(w1.cnu_part, w2.unitary_part, tol);
  out.up = intersect(w1.unitary_part, w2.cnu_part, tol);
  out.uu = intersect(w1.unitary_part, w2.unitary_part, tol);

  const std::array<const Subspace*, 4> parts{&out.pp, &out.pu, &out.up, &out.uu};
  for (const Subspace* part : parts) {
    for (int which = 0; which < 2; ++which) {
      for (Index t : grid) {
        const double r = reduction_residual(pair[which].element(t), *part);
        out.reduction_residuals.push_back(r);
        out.max_reduction_residual = std::max(out.max_reduction_residual, r);
      }
    }
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      out.orthogonality_residual =
          std::max(out.orthogonality_residual, overlap_norm(*parts[i], *parts[j]));
    }
  }
  return out;
}

Report bcl_check(Index T, Index m, Index r, std::span<const Index> samples,
                 const Tolerances& tol) {
  (void)tol;  // pass criterion is exact equality
  const CellGrid1D grid(m, T, r);
  const HardyCoeffSpace space(T - 1, m, r);
  const Matrix w = w_unitary(T, m, r);
  Report report;
  for (Index j : samples) {
    const WindowedMap lhs = conjugate(halfline_shift(grid, j), w);
    const WindowedMap rhs = phi_multiplier(space, j);
    const IndexSet cols = set_intersection(lhs.faithful, rhs.faithful);
    const double resid = residual_on_columns(lhs.matrix, rhs.matrix, cols);
    report.add("bcl.t=" + format_time(j, m), resid, {static_cast<Index>(cols.size())},
               resid == 0.0);
  }
  return report;
}

Report verify_joint_equivalence(const PairOfSemigroups& a, const PairOfSemigroups& b,
                                const Matrix& z, std::span<const Index> samples,
                                const Tolerances& tol) {
  if (z.rows() != b.dim() || z.cols() != a.dim()) {
    throw DimensionMismatch("verify_joint_equivalence: Z has the wrong shape");
  }
  const double unitarity =
      std::max(residual_norm(z.adjoint() * z, identity(z.cols())),
               residual_norm(z * z.adjoint(), identity(z.rows())));
  if (unitarity > tol.resid_abs) {
    throw PreconditionFailed("verify_joint_equivalence: Z is not unitary (residual " +
                             format_residual(unitarity) + ")");
  }
  Report report;
  for (int which = 0; which < 2; ++which) {
    for (Index t : samples) {
      const WindowedMap lhs = conjugate(a[which].element(t), z);
      const WindowedMap rhs = b[which].element(t);
      const IndexSet cols = set_intersection(lhs.faithful, rhs.faithful);
      const double resid = residual_on_columns(lhs.matrix, rhs.matrix, cols);
      report.add("equiv.V" + std::to_string(which + 1) + ".t=" +
                     format_time(t, a.first.steps_per_unit()),
                 resid, {static_cast<Index>(cols.size())}, resid <= tol.resid_abs);
    }
  }
  return report;
}

ProductUnitaryResult product_unitary_part(const PairOfSemigroups& pair, Index max_steps,
                                          const Tolerances& tol) {
  const Index one = 1;
  const CommutationReport cls = classify_pair(pair, std::span<const Index>(&one, 1), tol);
  if (cls.classified == Commutation::Neither) {
    throw PreconditionFailed("product_unitary_part: pair does not commute");
  }
  ProductUnitaryResult out;
  out.wold = wold_cooper(product_family(pair), max_steps, tol);
  out.reduction_first = reduction_residual(pair.first.generator(), out.wold.unitary_part);
  out.reduction_second = reduction_residual(pair.second.generator(), out.wold.unitary_part);
  return out;
}

}  // namespace isoflow
