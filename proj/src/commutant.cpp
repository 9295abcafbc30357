#include "isoflow/commutant.hpp"

#include <algorithm>
#include <cmath>

namespace isoflow {

namespace {

/// Rows of the vectorized map B -> BY - YB (column-major vec) selected by
/// the (row, col) entries of the constraint.
Matrix constraint_rows(const CommutationConstraint& c, Index n) {
  const Matrix op = kron(c.y.transpose(), identity(n)) - kron(identity(n), c.y);
  Matrix out(static_cast<Index>(c.rows.size() * c.cols.size()), n * n);
  Index k = 0;
  for (Index col : c.cols) {
    for (Index row : c.rows) out.row(k++) = op.row(col * n + row);
  }
  return out;
}

double constraint_residual(const Matrix& b, const CommutationConstraint& c) {
  const Matrix diff = b * c.y - c.y * b;
  double worst = 0.0;
  for (Index col : c.cols) {
    for (Index row : c.rows) worst = std::max(worst, std::abs(diff(row, col)));
  }
  return worst;
}

/// Average of the diagonal r x r blocks of B (B has `blocks` of them).
Matrix diagonal_block_average(const Matrix& b, Index blocks, Index r) {
  Matrix out = Matrix::Zero(r, r);
  for (Index k = 0; k < blocks; ++k) out += b.block(k * r, k * r, r, r);
  return out / static_cast<double>(blocks);
}

CommutantBasis finish(std::vector<Matrix> basis, std::span<const CommutationConstraint> cons,
                      const std::function<Matrix(const Matrix&)>& block_of,
                      const std::function<Matrix(const Matrix&)>& rebuild) {
  CommutantBasis out;
  out.dim = static_cast<Index>(basis.size());
  for (const Matrix& b : basis) {
    for (const auto& c : cons) {
      out.max_constraint_residual = std::max(out.max_constraint_residual, constraint_residual(b, c));
    }
    Matrix block = block_of(b);
    out.max_structure_residual =
        std::max(out.max_structure_residual, residual_norm(rebuild(block), b));
    out.fiber_blocks.push_back(std::move(block));
  }
  out.basis = std::move(basis);
  out.verdict = out.max_structure_residual <= kStructureThreshold ? StructureVerdict::FiberScalar
                                                                  : StructureVerdict::Other;
  return out;
}

}  // namespace

const char* to_string(StructureVerdict v) {
  return v == StructureVerdict::FiberScalar ? "fiber_scalar" : "other";
}

std::vector<Matrix> solve_commutant(Index n, std::span<const CommutationConstraint> constraints,
                                    const Tolerances& tol) {
  Index rows = 0;
  for (const auto& c : constraints) {
    if (c.y.rows() != n || c.y.cols() != n) {
      throw DimensionMismatch("solve_commutant: constraint has the wrong size");
    }
    rows += static_cast<Index>(c.rows.size() * c.cols.size());
  }
  Matrix system(rows, n * n);
  Index at = 0;
  for (const auto& c : constraints) {
    const Matrix block = constraint_rows(c, n);
    system.middleRows(at, block.rows()) = block;
    at += block.rows();
  }
  const Subspace kernel = nullspace(system, tol);
  std::vector<Matrix> out;
  for (Index k = 0; k < kernel.dim(); ++k) {
    out.push_back(Eigen::Map<const Matrix>(kernel.basis().col(k).data(), n, n));
  }
  return out;
}

CommutantBasis commutant_of_partial_isometries(Index m, Index r, const Tolerances& tol) {
  if (m < 2) throw InvalidInput("commutant_of_partial_isometries: m must be >= 2");
  if (r < 1) throw InvalidInput("commutant_of_partial_isometries: r must be >= 1");
  const Index n = m * r;
  const IndexSet all = index_range(n);
  std::vector<CommutationConstraint> cons;
  for (Index j = 1; j < m; ++j) {
    auto [e0, e1] = partial_isometry_pair(m, j, r);
    cons.push_back({std::move(e0), all, all});
    cons.push_back({std::move(e1), all, all});
  }
  return finish(
      solve_commutant(n, cons, tol), cons,
      [&](const Matrix& b) { return theta_compress(b, m, r); },
      [&](const Matrix& c) { return fiber_scalar(c, m); });
}

Matrix theta_compress(const Matrix& b, Index m, Index r) {
  if (m < 1 || r < 1) throw InvalidInput("theta_compress: m and r must be >= 1");
  if (b.rows() != m * r || b.cols() != m * r) {
    throw DimensionMismatch("theta_compress: B must act on the (m r)-dimensional space");
  }
  // Θ* B Θ is the sum of all r x r blocks divided by m; summing first keeps
  // theta_compress(I) == I exactly.
  Matrix sum = Matrix::Zero(r, r);
  for (Index k = 0; k < m; ++k) {
    for (Index l = 0; l < m; ++l) sum += b.block(k * r, l * r, r, r);
  }
  return sum / static_cast<double>(m);
}

Matrix fiber_scalar(const Matrix& c, Index m) {
  const Matrix lambda = lambda_reorder(m, c.rows());
  return lambda * kron(c, identity(m)) * lambda.adjoint();
}

Matrix mz_matrix(Index d, Index r) {
  Matrix s = Matrix::Zero(d + 1, d + 1);
  for (Index k = 0; k < d; ++k) s(k + 1, k) = 1.0;
  return kron(s, identity(r));
}

CommutantBasis doubly_commutant_of_mz(Index d, Index r, const Tolerances& tol) {
  if (d < 1) throw InvalidInput("doubly_commutant_of_mz: d must be >= 1");
  if (r < 1) throw InvalidInput("doubly_commutant_of_mz: r must be >= 1");
  const Index n = (d + 1) * r;
  const Matrix mz = mz_matrix(d, r);
  // M_z is exact on columns below the top degree; M_z* is exact everywhere
  // but only rows below the top degree see an untruncated B.
  IndexSet low;
  for (Index i = 0; i < d * r; ++i) low.push_back(i);
  const IndexSet all = index_range(n);
  const std::vector<CommutationConstraint> cons{{mz, all, low}, {mz.adjoint(), low, all}};
  return finish(
      solve_commutant(n, cons, tol), cons,
      [&](const Matrix& b) { return diagonal_block_average(b, d + 1, r); },
      [&](const Matrix& w) { return kron(identity(d + 1), w); });
}

Report fuglede_instance_check(const SemigroupFamily& a, const SemigroupFamily& v, Index r,
                              std::span<const Index> samples, const Tolerances& tol) {
  if (a.dim() != v.dim()) throw DimensionMismatch("fuglede_instance_check: sizes differ");
  if (r < 1 || v.dim() % r != 0) {
    throw InvalidInput("fuglede_instance_check: fiber size must divide the dimension");
  }
  const Index cells = v.dim() / r;
  const Index m = a.steps_per_unit();
  Report report;
  for (Index s : samples) {
    const WindowedMap as = a.element(s);
    const double normal = residual_norm(as.matrix * as.matrix.adjoint(),
                                        as.matrix.adjoint() * as.matrix);
    if (normal > tol.resid_abs) {
      throw PreconditionFailed("fuglede_instance_check: A(" + format_time(s, m) +
                               ") is not normal");
    }
    bool commutes_everywhere = true;
    for (Index t : samples) {
      const WindowedMap vt = v.element(t);
      const WindowedMap lhs = compose(as, vt);
      const WindowedMap rhs = compose(vt, as);
      const IndexSet cols = set_intersection(lhs.faithful, rhs.faithful);
      const double comm = residual_on_columns(lhs.matrix, rhs.matrix, cols);
      const WindowedMap vts = adjoint(vt);
      const WindowedMap lhs2 = compose(as, vts);
      const WindowedMap rhs2 = compose(vts, as);
      const IndexSet cols2 = set_intersection(lhs2.faithful, rhs2.faithful);
      const double adj = residual_on_columns(lhs2.matrix, rhs2.matrix, cols2);
      const bool commutes = comm <= tol.resid_abs;
      commutes_everywhere = commutes_everywhere && commutes;
      report.add("fuglede.A=" + format_time(s, m) + ".V=" + format_time(t, m), adj,
                 {static_cast<Index>(cols.size()), static_cast<Index>(cols2.size())},
                 !commutes || adj <= 10.0 * tol.resid_abs);
    }
    if (commutes_everywhere) {
      const Matrix b = diagonal_block_average(as.matrix, cells, r);
      const double structure = residual_norm(kron(identity(cells), b), as.matrix);
      report.add("fuglede.fiber_form.A=" + format_time(s, m), structure, {r},
                 structure <= kStructureThreshold);
    }
  }
  return report;
}

}  // namespace isoflow
