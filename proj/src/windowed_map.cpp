#include "isoflow/windowed_map.hpp"

#include <algorithm>
#include <cmath>

namespace isoflow {

namespace {

constexpr double kSupportTol = 1e-12;

Matrix select_columns(const Matrix& m, const IndexSet& cols) {
  Matrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.col(static_cast<Index>(c)) = m.col(cols[c]);
  }
  return out;
}

IndexSet offset(const IndexSet& s, Index by) {
  IndexSet out(s);
  for (auto& i : out) i += by;
  return out;
}

}  // namespace

WindowedMap WindowedMap::exact(Matrix m) {
  WindowedMap out;
  out.faithful = index_range(m.cols());
  out.adj_faithful = index_range(m.rows());
  out.matrix = std::move(m);
  return out;
}

WindowedMap WindowedMap::identity(Index n) { return exact(isoflow::identity(n)); }

IndexSet support(const Vector& v) {
  IndexSet out;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kSupportTol) out.push_back(i);
  }
  return out;
}

bool is_subset(const IndexSet& sub, const IndexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

IndexSet columns_supported_in(const Matrix& vectors, const IndexSet& allowed) {
  IndexSet out;
  for (Index c = 0; c < vectors.cols(); ++c) {
    if (is_subset(support(vectors.col(c)), allowed)) out.push_back(c);
  }
  return out;
}

WindowedMap compose(const WindowedMap& outer, const WindowedMap& inner) {
  if (outer.domain_dim() != inner.codomain_dim()) {
    throw DimensionMismatch("compose: inner codomain does not match outer domain");
  }
  WindowedMap out;
  out.matrix = outer.matrix * inner.matrix;
  for (Index i : inner.faithful) {
    if (is_subset(support(inner.matrix.col(i)), outer.faithful)) {
      out.faithful.push_back(i);
    }
  }
  for (Index i : outer.adj_faithful) {
    if (is_subset(support(outer.matrix.row(i).adjoint()), inner.adj_faithful)) {
      out.adj_faithful.push_back(i);
    }
  }
  return out;
}

WindowedMap adjoint(const WindowedMap& a) {
  return WindowedMap{a.matrix.adjoint(), a.adj_faithful, a.faithful};
}

WindowedMap compress(const WindowedMap& a, const Subspace& s) {
  if (a.domain_dim() != s.ambient() || a.codomain_dim() != s.ambient()) {
    throw DimensionMismatch("compress: map and subspace live in different spaces");
  }
  const Matrix& q = s.basis();
  return WindowedMap{q.adjoint() * a.matrix * q, columns_supported_in(q, a.faithful),
                     columns_supported_in(q, a.adj_faithful)};
}

WindowedMap conjugate(const WindowedMap& a, const Matrix& z) {
  if (z.cols() != a.domain_dim() || a.domain_dim() != a.codomain_dim() ||
      z.rows() != z.cols()) {
    throw DimensionMismatch("conjugate: unitary shape does not match the map");
  }
  const Matrix zs = z.adjoint();
  return WindowedMap{z * a.matrix * zs, columns_supported_in(zs, a.faithful),
                     columns_supported_in(zs, a.adj_faithful)};
}

WindowedMap direct_sum(std::span<const WindowedMap> parts) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& p : parts) {
    rows += p.codomain_dim();
    cols += p.domain_dim();
  }
  WindowedMap out;
  out.matrix = Matrix::Zero(rows, cols);
  Index r0 = 0;
  Index c0 = 0;
  for (const auto& p : parts) {
    out.matrix.block(r0, c0, p.codomain_dim(), p.domain_dim()) = p.matrix;
    for (Index i : offset(p.faithful, c0)) out.faithful.push_back(i);
    for (Index i : offset(p.adj_faithful, r0)) out.adj_faithful.push_back(i);
    r0 += p.codomain_dim();
    c0 += p.domain_dim();
  }
  return out;
}

WindowedMap tensor_with_identity(const WindowedMap& a, Index r, FiberSide side) {
  if (r < 1) throw InvalidInput("tensor_with_identity: fiber must be >= 1");
  WindowedMap out;
  if (side == FiberSide::Right) {
    out.matrix = kron(a.matrix, isoflow::identity(r));
    for (Index i : a.faithful) {
      for (Index f = 0; f < r; ++f) out.faithful.push_back(i * r + f);
    }
    for (Index i : a.adj_faithful) {
      for (Index f = 0; f < r; ++f) out.adj_faithful.push_back(i * r + f);
    }
  } else {
    out.matrix = kron(isoflow::identity(r), a.matrix);
    for (Index f = 0; f < r; ++f) {
      for (Index i : a.faithful) out.faithful.push_back(f * a.domain_dim() + i);
      for (Index i : a.adj_faithful) {
        out.adj_faithful.push_back(f * a.codomain_dim() + i);
      }
    }
    std::sort(out.adj_faithful.begin(), out.adj_faithful.end());
  }
  return out;
}

double residual_on_columns(const Matrix& a, const Matrix& b, const IndexSet& cols) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("residual_on_columns: shapes differ");
  }
  return spectral_norm(select_columns(a - b, cols));
}

double isometry_residual(const WindowedMap& a) {
  const Matrix cols = select_columns(a.matrix, a.faithful);
  return residual_norm(cols.adjoint() * cols,
                       isoflow::identity(static_cast<Index>(a.faithful.size())));
}

double invariance_residual(const WindowedMap& a, const Subspace& s) {
  if (a.domain_dim() != s.ambient() || a.codomain_dim() != s.ambient()) {
    throw DimensionMismatch("invariance_residual: map and subspace differ in size");
  }
  const Matrix& q = s.basis();
  if (q.cols() == 0) return 0.0;
  const Matrix basis = select_columns(q, columns_supported_in(q, a.faithful));
  const Matrix image = a.matrix * basis;
  return spectral_norm(image - q * (q.adjoint() * image));
}

double reduction_residual(const WindowedMap& a, const Subspace& s) {
  return std::max(invariance_residual(a, s), invariance_residual(adjoint(a), s));
}

}  // namespace isoflow
