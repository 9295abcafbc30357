#include "isoflow/spaces.hpp"

#include <algorithm>
#include <string>

namespace isoflow {

namespace {

void require_positive(Index v, const char* name) {
  if (v < 1) throw InvalidInput(std::string(name) + " must be >= 1");
}

}  // namespace

CellGrid1D::CellGrid1D(Index m_, Index T_, Index r_) : m(m_), T(T_), r(r_) {
  require_positive(m, "m");
  require_positive(T, "T");
  require_positive(r, "r");
}

HardyCoeffSpace::HardyCoeffSpace(Index d_, Index m_, Index r_)
    : d(d_), m(m_), r(r_) {
  if (d < 0) throw InvalidInput("degree must be >= 0");
  require_positive(m, "m");
  require_positive(r, "r");
}

QuadrantGrid2D::QuadrantGrid2D(Index m_, Index T_, Index r_)
    : m(m_), T(T_), r(r_) {
  require_positive(m, "m");
  require_positive(T, "T");
  require_positive(r, "r");
}

TorusGrid2D::TorusGrid2D(Index n_, Index r_) : n(n_), r(r_) {
  require_positive(n, "n");
  require_positive(r, "r");
}

LRegionIndex::LRegionIndex(Index m_, Index T_, Index r_)
    : parent(2 * m_ * T_, r_), m(m_), T(T_) {
  require_positive(m, "m");
  require_positive(T, "T");
}

IndexSet LRegionIndex::region() const {
  IndexSet out;
  for (Index i1 = 0; i1 < parent.n; ++i1) {
    for (Index i2 = 0; i2 < parent.n; ++i2) {
      if (in_quadrant(i1, i2)) continue;
      for (Index f = 0; f < parent.r; ++f) out.push_back(parent.index(i1, i2, f));
    }
  }
  return out;
}

IndexSet LRegionIndex::quadrant() const {
  IndexSet out;
  for (Index i1 = half(); i1 < parent.n; ++i1) {
    for (Index i2 = half(); i2 < parent.n; ++i2) {
      for (Index f = 0; f < parent.r; ++f) out.push_back(parent.index(i1, i2, f));
    }
  }
  return out;
}

Matrix w_unitary(Index T, Index m, Index r) {
  const CellGrid1D grid(m, T, r);
  const HardyCoeffSpace hardy(T - 1, m, r);
  Matrix w = Matrix::Zero(hardy.dim(), grid.dim());
  for (Index k = 0; k < grid.cells(); ++k) {
    const Index degree = k / m;
    const Index cell = k % m;
    for (Index f = 0; f < r; ++f) {
      w(hardy.index(degree, cell, f), grid.index(k, f)) = 1.0;
    }
  }
  return w;
}

Matrix lambda_reorder(Index m, Index r) {
  require_positive(m, "m");
  require_positive(r, "r");
  Matrix lambda = Matrix::Zero(m * r, m * r);
  for (Index f = 0; f < r; ++f) {
    for (Index k = 0; k < m; ++k) lambda(k * r + f, f * m + k) = 1.0;
  }
  return lambda;
}

Matrix region_injection(const IndexSet& sub, const IndexSet& ambient) {
  Matrix j = Matrix::Zero(static_cast<Index>(ambient.size()),
                          static_cast<Index>(sub.size()));
  for (std::size_t c = 0; c < sub.size(); ++c) {
    auto it = std::lower_bound(ambient.begin(), ambient.end(), sub[c]);
    if (it == ambient.end() || *it != sub[c]) {
      throw InvalidRegion("region_injection: index " + std::to_string(sub[c]) +
                          " is not in the ambient set");
    }
    j(static_cast<Index>(it - ambient.begin()), static_cast<Index>(c)) = 1.0;
  }
  return j;
}

bool is_permutation_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  std::vector<int> row_hits(static_cast<std::size_t>(m.rows()), 0);
  for (Index j = 0; j < m.cols(); ++j) {
    int col_hits = 0;
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      if (v == Complex(1.0, 0.0)) {
        ++col_hits;
        ++row_hits[static_cast<std::size_t>(i)];
      } else if (v != Complex(0.0, 0.0)) {
        return false;
      }
    }
    if (col_hits != 1) return false;
  }
  return std::all_of(row_hits.begin(), row_hits.end(), [](int h) { return h == 1; });
}

}  // namespace isoflow
