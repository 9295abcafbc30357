#pragma once

// Reference computations used only by the tests. They avoid the library's
// decompositions: plain Gram-Schmidt, exact rational elimination and index
// arithmetic on partial permutations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <boost/rational.hpp>

#include "isoflow/numlin.hpp"

namespace oracle {

using isoflow::Complex;
using isoflow::Index;
using isoflow::Matrix;

/// Modified Gram-Schmidt with one reorthogonalization pass; columns whose
/// remaining norm falls below `drop` times their original norm are discarded.
inline Matrix gram_schmidt(const Matrix& a, double drop = 1e-9) {
  std::vector<Eigen::VectorXcd> kept;
  for (Index c = 0; c < a.cols(); ++c) {
    Eigen::VectorXcd v = a.col(c);
    const double start = v.norm();
    if (start == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) v -= q * q.dot(v);
    }
    if (v.norm() > drop * start) kept.push_back(v / v.norm());
  }
  Matrix out(a.rows(), static_cast<Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) out.col(static_cast<Index>(k)) = kept[k];
  return out;
}

inline Index gram_rank(const Matrix& a) { return gram_schmidt(a).cols(); }

/// Projector onto the column span, via Gram-Schmidt.
inline Matrix gram_projector(const Matrix& a) {
  const Matrix q = gram_schmidt(a);
  return q * q.adjoint();
}

using Rational = boost::rational<long long>;
using IntMatrix = std::vector<std::vector<long long>>;

/// Exact rank by Gaussian elimination over the rationals.
inline Index exact_rank(const IntMatrix& m) {
  if (m.empty()) return 0;
  std::vector<std::vector<Rational>> a;
  for (const auto& row : m) a.emplace_back(row.begin(), row.end());
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c].numerator() == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c].numerator() == 0) continue;
      const Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return static_cast<Index>(rank);
}

/// Integer copy of a matrix whose entries are integers.
inline IntMatrix to_int(const Matrix& m) {
  IntMatrix out(static_cast<std::size_t>(m.rows()),
                std::vector<long long>(static_cast<std::size_t>(m.cols())));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out[i][j] = std::llround(m(i, j).real());
    }
  }
  return out;
}

/// Rows of B -> (BY - YB)(row, col), written out entrywise over unknowns
/// b[p][q] numbered p * n + q.
inline void append_commutation_rows(IntMatrix& sys, const IntMatrix& y,
                                    const std::vector<Index>& rows,
                                    const std::vector<Index>& cols) {
  const std::size_t n = y.size();
  for (Index i : rows) {
    for (Index j : cols) {
      std::vector<long long> eq(n * n, 0);
      // (BY)(i, j) = sum_k b[i][k] y[k][j];  (YB)(i, j) = sum_k y[i][k] b[k][j].
      for (std::size_t k = 0; k < n; ++k) {
        eq[static_cast<std::size_t>(i) * n + k] += y[k][static_cast<std::size_t>(j)];
        eq[k * n + static_cast<std::size_t>(j)] -= y[static_cast<std::size_t>(i)][k];
      }
      sys.push_back(std::move(eq));
    }
  }
}

/// A partial permutation as an index map (-1 for columns sent to zero).
inline std::vector<Index> as_index_map(const Matrix& m) {
  std::vector<Index> out(static_cast<std::size_t>(m.cols()), -1);
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > 0.5) out[static_cast<std::size_t>(c)] = r;
    }
  }
  return out;
}

/// Intersection over k = 1..K of the images of the trusted columns of V^k,
/// where V is a partial permutation given by `next` (-1 = leaves the window).
inline std::set<Index> range_intersection(const std::vector<Index>& next, Index K) {
  const Index n = static_cast<Index>(next.size());
  std::set<Index> running;
  for (Index i = 0; i < n; ++i) running.insert(i);
  for (Index k = 1; k <= K; ++k) {
    std::set<Index> range;
    for (Index i = 0; i < n; ++i) {
      Index at = i;
      for (Index step = 0; step < k && at >= 0; ++step) at = next[static_cast<std::size_t>(at)];
      if (at >= 0) range.insert(at);
    }
    std::set<Index> both;
    std::set_intersection(running.begin(), running.end(), range.begin(), range.end(),
                          std::inserter(both, both.begin()));
    running = std::move(both);
  }
  return running;
}

inline Matrix random_matrix(std::mt19937& rng, Index rows, Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

inline Matrix random_unitary(std::mt19937& rng, Index n) {
  return gram_schmidt(random_matrix(rng, n, n));
}

}  // namespace oracle
