#include "isoflow/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace isoflow {

namespace {

// Projector-diagonal slack under which a subspace is treated as a
// coordinate subspace.
constexpr double kCoordinateSnap = 1e-12;
constexpr double kOrthonormalSlack = 1e-10;

Index rank_from_singular_values(const Eigen::VectorXd& sv, double rank_rel) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = rank_rel * sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= cutoff) ++rank;
  }
  return rank;
}

void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m)) {
    throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace

void Tolerances::validate() const {
  for (double v : {rank_rel, resid_abs, angle}) {
    if (!(v > 0.0 && v < 1.0)) {
      throw InvalidInput("tolerances must lie strictly between 0 and 1");
    }
  }
}

Subspace::Subspace(Index ambient, Matrix basis)
    : ambient_(ambient), basis_(std::move(basis)) {
  if (basis_.rows() != ambient_) {
    throw DimensionMismatch("subspace basis has " +
                            std::to_string(basis_.rows()) +
                            " rows, ambient is " + std::to_string(ambient_));
  }
  if (basis_.cols() > ambient_) {
    throw InvalidInput("subspace basis has more columns than the ambient");
  }
  require_finite(basis_, "Subspace");
  const Index k = basis_.cols();
  if (k == 0) {
    is_coordinate_ = true;
    return;
  }
  const Matrix gram = basis_.adjoint() * basis_;
  if ((gram - identity(k)).cwiseAbs().maxCoeff() > kOrthonormalSlack) {
    throw InvalidInput("subspace basis is not orthonormal");
  }

  IndexSet ones;
  bool coordinate = true;
  for (Index i = 0; i < ambient_ && coordinate; ++i) {
    const double d = basis_.row(i).squaredNorm();
    if (std::abs(d - 1.0) <= kCoordinateSnap) {
      ones.push_back(i);
    } else if (std::abs(d) > kCoordinateSnap) {
      coordinate = false;
    }
  }
  if (coordinate && static_cast<Index>(ones.size()) == k) {
    is_coordinate_ = true;
    coords_ = std::move(ones);
    basis_.setZero();
    for (Index c = 0; c < k; ++c) basis_(coords_[c], c) = 1.0;
  }
}

Subspace Subspace::zero(Index ambient) {
  return Subspace(ambient, Matrix(ambient, 0));
}

Subspace Subspace::full(Index ambient) {
  return Subspace(ambient, identity(ambient));
}

Subspace Subspace::coordinates(Index ambient, const IndexSet& coords) {
  Matrix basis = Matrix::Zero(ambient, static_cast<Index>(coords.size()));
  for (std::size_t c = 0; c < coords.size(); ++c) {
    if (coords[c] < 0 || coords[c] >= ambient) {
      throw InvalidInput("coordinate index out of range");
    }
    if (c > 0 && coords[c] <= coords[c - 1]) {
      throw InvalidInput("coordinate set must be strictly increasing");
    }
    basis(coords[c], static_cast<Index>(c)) = 1.0;
  }
  return Subspace(ambient, std::move(basis));
}

Matrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

Subspace orthonormal_basis(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "orthonormal_basis");
  if (m.cols() == 0 || m.rows() == 0) return Subspace::zero(m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Index rank = rank_from_singular_values(svd.singularValues(), tol.rank_rel);
  return Subspace(m.rows(), svd.matrixU().leftCols(rank));
}

Subspace intersect(const Subspace& s1, const Subspace& s2,
                   const Tolerances& tol) {
  if (s1.ambient() != s2.ambient()) {
    throw DimensionMismatch("intersect: ambient dimensions differ");
  }
  const Index n = s1.ambient();
  if (s1.dim() == 0 || s2.dim() == 0) return Subspace::zero(n);
  if (const auto* c1 = s1.coordinate_support()) {
    if (const auto* c2 = s2.coordinate_support()) {
      return Subspace::coordinates(n, set_intersection(*c1, *c2));
    }
  }
  // P1 P2 P1 = Q1 (Q1*Q2)(Q1*Q2)* Q1*, eigenvalues are squared cosines.
  const Matrix cross = s1.basis().adjoint() * s2.basis();
  Matrix sandwich = s1.basis() * (cross * cross.adjoint()) * s1.basis().adjoint();
  sandwich = 0.5 * (sandwich + sandwich.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sandwich);
  const double keep = tol.angle * tol.angle;
  const Eigen::VectorXd& values = eig.eigenvalues();
  Index first = n;
  for (Index i = 0; i < n; ++i) {
    if (values(i) >= keep) {
      first = i;
      break;
    }
  }
  return Subspace(n, eig.eigenvectors().rightCols(n - first));
}

Subspace complement(const Subspace& s) {
  const Index n = s.ambient();
  if (s.dim() == 0) return Subspace::full(n);
  if (s.dim() == n) return Subspace::zero(n);
  if (const auto* coords = s.coordinate_support()) {
    IndexSet rest;
    std::size_t pos = 0;
    for (Index i = 0; i < n; ++i) {
      if (pos < coords->size() && (*coords)[pos] == i) {
        ++pos;
      } else {
        rest.push_back(i);
      }
    }
    return Subspace::coordinates(n, rest);
  }
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  return Subspace(n, svd.matrixU().rightCols(n - s.dim()));
}

Subspace nullspace(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "nullspace");
  const Index n = m.cols();
  if (n == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index rank = rank_from_singular_values(svd.singularValues(), tol.rank_rel);
  return Subspace(n, svd.matrixV().rightCols(n - rank));
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double residual_norm(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("residual_norm: shapes differ");
  }
  return spectral_norm(a - b);
}

Subspace relative_complement(const Subspace& s1, const Subspace& s2,
                             const Tolerances& tol) {
  return intersect(s1, complement(s2), tol);
}

Subspace span_union(const Subspace& s1, const Subspace& s2,
                    const Tolerances& tol) {
  if (s1.ambient() != s2.ambient()) {
    throw DimensionMismatch("span_union: ambient dimensions differ");
  }
  Matrix joined(s1.ambient(), s1.dim() + s2.dim());
  joined << s1.basis(), s2.basis();
  return orthonormal_basis(joined, tol);
}

double projector_distance(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient() != s2.ambient()) {
    throw DimensionMismatch("projector_distance: ambient dimensions differ");
  }
  return residual_norm(s1.projector(), s2.projector());
}

double max_principal_angle(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient() != s2.ambient() || s1.dim() != s2.dim()) {
    throw DimensionMismatch("max_principal_angle: dimensions differ");
  }
  if (s1.dim() == 0) return 0.0;
  // sin of the largest angle is ‖(I - P1) Q2‖; avoids acos near 1.
  const Matrix leak = s2.basis() - s1.basis() * (s1.basis().adjoint() * s2.basis());
  return std::asin(std::min(1.0, spectral_norm(leak)));
}

bool same_subspace(const Subspace& s1, const Subspace& s2, double tol) {
  return s1.ambient() == s2.ambient() && s1.dim() == s2.dim() &&
         projector_distance(s1, s2) <= tol;
}

double overlap_norm(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient() != s2.ambient()) {
    throw DimensionMismatch("overlap_norm: ambient dimensions differ");
  }
  return spectral_norm(s1.basis().adjoint() * s2.basis());
}

Subspace to_local(const Subspace& s, const Subspace& frame) {
  if (s.ambient() != frame.ambient()) {
    throw DimensionMismatch("to_local: ambient dimensions differ");
  }
  const Matrix local = frame.basis().adjoint() * s.basis();
  const Matrix lifted = frame.basis() * local;
  if (s.dim() > 0 && (lifted - s.basis()).cwiseAbs().maxCoeff() > kOrthonormalSlack) {
    throw InvalidInput("to_local: subspace is not contained in the frame");
  }
  return Subspace(frame.dim(), local);
}

Subspace to_ambient(const Subspace& local, const Subspace& frame) {
  if (local.ambient() != frame.dim()) {
    throw DimensionMismatch("to_ambient: local ambient differs from frame dimension");
  }
  return Subspace(frame.ambient(), frame.basis() * local.basis());
}

IndexSet index_range(Index n) {
  IndexSet out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace isoflow
