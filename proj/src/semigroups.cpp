#include "isoflow/semigroups.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace isoflow {

struct SemigroupFamily::Cache {
  std::mutex mu;
  std::vector<WindowedMap> powers;
};

Index grid_steps(double t, Index m) {
  if (m < 1) throw InvalidInput("steps per unit must be >= 1");
  if (!std::isfinite(t) || t < 0.0) throw InvalidInput("time must be finite and >= 0");
  const double scaled = t * static_cast<double>(m);
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled))) {
    throw InvalidInput("time " + std::to_string(t) + " is not on the grid (1/" +
                       std::to_string(m) + ")Z");
  }
  return static_cast<Index>(rounded);
}

std::string format_time(Index steps, Index m) {
  if (m == 1) return std::to_string(steps);
  return std::to_string(steps) + "/" + std::to_string(m);
}

SemigroupFamily::SemigroupFamily(std::string label, Index steps_per_unit, Index dim,
                                 Builder builder)
    : label_(std::move(label)),
      steps_per_unit_(steps_per_unit),
      dim_(dim),
      builder_(std::move(builder)),
      cache_(std::make_shared<Cache>()) {
  if (steps_per_unit_ < 1) throw InvalidInput("steps per unit must be >= 1");
  if (dim_ < 0) throw InvalidInput("family dimension must be >= 0");
}

SemigroupFamily SemigroupFamily::from_generator(std::string label, Index steps_per_unit,
                                                WindowedMap generator) {
  if (generator.domain_dim() != generator.codomain_dim()) {
    throw DimensionMismatch("semigroup generator must be square");
  }
  const Index dim = generator.domain_dim();
  SemigroupFamily out(std::move(label), steps_per_unit, dim, nullptr);
  out.cache_->powers.push_back(WindowedMap::identity(dim));
  out.cache_->powers.push_back(std::move(generator));
  return out;
}

WindowedMap SemigroupFamily::element(Index steps) const {
  if (steps < 0) throw InvalidInput("negative step count");
  if (steps == 0) return WindowedMap::identity(dim_);
  if (!builder_) return power(steps);
  WindowedMap out = builder_(steps);
  if (out.domain_dim() != dim_ || out.codomain_dim() != dim_) {
    throw DimensionMismatch("family '" + label_ + "' built an element of the wrong size");
  }
  return out;
}

WindowedMap SemigroupFamily::power(Index k) const {
  if (k < 0) throw InvalidInput("negative power");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& powers = cache_->powers;
  if (powers.empty()) powers.push_back(WindowedMap::identity(dim_));
  if (powers.size() == 1 && k >= 1) powers.push_back(builder_(1));
  while (static_cast<Index>(powers.size()) <= k) {
    powers.push_back(compose(powers[1], powers.back()));
  }
  return powers[static_cast<std::size_t>(k)];
}

PairOfSemigroups::PairOfSemigroups(SemigroupFamily a, SemigroupFamily b)
    : first(std::move(a)), second(std::move(b)) {
  if (first.dim() != second.dim()) {
    throw DimensionMismatch("pair of semigroups on spaces of different dimension");
  }
  if (first.steps_per_unit() != second.steps_per_unit()) {
    throw InvalidInput("pair of semigroups on different time grids");
  }
}

WindowedMap halfline_shift(const CellGrid1D& grid, Index j) {
  if (j < 0) throw InvalidInput("halfline_shift: negative shift");
  if (j > grid.cells()) {
    throw WindowTooSmall("halfline_shift: shift " + format_time(j, grid.m) +
                         " exceeds window T = " + std::to_string(grid.T));
  }
  WindowedMap out;
  out.matrix = Matrix::Zero(grid.dim(), grid.dim());
  for (Index k = 0; k < grid.cells(); ++k) {
    if (k + j >= grid.cells()) continue;
    for (Index f = 0; f < grid.r; ++f) {
      out.matrix(grid.index(k + j, f), grid.index(k, f)) = 1.0;
      out.faithful.push_back(grid.index(k, f));
    }
  }
  out.adj_faithful = index_range(grid.dim());
  return out;
}

std::pair<Matrix, Matrix> partial_isometry_pair(Index m, Index j, Index r) {
  if (m < 1 || r < 1) throw InvalidInput("partial_isometry_pair: m and r must be >= 1");
  if (j < 0 || j >= m) {
    throw InvalidShift("partial_isometry_pair: shift must satisfy 0 <= j < m");
  }
  const CellGrid1D cell(m, 1, r);
  Matrix e0 = Matrix::Zero(cell.dim(), cell.dim());
  Matrix e1 = Matrix::Zero(cell.dim(), cell.dim());
  for (Index k = 0; k < m; ++k) {
    for (Index f = 0; f < r; ++f) {
      if (k + j < m) e0(cell.index(k + j, f), cell.index(k, f)) = 1.0;
      if (k < j) e1(cell.index(k, f), cell.index(m - j + k, f)) = 1.0;
    }
  }
  return {std::move(e0), std::move(e1)};
}

WindowedMap phi_multiplier(const HardyCoeffSpace& space, Index j) {
  if (j < 0) throw InvalidInput("phi_multiplier: negative time");
  const Index n = j / space.m;
  const Index s = j % space.m;
  if (n > space.d) {
    throw WindowTooSmall("phi_multiplier: floor(t) = " + std::to_string(n) +
                         " exceeds top degree " + std::to_string(space.d));
  }
  const auto [e0, e1] = partial_isometry_pair(space.m, s, space.r);
  const Index b = space.block_dim();
  WindowedMap out;
  out.matrix = Matrix::Zero(space.dim(), space.dim());
  for (Index block = 0; block <= space.d; ++block) {
    if (block + n <= space.d) out.matrix.block((block + n) * b, block * b, b, b) = e0;
    if (block + n + 1 <= space.d) {
      out.matrix.block((block + n + 1) * b, block * b, b, b) = e1;
    }
  }
  // Every untruncated column carries exactly one unit entry, so a column is
  // trusted iff that entry landed inside the degree window.
  for (Index c = 0; c < space.dim(); ++c) {
    if (out.matrix.col(c).cwiseAbs().maxCoeff() > 0.0) out.faithful.push_back(c);
  }
  out.adj_faithful = index_range(space.dim());
  return out;
}

std::pair<WindowedMap, WindowedMap> bishift_pair(const QuadrantGrid2D& grid, Index j) {
  if (j < 0) throw InvalidInput("bishift_pair: negative shift");
  const Index side = grid.side();
  if (j > side) {
    throw WindowTooSmall("bishift_pair: shift " + format_time(j, grid.m) +
                         " exceeds window T = " + std::to_string(grid.T));
  }
  WindowedMap first;
  WindowedMap second;
  first.matrix = Matrix::Zero(grid.dim(), grid.dim());
  second.matrix = Matrix::Zero(grid.dim(), grid.dim());
  for (Index k1 = 0; k1 < side; ++k1) {
    for (Index k2 = 0; k2 < side; ++k2) {
      for (Index f = 0; f < grid.r; ++f) {
        const Index src = grid.index(k1, k2, f);
        if (k1 + j < side) {
          first.matrix(grid.index(k1 + j, k2, f), src) = 1.0;
          first.faithful.push_back(src);
        }
        if (k2 + j < side) {
          second.matrix(grid.index(k1, k2 + j, f), src) = 1.0;
          second.faithful.push_back(src);
        }
      }
    }
  }
  first.adj_faithful = index_range(grid.dim());
  second.adj_faithful = index_range(grid.dim());
  return {std::move(first), std::move(second)};
}

std::pair<WindowedMap, WindowedMap> modified_bishift_pair(const LRegionIndex& region,
                                                          Index j) {
  if (j < 0) throw InvalidInput("modified_bishift_pair: negative shift");
  const Index half = region.half();
  if (j > half) {
    throw WindowTooSmall("modified_bishift_pair: shift " + format_time(j, region.m) +
                         " exceeds window T = " + std::to_string(region.T));
  }
  const TorusGrid2D& torus = region.parent;
  const IndexSet cells = region.region();
  std::map<Index, Index> local;
  for (std::size_t c = 0; c < cells.size(); ++c) local[cells[c]] = static_cast<Index>(c);
  const Index dim = static_cast<Index>(cells.size());

  // axis 0: (M1 f)(x) = 0 if x2 >= 0 and x1 >= -t, f(x1 + t, x2) otherwise.
  // axis 1 is the mirror image.
  auto build = [&](int axis) {
    WindowedMap out;
    out.matrix = Matrix::Zero(dim, dim);
    for (Index o1 = 0; o1 < torus.n; ++o1) {
      for (Index o2 = 0; o2 < torus.n; ++o2) {
        if (region.in_quadrant(o1, o2)) continue;
        const Index moving = axis == 0 ? o1 : o2;
        const Index fixed = axis == 0 ? o2 : o1;
        const bool in_band = fixed >= half && moving + j >= half;
        const bool leaves_window = moving + j >= torus.n;
        for (Index f = 0; f < torus.r; ++f) {
          const Index row = local.at(torus.index(o1, o2, f));
          if (in_band) {
            out.adj_faithful.push_back(row);
            continue;
          }
          if (leaves_window) continue;
          const Index src = axis == 0 ? torus.index(o1 + j, o2, f)
                                      : torus.index(o1, o2 + j, f);
          out.matrix(row, local.at(src)) = 1.0;
          out.adj_faithful.push_back(row);
        }
      }
    }
    std::sort(out.adj_faithful.begin(), out.adj_faithful.end());
    // A source cell is trusted iff its image stays inside the torus window.
    for (Index c = 0; c < dim; ++c) {
      const Index cell = cells[static_cast<std::size_t>(c)] / torus.r;
      const Index moving = axis == 0 ? cell / torus.n : cell % torus.n;
      if (moving - j >= 0) out.faithful.push_back(c);
    }
    return out;
  };
  return {build(0), build(1)};
}

Matrix torus_translation(const TorusGrid2D& grid, Index a, Index b) {
  Matrix out = Matrix::Zero(grid.dim(), grid.dim());
  for (Index i1 = 0; i1 < grid.n; ++i1) {
    for (Index i2 = 0; i2 < grid.n; ++i2) {
      for (Index f = 0; f < grid.r; ++f) {
        out(grid.index(i1 + a, i2 + b, f), grid.index(i1, i2, f)) = 1.0;
      }
    }
  }
  return out;
}

WindowedMap torus_translation_map(const TorusGrid2D& grid, Index a, Index b) {
  WindowedMap out;
  out.matrix = torus_translation(grid, a, b);
  auto inside = [&](Index i) { return i >= 0 && i < grid.n; };
  for (Index i1 = 0; i1 < grid.n; ++i1) {
    for (Index i2 = 0; i2 < grid.n; ++i2) {
      for (Index f = 0; f < grid.r; ++f) {
        const Index idx = grid.index(i1, i2, f);
        if (inside(i1 + a) && inside(i2 + b)) out.faithful.push_back(idx);
        if (inside(i1 - a) && inside(i2 - b)) out.adj_faithful.push_back(idx);
      }
    }
  }
  return out;
}

Matrix circulant_unitary(Index n, Index k) {
  if (n < 1) throw InvalidInput("circulant_unitary: n must be >= 1");
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) out((((i + k) % n) + n) % n, i) = 1.0;
  return out;
}

WindowedMap line_translation_map(Index n, Index k) {
  WindowedMap out;
  out.matrix = circulant_unitary(n, k);
  for (Index i = 0; i < n; ++i) {
    if (i + k >= 0 && i + k < n) out.faithful.push_back(i);
    if (i - k >= 0 && i - k < n) out.adj_faithful.push_back(i);
  }
  return out;
}

SemigroupFamily halfline_shift_family(const CellGrid1D& grid) {
  return SemigroupFamily("halfline_shift", grid.m, grid.dim(),
                         [grid](Index j) { return halfline_shift(grid, j); });
}

SemigroupFamily phi_multiplier_family(const HardyCoeffSpace& space) {
  return SemigroupFamily("phi_multiplier", space.m, space.dim(),
                         [space](Index j) { return phi_multiplier(space, j); });
}

SemigroupFamily circulant_family(Index n, Index step, Index steps_per_unit) {
  return SemigroupFamily("circulant", steps_per_unit, n, [n, step](Index j) {
    return WindowedMap::exact(circulant_unitary(n, step * j));
  });
}

PairOfSemigroups bishift_families(const QuadrantGrid2D& grid) {
  return PairOfSemigroups(
      SemigroupFamily("bishift.1", grid.m, grid.dim(),
                      [grid](Index j) { return bishift_pair(grid, j).first; }),
      SemigroupFamily("bishift.2", grid.m, grid.dim(),
                      [grid](Index j) { return bishift_pair(grid, j).second; }));
}

PairOfSemigroups modified_bishift_families(const LRegionIndex& region) {
  const Index dim = static_cast<Index>(region.region().size());
  return PairOfSemigroups(
      SemigroupFamily("modified_bishift.1", region.m, dim,
                      [region](Index j) { return modified_bishift_pair(region, j).first; }),
      SemigroupFamily("modified_bishift.2", region.m, dim, [region](Index j) {
        return modified_bishift_pair(region, j).second;
      }));
}

SemigroupFamily direct_sum(std::span<const SemigroupFamily> parts) {
  if (parts.empty()) throw InvalidInput("direct_sum: no parts");
  std::string label;
  Index dim = 0;
  for (const auto& p : parts) {
    if (p.steps_per_unit() != parts.front().steps_per_unit()) {
      throw InvalidInput("direct_sum: parts live on different time grids");
    }
    label += (label.empty() ? "" : "+") + p.label();
    dim += p.dim();
  }
  std::vector<SemigroupFamily> copy(parts.begin(), parts.end());
  return SemigroupFamily(label, parts.front().steps_per_unit(), dim, [copy](Index j) {
    std::vector<WindowedMap> blocks;
    blocks.reserve(copy.size());
    for (const auto& p : copy) blocks.push_back(p.element(j));
    return direct_sum(std::span<const WindowedMap>(blocks));
  });
}

PairOfSemigroups direct_sum(std::span<const PairOfSemigroups> parts) {
  std::vector<SemigroupFamily> first;
  std::vector<SemigroupFamily> second;
  for (const auto& p : parts) {
    first.push_back(p.first);
    second.push_back(p.second);
  }
  return PairOfSemigroups(direct_sum(std::span<const SemigroupFamily>(first)),
                          direct_sum(std::span<const SemigroupFamily>(second)));
}

SemigroupFamily tensor_with_identity(const SemigroupFamily& f, Index r, FiberSide side) {
  const std::string label =
      side == FiberSide::Right ? f.label() + "_x_I" : "I_x_" + f.label();
  return SemigroupFamily(label, f.steps_per_unit(), f.dim() * r, [f, r, side](Index j) {
    return tensor_with_identity(f.element(j), r, side);
  });
}

SemigroupFamily product_family(const PairOfSemigroups& pair) {
  return SemigroupFamily("prod(" + pair.first.label() + "," + pair.second.label() + ")",
                         pair.first.steps_per_unit(), pair.dim(), [pair](Index j) {
                           return compose(pair.first.element(j), pair.second.element(j));
                         });
}

SemigroupFamily identity_family(Index n, Index steps_per_unit) {
  return SemigroupFamily("identity", steps_per_unit, n,
                         [n](Index) { return WindowedMap::identity(n); });
}

Report check_semigroup_law(const SemigroupFamily& family, std::span<const Index> samples,
                           const Tolerances& tol) {
  Report report;
  const Index m = family.steps_per_unit();
  for (Index s : samples) {
    for (Index t : samples) {
      const WindowedMap joint = family.element(s + t);
      const WindowedMap composed = compose(family.element(s), family.element(t));
      const IndexSet cols = set_intersection(joint.faithful, composed.faithful);
      if (cols.empty() && family.dim() > 0) {
        throw WindowTooSmall("semigroup law: no trusted columns left for s = " +
                             format_time(s, m) + ", t = " + format_time(t, m));
      }
      const double resid = residual_on_columns(joint.matrix, composed.matrix, cols);
      report.add("law." + family.label() + ".s=" + format_time(s, m) +
                     ".t=" + format_time(t, m),
                 resid, {static_cast<Index>(cols.size())}, resid <= tol.resid_abs);
    }
  }
  return report;
}

}  // namespace isoflow
