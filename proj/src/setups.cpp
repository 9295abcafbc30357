#include "isoflow/duality.hpp"

namespace isoflow {

namespace {

IndexSet physical_window(const WindowedMap& u1, const WindowedMap& u2) {
  IndexSet w = set_intersection(u1.faithful, u1.adj_faithful);
  w = set_intersection(w, u2.faithful);
  return set_intersection(w, u2.adj_faithful);
}

ExtensionSetup make_setup(std::string label, WindowedMap u1, WindowedMap u2, Subspace h,
                          Index steps_per_unit) {
  ExtensionSetup s;
  s.label = std::move(label);
  s.physical_window = physical_window(u1, u2);
  s.u1 = std::move(u1);
  s.u2 = std::move(u2);
  s.h = std::move(h);
  s.steps_per_unit = steps_per_unit;
  return s;
}

}  // namespace

ExtensionSetup l_region_setup(Index m, Index T, Index r) {
  const LRegionIndex region(m, T, r);
  return make_setup("l_region", torus_translation_map(region.parent, -1, 0),
                    torus_translation_map(region.parent, 0, -1),
                    Subspace::coordinates(region.parent.dim(), region.region()), m);
}

ExtensionSetup quadrant_setup(Index m, Index T, Index r) {
  const LRegionIndex region(m, T, r);
  return make_setup("quadrant", torus_translation_map(region.parent, 1, 0),
                    torus_translation_map(region.parent, 0, 1),
                    Subspace::coordinates(region.parent.dim(), region.quadrant()), m);
}

ExtensionSetup shift_circulant_setup(Index m, Index T, Index q) {
  if (q < 1) throw InvalidInput("shift_circulant_setup: q must be >= 1");
  const CellGrid1D half(m, T);
  const Index n = 2 * half.cells();
  IndexSet coords;
  for (Index cell = 0; cell < half.cells(); ++cell) {
    for (Index rho = 0; rho < q; ++rho) coords.push_back(cell * q + rho);
  }
  return make_setup(
      "shift_circulant", tensor_with_identity(line_translation_map(n, -1), q, FiberSide::Right),
      tensor_with_identity(WindowedMap::exact(circulant_unitary(q, 1)), n, FiberSide::Left),
      Subspace::coordinates(n * q, coords), m);
}

ExtensionSetup circulant_shift_setup(Index q, Index m, Index T) {
  if (q < 1) throw InvalidInput("circulant_shift_setup: q must be >= 1");
  const CellGrid1D half(m, T);
  const Index n = 2 * half.cells();
  IndexSet coords;
  for (Index rho = 0; rho < q; ++rho) {
    for (Index cell = 0; cell < half.cells(); ++cell) coords.push_back(rho * n + cell);
  }
  return make_setup(
      "circulant_shift",
      tensor_with_identity(WindowedMap::exact(circulant_unitary(q, 1)), n, FiberSide::Right),
      tensor_with_identity(line_translation_map(n, -1), q, FiberSide::Left),
      Subspace::coordinates(n * q, coords), m);
}

ExtensionSetup circulant_pair_setup(Index q1, Index q2, Index steps_per_unit) {
  if (q1 < 1 || q2 < 1) throw InvalidInput("circulant_pair_setup: sizes must be >= 1");
  return make_setup(
      "circulant_pair",
      tensor_with_identity(WindowedMap::exact(circulant_unitary(q1, 1)), q2, FiberSide::Right),
      tensor_with_identity(WindowedMap::exact(circulant_unitary(q2, 1)), q1, FiberSide::Left),
      Subspace::full(q1 * q2), steps_per_unit);
}

ExtensionSetup direct_sum(std::span<const ExtensionSetup> parts) {
  if (parts.empty()) throw InvalidInput("direct_sum: no setups given");
  std::vector<WindowedMap> u1s;
  std::vector<WindowedMap> u2s;
  std::string label;
  Index ambient = 0;
  Index hdim = 0;
  for (const auto& p : parts) {
    if (p.steps_per_unit != parts.front().steps_per_unit) {
      throw InvalidInput("direct_sum: setups use different time grids");
    }
    u1s.push_back(p.u1);
    u2s.push_back(p.u2);
    label += (label.empty() ? "" : "+") + p.label;
    ambient += p.ambient_dim();
    hdim += p.h.dim();
  }
  Matrix basis = Matrix::Zero(ambient, hdim);
  Index r0 = 0;
  Index c0 = 0;
  for (const auto& p : parts) {
    basis.block(r0, c0, p.ambient_dim(), p.h.dim()) = p.h.basis();
    r0 += p.ambient_dim();
    c0 += p.h.dim();
  }
  return make_setup(label, direct_sum(std::span<const WindowedMap>(u1s)),
                    direct_sum(std::span<const WindowedMap>(u2s)),
                    Subspace(ambient, std::move(basis)), parts.front().steps_per_unit);
}

ExtensionSetup with_fiber(const ExtensionSetup& setup, Index r) {
  if (r < 1) throw InvalidInput("with_fiber: r must be >= 1");
  return make_setup(setup.label + "_x_C" + std::to_string(r),
                    tensor_with_identity(setup.u1, r, FiberSide::Right),
                    tensor_with_identity(setup.u2, r, FiberSide::Right),
                    Subspace(setup.ambient_dim() * r, kron(setup.h.basis(), identity(r))),
                    setup.steps_per_unit);
}

}  // namespace isoflow
