#include <doctest.h>

#include <cmath>
#include <set>

#include "isoflow/duality.hpp"
#include "oracles.hpp"

using namespace isoflow;

namespace {

ExtensionSetup four_block(Index m, Index T, Index q) {
  const std::vector<ExtensionSetup> parts{l_region_setup(m, T), shift_circulant_setup(m, T, q),
                                          circulant_shift_setup(q, m, T),
                                          circulant_pair_setup(q, q, m)};
  return direct_sum(std::span<const ExtensionSetup>(parts));
}

ExtensionSetup dc_ddc(Index q) {
  const std::vector<ExtensionSetup> parts{shift_circulant_setup(1, 2, q),
                                          circulant_shift_setup(q, 1, 2)};
  return direct_sum(std::span<const ExtensionSetup>(parts));
}

Matrix dft(Index n) {
  Matrix f(n, n);
  const double pi = std::acos(-1.0);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      f(a, b) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                           2.0 * pi * static_cast<double>(a * b) / static_cast<double>(n));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("setups satisfy their invariants") {
  for (const ExtensionSetup& s :
       {l_region_setup(1, 2), l_region_setup(2, 1, 2), quadrant_setup(1, 3),
        shift_circulant_setup(1, 2, 3), circulant_shift_setup(2, 2, 1),
        circulant_pair_setup(2, 3), four_block(1, 2, 2), with_fiber(l_region_setup(1, 2), 2)}) {
    CHECK_NOTHROW(s.validate());
    CHECK(residual_norm(s.u1.matrix * s.u2.matrix, s.u2.matrix * s.u1.matrix) == 0.0);
  }
  ExtensionSetup broken = l_region_setup(1, 2);
  broken.u1.matrix *= 2.0;
  CHECK_THROWS_AS(broken.validate(), InvalidInput);
  CHECK_THROWS_AS(shift_circulant_setup(1, 2, 0), InvalidInput);
}

TEST_CASE("minimal extension of the whole ambient takes one step") {
  const ExtensionSetup s = circulant_pair_setup(2, 3);
  const OrbitSpan o = minimal_extension(s, 4);
  CHECK(o.stabilized);
  CHECK(o.orbit_bound == 0);
  CHECK(o.span.dim() == 6);
}

TEST_CASE("translates of the L-region cover the torus") {
  const Index m = 1;
  const Index T = 2;
  const ExtensionSetup s = l_region_setup(m, T);
  const OrbitSpan o = minimal_extension(s, 8);
  REQUIRE(o.stabilized);
  CHECK(o.span.dim() == s.ambient_dim());
  CHECK(projector_distance(o.span, Subspace::full(s.ambient_dim())) == 0.0);

  // Covering oracle by cell enumeration with the same orbit bound.
  const LRegionIndex lr(m, T);
  const Index n = lr.parent.n;
  std::set<Index> covered;
  const Index A = std::max<Index>(o.orbit_bound, 1);
  for (Index idx : lr.region()) {
    for (Index a = -A; a <= A; ++a) {
      for (Index b = -A; b <= A; ++b) {
        covered.insert(lr.parent.index(idx / n + a, idx % n + b, 0));
      }
    }
  }
  CHECK(static_cast<Index>(covered.size()) == n * n);

  // The extension contains H and is invariant under both unitaries.
  const Matrix& q = o.span.basis();
  CHECK(spectral_norm(s.h.basis() - q * (q.adjoint() * s.h.basis())) <= 1e-12);
  for (const Matrix& u : {s.u1.matrix, s.u2.matrix}) {
    for (const Matrix& v : {u, Matrix(u.adjoint())}) {
      const Matrix img = v * q;
      CHECK(spectral_norm(img - q * (q.adjoint() * img)) <= 1e-10);
    }
  }
}

TEST_CASE("orbit of a coordinate line under a circulant") {
  // U = F D F* with phases D = diag(1, i, -1, i); e0 = F (ones / 2), so the
  // orbit of e0 has dimension equal to the number of distinct phases.
  const Index n = 4;
  Matrix d = Matrix::Zero(n, n);
  const Complex phases[] = {1.0, Complex(0, 1), -1.0, Complex(0, 1)};
  for (Index k = 0; k < n; ++k) d(k, k) = phases[k];
  const Matrix f = dft(n);
  const Matrix u = f * d * f.adjoint();
  const Subspace seed = Subspace::coordinates(n, {0});
  const OrbitSpan o = orbit_span(u, u, seed, 8);
  REQUIRE(o.stabilized);

  // Orbit enumeration oracle: span{U^c e0 : |c| <= 2A} for growing A.
  const auto orbit_rank = [&](Index A) {
    Matrix cols(n, 4 * A + 1);
    Index at = 0;
    for (Index c = -2 * A; c <= 2 * A; ++c) {
      Matrix p = identity(n);
      for (Index k = 0; k < std::abs(c); ++k) p = (c > 0 ? u : Matrix(u.adjoint())) * p;
      cols.col(at++) = p.col(0);
    }
    return oracle::gram_rank(cols);
  };
  Index A = 0;
  while (orbit_rank(A + 1) != orbit_rank(A)) ++A;
  CHECK(o.span.dim() == orbit_rank(A));
  CHECK(o.span.dim() == 3);
  CHECK(o.orbit_bound == A);
}

TEST_CASE("unstabilized extensions are reported and rejected by dual_pair") {
  const ExtensionSetup s = l_region_setup(1, 3);
  const OrbitSpan o = minimal_extension(s, 0);
  CHECK_FALSE(o.stabilized);
  CHECK_THROWS_AS(dual_pair(s, 0), PreconditionFailed);
}

TEST_CASE("the dual of the modified bishift is the bishift") {
  for (Index T : {2, 3}) {
    const ExtensionSetup s = l_region_setup(1, T);
    const DualResult d = dual_pair(s, 8);
    const QuadrantGrid2D g(1, T);
    REQUIRE(d.wt_h.dim() == g.dim());
    const LRegionIndex lr(1, T);
    REQUIRE(d.wt_h.coordinate_support() != nullptr);
    CHECK(*d.wt_h.coordinate_support() == lr.quadrant());
    CHECK(d.invariance_residual == 0.0);
    const PairOfSemigroups bi = bishift_families(g);
    for (Index k = 1; k < g.side(); ++k) {
      for (int which = 0; which < 2; ++which) {
        const WindowedMap got = d.dual[which].power(k);
        const WindowedMap want = bi[which].element(k);
        CHECK(got.faithful == want.faithful);
        CHECK(residual_on_columns(got.matrix, want.matrix, got.faithful) == 0.0);
      }
    }
    CHECK(isometry_residual(d.dual.first.generator()) <= 1e-10);
  }
}

TEST_CASE("dual of the whole ambient is empty") {
  const DualResult d = dual_pair(circulant_pair_setup(3, 2), 4);
  CHECK(d.wt_h.dim() == 0);
  CHECK(d.dual.dim() == 0);
  const Report r = dual_cnu_check(circulant_pair_setup(3, 2), 4, 4);
  CHECK(r.pass());
}

TEST_CASE("dual of shift times circulant is again c.n.u. times unitary") {
  const ExtensionSetup s = shift_circulant_setup(1, 3, 2);
  const DualResult d = dual_pair(s, 8);
  CHECK(d.wt_h.dim() == 6);
  const std::vector<Index> one{1};
  CHECK(classify_pair(d.dual, one).classified == Commutation::DoublyCommuting);
  CHECK(is_cnu(d.dual.first, 6));
  const WoldResult second = wold_cooper(d.dual.second, 6);
  CHECK(second.unitary_part.dim() == 6);
  CHECK(dual_cnu_check(s, 6, 8).pass());
}

TEST_CASE("dual pairs are c.n.u.") {
  for (const ExtensionSetup& s :
       {l_region_setup(1, 2), l_region_setup(2, 1), quadrant_setup(1, 2),
        shift_circulant_setup(1, 2, 3), circulant_shift_setup(3, 1, 2), dc_ddc(2),
        four_block(1, 2, 2)}) {
    const Report r = dual_cnu_check(s, 8, 8);
    CHECK_MESSAGE(r.pass(), s.label);
  }
}

TEST_CASE("double dual recovers the modified bishift") {
  const ExtensionSetup s = l_region_setup(1, 2);
  const Report r = double_dual_check(s, 4, 8);
  CHECK(r.pass());
  CHECK(r.max_residual() == 0.0);
  const CheckEntry* min = r.find("double_dual.minimality");
  REQUIRE(min != nullptr);
  CHECK(min->dims[2] <= 4);

  ExtensionSetup empty = s;
  empty.h = Subspace::zero(s.ambient_dim());
  CHECK_THROWS_AS(double_dual_check(empty, 4, 8), PreconditionFailed);
  CHECK_THROWS_AS(double_dual_check(circulant_pair_setup(2, 2), 4, 8), PreconditionFailed);
}

TEST_CASE("dual fourfold recovers the four constructed blocks") {
  const Index m = 1;
  const Index T = 2;
  const Index q = 2;
  const ExtensionSetup s = four_block(m, T, q);
  const DualFourfoldResult r = dual_fourfold(s, 4, 8);
  const Index n = m * T;
  CHECK(r.dims() == std::vector<Index>{3 * n * n, n * q, q * n, q * q});
  CHECK(r.checks.pass());
  CHECK(r.checks.max_residual() <= 1e-10);

  // Each summand is the corresponding block of the direct sum.
  const Index l_dim = LRegionIndex(m, T).parent.dim();
  CHECK(same_subspace(r.h_m, Subspace::coordinates(s.ambient_dim(), LRegionIndex(m, T).region()),
                      1e-12));
  const Index line = 2 * n * q;
  IndexSet uu;
  for (Index i = 0; i < q * q; ++i) uu.push_back(l_dim + 2 * line + i);
  CHECK(same_subspace(r.h_uu, Subspace::coordinates(s.ambient_dim(), uu), 1e-12));
}

TEST_CASE("dual fourfold of the pure cases") {
  const DualFourfoldResult mb = dual_fourfold(l_region_setup(1, 2), 4, 8);
  CHECK(mb.dims() == std::vector<Index>{12, 0, 0, 0});
  const DualFourfoldResult cc = dual_fourfold(circulant_pair_setup(2, 3), 4, 8);
  CHECK(cc.dims() == std::vector<Index>{0, 0, 0, 6});
  CHECK(cc.checks.pass());
  // The dual of the bishift is the modified bishift, which is not doubly commuting.
  CHECK_THROWS_AS(dual_fourfold(quadrant_setup(1, 2), 4, 8), PreconditionFailed);
}

TEST_CASE("modified bishift model") {
  const Report r1 = modified_bishift_model_check(l_region_setup(1, 2), 4, 8);
  CHECK(r1.pass());
  CHECK(r1.max_residual() == 0.0);

  const ExtensionSetup fibered = with_fiber(l_region_setup(1, 2), 2);
  const Report r2 = modified_bishift_model_check(fibered, 4, 8);
  CHECK(r2.pass());
  CHECK(r2.max_residual() == 0.0);
  const CheckEntry* iso = r2.find("model.reindex_isometry");
  REQUIRE(iso != nullptr);
  CHECK(iso->dims[2] == 2);

  // Running the check again on the same setup reproduces the report.
  const Report again = modified_bishift_model_check(fibered, 4, 8);
  REQUIRE(again.entries.size() == r2.entries.size());
  for (std::size_t k = 0; k < again.entries.size(); ++k) {
    CHECK(again.entries[k].check_id == r2.entries[k].check_id);
    CHECK(again.entries[k].residual == r2.entries[k].residual);
    CHECK(again.entries[k].dims == r2.entries[k].dims);
  }

  const Report r3 = modified_bishift_model_check(l_region_setup(2, 1), 4, 8);
  CHECK(r3.pass());
  CHECK_THROWS_AS(modified_bishift_model_check(shift_circulant_setup(1, 2, 2), 4, 8),
                  PreconditionFailed);
}

TEST_CASE("simultaneous classification") {
  const Report both = simultaneous_dc_ddc_classify(dc_ddc(3), 4, 8);
  CHECK(both.pass());
  REQUIRE(both.find("corollary.three_part") != nullptr);
  CHECK(both.find("corollary.three_part")->dims == std::vector<Index>{6, 6, 0});

  const Report bi = simultaneous_dc_ddc_classify(quadrant_setup(1, 2), 4, 8);
  CHECK(bi.pass());
  CHECK(bi.find("classify.original.doubly_commuting") != nullptr);
  CHECK(bi.find("classify.dual.commuting") != nullptr);
  CHECK(bi.find("corollary.only_if") != nullptr);

  const Report cc = simultaneous_dc_ddc_classify(circulant_pair_setup(3, 3), 4, 8);
  CHECK(cc.pass());
  REQUIRE(cc.find("corollary.three_part") != nullptr);
  CHECK(cc.find("corollary.three_part")->dims == std::vector<Index>{0, 0, 9});
}
