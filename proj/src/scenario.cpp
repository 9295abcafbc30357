#include "isoflow/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "isoflow/commutant.hpp"
#include "isoflow/constructions.hpp"
#include "isoflow/decompose.hpp"
#include "isoflow/duality.hpp"

namespace isoflow {

namespace {

constexpr Index kMaxTorusDim = 1024;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Index parse_index(const std::string& text, const std::string& key, int line) {
  Index value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("line " + std::to_string(line) + ": " + key +
                      " expects an integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& text, const std::string& key, int line) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !(value > 0.0)) {
    throw ConfigError("line " + std::to_string(line) + ": " + key +
                      " expects a positive real, got '" + text + "'");
  }
  return value;
}

/// "a/b" or "a" as a step count on the grid (1/m)Z_+.
Index parse_time(const std::string& text, Index m, int line) {
  const auto slash = text.find('/');
  const Index num = parse_index(trim(text.substr(0, slash)), "samples", line);
  const Index den =
      slash == std::string::npos ? 1 : parse_index(trim(text.substr(slash + 1)), "samples", line);
  if (num < 0 || den <= 0 || (num * m) % den != 0) {
    throw ConfigError("line " + std::to_string(line) + ": sample time '" + text +
                      "' is not on the grid (1/" + std::to_string(m) + ")Z_+");
  }
  return num * m / den;
}

struct PendingSection {
  Scenario scenario;
  std::string samples_text;
  int samples_line = 0;
  int header_line = 0;
};

Scenario finish_section(PendingSection& p) {
  if (p.scenario.construction.empty()) {
    throw ConfigError("line " + std::to_string(p.header_line) + ": section [" +
                      p.scenario.name + "] has no construction");
  }
  if (!p.samples_text.empty()) {
    std::stringstream ss(p.samples_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      p.scenario.params.samples.push_back(
          parse_time(trim(item), p.scenario.params.m, p.samples_line));
    }
  }
  return std::move(p.scenario);
}

std::string echo(const Scenario& s) {
  std::string out;
  for (const auto& [k, v] : s.raw) {
    if (k == "construction") continue;
    out += (out.empty() ? "" : " ") + k + "=" + v;
  }
  return out;
}

std::vector<Index> or_default(const std::vector<Index>& given, std::vector<Index> fallback) {
  return given.empty() ? fallback : given;
}

std::vector<Index> range_steps(Index from, Index to) {
  std::vector<Index> out;
  for (Index k = from; k <= to; ++k) out.push_back(k);
  return out;
}

/// Samples s with 2s strictly inside the window, so every s + t keeps a trusted column.
std::vector<Index> law_samples(Index steps_in_window) {
  std::vector<Index> out;
  for (Index k = 0; k <= 2 && 2 * k < steps_in_window; ++k) out.push_back(k);
  return out;
}

void add_law(Report& report, const SemigroupFamily& f, std::span<const Index> samples,
             const Tolerances& tol) {
  const Report law = check_semigroup_law(f, samples, tol);
  // Semigroup laws hold on composed trusted sets with exact equality.
  for (const CheckEntry& e : law.entries) {
    report.add(e.check_id, e.residual, e.dims, e.residual == 0.0,
               e.reason);
  }
}

void add_classification(Report& report, const CommutationReport& c, Commutation expected) {
  report.add(std::string("classify.") + to_string(c.classified), c.double_comm_residual,
             {c.checked_columns}, c.classified == expected,
             c.classified == expected ? "" : std::string("expected ") + to_string(expected));
}

void add_windowed_equality(Report& report, const std::string& id, const WindowedMap& got,
                           const WindowedMap& want) {
  const IndexSet cols = set_intersection(got.faithful, want.faithful);
  const double resid = residual_on_columns(got.matrix, want.matrix, cols);
  const bool same = got.faithful == want.faithful;
  report.add(id, resid, {static_cast<Index>(cols.size())}, same && resid == 0.0,
             same ? "" : "trusted columns differ");
}

void add_commutant(Report& report, const CommutantBasis& cb, Index r, const Tolerances& tol) {
  report.add("commutant.dim", 0.0, {cb.dim, r * r}, cb.dim == r * r);
  report.add(std::string("commutant.structure.") + to_string(cb.verdict),
             cb.max_structure_residual, {cb.dim}, cb.verdict == StructureVerdict::FiberScalar);
  report.add("commutant.constraints", cb.max_constraint_residual, {cb.dim},
             cb.max_constraint_residual <= 10.0 * tol.rank_rel);
}

using Runner = std::function<void(const Scenario&, Report&)>;

void run_halfline(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const CellGrid1D grid(p.m, p.T, p.r);
  const SemigroupFamily f = halfline_shift_family(grid);
  const auto samples = or_default(p.samples, law_samples(grid.cells()));
  add_law(report, f, samples, s.tol);
  for (Index t : samples) {
    const double iso = isometry_residual(f.element(t));
    report.add("isometry.t=" + format_time(t, p.m), iso, {grid.dim()}, iso <= s.tol.resid_abs);
  }
  const WoldResult w = wold_cooper(f, p.K, s.tol);
  report.add("wold.cnu", w.unitary_residual, {w.cnu_part.dim(), w.unitary_part.dim()},
             w.stabilized && w.unitary_part.dim() == 0,
             w.stabilized ? "" : "window exhausted before the unitary part stabilized");
}

void run_bishift(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const QuadrantGrid2D grid(p.m, p.T, p.r);
  const PairOfSemigroups pair = bishift_families(grid);
  const auto samples = or_default(p.samples, law_samples(grid.side()));
  add_law(report, pair.first, samples, s.tol);
  add_law(report, pair.second, samples, s.tol);
  add_classification(report, classify_pair(pair, or_default(p.samples, {1}), s.tol),
                     Commutation::DoublyCommuting);
  const FourfoldResult ff = fourfold_decompose(pair, p.K, s.tol);
  report.add("fourfold.dims", ff.max_reduction_residual, ff.dims(),
             ff.pp.dim() == grid.dim() && ff.max_reduction_residual <= s.tol.resid_abs);
}

void run_modified_bishift(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const LRegionIndex region(p.m, p.T, p.r);
  const PairOfSemigroups pair = modified_bishift_families(region);
  const auto samples = or_default(p.samples, law_samples(region.half()));
  add_law(report, pair.first, samples, s.tol);
  add_law(report, pair.second, samples, s.tol);
  add_classification(report, classify_pair(pair, or_default(p.samples, {1}), s.tol),
                     Commutation::Commuting);
  const ProductUnitaryResult pu = product_unitary_part(pair, p.K, s.tol);
  report.add("product.cnu", pu.wold.unitary_residual, {pair.dim(), pu.unitary_part().dim()},
             pu.wold.stabilized && pu.unitary_part().dim() == 0);
}

void run_four_block_dc(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const BlockPair bp = four_block_dc_pair(QuadrantGrid2D(p.m, p.T, p.r), p.q);
  const auto samples = or_default(p.samples, {1});
  add_classification(report, classify_pair(bp.pair, samples, s.tol),
                     Commutation::DoublyCommuting);
  const FourfoldResult ff = fourfold_decompose(bp.pair, p.K, s.tol, samples);
  const std::vector<const Subspace*> got{&ff.pp, &ff.pu, &ff.up, &ff.uu};
  const char* names[] = {"pp", "pu", "up", "uu"};
  for (std::size_t k = 0; k < got.size(); ++k) {
    const bool same_dim = got[k]->dim() == bp.blocks[k].dim();
    const double angle = same_dim ? max_principal_angle(*got[k], bp.blocks[k]) : 1.0;
    report.add(std::string("fourfold.") + names[k], angle, {got[k]->dim(), bp.block_dims[k]},
               same_dim && angle <= 1e-8);
  }
  report.add("fourfold.reduction", ff.max_reduction_residual, {},
             ff.max_reduction_residual <= s.tol.resid_abs);
  report.add("fourfold.orthogonality", ff.orthogonality_residual, {},
             ff.orthogonality_residual <= s.tol.resid_abs);
}

ExtensionSetup four_block_setup(const ScenarioParams& p) {
  const std::vector<ExtensionSetup> parts{
      l_region_setup(p.m, p.T, p.r), shift_circulant_setup(p.m, p.T, p.q),
      circulant_shift_setup(p.q, p.m, p.T), circulant_pair_setup(p.q, p.q, p.m)};
  return direct_sum(std::span<const ExtensionSetup>(parts));
}

void run_four_block_ddc(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const ExtensionSetup setup = four_block_setup(p);
  setup.validate(s.tol);
  const Index n = p.m * p.T;
  const std::vector<Index> expected{3 * n * n * p.r, n * p.q, p.q * n, p.q * p.q};
  const DualFourfoldResult dff = dual_fourfold(setup, p.K, p.max_orbit, s.tol);
  report.append(dff.checks);
  report.add("dual_fourfold.dims", 0.0, dff.dims(), dff.dims() == expected);
}

void run_commutant_e(const Scenario& s, Report& report) {
  add_commutant(report, commutant_of_partial_isometries(s.params.m, s.params.r, s.tol),
                s.params.r, s.tol);
}

void run_commutant_mz(const Scenario& s, Report& report) {
  add_commutant(report, doubly_commutant_of_mz(s.params.d, s.params.r, s.tol), s.params.r,
                s.tol);
}

void run_bcl(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const auto samples = or_default(p.samples, range_steps(0, p.m * p.T - 1));
  report.append(bcl_check(p.T, p.m, p.r, samples, s.tol));
}

void run_dual_example(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const ExtensionSetup setup = l_region_setup(p.m, p.T, p.r);
  setup.validate(s.tol);
  const DualResult d = dual_pair(setup, p.max_orbit, s.tol);
  const QuadrantGrid2D grid(p.m, p.T, p.r);
  report.add("dual.space", 0.0, {d.wt_h.dim(), grid.dim()}, d.wt_h.dim() == grid.dim());
  if (d.wt_h.dim() == grid.dim()) {
    const PairOfSemigroups bishift = bishift_families(grid);
    for (Index k : or_default(p.samples, range_steps(1, grid.side() - 1))) {
      for (int which = 0; which < 2; ++which) {
        add_windowed_equality(report,
                              "dual.equals_bishift.V" + std::to_string(which + 1) + ".t=" +
                                  format_time(k, p.m),
                              d.dual[which].power(k), bishift[which].element(k));
      }
    }
  }
  report.append(dual_cnu_check(setup, p.K, p.max_orbit, s.tol));
}

void run_double_dual(const Scenario& s, Report& report) {
  const auto& p = s.params;
  const ExtensionSetup setup = with_fiber(l_region_setup(p.m, p.T, 1), p.r);
  setup.validate(s.tol);
  const Report dd = double_dual_check(setup, p.K, p.max_orbit, s.tol);
  report.append(dd);
  if (const CheckEntry* e = dd.find("double_dual.minimality"); e && e->dims.size() == 3) {
    const Index bound = 2 * p.m * p.T;
    report.add("double_dual.orbit_bound", 0.0, {e->dims[2], bound}, e->dims[2] <= bound);
  }
  report.append(modified_bishift_model_check(setup, p.K, p.max_orbit, s.tol));
}

void run_simultaneous(const Scenario& s, Report& report) {
  const auto& p = s.params;
  ExtensionSetup setup;
  if (p.setup.empty() || p.setup == "dc_ddc") {
    const std::vector<ExtensionSetup> parts{shift_circulant_setup(p.m, p.T, p.q),
                                            circulant_shift_setup(p.q, p.m, p.T)};
    setup = direct_sum(std::span<const ExtensionSetup>(parts));
  } else if (p.setup == "bishift") {
    setup = quadrant_setup(p.m, p.T, p.r);
  } else {
    setup = circulant_pair_setup(p.q, p.q, p.m);
  }
  setup.validate(s.tol);
  report.append(simultaneous_dc_ddc_classify(setup, p.K, p.max_orbit, s.tol));
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"halfline_shift", run_halfline},
      {"bishift", run_bishift},
      {"modified_bishift", run_modified_bishift},
      {"four_block_dc", run_four_block_dc},
      {"four_block_ddc", run_four_block_ddc},
      {"commutant_e", run_commutant_e},
      {"commutant_mz", run_commutant_mz},
      {"bcl", run_bcl},
      {"dual_example", run_dual_example},
      {"double_dual", run_double_dual},
      {"simultaneous", run_simultaneous},
  };
  return table;
}

void check_range(Index value, Index lo, Index hi, const std::string& what,
                 const std::string& scenario) {
  if (value < lo || value > hi) {
    throw ConfigError("[" + scenario + "] " + what + " = " + std::to_string(value) +
                      " is outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"halfline_shift", "Cooper/Wold decomposition", "m T r K samples",
       "shift semigroup on L^2([0,T), C^r): semigroup law, isometry, c.n.u."},
      {"bishift", "bishift example", "m T r K samples",
       "coordinate shifts on the quadrant: doubly commuting, purely shift-shift"},
      {"modified_bishift", "modified bishift example", "m T r K samples",
       "compressed translations on the L-region: commuting, not doubly commuting, c.n.u."},
      {"four_block_dc", "fourfold decomposition of doubly commuting pairs", "m T r q K samples",
       "four constructed blocks recovered by the fourfold splitting"},
      {"four_block_ddc", "fourfold decomposition of dual doubly commuting pairs",
       "m T r q K max_orbit", "four constructed blocks recovered from the dual"},
      {"commutant_e", "commutant of the cut shifts E0, E1", "m r",
       "commutant has dimension r^2 and fiber-scalar form"},
      {"commutant_mz", "doubly commuting with M_z tensor identity", "d r",
       "double commutant of M_z has dimension r^2 and form I tensor omega"},
      {"bcl", "BCL identification of the shift semigroup", "m T r samples",
       "W S_t W* equals the multiplier by z^n E0 + z^(n+1) E1"},
      {"dual_example", "dual of the modified bishift is the bishift", "m T r K max_orbit samples",
       "dual of the L-region pair equals the quadrant bishift"},
      {"double_dual", "double dual recovers the pair; modified bishift model",
       "m T r K max_orbit", "minimality, recovery of (M1, M2), reindexing to the model"},
      {"simultaneous", "simultaneously doubly and dual doubly commuting pairs",
       "m T r q K max_orbit setup=dc_ddc|bishift|circulant",
       "three-part splitting iff both classifications hold"},
  };
  return entries;
}

std::string list_catalog() {
  std::ostringstream out;
  for (const auto& e : catalog()) {
    out << e.name << "\n  anchor: " << e.anchor << "\n  parameters: " << e.parameters
        << "\n  " << e.summary << "\n";
  }
  return out.str();
}

std::vector<Scenario> parse_scenarios(std::istream& in) {
  static const std::vector<std::string> keys{"construction", "m", "T",       "r",
                                             "d",            "q", "K",       "max_orbit",
                                             "samples",      "setup", "tol", "rank_rel"};
  std::vector<Scenario> out;
  std::optional<PendingSection> cur;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      if (cur) out.push_back(finish_section(*cur));
      cur.emplace();
      cur->scenario.name = trim(line.substr(1, line.size() - 2));
      cur->header_line = lineno;
      for (const auto& s : out) {
        if (s.name == cur->scenario.name) {
          throw ConfigError("line " + std::to_string(lineno) + ": duplicate scenario [" +
                            s.name + "]");
        }
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    if (!cur) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside of a section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    Scenario& s = cur->scenario;
    s.raw.emplace_back(key, value);
    auto& p = s.params;
    if (key == "construction") s.construction = value;
    else if (key == "m") p.m = parse_index(value, key, lineno);
    else if (key == "T") p.T = parse_index(value, key, lineno);
    else if (key == "r") p.r = parse_index(value, key, lineno);
    else if (key == "d") p.d = parse_index(value, key, lineno);
    else if (key == "q") p.q = parse_index(value, key, lineno);
    else if (key == "K") p.K = parse_index(value, key, lineno);
    else if (key == "max_orbit") p.max_orbit = parse_index(value, key, lineno);
    else if (key == "setup") p.setup = value;
    else if (key == "tol") s.tol.resid_abs = parse_real(value, key, lineno);
    else if (key == "rank_rel") s.tol.rank_rel = parse_real(value, key, lineno);
    else {
      cur->samples_text = value;
      cur->samples_line = lineno;
    }
  }
  if (cur) out.push_back(finish_section(*cur));
  return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_scenarios(in);
}

void validate_scenario(const Scenario& s) {
  if (runners().count(s.construction) == 0) {
    throw ConfigError("[" + s.name + "] unknown construction '" + s.construction + "'");
  }
  const auto& p = s.params;
  check_range(p.m, 1, 16, "m", s.name);
  check_range(p.T, 1, 8, "T", s.name);
  check_range(p.r, 1, 4, "r", s.name);
  check_range(p.d, 1, 8, "d", s.name);
  check_range(p.q, 1, 8, "q", s.name);
  check_range(p.K, 1, 128, "K", s.name);
  check_range(p.max_orbit, 1, 128, "max_orbit", s.name);
  if (s.construction == "commutant_e") check_range(p.m, 2, 16, "m", s.name);
  const bool planar = s.construction == "bishift" || s.construction == "modified_bishift" ||
                      s.construction == "four_block_dc" || s.construction == "four_block_ddc" ||
                      s.construction == "dual_example" || s.construction == "double_dual" ||
                      s.construction == "simultaneous";
  if (planar) {
    const Index side = 2 * p.m * p.T;
    check_range(side * side * p.r, 1, kMaxTorusDim, "torus dimension (2mT)^2 r", s.name);
  }
  if (s.construction == "simultaneous" && !p.setup.empty() && p.setup != "dc_ddc" &&
      p.setup != "bishift" && p.setup != "circulant") {
    throw ConfigError("[" + s.name + "] unknown setup '" + p.setup + "'");
  }
  for (Index t : p.samples) check_range(t, 0, 128 * p.m, "sample step", s.name);
  s.tol.validate();
}

ScenarioReport run_scenario(const Scenario& s) {
  validate_scenario(s);
  ScenarioReport out;
  out.name = s.name;
  out.construction = s.construction;
  out.param_echo = echo(s);
  out.resid_abs = s.tol.resid_abs;
  try {
    runners().at(s.construction)(s, out.report);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    out.report.add(s.construction + ".aborted", 0.0, {}, false, e.what());
  }
  if (out.report.entries.empty()) {
    out.report.add(s.construction + ".no_checks", 0.0, {}, false, "no checks were run");
  }
  return out;
}

std::string format_reports(const std::vector<ScenarioReport>& reports) {
  std::ostringstream out;
  out << "isoflow_report version=" << kToolVersion << "\n";
  Index passed = 0;
  for (const auto& r : reports) {
    out << "\n[" << r.name << "]\n";
    out << "construction = " << r.construction << "\n";
    out << "params = " << r.param_echo << "\n";
    out << "resid_abs = " << format_residual(r.resid_abs) << "\n";
    for (const CheckEntry& e : r.report.entries) {
      out << "check " << e.check_id << " residual=" << format_residual(e.residual) << " dims=[";
      for (std::size_t k = 0; k < e.dims.size(); ++k) out << (k ? "," : "") << e.dims[k];
      out << "] pass=" << (e.pass ? "true" : "false");
      if (!e.reason.empty()) out << " reason=\"" << e.reason << "\"";
      out << "\n";
    }
    out << "overall = " << (r.pass() ? "pass" : "fail") << "\n";
    if (r.pass()) ++passed;
  }
  out << "\nsummary = " << passed << "/" << reports.size() << " scenarios pass\n";
  return out.str();
}

}  // namespace isoflow
