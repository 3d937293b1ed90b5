#include "rigidgeo/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "rigidgeo/chart.hpp"
#include "rigidgeo/family.hpp"
#include "rigidgeo/lie.hpp"
#include "rigidgeo/modular.hpp"

namespace rigidgeo::scenarios {

namespace {

using cd = std::complex<double>;

namespace anchor {
constexpr const char* kConstantCurvature = "admits a holomorphic Riemannian metric of constant sectional curvature";
constexpr const char* kNonzeroCurvature = "a holomorphic Riemannian metric of non-zero constant sectional curvature";
constexpr const char* kFlatModels =
    "the flat holomorphic Riemannian space also admits models which are given by left invariant metrics on the "
    "Heisenberg group and on";
constexpr const char* kFlatIffSolvable = "The metric is flat exactly when $G$ is solvable.";
constexpr const char* kRescaling = "up to rescaling, $g$ is locally modelled to the following model";
constexpr const char* kLiouville = "This implies the vanishing of both invariants $L_{1}$ and $L_{2}$.";
constexpr const char* kProjective =
    "$K^0=- f_{21}=0$, $K^1=(1+f_{11})-2(1+ f_{22})$, $K^2=-(g_{22}-2f_{12})$ et $K^3=g_{12}$.";
constexpr const char* kReference = "a flat symmetric holomorphic affine connection $\\nabla_{0}$";
constexpr const char* kKilling =
    "the Killing Lie algebra of $\\nabla$ is generated by the fundamental vector field of the principal fibration";
constexpr const char* kInvariantTensor = "a $\\Delta \\times \\Gamma$-invariant mermorphic (2,1)-tensor";
constexpr const char* kQuasimodular =
    "$f(\\xi)=f(\\gamma \\xi) (c_{\\gamma} \\xi +d_{\\gamma})^{-2} -K (c_{\\gamma} \\xi +d_{\\gamma})^{-1}$";
constexpr const char* kModuli = "is a complex affine space of dimension $5g+1$";
constexpr const char* kCoframe = "the one forms $\\omega_{i}$ are all closed if and only if $G$ is abelian";
constexpr const char* kUnimodular = "a simply connected connected complex unimodular Lie group of dimension $3$";
constexpr const char* kVolumeForm = "$d \\omega$ is a volume form";
}  // namespace anchor

const std::vector<ScenarioInfo> kScenarios = {
    {"model-metrics", "curvature of the builtin left-invariant metrics: sl2 has nonzero constant curvature, the "
                      "solvable models are flat, curvature scales as 1/lambda"},
    {"liouville-flatness", "the family of invariant connections is projectively flat (L1 = L2 = 0); the reference "
                           "connection is flat and torsion free"},
    {"killing-dim", "the Killing algebra of a generic family member is spanned by d/dz"},
    {"equivariance-symbolic", "the family is invariant under the deck group, checked exactly for exact group elements"},
    {"equivariance-numeric", "the same invariance with f12, g22 built from E2 and w = E4, at sample points"},
    {"wang-coframe", "coframe forms are closed iff the algebra is abelian; the builtin algebras are unimodular"},
    {"orbit-volume-form", "d omega restricted to an adjoint orbit of sl2 is a volume form"},
    {"moduli-count", "the family has 5g + 1 parameters in genus g"},
    {"flat-search", "exact search for flat left-invariant metrics; flat exactly for the solvable algebras"},
};

// ---------------------------------------------------------------------------
// Config access

class Config {
 public:
  Config(const Json& j, std::string scenario) : j_(j), scenario_(std::move(scenario)) {
    if (!j_.is_object()) fail("config must be a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items())
      if (!ok.count(k)) {
        std::string list;
        for (const auto& s : ok) list += (list.empty() ? "" : ", ") + s;
        fail("unknown key '" + k + "' (allowed: " + list + ")");
      }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const Json& at(const char* key) const { return j_.at(key); }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(scenario_ + ": " + msg); }

  ExactComplex exact(const char* key, const ExactComplex& fallback) const {
    return has(key) ? exact_value(j_.at(key), key) : fallback;
  }

  ExactComplex exact_value(const Json& v, const std::string& where) const {
    if (v.is_number_integer()) return ExactComplex(v.get<long>());
    if (!v.is_string()) fail("'" + where + "' must be an exact string such as \"3/2-1/4i\"");
    const auto s = v.get<std::string>();
    if (s.find('.') != std::string::npos)
      fail("'" + where + "' is exact; decimals are accepted only in numeric scenarios");
    try {
      return ExactComplex::parse(s);
    } catch (const std::exception& e) {
      fail("'" + where + "': " + e.what());
    }
  }

  /// Numeric fields: a JSON number, or a string accepted by the exact parser (decimals allowed).
  cd numeric_value(const Json& v, const std::string& where) const {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    if (v.is_string()) {
      try {
        return ExactComplex::parse(v.get<std::string>()).to_complex();
      } catch (const std::exception& e) {
        fail("'" + where + "': " + e.what());
      }
    }
    fail("'" + where + "' must be a number, [re, im], or a complex string");
  }

  cd numeric(const char* key, cd fallback) const { return has(key) ? numeric_value(j_.at(key), key) : fallback; }

  long integer(const char* key, long fallback, long lo, long hi) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi)
      fail(std::string("'") + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(std::string("'") + key + "' must be true or false");
    return j_.at(key).get<bool>();
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) fail(std::string("'") + key + "' must be a string");
    return j_.at(key).get<std::string>();
  }

  const Json& array(const char* key) const {
    if (!j_.at(key).is_array()) fail(std::string("'") + key + "' must be an array");
    return j_.at(key);
  }

  std::vector<std::string> strings(const char* key, std::vector<std::string> fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::string> out;
    for (const auto& v : array(key)) {
      if (!v.is_string()) fail(std::string("'") + key + "' must be an array of strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  lie::Vector exact_vector(const Json& v, const std::string& where, std::size_t dim) const {
    if (!v.is_array() || v.size() != dim) fail("'" + where + "' must be an array of " + std::to_string(dim) + " entries");
    lie::Vector out;
    for (std::size_t i = 0; i < dim; ++i) out.push_back(exact_value(v[i], where));
    return out;
  }

  GroupElement group_element(const Json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != 4) fail("'" + where + "' entries must be [a, b, c, d]");
    try {
      return GroupElement::make(exact_value(v[0], where), exact_value(v[1], where), exact_value(v[2], where),
                                exact_value(v[3], where));
    } catch (const std::invalid_argument& e) {
      fail("'" + where + "': " + e.what());
    }
  }

  family::FamilyParams family(ExactComplex f11, ExactComplex f22) const {
    std::string f12 = "f12", g22 = "g22", w = "w";
    if (has("symbols")) {
      const auto& s = j_.at("symbols");
      if (!s.is_object()) fail("'symbols' must be an object with keys f12, g22, w");
      for (const auto& [k, v] : s.items()) {
        if (!v.is_string()) fail("'symbols." + k + "' must be a string");
        if (k == "f12") f12 = v.get<std::string>();
        else if (k == "g22") g22 = v.get<std::string>();
        else if (k == "w") w = v.get<std::string>();
        else fail("unknown key 'symbols." + k + "' (allowed: f12, g22, w)");
      }
    }
    try {
      return family::FamilyParams::make(f11, f22, f12, g22, w);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

 private:
  const Json& j_;
  std::string scenario_;
};

Check exact_check(std::string name, std::string anchor, bool ok, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.passed = ok;
  c.residual = Json{{"exact_zero", ok}};
  c.detail = std::move(detail);
  return c;
}

std::string vector_str(const lie::Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + ")";
}

/// Small exact vectors for random planes; entries in {-2..2} + {-1..1} i.
lie::Vector random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<int> re(-2, 2), im(-1, 1);
  lie::Vector v;
  for (std::size_t i = 0; i < dim; ++i) v.emplace_back(mpq_class(re(rng)), mpq_class(im(rng)));
  return v;
}

GroupElement random_exact_group_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), im(-2, 2);
  auto entry = [&] { return ExactComplex(mpq_class(num(rng), den(rng)), mpq_class(im(rng), den(rng))); };
  const GroupElement up = GroupElement::make(1, entry(), 0, 1), low = GroupElement::make(1, 0, entry(), 1);
  return up * low * GroupElement::make(1, entry(), 0, 1);
}

GroupElement random_modular_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> e(-4, 4);
  for (;;) {
    const long a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if (a * d - b * c == 1 && c != 0) return GroupElement::make(a, b, c, d);
  }
}

struct MetricTarget {
  std::string name;
  lie::LieAlgebra algebra;
  lie::InvariantMetric metric;
  bool builtin;
};

lie::InvariantMetric metric_from(const Config& cfg, std::size_t dim) {
  const auto& rows = cfg.array("metric");
  if (rows.size() != dim) cfg.fail("'metric' must have " + std::to_string(dim) + " rows");
  std::vector<std::vector<ExactComplex>> m;
  for (const auto& row : rows) {
    const auto v = cfg.exact_vector(row, "metric", dim);
    m.emplace_back(v.begin(), v.end());
  }
  try {
    return lie::InvariantMetric::make(lie::Matrix::from_rows(m));
  } catch (const std::invalid_argument& e) {
    cfg.fail(std::string("'metric': ") + e.what());
  }
}

lie::LieAlgebra algebra_from_file(const Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) cfg.fail("cannot open structure_file '" + path + "'");
  try {
    auto alg = lie::read_structure_constants(in, path);
    if (!lie::validate(alg).valid()) cfg.fail("structure_file '" + path + "' violates antisymmetry or Jacobi");
    return alg;
  } catch (const std::invalid_argument& e) {
    cfg.fail("structure_file '" + path + "': " + e.what());
  }
}

void require_builtin(const Config& cfg, const std::string& name) {
  const auto& all = lie::builtin_names();
  if (std::find(all.begin(), all.end(), name) != all.end()) return;
  std::string valid;
  for (const auto& b : all) valid += (valid.empty() ? "" : ", ") + b;
  cfg.fail("unknown algebra '" + name + "' (valid: " + valid + ")");
}

std::vector<std::string> builtin_list(const Config& cfg, const char* key, std::vector<std::string> fallback) {
  auto names = cfg.strings(key, std::move(fallback));
  for (const auto& n : names) require_builtin(cfg, n);
  return names;
}

// ---------------------------------------------------------------------------
// Scenarios

Report model_metrics(const Config& cfg, std::uint64_t seed) {
  cfg.allow({"algebra", "structure_file", "metric", "scaling_factors", "random_planes"});
  Report r;
  std::vector<MetricTarget> targets;
  if (cfg.has("structure_file")) {
    if (cfg.has("algebra")) cfg.fail("give either 'algebra' or 'structure_file', not both");
    if (!cfg.has("metric")) cfg.fail("'structure_file' needs an explicit 'metric'");
    auto alg = algebra_from_file(cfg, cfg.string("structure_file", ""));
    auto g = metric_from(cfg, alg.dim());
    targets.push_back({alg.name(), alg, g, false});
  } else {
    const std::string which = cfg.string("algebra", "all");
    std::vector<std::string> names = lie::builtin_names();
    if (which != "all") {
      require_builtin(cfg, which);
      names = {which};
    }
    if (cfg.has("metric") && names.size() != 1) cfg.fail("'metric' needs a single 'algebra'");
    for (const auto& n : names) {
      auto b = lie::builtin(n);
      auto g = cfg.has("metric") ? metric_from(cfg, b.algebra.dim()) : *b.metric;
      targets.push_back({n, b.algebra, g, !cfg.has("metric")});
    }
  }
  std::vector<ExactComplex> lambdas;
  if (cfg.has("scaling_factors")) {
    for (const auto& v : cfg.array("scaling_factors")) {
      lambdas.push_back(cfg.exact_value(v, "scaling_factors"));
      if (lambdas.back().is_zero()) cfg.fail("'scaling_factors' must be nonzero");
    }
  } else {
    lambdas = {ExactComplex(2), ExactComplex(-1), ExactComplex::rational(1, 3)};
  }
  const long planes = cfg.integer("random_planes", 5, 0, 1000);
  r.parameters = {{"algebras", Json::array()}, {"random_planes", planes}, {"scaling_factors", Json::array()}};
  for (const auto& t : targets) r.parameters["algebras"].push_back(t.name);
  for (const auto& l : lambdas) r.parameters["scaling_factors"].push_back(l.str());

  std::mt19937_64 rng(seed);
  for (const auto& t : targets) {
    const auto conn = lie::levi_civita(t.algebra, t.metric);
    const auto curv = lie::curvature(t.algebra, t.metric, conn);
    const bool lc_ok = lie::is_torsion_free(t.algebra, conn) && lie::is_metric_compatible(t.metric, conn);
    r.checks.push_back(exact_check(t.name + ": Levi-Civita connection is torsion free and metric", anchor::kConstantCurvature,
                                   lc_ok && lie::has_curvature_symmetries(curv)));
    const auto c = lie::is_constant_curvature(t.metric, curv);
    r.notes.push_back(t.name + ": metric " + t.metric.matrix().str() + ", " +
                      (c ? "constant curvature c = " + c->str() : std::string("curvature not constant")));

    if (t.builtin && t.name == "sl2") {
      Check ch = exact_check("sl2: constant sectional curvature with c != 0", anchor::kNonzeroCurvature,
                             c && !c->is_zero(), c ? "c = " + c->str() : "not constant");
      ch.residual = Json{{"constant", bool(c)}, {"c", c ? c->str() : ""}};
      r.checks.push_back(ch);
    } else if (t.builtin) {
      r.checks.push_back(exact_check(t.name + ": curvature is exactly zero", t.name == "abelian3" ? anchor::kFlatIffSolvable
                                                                                                   : anchor::kFlatModels,
                                     curv.is_zero(), "metric " + t.metric.matrix().str()));
    } else {
      r.checks.push_back(exact_check(t.name + ": constant curvature identity", anchor::kConstantCurvature, bool(c),
                                     c ? "c = " + c->str() : "not constant"));
    }

    if (curv.is_zero() || lambdas.empty()) continue;
    // K(lambda g, P) = K(g, P) / lambda on random nondegenerate planes.
    std::vector<std::pair<lie::Vector, lie::Vector>> ps;
    while (static_cast<long>(ps.size()) < planes) {
      auto x = random_vector(rng, t.algebra.dim()), y = random_vector(rng, t.algebra.dim());
      const auto den = t.metric(x, x) * t.metric(y, y) - t.metric(x, y) * t.metric(x, y);
      if (!den.is_zero()) ps.emplace_back(std::move(x), std::move(y));
    }
    bool ok = true;
    std::size_t count = 0;
    Json samples = Json::array();
    for (const auto& lambda : lambdas) {
      const auto gl = t.metric.scaled(lambda);
      const auto cl = lie::curvature(t.algebra, gl);
      for (const auto& [x, y] : ps) {
        const auto k = lie::sectional_curvature(t.metric, curv, x, y);
        const auto kl = lie::sectional_curvature(gl, cl, x, y);
        const bool eq = kl == k * lambda.inverse();
        ok = ok && eq;
        ++count;
        samples.push_back({{"lambda", lambda.str()}, {"x", vector_str(x)}, {"y", vector_str(y)}, {"K", k.str()},
                           {"K_scaled", kl.str()}, {"exact", eq}});
      }
    }
    Check ch = exact_check(t.name + ": K(lambda g) = K(g) / lambda", anchor::kRescaling, ok,
                           std::to_string(count) + " (lambda, plane) pairs");
    ch.residual = Json{{"exact_zero", ok}, {"samples", samples}};
    r.checks.push_back(ch);
  }
  return r;
}

Report liouville_flatness(const Config& cfg, std::uint64_t) {
  cfg.allow({"f11", "f22", "symbols"});
  Report r;
  const bool all_constants = !cfg.has("f11") && !cfg.has("f22");
  const auto p = cfg.family(cfg.exact("f11", 1), cfg.exact("f22", 3));
  r.parameters = {{"f11", all_constants ? "symbolic" : p.f11.str()},
                  {"f22", all_constants ? "symbolic" : p.f22.str()},
                  {"symbols", {{"f12", p.f12_name}, {"g22", p.g22_name}, {"w", p.w_name}}}};

  if (all_constants) {
    const auto cert = family::projective_flatness_all_constants();
    Json grid = Json::array();
    for (std::size_t i = 0; i < cert.grid.size(); ++i)
      grid.push_back({{"f11", cert.grid[i].first.str()}, {"f22", cert.grid[i].second.str()},
                      {"exact_zero", bool(cert.vanishes[i])}});
    Check c = exact_check("L1 = L2 = 0 for all constants f11, f22", anchor::kLiouville, cert.all(),
                          "degree <= 2 in each constant; exact vanishing on the 3 x 3 grid {0,1,2}^2");
    c.residual = Json{{"exact_zero", cert.all()}, {"grid", grid}};
    r.checks.push_back(c);
  }
  const auto l = family::verify_projective_flatness(p);
  Check c = exact_check("L1 = L2 = 0 at f11 = " + p.f11.str() + ", f22 = " + p.f22.str(), anchor::kLiouville,
                        l.vanish());
  c.residual = Json{{"exact_zero", l.vanish()}, {"l1_terms", l.l1.size()}, {"l2_terms", l.l2.size()}};
  r.checks.push_back(c);

  const auto k = chart::projectivize(family::assemble_connection(p));
  const bool k_ok = k.k0.is_zero() &&
                    k.k1 == Expr((ExactComplex(1) + p.f11) - ExactComplex(2) * (ExactComplex(1) + p.f22)) &&
                    k.k2 == -(p.g22_expr() - p.f12_expr().scaled(2)) && k.k3 == p.g12();
  r.checks.push_back(exact_check("projective coefficients K0..K3", anchor::kProjective, k_ok,
                                 "K0 = " + k.k0.str() + "; K1 = " + k.k1.str() + "; K2 = " + k.k2.str() +
                                     "; K3 = " + k.k3.str()));

  const auto ref = family::reference_connection();
  r.checks.push_back(exact_check("reference connection: zero curvature and zero torsion", anchor::kReference,
                                 chart::curvature_2d(ref).is_zero() && ref.is_torsion_free()));
  return r;
}

Report killing_dim(const Config& cfg, std::uint64_t) {
  cfg.allow({"f11", "f22", "symbols"});
  Report r;
  const auto p = cfg.family(cfg.exact("f11", 1), cfg.exact("f22", 3));
  r.parameters = {{"f11", p.f11.str()}, {"f22", p.f22.str()},
                  {"symbols", {{"f12", p.f12_name}, {"g22", p.g22_name}, {"w", p.w_name}}}};

  const auto conn = family::assemble_connection(p);
  r.checks.push_back(exact_check("d/dz is a Killing field", anchor::kKilling,
                                 chart::killing_residual(conn, {1, 0}).is_zero()));

  const auto res = family::killing_dimension(p);
  const auto& g = res.genericity;
  r.notes.push_back("mu = 1 + 2 f22 - f11 = " + g.mu.str());
  r.notes.push_back(std::string("mu != 0: ") + (g.mu_nonzero ? "yes" : "no") + "; f11 != f22: " +
                    (g.f11_ne_f22 ? "yes" : "no") + "; f22 != -1: " + (g.f22_ne_minus_one ? "yes" : "no") +
                    "; mu != 1 + f11: " + (g.mu_ne_one_plus_f11 ? "yes" : "no"));
  r.notes.push_back("branch: " + res.branch);
  for (const auto& s : res.steps) r.notes.push_back(s.label + ": " + s.detail);

  if (g.generic()) {
    const bool ok = res.dimension == 1 && res.basis == std::vector<std::string>{"d/dz"};
    Check c = exact_check("generic parameters: Killing algebra has dimension 1, basis {d/dz}", anchor::kKilling, ok,
                          res.dimension ? "dimension " + std::to_string(*res.dimension) : "no dimension: " + res.branch);
    c.residual = Json{{"dimension", res.dimension ? Json(*res.dimension) : Json(nullptr)},
                      {"basis", res.basis},
                      {"nu_obstruction_terms", res.nu_obstruction ? res.nu_obstruction->size() : 0},
                      {"c_obstruction_terms", res.c_obstruction ? res.c_obstruction->size() : 0}};
    r.checks.push_back(c);
  } else {
    Check c = exact_check("non-generic parameters: no dimension is claimed", anchor::kKilling, !res.dimension,
                          res.branch);
    c.residual = Json{{"failed_flags", g.failed_flags()}};
    r.checks.push_back(c);
  }
  return r;
}

Report equivariance_symbolic(const Config& cfg, std::uint64_t seed) {
  cfg.allow({"f11", "f22", "symbols", "gammas", "random_elements"});
  Report r;
  const auto p = cfg.family(cfg.exact("f11", 1), cfg.exact("f22", 3));
  std::vector<GroupElement> gammas;
  if (cfg.has("gammas")) {
    for (const auto& v : cfg.array("gammas")) gammas.push_back(cfg.group_element(v, "gammas"));
  } else {
    gammas = {GroupElement::S(), GroupElement::T(), GroupElement::make(2, 1, 1, 1)};
  }
  const long extra = cfg.integer("random_elements", 3, 0, 100);
  std::mt19937_64 rng(seed);
  for (long k = 0; k < extra; ++k) gammas.push_back(random_exact_group_element(rng));

  r.parameters = {{"f11", p.f11.str()}, {"f22", p.f22.str()},
                  {"symbols", {{"f12", p.f12_name}, {"g22", p.g22_name}, {"w", p.w_name}}},
                  {"gammas", Json::array()}, {"random_elements", extra}};
  for (const auto& gm : gammas) r.parameters["gammas"].push_back(gm.str());

  for (const auto& gm : gammas) {
    const auto res = family::equivariance_residuals(p, gm);
    Json flags = Json::object();
    for (std::size_t i = 0; i < 6; ++i) flags[family::EquivarianceResiduals::kNames[i]] = res.residual[i].is_zero();
    Check c = exact_check("invariance of f11, f12, f21, f22, g12, g22 under " + gm.str(), anchor::kInvariantTensor,
                          res.all_zero());
    c.residual = Json{{"exact_zero", res.all_zero()}, {"by_coefficient", flags}};
    r.checks.push_back(c);
  }
  return r;
}

Report equivariance_numeric(const Config& cfg, std::uint64_t seed, double tol) {
  cfg.allow({"f11", "f22", "gammas", "sample_points", "random_elements", "parallel"});
  Report r;
  const cd f11 = cfg.numeric("f11", 1.0), f22 = cfg.numeric("f22", 3.0);
  std::vector<GroupElement> gammas;
  if (cfg.has("gammas")) {
    for (const auto& v : cfg.array("gammas")) {
      auto gm = cfg.group_element(v, "gammas");
      for (const ExactComplex* e : {&gm.a, &gm.b, &gm.c, &gm.d})
        if (!e->is_real() || e->re().get_den() != 1) cfg.fail("'gammas' must lie in SL(2, Z), got " + gm.str());
      gammas.push_back(gm);
    }
  } else {
    gammas = {GroupElement::S(), GroupElement::T(), GroupElement::make(2, 1, 1, 1)};
  }
  const long extra = cfg.integer("random_elements", 3, 0, 100);
  std::mt19937_64 rng(seed);
  for (long k = 0; k < extra; ++k) gammas.push_back(random_modular_element(rng));
  std::vector<cd> points = modular::default_sample_points();
  if (cfg.has("sample_points")) {
    points.clear();
    for (const auto& v : cfg.array("sample_points")) {
      points.push_back(cfg.numeric_value(v, "sample_points"));
      if (!(points.back().imag() > 0)) cfg.fail("'sample_points' must lie in the upper half-plane");
    }
    if (points.empty()) cfg.fail("'sample_points' is empty");
  }
  const bool parallel = cfg.boolean("parallel", false);

  auto cstr = [](cd z) { return Json::array({z.real(), z.imag()}); };
  r.parameters = {{"f11", cstr(f11)}, {"f22", cstr(f22)}, {"gammas", Json::array()},
                  {"sample_points", Json::array()}, {"random_elements", extra}, {"parallel", parallel}};
  for (const auto& gm : gammas) r.parameters["gammas"].push_back(gm.str());
  for (const auto& pt : points) r.parameters["sample_points"].push_back(cstr(pt));

  for (const auto& gm : gammas) {
    const auto res = parallel ? modular::numeric_equivariance_check_parallel(f11, f22, gm, points)
                              : modular::numeric_equivariance_check_serial(f11, f22, gm, points);
    Check c;
    c.name = "E2/E4 laws of f12, g12, g22 under " + gm.str();
    c.anchor = anchor::kQuasimodular;
    c.passed = res.max_residual < tol;
    c.residual = Json{{"max_normalized", res.max_residual},
                      {"f12", res.max_by_law[0]},
                      {"g12", res.max_by_law[1]},
                      {"g22", res.max_by_law[2]},
                      {"tolerance", tol}};
    if (res.degenerate_scaling) c.detail = "f11 = f22 = 0: s = t = 0";
    r.checks.push_back(c);
  }
  return r;
}

Report wang_coframe(const Config& cfg, std::uint64_t) {
  cfg.allow({"algebras", "structure_file"});
  Report r;
  std::vector<lie::LieAlgebra> algs;
  for (const auto& n : builtin_list(cfg, "algebras", cfg.has("structure_file") ? std::vector<std::string>{}
                                                                                 : lie::builtin_names()))
    algs.push_back(lie::builtin(n).algebra);
  if (cfg.has("structure_file")) algs.push_back(algebra_from_file(cfg, cfg.string("structure_file", "")));
  r.parameters = {{"algebras", Json::array()}};
  for (const auto& a : algs) r.parameters["algebras"].push_back(a.name());

  for (const auto& a : algs) {
    const auto d = lie::coframe_differentials(a);
    const bool closed = std::all_of(d.begin(), d.end(), [](const lie::Matrix& m) { return m.is_zero(); });
    Check c = exact_check(a.name() + ": coframe closed iff abelian", anchor::kCoframe, closed == a.is_abelian(),
                          std::string(closed ? "all d omega_i = 0" : "some d omega_i != 0") + ", " +
                              (a.is_abelian() ? "abelian" : "not abelian"));
    c.residual = Json{{"closed", closed}, {"abelian", a.is_abelian()}};
    r.checks.push_back(c);
    Check u = exact_check(a.name() + ": trace(ad X) = 0", anchor::kUnimodular, lie::is_unimodular(a));
    r.checks.push_back(u);
  }
  return r;
}

Report orbit_volume_form(const Config& cfg, std::uint64_t) {
  cfg.allow({"algebra", "metric", "volume_vectors", "null_vectors"});
  Report r;
  const std::string name = cfg.string("algebra", "sl2");
  require_builtin(cfg, name);
  const auto b = lie::builtin(name);
  const auto g = cfg.has("metric") ? metric_from(cfg, b.algebra.dim()) : *b.metric;
  const std::size_t n = b.algebra.dim();
  auto vectors = [&](const char* key, std::vector<lie::Vector> fallback) {
    if (!cfg.has(key)) return fallback;
    std::vector<lie::Vector> out;
    for (const auto& v : cfg.array(key)) out.push_back(cfg.exact_vector(v, key, n));
    return out;
  };
  std::vector<lie::Vector> vol, null;
  if (name == "sl2") {
    vol = vectors("volume_vectors", {{1, 0, 0}, {1, 1, 0}});
    null = vectors("null_vectors", {{0, 1, 0}});
  } else {
    vol = vectors("volume_vectors", {});
    null = vectors("null_vectors", {});
  }
  r.parameters = {{"algebra", name}, {"metric", g.matrix().str()}, {"volume_vectors", Json::array()},
                  {"null_vectors", Json::array()}};
  for (const auto& v : vol) r.parameters["volume_vectors"].push_back(vector_str(v));
  for (const auto& v : null) r.parameters["null_vectors"].push_back(vector_str(v));

  for (const auto& x : vol) {
    Check c;
    c.name = "x = " + vector_str(x) + ": d omega is nondegenerate on image(ad x)";
    c.anchor = anchor::kVolumeForm;
    try {
      const auto t = lie::invariant_two_form(b.algebra, g, x);
      c.passed = t.nondegenerate;
      c.detail = "form " + t.form.str();
      c.residual = Json{{"nondegenerate", t.nondegenerate}, {"det", t.form.det().str()}};
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = e.what();
      c.residual = Json{{"nondegenerate", false}};
    }
    r.checks.push_back(c);
  }
  for (const auto& x : null) {
    Check c;
    c.name = "x = " + vector_str(x) + ": null vector is rejected";
    c.anchor = anchor::kVolumeForm;
    try {
      lie::invariant_two_form(b.algebra, g, x);
      c.passed = false;
      c.detail = "accepted";
    } catch (const std::invalid_argument& e) {
      c.passed = true;
      c.detail = e.what();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = e.what();
    }
    c.residual = Json{{"precondition_failure", c.passed}};
    r.checks.push_back(c);
  }
  return r;
}

Report moduli_count(const Config& cfg, std::uint64_t) {
  cfg.allow({"genus_min", "genus_max"});
  Report r;
  const long lo = cfg.integer("genus_min", 2, 2, 100000);
  const long hi = cfg.integer("genus_max", 50, 2, 100000);
  if (hi < lo) cfg.fail("'genus_max' must be at least 'genus_min'");
  r.parameters = {{"genus_min", lo}, {"genus_max", hi}};
  bool ok = true;
  long first_bad = -1;
  for (long g = lo; g <= hi; ++g) {
    const auto m = family::moduli_dimension(static_cast<int>(g));
    if (m.total() != 5 * g + 1 && first_bad < 0) first_bad = g;
    ok = ok && m.total() == 5 * g + 1;
  }
  Check c = exact_check("2(g + 1) + (3g - 1) = 5g + 1 for g = " + std::to_string(lo) + ".." + std::to_string(hi),
                        anchor::kModuli, ok, first_bad < 0 ? "" : "first mismatch at g = " + std::to_string(first_bad));
  r.checks.push_back(c);
  if (lo <= 2) {
    const auto m = family::moduli_dimension(2);
    Check two = exact_check("g = 2 gives 11", anchor::kModuli, m.total() == 11, std::to_string(m.total()));
    two.residual = Json{{"total", m.total()}, {"f12", m.quasimodular_f12}, {"g22", m.quasimodular_g22},
                        {"w", m.quadratic_differentials}};
    r.checks.push_back(two);
  }
  return r;
}

Report flat_search(const Config& cfg, std::uint64_t) {
  cfg.allow({"algebras", "values", "parallel"});
  Report r;
  const auto names = builtin_list(cfg, "algebras", {"heisenberg3", "sol3", "sl2"});
  std::vector<long> values = {0, 1, -1};
  if (cfg.has("values")) {
    values.clear();
    for (const auto& v : cfg.array("values")) {
      if (!v.is_number_integer()) cfg.fail("'values' must be integers");
      values.push_back(v.get<long>());
    }
    if (values.empty() || values.size() > 5) cfg.fail("'values' must hold 1 to 5 integers");
    if (std::set<long>(values.begin(), values.end()).size() != values.size()) cfg.fail("'values' has duplicates");
  }
  const bool parallel = cfg.boolean("parallel", true);
  r.parameters = {{"algebras", names}, {"values", values}, {"parallel", parallel}};
  const bool default_grid = values == std::vector<long>{0, 1, -1};

  for (const auto& n : names) {
    const auto b = lie::builtin(n);
    const auto serial = lie::flat_metric_search_serial(b.algebra, values);
    const std::size_t candidates = lie::flat_search_candidate_count(b.algebra.dim(), values.size());
    bool recheck = true;
    for (const auto& g : serial) recheck = recheck && lie::curvature(b.algebra, g).is_zero();
    r.notes.push_back(n + ": " + std::to_string(serial.size()) + " flat witnesses among " + std::to_string(candidates) +
                      " candidates" + (serial.empty() ? "" : ", first " + serial.front().matrix().str()));

    const bool solvable = n != "sl2";
    Check c;
    c.anchor = solvable ? anchor::kFlatModels : anchor::kFlatIffSolvable;
    if (solvable) {
      c.name = n + ": a flat left-invariant metric exists";
      c.passed = !serial.empty() && recheck;
      if (default_grid && n != "abelian3")
        c.passed = c.passed && serial.front().matrix() == lie::flat_fixture(n).matrix();
      c.detail = default_grid && n != "abelian3" ? "first witness equals the stored fixture" : "";
    } else {
      c.name = n + ": no flat left-invariant metric in the grid";
      c.passed = serial.empty();
    }
    c.residual = Json{{"witnesses", serial.size()}, {"candidates", candidates}, {"witnesses_flat", recheck}};
    r.checks.push_back(c);

    if (parallel) {
      const auto par = lie::flat_metric_search_parallel(b.algebra, values);
      bool same = par.size() == serial.size();
      for (std::size_t i = 0; same && i < par.size(); ++i) same = par[i].matrix() == serial[i].matrix();
      r.checks.push_back(exact_check(n + ": parallel search returns the serial witnesses", c.anchor, same));
    }
  }
  return r;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() { return kScenarios; }

bool Report::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json Report::to_json() const {
  Json j;
  j["scenario"] = scenario;
  j["passed"] = passed();
  j["seed"] = seed;
  j["tolerance"] = tolerance ? Json(*tolerance) : Json("exact");
  j["parameters"] = parameters;
  j["checks"] = Json::array();
  for (const auto& c : checks)
    j["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"claim", c.anchor}, {"residual", c.residual}, {"detail", c.detail}});
  j["notes"] = notes;
  if (wall_seconds) j["wall_seconds"] = *wall_seconds;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "scenario  " << scenario << "\n";
  os << "seed      " << seed << "\n";
  os << "tolerance " << (tolerance ? format_double(*tolerance) : "exact") << "\n";
  for (const auto& n : notes) os << "  . " << n << "\n";
  std::size_t passed_count = 0;
  for (const auto& c : checks) {
    passed_count += c.passed;
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
    if (c.residual.contains("max_normalized"))
      os << "  (max " << format_double(c.residual["max_normalized"].get<double>()) << ")";
    os << "\n";
    if (!c.detail.empty()) os << "       " << c.detail << "\n";
    os << "       claim: \"" << c.anchor << "\"\n";
  }
  os << (passed() ? "PASS" : "FAIL") << " " << passed_count << "/" << checks.size() << " checks";
  if (wall_seconds) os << " in " << std::fixed << std::setprecision(3) << *wall_seconds << " s";
  os << "\n";
  return os.str();
}

Report run(const std::string& scenario, const Json& config, const RunOptions& options) {
  const auto it = std::find_if(kScenarios.begin(), kScenarios.end(),
                               [&](const ScenarioInfo& s) { return s.name == scenario; });
  if (it == kScenarios.end()) {
    std::string valid;
    for (const auto& s : kScenarios) valid += (valid.empty() ? "" : ", ") + s.name;
    throw ConfigError("unknown scenario '" + scenario + "' (valid: " + valid + ")");
  }
  if (options.tolerance && !(*options.tolerance > 0)) throw ConfigError("tolerance must be positive");

  const Config cfg(config, scenario);
  const std::uint64_t seed = options.seed.value_or(kDefaultSeed);
  const auto start = std::chrono::steady_clock::now();
  Report r;
  if (scenario == "model-metrics") r = model_metrics(cfg, seed);
  else if (scenario == "liouville-flatness") r = liouville_flatness(cfg, seed);
  else if (scenario == "killing-dim") r = killing_dim(cfg, seed);
  else if (scenario == "equivariance-symbolic") r = equivariance_symbolic(cfg, seed);
  else if (scenario == "equivariance-numeric") {
    r = equivariance_numeric(cfg, seed, options.tolerance.value_or(kDefaultTolerance));
    r.tolerance = options.tolerance.value_or(kDefaultTolerance);
  } else if (scenario == "wang-coframe") r = wang_coframe(cfg, seed);
  else if (scenario == "orbit-volume-form") r = orbit_volume_form(cfg, seed);
  else if (scenario == "moduli-count") r = moduli_count(cfg, seed);
  else r = flat_search(cfg, seed);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.scenario = scenario;
  r.seed = seed;
  return r;
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace rigidgeo::scenarios
