#include "rigidgeo/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rigidgeo::family {

namespace {

const std::set<std::string> kReserved = {"a", "b", "nu", "A", "B", "C", "f11", "f21", "f22", "g12"};

Expr at_gamma(const std::string& name, const GroupElement& gamma, int dxi = 0) {
  return Expr::func_at(name, gamma, dxi);
}

Expr dxi(const Expr& e) { return differentiate(e, Variable::Xi); }

// Replaces every occurrence of `name` (any argument) by a constant; derivatives vanish.
Expr set_constant(const Expr& x, const std::string& name, const ExactComplex& value) {
  return substitute(x, [&](const Atom& a) -> std::optional<Expr> {
    const auto* f = std::get_if<FuncAtom>(&a);
    if (!f || f->name != name) return std::nullopt;
    return (f->dxi == 0 && f->dz == 0) ? Expr(value) : Expr();
  });
}

}  // namespace

Expr QuasimodularSymbol::law(const GroupElement& gamma) const {
  return at_gamma(name, gamma) * Expr::linform(gamma, -2) - Expr::linform(gamma, -1).scaled(k * gamma.c);
}

Expr QuadraticDifferentialSymbol::law(const GroupElement& gamma) const {
  return at_gamma(name, gamma) * Expr::linform(gamma, -4);
}

FamilyParams FamilyParams::make(ExactComplex f11, ExactComplex f22, std::string f12, std::string g22,
                                std::string w) {
  for (const auto* n : {&f12, &g22, &w}) {
    if (n->empty()) throw std::invalid_argument("family symbol names must be nonempty");
    if (kReserved.count(*n)) throw std::invalid_argument("family symbol name '" + *n + "' is reserved");
  }
  if (f12 == g22 || f12 == w || g22 == w) throw std::invalid_argument("family symbol names must be distinct");
  FamilyParams p;
  p.f11 = std::move(f11);
  p.f22 = std::move(f22);
  p.f12_name = std::move(f12);
  p.g22_name = std::move(g22);
  p.w_name = std::move(w);
  return p;
}

Expr FamilyParams::g12() const {
  const ExactComplex half = ExactComplex::rational(1, 2);
  return (w_expr() - Expr::func(f12_name, 1) + Expr::func(g22_name, 1)).scaled(half);
}

Expr FamilyParams::g12_at(const GroupElement& gamma) const {
  const ExactComplex half = ExactComplex::rational(1, 2);
  return (at_gamma(w_name, gamma) - at_gamma(f12_name, gamma, 1) + at_gamma(g22_name, gamma, 1)).scaled(half);
}

std::vector<std::string> GenericityReport::failed_flags() const {
  std::vector<std::string> out;
  if (!mu_nonzero) out.emplace_back("mu = 0");
  if (!f11_ne_f22) out.emplace_back("f11 = f22");
  if (!f22_ne_minus_one) out.emplace_back("f22 = -1");
  if (!mu_ne_one_plus_f11) out.emplace_back("mu = 1 + f11");
  return out;
}

GenericityReport genericity(const FamilyParams& p) {
  GenericityReport r;
  r.mu = p.mu();
  r.mu_nonzero = !r.mu.is_zero();
  r.f11_ne_f22 = !(p.f11 == p.f22);
  r.f22_ne_minus_one = !(p.f22 == -1);
  r.mu_ne_one_plus_f11 = !(r.mu == ExactComplex(1) + p.f11);
  return r;
}

chart::ChartConnection2D assemble_connection(const FamilyParams& p) {
  return chart::ChartConnection2D::symmetric(Expr(ExactComplex(1) + p.f11), p.f12_expr(), p.g12(), Expr(),
                                             Expr(ExactComplex(1) + p.f22), p.g22_expr());
}

chart::ChartConnection2D reference_connection() { return chart::ChartConnection2D::symmetric(1, 0, 0, 0, 1, 0); }

bool EquivarianceResiduals::all_zero() const {
  return std::all_of(residual.begin(), residual.end(), [](const Expr& e) { return e.is_zero(); });
}

EquivarianceResiduals equivariance_equations(const FamilyParams& p, const GroupElement& gamma) {
  const ExactComplex& c = gamma.c;
  const ExactComplex c2 = c * c, c3 = c2 * c;
  auto u = [&](int n) { return Expr::linform(gamma, n); };
  auto x = [](const std::string& n) { return Expr::func(n); };
  auto g = [&](const std::string& n) { return at_gamma(n, gamma); };
  const std::string f12 = p.f12_name, g22 = p.g22_name;

  EquivarianceResiduals r;
  r.residual[0] = x("f11") - (g("f11") - (g("f21") * u(1)).scaled(c));
  r.residual[1] = x(f12) - (g(f12) * u(-2) - g("f21").scaled(ExactComplex(2) * c2) - (g("f22") * u(-1)).scaled(c) +
                            (g("f11") * u(-1)).scaled(ExactComplex(2) * c));
  r.residual[2] = x("f21") - g("f21") * u(2);
  r.residual[3] = x("f22") - ((g("f21") * u(1)).scaled(ExactComplex(2) * c) + g("f22"));
  r.residual[4] = p.g12() - (p.g12_at(gamma) * u(-4) + (g("f11") * u(-2)).scaled(c2) + (g(f12) * u(-3)).scaled(c) -
                             (g("f21") * u(-1)).scaled(c3) - (g("f22") * u(-2)).scaled(c2) -
                             (g(g22) * u(-3)).scaled(c));
  r.residual[5] = x(g22) - (g(g22) * u(-2) + (g("f22") * u(-1)).scaled(c) + g("f21").scaled(c2));
  return r;
}

EquivarianceResiduals equivariance_residuals(const FamilyParams& p, const GroupElement& gamma) {
  EquivarianceResiduals r = equivariance_equations(p, gamma);
  for (auto& e : r.residual) {
    e = set_constant(e, "f21", 0);
    e = set_constant(e, "f11", p.f11);
    e = set_constant(e, "f22", p.f22);
    e = substitute_function(e, p.f12_name, p.f12().law(gamma));
    e = substitute_function(e, p.g22_name, p.g22().law(gamma));
    e = substitute_function(e, p.w_name, p.w().law(gamma));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Linear ODE elimination

int LinearOde::order() const {
  for (int k = static_cast<int>(coeff.size()) - 1; k >= 0; --k)
    if (!coeff[static_cast<std::size_t>(k)].is_zero()) return k;
  return -1;
}

LinearOde LinearOde::derivative() const {
  LinearOde out;
  out.coeff.resize(coeff.size() + 1);
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    out.coeff[k] += dxi(coeff[k]);
    out.coeff[k + 1] += coeff[k];
  }
  return out;
}

std::string LinearOde::str(const std::string& unknown) const {
  std::ostringstream os;
  bool first = true;
  for (int k = order(); k >= 0; --k) {
    const Expr& c = coeff[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    os << (first ? "" : " + ") << "(" << c.str() << ")*" << unknown << std::string(static_cast<std::size_t>(k), '\'');
    first = false;
  }
  if (first) os << "0";
  return os.str() + " = 0";
}

std::optional<Expr> eliminate(LinearOde p, LinearOde q) {
  for (int guard = 0; guard < 64; ++guard) {
    if (p.order() < q.order()) std::swap(p, q);
    const int m = p.order(), n = q.order();
    if (n < 0) return std::nullopt;
    if (n == 0) return q.coeff[0];
    LinearOde shifted = q;
    for (int k = n; k < m; ++k) shifted = shifted.derivative();
    const Expr lp = p.coeff[static_cast<std::size_t>(m)];
    const Expr lq = q.coeff[static_cast<std::size_t>(n)];
    LinearOde r;
    r.coeff.resize(static_cast<std::size_t>(m) + 1);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(m); ++k) {
      Expr v = lq * p.coeff[k];
      if (k < shifted.coeff.size()) v -= lp * shifted.coeff[k];
      r.coeff[k] = std::move(v);
    }
    p = std::move(r);
  }
  return std::nullopt;
}

namespace {

// Reads `e` as a homogeneous linear ODE in `unknown`; any other name in
// `others` makes the decomposition fail.
LinearOde as_ode(const Expr& e, const std::string& unknown, const std::set<std::string>& others) {
  std::vector<std::vector<Monomial>> by_order;
  for (const auto& m : e.terms()) {
    std::optional<int> order;
    Factors rest;
    for (const auto& [atom, exponent] : m.factors) {
      const auto* f = std::get_if<FuncAtom>(&atom);
      if (f && f->name == unknown && f->arg == FuncArg::Xi) {
        if (order || exponent != 1) throw std::logic_error("Killing reduction: nonlinear in " + unknown);
        order = f->dxi;
        continue;
      }
      if (f && others.count(f->name))
        throw std::logic_error("Killing reduction: unexpected unknown " + f->name + " next to " + unknown);
      rest.emplace_back(atom, exponent);
    }
    if (!order) throw std::logic_error("Killing reduction: inhomogeneous term " + e.str());
    const auto k = static_cast<std::size_t>(*order);
    if (by_order.size() <= k) by_order.resize(k + 1);
    by_order[k].push_back(Monomial{m.coefficient, std::move(rest)});
  }
  LinearOde ode;
  for (auto& terms : by_order) ode.coeff.push_back(Expr::from_monomials(std::move(terms)));
  return ode;
}

const std::set<std::string> kUnknowns = {"nu", "A", "B", "C"};

std::set<std::string> others_than(const std::string& name) {
  std::set<std::string> s = kUnknowns;
  s.erase(name);
  return s;
}

}  // namespace

chart::VectorFieldExpr killing_ansatz(const FamilyParams& p, bool homogeneous_terms) {
  const ExactComplex mu = p.mu();
  const ExactComplex delta = p.f11 - p.f22;
  if (delta.is_zero()) throw std::invalid_argument("killing_ansatz: needs f11 != f22");
  const Expr nu = Expr::func("nu");
  chart::VectorFieldExpr x;
  x.b = nu * Expr::exp_z(-mu);
  x.a = (p.f12_expr() * nu * Expr::exp_z(-mu)).scaled(-delta.inverse());
  if (homogeneous_terms) {
    const ExactComplex one_f11 = ExactComplex(1) + p.f11;
    x.b += Expr::func("C");
    if (one_f11.is_zero())
      x.a += Expr::func("A") * Expr::z();
    else
      x.a += (Expr::func("A") * Expr::exp_z(-one_f11)).scaled(-one_f11.inverse());
    x.a += Expr::func("B");
  }
  return x;
}

KillingDimensionResult killing_dimension(const FamilyParams& p) {
  KillingDimensionResult out;
  out.genericity = genericity(p);
  if (!out.genericity.generic()) {
    std::string flags;
    for (const auto& f : out.genericity.failed_flags()) flags += (flags.empty() ? "" : ", ") + f;
    out.branch = "non-generic (" + flags + ")";
    out.steps.push_back({"stop", "genericity flag failed: " + flags + "; no dimension is claimed"});
    return out;
  }
  out.branch = "generic";
  const auto conn = assemble_connection(p);
  const ExactComplex mu = p.mu();
  const ZKey mu_key{-mu, 0};

  const auto x = killing_ansatz(p);
  auto res = chart::killing_residual(conn, x);
  if (!res.zz_z.is_zero() || !res.zz_xi.is_zero())
    throw std::logic_error("Killing reduction: ansatz does not solve the pure-z equations");
  out.steps.push_back({"b from (z,z) xi-component", "b = nu(xi) exp(-mu z) + C(xi), mu = " + mu.str()});
  out.steps.push_back({"a from (z,z) z-component", "a = " + x.a.str()});

  // (z,xi) xi-component: every exponential other than exp(-mu z) carries only A.
  auto groups = split_z_structure(res.zxi_xi);
  for (const auto& [key, coeff] : groups) {
    if (key == mu_key) continue;
    const LinearOde ode = as_ode(coeff, "A", others_than("A"));
    if (ode.order() != 0 || !ode.coeff[0].is_constant())
      throw std::logic_error("Killing reduction: unexpected A-structure in the (z,xi) xi-component");
    out.steps.push_back({"(z,xi) xi-component, A-part", "(" + ode.coeff[0].str() + ") A = 0 => A = 0"});
  }
  chart::KillingResidual eq;
  eq.zz_z = substitute_function(res.zz_z, "A", 0);
  eq.zz_xi = substitute_function(res.zz_xi, "A", 0);
  eq.zxi_z = substitute_function(res.zxi_z, "A", 0);
  eq.zxi_xi = substitute_function(res.zxi_xi, "A", 0);
  eq.xixi_z = substitute_function(res.xixi_z, "A", 0);
  eq.xixi_xi = substitute_function(res.xixi_xi, "A", 0);

  // Conditions on nu: exp(-mu z)-parts of the (z,xi) components.
  groups = split_z_structure(eq.zxi_xi);
  out.condition_one = as_ode(groups.count(mu_key) ? groups.at(mu_key) : Expr(), "nu", others_than("nu"));
  for (const auto& [key, coeff] : groups)
    if (!(key == mu_key) && !coeff.is_zero()) throw std::logic_error("Killing reduction: stray term in the (z,xi) xi-component");
  groups = split_z_structure(eq.zxi_z);
  out.condition_two = as_ode(groups.count(mu_key) ? groups.at(mu_key) : Expr(), "nu", others_than("nu"));
  out.steps.push_back({"condition one, (z,xi) xi-component", out.condition_one.str("nu")});
  out.steps.push_back({"condition two, (z,xi) z-component", out.condition_two.str("nu")});

  out.nu_obstruction = eliminate(out.condition_one, out.condition_two);
  if (!out.nu_obstruction || out.nu_obstruction->is_zero()) {
    out.branch = "generic, conditions one and two compatible for nonzero nu";
    out.steps.push_back({"stop", "nu is not forced to vanish; no dimension is claimed"});
    return out;
  }
  out.steps.push_back({"compare conditions", "(" + out.nu_obstruction->str() + ") nu = 0 => nu = 0"});
  for (Expr* e : {&eq.zz_z, &eq.zz_xi, &eq.zxi_z, &eq.zxi_xi, &eq.xixi_z, &eq.xixi_xi})
    *e = substitute_function(*e, "nu", 0);
  for (const auto& e : eq.components())
    if (e.depends_on(Variable::Z)) throw std::logic_error("Killing reduction: z-dependence left after nu = 0");

  // The (z,xi) z-component now reads delta B' + (f12 C)' = 0; solve it for B'.
  const ExactComplex delta = p.f11 - p.f22;
  Expr b_prime_coeff, rest;
  for (const auto& m : eq.zxi_z.terms()) {
    const Expr term = Expr::from_monomials({m});
    const bool has_b = std::any_of(m.factors.begin(), m.factors.end(), [](const auto& fe) {
      const auto* f = std::get_if<FuncAtom>(&fe.first);
      return f && f->name == "B";
    });
    if (has_b)
      b_prime_coeff += term;
    else
      rest += term;
  }
  if (!(b_prime_coeff == Expr::func("B", 1).scaled(delta)))
    throw std::logic_error("Killing reduction: unexpected B-structure in the (z,xi) z-component");
  const Expr b_prime = rest.scaled(-delta.inverse());
  out.steps.push_back({"(z,xi) z-component, constant part", eq.zxi_z.str() + " = 0 => B' = " + b_prime.str()});

  auto eliminate_b = [&](const Expr& e) {
    std::map<int, Expr> cache{{1, b_prime}};
    return substitute(e, [&](const Atom& a) -> std::optional<Expr> {
      const auto* f = std::get_if<FuncAtom>(&a);
      if (!f || f->name != "B") return std::nullopt;
      if (f->dxi == 0) throw std::logic_error("Killing reduction: undifferentiated B");
      for (int k = 2; k <= f->dxi; ++k)
        if (!cache.count(k)) cache[k] = dxi(cache[k - 1]);
      return cache[f->dxi];
    });
  };
  const LinearOde xz = as_ode(eliminate_b(eq.xixi_z), "C", others_than("C"));
  const LinearOde xx = as_ode(eliminate_b(eq.xixi_xi), "C", others_than("C"));
  out.steps.push_back({"(xi,xi) z-component without B", xz.str("C")});
  out.steps.push_back({"(xi,xi) xi-component without B", xx.str("C")});
  out.c_obstruction = eliminate(xz, xx);
  if (!out.c_obstruction || out.c_obstruction->is_zero()) {
    out.branch = "generic, (xi,xi) components admit nonzero C";
    out.steps.push_back({"stop", "C is not forced to vanish; no dimension is claimed"});
    return out;
  }
  out.steps.push_back({"eliminate C", "(" + std::to_string(out.c_obstruction->size()) + "-term coefficient) C = 0 => C = 0, B' = 0"});

  if (!chart::killing_residual(conn, {1, 0}).is_zero())
    throw std::logic_error("Killing reduction: d/dz is not a Killing field");
  out.steps.push_back({"check", "d/dz satisfies all six Killing components"});
  out.dimension = 1;
  out.basis = {"d/dz"};
  return out;
}

// ---------------------------------------------------------------------------

ModuliDimension moduli_dimension(int genus) {
  if (genus < 2) throw std::invalid_argument("moduli_dimension: genus must be at least 2");
  return {genus, genus + 1, genus + 1, 3 * genus - 1};
}

chart::LiouvilleInvariants verify_projective_flatness(const FamilyParams& p) {
  return chart::liouville_invariants(chart::projectivize(assemble_connection(p)));
}

bool FlatnessCertificate::all() const {
  return std::all_of(vanishes.begin(), vanishes.end(), [](bool v) { return v; });
}

FlatnessCertificate projective_flatness_all_constants() {
  FlatnessCertificate out;
  for (long a = 0; a <= 2; ++a)
    for (long b = 0; b <= 2; ++b) {
      out.grid.emplace_back(a, b);
      out.vanishes.push_back(verify_projective_flatness(FamilyParams::make(a, b)).vanish());
    }
  return out;
}

std::pair<std::complex<double>, std::complex<double>> deck_action(const GroupElement& gamma, std::complex<double> z,
                                                                  std::complex<double> xi, long branch) {
  if (!(xi.imag() > 0)) throw std::invalid_argument("deck_action: xi must lie in the upper half-plane");
  const std::complex<double> u = gamma.cocycle(xi);
  if (u == std::complex<double>(0, 0)) throw std::domain_error("deck_action: c xi + d = 0");
  const std::complex<double> two_pi_i(0, 2 * std::numbers::pi);
  return {z + std::log(u) + two_pi_i * static_cast<double>(branch), gamma.apply(xi)};
}

std::complex<double> composition_defect(const GroupElement& g1, const GroupElement& g2, std::complex<double> z,
                                        std::complex<double> xi) {
  const auto [z2, xi2] = deck_action(g2, z, xi);
  const auto [z12, xi12] = deck_action(g1, z2, xi2);
  return z12 - deck_action(g1 * g2, z, xi).first;
}

}  // namespace rigidgeo::family
