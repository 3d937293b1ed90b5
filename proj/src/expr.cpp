#include "rigidgeo/expr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rigidgeo {

// ---------------------------------------------------------------------------
// GroupElement

GroupElement GroupElement::make(ExactComplex a, ExactComplex b, ExactComplex c, ExactComplex d) {
  GroupElement g{std::move(a), std::move(b), std::move(c), std::move(d)};
  if (!(g.det() == 1))
    throw std::invalid_argument("GroupElement: determinant must be 1, got " + g.det().str());
  return g;
}

std::complex<double> GroupElement::apply(std::complex<double> xi) const {
  return (a.to_complex() * xi + b.to_complex()) / cocycle(xi);
}

std::string GroupElement::str() const {
  return "[" + a.str() + "," + b.str() + ";" + c.str() + "," + d.str() + "]";
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

bool operator<(const GroupElement& x, const GroupElement& y) {
  if (!(x.a == y.a)) return x.a < y.a;
  if (!(x.b == y.b)) return x.b < y.b;
  if (!(x.c == y.c)) return x.c < y.c;
  return x.d < y.d;
}

bool operator<(const FuncAtom& x, const FuncAtom& y) {
  if (x.name != y.name) return x.name < y.name;
  if (x.arg != y.arg) return x.arg < y.arg;
  if (x.dz != y.dz) return x.dz < y.dz;
  if (x.dxi != y.dxi) return x.dxi < y.dxi;
  return x.gamma < y.gamma;
}

bool operator<(const LinFormAtom& x, const LinFormAtom& y) {
  if (!(x.c == y.c)) return x.c < y.c;
  return x.d < y.d;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string paren(const ExactComplex& c) {
  const std::string s = c.str();
  if (c.is_real() && sgn(c.re()) >= 0) return s;
  if (c.re() == 0 && sgn(c.im()) > 0) return s;
  return "(" + s + ")";
}

std::string derivative_suffix(const FuncAtom& f) {
  if (f.arg == FuncArg::ZXi) {
    if (f.dz == 0 && f.dxi == 0) return "";
    return "_{z^" + std::to_string(f.dz) + "xi^" + std::to_string(f.dxi) + "}";
  }
  if (f.dxi == 0) return "";
  if (f.dxi <= 3) return std::string(static_cast<std::size_t>(f.dxi), '\'');
  return "^(" + std::to_string(f.dxi) + ")";
}

}  // namespace

std::string to_string(const Atom& atom) {
  struct Visitor {
    std::string operator()(const VarAtom& v) const { return v.var == Variable::Z ? "z" : "xi"; }
    std::string operator()(const FuncAtom& f) const {
      std::string head = f.name + derivative_suffix(f);
      switch (f.arg) {
        case FuncArg::Xi: return head + "(xi)";
        case FuncArg::ZXi: return head + "(z,xi)";
        case FuncArg::Moebius: return head + "(" + f.gamma.str() + "xi)";
      }
      return head;
    }
    std::string operator()(const LinFormAtom& l) const {
      std::string s = "(" + paren(l.c) + "*xi";
      if (!l.d.is_zero()) s += "+" + paren(l.d);
      return s + ")";
    }
    std::string operator()(const ExpZAtom& e) const { return "exp(" + paren(e.lambda) + "*z)"; }
  };
  return std::visit(Visitor{}, atom);
}

// ---------------------------------------------------------------------------
// Normal form

namespace {

bool is_expz(const Atom& a) { return std::holds_alternative<ExpZAtom>(a); }

struct FactorsLess {
  bool operator()(const Factors& x, const Factors& y) const {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                        [](const auto& p, const auto& q) {
                                          if (p.first < q.first) return true;
                                          if (q.first < p.first) return false;
                                          return p.second < q.second;
                                        });
  }
};

using TermMap = std::map<Factors, ExactComplex, FactorsLess>;

// Sorts factors, merges repeated atoms, folds all exponentials into one.
Factors canonical_factors(Factors raw) {
  ExactComplex lambda;
  bool any_exp = false;
  Factors out;
  out.reserve(raw.size());
  for (auto& [atom, e] : raw) {
    if (e == 0) continue;
    if (is_expz(atom)) {
      lambda += std::get<ExpZAtom>(atom).lambda * ExactComplex(e);
      any_exp = true;
      continue;
    }
    out.emplace_back(std::move(atom), e);
  }
  if (any_exp && !lambda.is_zero()) out.emplace_back(ExpZAtom{lambda}, 1);
  std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
  Factors merged;
  merged.reserve(out.size());
  for (auto& f : out) {
    if (!merged.empty() && merged.back().first == f.first) {
      merged.back().second += f.second;
      if (merged.back().second == 0) merged.pop_back();
    } else {
      merged.push_back(std::move(f));
    }
  }
  return merged;
}

// Product of two canonical factor lists.
Factors multiply_factors(const Factors& x, const Factors& y) {
  Factors out;
  out.reserve(x.size() + y.size());
  const ExpZAtom* ex = nullptr;
  const ExpZAtom* ey = nullptr;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      if (is_expz(x[i].first))
        ex = &std::get<ExpZAtom>(x[i].first);
      else
        out.push_back(x[i]);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      if (is_expz(y[j].first))
        ey = &std::get<ExpZAtom>(y[j].first);
      else
        out.push_back(y[j]);
      ++j;
    } else {
      if (is_expz(x[i].first)) {
        ex = &std::get<ExpZAtom>(x[i].first);
        ey = &std::get<ExpZAtom>(y[j].first);
      } else {
        const int e = x[i].second + y[j].second;
        if (e != 0) out.emplace_back(x[i].first, e);
      }
      ++i;
      ++j;
    }
  }
  if (ex || ey) {
    ExactComplex lambda;
    if (ex) lambda += ex->lambda;
    if (ey) lambda += ey->lambda;
    if (!lambda.is_zero()) {
      // ExpZ is the last alternative, so it sorts after every other atom.
      out.emplace_back(ExpZAtom{lambda}, 1);
    }
  }
  return out;
}

void accumulate(TermMap& acc, Factors f, const ExactComplex& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(std::move(f), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

std::vector<Monomial> drain(TermMap& acc) {
  std::vector<Monomial> out;
  out.reserve(acc.size());
  for (auto& [f, c] : acc) out.push_back(Monomial{c, f});
  return out;
}

}  // namespace

Expr Expr::from_monomials(std::vector<Monomial> terms) {
  TermMap acc;
  for (auto& m : terms) accumulate(acc, canonical_factors(std::move(m.factors)), m.coefficient);
  Expr e;
  e.terms_ = drain(acc);
  return e;
}

Expr::Expr(ExactComplex c) {
  if (!c.is_zero()) terms_.push_back(Monomial{std::move(c), {}});
}

Expr Expr::var(Variable v) { return from_monomials({Monomial{1, {{VarAtom{v}, 1}}}}); }
Expr Expr::z() { return var(Variable::Z); }
Expr Expr::xi() { return var(Variable::Xi); }

Expr Expr::func(const std::string& name, int dxi) {
  if (dxi < 0) throw std::invalid_argument("negative derivative order");
  return from_monomials({Monomial{1, {{FuncAtom{name, 0, dxi, FuncArg::Xi, {}}, 1}}}});
}

Expr Expr::func_zxi(const std::string& name, int dz, int dxi) {
  if (dz < 0 || dxi < 0) throw std::invalid_argument("negative derivative order");
  return from_monomials({Monomial{1, {{FuncAtom{name, dz, dxi, FuncArg::ZXi, {}}, 1}}}});
}

Expr Expr::func_at(const std::string& name, const GroupElement& gamma, int dxi) {
  if (gamma.is_identity()) return func(name, dxi);
  if (dxi < 0) throw std::invalid_argument("negative derivative order");
  return from_monomials({Monomial{1, {{FuncAtom{name, 0, dxi, FuncArg::Moebius, gamma}, 1}}}});
}

Expr Expr::linform(const GroupElement& gamma, int n) {
  if (gamma.c.is_zero()) return Expr(gamma.d.pow(n));
  if (n == 0) return Expr(1);
  return from_monomials({Monomial{1, {{LinFormAtom{gamma.c, gamma.d}, n}}}});
}

Expr Expr::exp_z(const ExactComplex& lambda) {
  if (lambda.is_zero()) return Expr(1);
  return from_monomials({Monomial{1, {{ExpZAtom{lambda}, 1}}}});
}

bool Expr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().factors.empty());
}

ExactComplex Expr::constant_value() const {
  if (!is_constant()) throw std::logic_error("Expr::constant_value on non-constant " + str());
  return terms_.empty() ? ExactComplex() : terms_.front().coefficient;
}

std::set<Atom> Expr::atoms() const {
  std::set<Atom> out;
  for (const auto& m : terms_)
    for (const auto& [a, e] : m.factors) out.insert(a);
  return out;
}

bool Expr::depends_on(Variable v) const {
  for (const auto& a : atoms()) {
    if (auto* va = std::get_if<VarAtom>(&a); va && va->var == v) return true;
    if (auto* f = std::get_if<FuncAtom>(&a)) {
      if (f->arg == FuncArg::ZXi) return true;
      if (v == Variable::Xi) return true;
    }
    if (std::holds_alternative<LinFormAtom>(a) && v == Variable::Xi) return true;
    if (std::holds_alternative<ExpZAtom>(a) && v == Variable::Z) return true;
  }
  return false;
}

Expr Expr::pow(unsigned n) const {
  Expr result(1), base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

Expr Expr::scaled(const ExactComplex& c) const {
  if (c.is_zero()) return {};
  Expr out = *this;
  for (auto& m : out.terms_) m.coefficient *= c;
  return out;
}

std::string Expr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : terms_) {
    if (!first) os << " + ";
    first = false;
    const bool unit = m.coefficient == 1;
    if (m.factors.empty() || !unit) os << paren(m.coefficient);
    bool first_factor = m.factors.empty() || !unit ? false : true;
    for (const auto& [a, e] : m.factors) {
      if (!first_factor) os << "*";
      first_factor = false;
      os << to_string(a);
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

Expr& Expr::operator+=(const Expr& o) {
  // Merge of two sorted term lists.
  FactorsLess less;
  std::vector<Monomial> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && less(terms_[i].factors, o.terms_[j].factors))) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || less(o.terms_[j].factors, terms_[i].factors)) {
      out.push_back(o.terms_[j++]);
    } else {
      ExactComplex c = terms_[i].coefficient + o.terms_[j].coefficient;
      if (!c.is_zero()) out.push_back(Monomial{std::move(c), std::move(terms_[i].factors)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += o.scaled(-1); }

Expr operator*(const Expr& x, const Expr& y) {
  if (x.is_zero() || y.is_zero()) return {};
  TermMap acc;
  for (const auto& p : x.terms_)
    for (const auto& q : y.terms_)
      accumulate(acc, multiply_factors(p.factors, q.factors), p.coefficient * q.coefficient);
  Expr e;
  e.terms_ = drain(acc);
  return e;
}

Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }

bool operator==(const Expr& x, const Expr& y) {
  if (x.terms_.size() != y.terms_.size()) return false;
  for (std::size_t k = 0; k < x.terms_.size(); ++k) {
    if (!(x.terms_[k].coefficient == y.terms_[k].coefficient)) return false;
    if (x.terms_[k].factors != y.terms_[k].factors) return false;
  }
  return true;
}

Expr add(const Expr& x, const Expr& y) { return x + y; }
Expr mul(const Expr& x, const Expr& y) { return x * y; }
Expr scale(const Expr& x, const ExactComplex& c) { return x.scaled(c); }
Expr renormalize(const Expr& x) { return Expr::from_monomials(x.terms()); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr atom_derivative(const Atom& atom, Variable v) {
  struct Visitor {
    Variable v;
    Expr operator()(const VarAtom& a) const { return a.var == v ? Expr(1) : Expr(); }
    Expr operator()(const FuncAtom& f) const {
      switch (f.arg) {
        case FuncArg::Xi:
          return v == Variable::Xi ? Expr::func(f.name, f.dxi + 1) : Expr();
        case FuncArg::ZXi:
          return v == Variable::Z ? Expr::func_zxi(f.name, f.dz + 1, f.dxi)
                                  : Expr::func_zxi(f.name, f.dz, f.dxi + 1);
        case FuncArg::Moebius:
          // d(gamma xi)/dxi = (c xi + d)^-2 when ad - bc = 1.
          if (v == Variable::Z) return {};
          return Expr::func_at(f.name, f.gamma, f.dxi + 1) * Expr::linform(f.gamma, -2);
      }
      return {};
    }
    Expr operator()(const LinFormAtom& l) const { return v == Variable::Xi ? Expr(l.c) : Expr(); }
    Expr operator()(const ExpZAtom& e) const {
      return v == Variable::Z ? Expr::exp_z(e.lambda).scaled(e.lambda) : Expr();
    }
  };
  return std::visit(Visitor{v}, atom);
}

}  // namespace

Expr differentiate(const Expr& x, Variable v) {
  std::vector<Monomial> out;
  for (const auto& m : x.terms()) {
    for (std::size_t k = 0; k < m.factors.size(); ++k) {
      const auto& [atom, e] = m.factors[k];
      Expr d = atom_derivative(atom, v);
      if (d.is_zero()) continue;
      Factors rest = m.factors;
      // exp atoms always carry exponent 1; the derivative already contains the atom.
      if (rest[k].second == 1)
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      else
        rest[k].second -= 1;
      const ExactComplex c = m.coefficient * ExactComplex(e);
      for (const auto& dm : d.terms()) {
        Factors f = rest;
        f.insert(f.end(), dm.factors.begin(), dm.factors.end());
        out.push_back(Monomial{c * dm.coefficient, std::move(f)});
      }
    }
  }
  return Expr::from_monomials(std::move(out));
}

Expr differentiate(const Expr& x, Variable v, int times) {
  Expr out = x;
  for (int k = 0; k < times; ++k) out = differentiate(out, v);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

Expr substitute(const Expr& x, const SubstitutionRule& rule) {
  std::map<Atom, std::optional<Expr>> cache;
  auto lookup = [&](const Atom& a) -> const std::optional<Expr>& {
    auto it = cache.find(a);
    if (it == cache.end()) it = cache.emplace(a, rule(a)).first;
    return it->second;
  };
  Expr result;
  for (const auto& m : x.terms()) {
    Expr term(m.coefficient);
    Factors kept;
    for (const auto& [a, e] : m.factors) {
      const auto& repl = lookup(a);
      if (!repl) {
        kept.emplace_back(a, e);
        continue;
      }
      if (e < 0) throw std::invalid_argument("substitute: cannot replace atom with negative exponent");
      term = term * repl->pow(static_cast<unsigned>(e));
    }
    result += term * Expr::from_monomials({Monomial{1, std::move(kept)}});
  }
  return result;
}

Expr substitute_function(const Expr& x, const std::string& name, const Expr& law) {
  std::map<int, Expr> derivatives{{0, law}};
  auto derivative = [&](int m) -> const Expr& {
    for (int k = 1; k <= m; ++k)
      if (!derivatives.count(k)) derivatives[k] = differentiate(derivatives[k - 1], Variable::Xi);
    return derivatives[m];
  };
  return substitute(x, [&](const Atom& a) -> std::optional<Expr> {
    const auto* f = std::get_if<FuncAtom>(&a);
    if (!f || f->name != name || f->arg != FuncArg::Xi) return std::nullopt;
    return derivative(f->dxi);
  });
}

std::map<ZKey, Expr> split_z_structure(const Expr& x) {
  std::map<ZKey, std::vector<Monomial>> groups;
  for (const auto& m : x.terms()) {
    ZKey key;
    Factors rest;
    for (const auto& [a, e] : m.factors) {
      if (const auto* v = std::get_if<VarAtom>(&a); v && v->var == Variable::Z) {
        key.z_power = e;
      } else if (const auto* ex = std::get_if<ExpZAtom>(&a)) {
        key.lambda = ex->lambda;
      } else if (const auto* f = std::get_if<FuncAtom>(&a); f && f->arg == FuncArg::ZXi) {
        throw std::invalid_argument("split_z_structure: formal function of z present: " + to_string(a));
      } else {
        rest.emplace_back(a, e);
      }
    }
    groups[key].push_back(Monomial{m.coefficient, std::move(rest)});
  }
  std::map<ZKey, Expr> out;
  for (auto& [k, terms] : groups) {
    Expr e = Expr::from_monomials(std::move(terms));
    if (!e.is_zero()) out.emplace(k, std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numeric evaluation

std::complex<double> eval_numeric(const Expr& x, const Bindings& b) {
  auto need = [](const std::optional<std::complex<double>>& v, const char* what) {
    if (!v) throw std::invalid_argument(std::string("eval_numeric: missing binding for ") + what);
    return *v;
  };
  std::map<Atom, std::complex<double>> cache;
  auto value = [&](const Atom& atom) -> std::complex<double> {
    if (auto it = cache.find(atom); it != cache.end()) return it->second;
    std::complex<double> v;
    if (const auto* va = std::get_if<VarAtom>(&atom)) {
      v = va->var == Variable::Z ? need(b.z, "z") : need(b.xi, "xi");
    } else if (const auto* f = std::get_if<FuncAtom>(&atom)) {
      auto it = b.functions.find(f->name);
      if (it == b.functions.end())
        throw std::invalid_argument("eval_numeric: missing oracle for function '" + f->name + "'");
      const auto xi = need(b.xi, "xi");
      switch (f->arg) {
        case FuncArg::Xi: v = it->second(0, f->dxi, b.z.value_or(0.0), xi); break;
        case FuncArg::ZXi: v = it->second(f->dz, f->dxi, need(b.z, "z"), xi); break;
        case FuncArg::Moebius: {
          const auto den = f->gamma.cocycle(xi);
          if (den == std::complex<double>(0.0))
            throw std::domain_error("eval_numeric: gamma xi undefined (c xi + d = 0)");
          v = it->second(0, f->dxi, b.z.value_or(0.0), f->gamma.apply(xi));
          break;
        }
      }
    } else if (const auto* l = std::get_if<LinFormAtom>(&atom)) {
      v = l->c.to_complex() * need(b.xi, "xi") + l->d.to_complex();
    } else {
      const auto& e = std::get<ExpZAtom>(atom);
      v = std::exp(e.lambda.to_complex() * need(b.z, "z"));
    }
    cache.emplace(atom, v);
    return v;
  };

  std::complex<double> total = 0;
  for (const auto& m : x.terms()) {
    std::complex<double> term = m.coefficient.to_complex();
    for (const auto& [a, e] : m.factors) {
      const auto v = value(a);
      if (e < 0 && v == std::complex<double>(0.0))
        throw std::domain_error("eval_numeric: " + to_string(a) + " vanishes at the evaluation point");
      term *= std::pow(v, e);
    }
    total += term;
  }
  return total;
}

}  // namespace rigidgeo
