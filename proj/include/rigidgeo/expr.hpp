#pragma once

// Exact symbolic expressions in the chart coordinates (z, xi).
//
// An Expr is a finite sum of monomials c * prod(atom^e) kept in a canonical
// normal form: monomials sorted by their factor lists, no duplicate factor
// lists, no zero coefficients. Formal function symbols are free generators,
// so "equal" always means formally equal.

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rigidgeo/exact.hpp"

namespace rigidgeo {

/// Element of SL(2, Q(i)) acting on xi by Moebius transformation.
struct GroupElement {
  ExactComplex a{1}, b{0}, c{0}, d{1};

  /// Throws std::invalid_argument unless ad - bc = 1.
  static GroupElement make(ExactComplex a, ExactComplex b, ExactComplex c, ExactComplex d);
  static GroupElement identity() { return {}; }
  /// S = (0,-1,1,0): xi -> -1/xi.
  static GroupElement S() { return make(0, -1, 1, 0); }
  /// T = (1,1,0,1): xi -> xi + 1.
  static GroupElement T() { return make(1, 1, 0, 1); }

  ExactComplex det() const { return a * d - b * c; }
  bool is_identity() const { return b.is_zero() && c.is_zero() && a == d && (a == 1 || a == -1); }
  GroupElement inverse() const { return {d, -b, -c, a}; }

  std::complex<double> apply(std::complex<double> xi) const;
  std::complex<double> cocycle(std::complex<double> xi) const {  // c*xi + d
    return c.to_complex() * xi + d.to_complex();
  }
  std::string str() const;

  friend GroupElement operator*(const GroupElement& x, const GroupElement& y);
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend bool operator<(const GroupElement& x, const GroupElement& y);
};

enum class Variable { Z, Xi };

struct VarAtom {
  Variable var;
  friend bool operator==(const VarAtom&, const VarAtom&) = default;
  friend bool operator<(const VarAtom& x, const VarAtom& y) { return x.var < y.var; }
};

/// Where a formal function is evaluated.
enum class FuncArg {
  Xi,       ///< f(xi)
  ZXi,      ///< f(z, xi), a formal function of both coordinates
  Moebius,  ///< f(gamma xi)
};

/// Derivative of a formal function symbol: d^dz/dz d^dxi/dxi of name, at arg.
struct FuncAtom {
  std::string name;
  int dz = 0;
  int dxi = 0;
  FuncArg arg = FuncArg::Xi;
  GroupElement gamma;  ///< meaningful only for FuncArg::Moebius

  friend bool operator==(const FuncAtom&, const FuncAtom&) = default;
  friend bool operator<(const FuncAtom& x, const FuncAtom& y);
};

/// The cocycle factor (c xi + d) with c != 0.
struct LinFormAtom {
  ExactComplex c, d;
  friend bool operator==(const LinFormAtom&, const LinFormAtom&) = default;
  friend bool operator<(const LinFormAtom& x, const LinFormAtom& y);
};

/// exp(lambda z) with lambda != 0.
struct ExpZAtom {
  ExactComplex lambda;
  friend bool operator==(const ExpZAtom&, const ExpZAtom&) = default;
  friend bool operator<(const ExpZAtom& x, const ExpZAtom& y) { return x.lambda < y.lambda; }
};

using Atom = std::variant<VarAtom, FuncAtom, LinFormAtom, ExpZAtom>;

std::string to_string(const Atom& atom);

/// Sorted by atom, each atom at most once, exponent never 0.
using Factors = std::vector<std::pair<Atom, int>>;

struct Monomial {
  ExactComplex coefficient;
  Factors factors;
};

class Expr {
 public:
  Expr() = default;
  Expr(ExactComplex c);  // NOLINT: constants embed implicitly
  Expr(long c) : Expr(ExactComplex(c)) {}  // NOLINT

  static Expr z();
  static Expr xi();
  static Expr var(Variable v);
  /// d^m f / dxi^m evaluated at xi.
  static Expr func(const std::string& name, int dxi = 0);
  /// Mixed partial of a formal function f(z, xi).
  static Expr func_zxi(const std::string& name, int dz = 0, int dxi = 0);
  /// (d^m f / dxi^m)(gamma xi). The identity element collapses to func().
  static Expr func_at(const std::string& name, const GroupElement& gamma, int dxi = 0);
  /// (c xi + d)^n; collapses to the constant d^n when c = 0.
  static Expr linform(const GroupElement& gamma, int n = 1);
  /// exp(lambda z); exp(0 z) = 1.
  static Expr exp_z(const ExactComplex& lambda);
  /// Builds and normalizes an arbitrary sum of monomials.
  static Expr from_monomials(std::vector<Monomial> terms);

  bool is_zero() const { return terms_.empty(); }
  /// True iff the expression is a constant (possibly 0).
  bool is_constant() const;
  /// Constant value; throws std::logic_error when not constant.
  ExactComplex constant_value() const;
  const std::vector<Monomial>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  std::set<Atom> atoms() const;
  bool depends_on(Variable v) const;

  Expr pow(unsigned n) const;
  Expr scaled(const ExactComplex& c) const;

  std::string str() const;

  Expr operator-() const { return scaled(-1); }
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  friend Expr operator+(Expr x, const Expr& y) { return x += y; }
  friend Expr operator-(Expr x, const Expr& y) { return x -= y; }
  friend Expr operator*(const Expr& x, const Expr& y);
  friend bool operator==(const Expr& x, const Expr& y);

 private:
  std::vector<Monomial> terms_;
};

Expr add(const Expr& x, const Expr& y);
Expr mul(const Expr& x, const Expr& y);
Expr scale(const Expr& x, const ExactComplex& c);

/// Re-sorts and merges an Expr's terms; identity on anything already normal.
Expr renormalize(const Expr& x);

Expr differentiate(const Expr& x, Variable v);
Expr differentiate(const Expr& x, Variable v, int times);

/// Replaces atoms for which `rule` returns a value. Atoms carrying negative
/// exponents may not be replaced (std::invalid_argument).
using SubstitutionRule = std::function<std::optional<Expr>(const Atom&)>;
Expr substitute(const Expr& x, const SubstitutionRule& rule);

/// Replaces every plain-argument derivative f^(m)(xi) of `name` by the m-th
/// xi-derivative of `law`.
Expr substitute_function(const Expr& x, const std::string& name, const Expr& law);

/// Decomposes an expression free of formal (z, xi)-functions as
/// sum over (lambda, k) of coefficient(xi) * z^k * exp(lambda z).
struct ZKey {
  ExactComplex lambda;
  int z_power = 0;
  friend bool operator<(const ZKey& x, const ZKey& y) {
    if (!(x.lambda == y.lambda)) return x.lambda < y.lambda;
    return x.z_power < y.z_power;
  }
  friend bool operator==(const ZKey&, const ZKey&) = default;
};
std::map<ZKey, Expr> split_z_structure(const Expr& x);

// ---------------------------------------------------------------------------
// Numeric evaluation

/// Value of d^dz/dz d^dxi/dxi f at (z, arg); arg is xi or gamma xi.
using FunctionOracle =
    std::function<std::complex<double>(int dz, int dxi, std::complex<double> z, std::complex<double> arg)>;

struct Bindings {
  std::optional<std::complex<double>> z;
  std::optional<std::complex<double>> xi;
  std::map<std::string, FunctionOracle> functions;
};

/// Throws std::invalid_argument on a missing binding and std::domain_error
/// when a cocycle factor vanishes at the evaluation point.
std::complex<double> eval_numeric(const Expr& x, const Bindings& bindings);

}  // namespace rigidgeo
