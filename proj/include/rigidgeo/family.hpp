#pragma once

// Invariant meromorphic affine connections on the chart C x H of an elliptic
// principal bundle, parametrized by two constants and three formal functions of xi.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigidgeo/chart.hpp"
#include "rigidgeo/expr.hpp"

namespace rigidgeo::family {

/// Weight-2 quasimodular symbol: f(xi) = f(gamma xi) (c xi + d)^-2 - K c (c xi + d)^-1.
struct QuasimodularSymbol {
  std::string name;
  ExactComplex k;
  static constexpr int weight = 2;

  /// Right-hand side of the law, an Expr in atoms at gamma xi.
  Expr law(const GroupElement& gamma) const;
};

/// Weight-4 symbol: w(xi) = w(gamma xi) (c xi + d)^-4.
struct QuadraticDifferentialSymbol {
  std::string name;
  static constexpr int weight = 4;

  Expr law(const GroupElement& gamma) const;
};

struct FamilyParams {
  ExactComplex f11, f22;
  std::string f12_name = "f12", g22_name = "g22", w_name = "w";

  /// Throws std::invalid_argument for empty, duplicate, or reserved symbol names.
  static FamilyParams make(ExactComplex f11, ExactComplex f22, std::string f12 = "f12", std::string g22 = "g22",
                           std::string w = "w");

  QuasimodularSymbol f12() const { return {f12_name, f22 - ExactComplex(2) * f11}; }
  QuasimodularSymbol g22() const { return {g22_name, -f22}; }
  QuadraticDifferentialSymbol w() const { return {w_name}; }

  Expr f12_expr() const { return Expr::func(f12_name); }
  Expr g22_expr() const { return Expr::func(g22_name); }
  Expr w_expr() const { return Expr::func(w_name); }
  /// g12 = (w - f12' + g22') / 2.
  Expr g12() const;
  /// The same combination with every symbol evaluated at gamma xi.
  Expr g12_at(const GroupElement& gamma) const;
  ExactComplex mu() const { return ExactComplex(1) + ExactComplex(2) * f22 - f11; }
};

struct GenericityReport {
  ExactComplex mu;
  bool mu_nonzero = false;
  bool f11_ne_f22 = false;
  bool f22_ne_minus_one = false;
  bool mu_ne_one_plus_f11 = false;

  bool generic() const { return mu_nonzero && f11_ne_f22 && f22_ne_minus_one && mu_ne_one_plus_f11; }
  std::vector<std::string> failed_flags() const;
};

GenericityReport genericity(const FamilyParams& p);

/// Gamma^z_zz = 1 + f11, Gamma^z_zxi = f12, Gamma^z_xixi = g12,
/// Gamma^xi_zz = 0, Gamma^xi_zxi = 1 + f22, Gamma^xi_xixi = g22.
chart::ChartConnection2D assemble_connection(const FamilyParams& p);

/// The flat reference structure (all parameters zero).
chart::ChartConnection2D reference_connection();

struct EquivarianceResiduals {
  /// Invariance of f11, f12, f21, f22, g12, g22, in that order.
  std::array<Expr, 6> residual;
  static constexpr std::array<const char*, 6> kNames = {"f11", "f12", "f21", "f22", "g12", "g22"};
  bool all_zero() const;
};

/// Writes the six invariance equations with formal f11, f21, f22, reduces them
/// with f21 = 0 and f11, f22 constant, then substitutes the transformation laws
/// of f12, g22 and w. Every residual is identically zero.
EquivarianceResiduals equivariance_residuals(const FamilyParams& p, const GroupElement& gamma);

/// Residuals of the raw equations with f11, f21, f22 still formal and no laws applied.
EquivarianceResiduals equivariance_equations(const FamilyParams& p, const GroupElement& gamma);

// ---------------------------------------------------------------------------
// Killing fields

/// Linear ODE sum_k coeff[k] u^(k) = 0 in one unknown function of xi.
struct LinearOde {
  std::vector<Expr> coeff;

  int order() const;  ///< -1 for the zero operator
  LinearOde derivative() const;
  std::string str(const std::string& unknown) const;
};

/// Differential pseudo-remainder sequence. Returns the final order-0 coefficient
/// c, so that the system implies c u = 0; std::nullopt if the sequence degenerates.
std::optional<Expr> eliminate(LinearOde p, LinearOde q);

struct ReductionStep {
  std::string label;
  std::string detail;
};

struct KillingDimensionResult {
  GenericityReport genericity;
  std::optional<int> dimension;  ///< set only on the generic branch
  std::vector<std::string> basis;
  std::string branch;
  std::vector<ReductionStep> steps;
  LinearOde condition_one, condition_two;  ///< the two first-order ODEs on nu
  std::optional<Expr> nu_obstruction;      ///< c with c nu = 0
  std::optional<Expr> c_obstruction;       ///< c with c C = 0
};

/// Staged reduction of the Killing equations for X = a d_z + b d_xi.
KillingDimensionResult killing_dimension(const FamilyParams& p);

/// Solution shape of the two pure-z equations:
///   b = nu exp(-mu z) + C,  a = -f12 nu / (f11 - f22) exp(-mu z) - A / (1 + f11) exp(-(1 + f11) z) + B
/// (A z in place of the A-term when f11 = -1), with nu, A, B, C formal functions of xi.
/// Without homogeneous terms only the nu-part is kept.
chart::VectorFieldExpr killing_ansatz(const FamilyParams& p, bool homogeneous_terms = true);

// ---------------------------------------------------------------------------

struct ModuliDimension {
  int genus;
  int quasimodular_f12, quasimodular_g22, quadratic_differentials;
  int total() const { return quasimodular_f12 + quasimodular_g22 + quadratic_differentials; }
};

/// Throws std::invalid_argument for genus < 2.
ModuliDimension moduli_dimension(int genus);

/// (L1, L2) of the projectivized family connection.
chart::LiouvilleInvariants verify_projective_flatness(const FamilyParams& p);

/// L1, L2 are quadratic in K0..K3, and those are affine in (f11, f22), so both
/// invariants are polynomials of degree <= 2 in each constant. Vanishing on the
/// grid {0, 1, 2}^2 (with f12, g22, w formal) is then vanishing for all constants.
struct FlatnessCertificate {
  std::vector<std::pair<ExactComplex, ExactComplex>> grid;
  std::vector<bool> vanishes;
  bool all() const;
};
FlatnessCertificate projective_flatness_all_constants();

/// (z, xi) -> (z + log(c xi + d) + 2 pi i branch, gamma xi).
/// Throws std::invalid_argument if Im xi <= 0 and std::domain_error if c xi + d = 0.
std::pair<std::complex<double>, std::complex<double>> deck_action(const GroupElement& gamma, std::complex<double> z,
                                                                  std::complex<double> xi, long branch = 0);

/// z-coordinate of deck(g1, deck(g2, p)) minus that of deck(g1 g2, p), principal branches.
std::complex<double> composition_defect(const GroupElement& g1, const GroupElement& g2, std::complex<double> z,
                                        std::complex<double> xi);

}  // namespace rigidgeo::family
