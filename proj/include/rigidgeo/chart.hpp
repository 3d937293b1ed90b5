#pragma once

// Affine connections on a 2-dimensional chart with coordinates (z, xi).
// Index 0 is z, index 1 is xi. Gamma(k, i, j) = Gamma^k_ij, so that
// nabla_{d_i} d_j = sum_k Gamma^k_ij d_k.

#include <array>
#include <string>

#include "rigidgeo/expr.hpp"

namespace rigidgeo::chart {

inline constexpr int kZ = 0;
inline constexpr int kXi = 1;

class ChartConnection2D {
 public:
  ChartConnection2D() = default;

  /// Symmetric connection from its six independent entries.
  static ChartConnection2D symmetric(Expr z_zz, Expr z_zxi, Expr z_xixi, Expr xi_zz, Expr xi_zxi, Expr xi_xixi);
  /// Arbitrary entries; used for torsion checks.
  static ChartConnection2D general(const std::array<Expr, 8>& gamma_kij);

  const Expr& operator()(int k, int i, int j) const { return g_[index(k, i, j)]; }
  void set(int k, int i, int j, Expr value) { g_[index(k, i, j)] = std::move(value); }

  bool is_symmetric() const;
  /// T^k_ij = Gamma^k_ij - Gamma^k_ji.
  Expr torsion(int k, int i, int j) const { return (*this)(k, i, j) - (*this)(k, j, i); }
  bool is_torsion_free() const { return is_symmetric(); }

  /// Adds delta^k_i w_j + delta^k_j w_i; the result is projectively equivalent.
  ChartConnection2D projective_shift(const Expr& w_z, const Expr& w_xi) const;

  std::string str() const;

 private:
  static std::size_t index(int k, int i, int j) { return static_cast<std::size_t>((k * 2 + i) * 2 + j); }
  std::array<Expr, 8> g_;
};

/// R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + sum_m (Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik).
class Curvature2D {
 public:
  const Expr& operator()(int l, int i, int j, int k) const { return r_[index(l, i, j, k)]; }
  Expr& operator()(int l, int i, int j, int k) { return r_[index(l, i, j, k)]; }
  bool is_zero() const;

 private:
  static std::size_t index(int l, int i, int j, int k) {
    return static_cast<std::size_t>(((l * 2 + i) * 2 + j) * 2 + k);
  }
  std::array<Expr, 16> r_;
};

Curvature2D curvature_2d(const ChartConnection2D& conn);

struct VectorFieldExpr {
  Expr a;  ///< coefficient of d/dz
  Expr b;  ///< coefficient of d/dxi
};

/// (L_X nabla)(Y, Z) = [X, nabla_Y Z] - nabla_[X,Y] Z - nabla_Y [X, Z] on coordinate
/// pairs, in the order (d_z, d_xi), (d_z, d_z), (d_xi, d_xi); each pair gives a
/// d_z- and a d_xi-component.
struct KillingResidual {
  Expr zxi_z, zxi_xi, zz_z, zz_xi, xixi_z, xixi_xi;

  std::array<Expr, 6> components() const { return {zxi_z, zxi_xi, zz_z, zz_xi, xixi_z, xixi_xi}; }
  static constexpr std::array<const char*, 6> kNames = {"(z,xi) z", "(z,xi) xi", "(z,z) z",
                                                          "(z,z) xi", "(xi,xi) z", "(xi,xi) xi"};
  bool is_zero() const;
};

KillingResidual killing_residual(const ChartConnection2D& conn, const VectorFieldExpr& x);

/// Geodesics written as xi'' = K0 + K1 xi' + K2 xi'^2 + K3 xi'^3 with xi = xi(z).
struct ProjectiveCoefficients {
  Expr k0, k1, k2, k3;
  friend bool operator==(const ProjectiveCoefficients&, const ProjectiveCoefficients&) = default;
};

/// Throws std::invalid_argument for a connection with torsion.
ProjectiveCoefficients projectivize(const ChartConnection2D& conn);

struct LiouvilleInvariants {
  Expr l1, l2;
  bool vanish() const { return l1.is_zero() && l2.is_zero(); }
};

LiouvilleInvariants liouville_invariants(const ProjectiveCoefficients& k);

}  // namespace rigidgeo::chart
