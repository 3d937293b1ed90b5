#include "rigidgeo/chart.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rigidgeo::chart {

namespace {

Variable coord(int i) { return i == kZ ? Variable::Z : Variable::Xi; }

Expr d(const Expr& e, int i) { return differentiate(e, coord(i)); }

const char* name(int i) { return i == kZ ? "z" : "xi"; }

}  // namespace

ChartConnection2D ChartConnection2D::symmetric(Expr z_zz, Expr z_zxi, Expr z_xixi, Expr xi_zz, Expr xi_zxi,
                                               Expr xi_xixi) {
  ChartConnection2D c;
  c.set(kZ, kZ, kZ, std::move(z_zz));
  c.set(kZ, kZ, kXi, z_zxi);
  c.set(kZ, kXi, kZ, std::move(z_zxi));
  c.set(kZ, kXi, kXi, std::move(z_xixi));
  c.set(kXi, kZ, kZ, std::move(xi_zz));
  c.set(kXi, kZ, kXi, xi_zxi);
  c.set(kXi, kXi, kZ, std::move(xi_zxi));
  c.set(kXi, kXi, kXi, std::move(xi_xixi));
  return c;
}

ChartConnection2D ChartConnection2D::general(const std::array<Expr, 8>& gamma_kij) {
  ChartConnection2D c;
  c.g_ = gamma_kij;
  return c;
}

bool ChartConnection2D::is_symmetric() const {
  for (int k = 0; k < 2; ++k)
    if (!torsion(k, kZ, kXi).is_zero()) return false;
  return true;
}

ChartConnection2D ChartConnection2D::projective_shift(const Expr& w_z, const Expr& w_xi) const {
  const Expr w[2] = {w_z, w_xi};
  ChartConnection2D out = *this;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Expr shift;
        if (k == i) shift += w[j];
        if (k == j) shift += w[i];
        if (!shift.is_zero()) out.set(k, i, j, (*this)(k, i, j) + shift);
      }
  return out;
}

std::string ChartConnection2D::str() const {
  std::ostringstream os;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        os << "Gamma^" << name(k) << "_" << name(i) << name(j) << " = " << (*this)(k, i, j).str() << "\n";
  return os.str();
}

bool Curvature2D::is_zero() const {
  return std::all_of(r_.begin(), r_.end(), [](const Expr& e) { return e.is_zero(); });
}

Curvature2D curvature_2d(const ChartConnection2D& g) {
  Curvature2D r;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          Expr s = d(g(l, j, k), i) - d(g(l, i, k), j);
          for (int m = 0; m < 2; ++m) s += g(l, i, m) * g(m, j, k) - g(l, j, m) * g(m, i, k);
          r(l, i, j, k) = std::move(s);
        }
  return r;
}

bool KillingResidual::is_zero() const {
  for (const auto& e : components())
    if (!e.is_zero()) return false;
  return true;
}

KillingResidual killing_residual(const ChartConnection2D& g, const VectorFieldExpr& x) {
  const Expr xs[2] = {x.a, x.b};
  // (L_X nabla)^k_ij = d_i d_j X^k + X^m d_m G^k_ij - G^m_ij d_m X^k + d_i X^m G^k_mj + d_j X^m G^k_im
  auto lie = [&](int k, int i, int j) {
    Expr s = d(d(xs[k], j), i);
    for (int m = 0; m < 2; ++m) {
      s += xs[m] * d(g(k, i, j), m);
      s -= g(m, i, j) * d(xs[k], m);
      s += d(xs[m], i) * g(k, m, j);
      s += d(xs[m], j) * g(k, i, m);
    }
    return s;
  };
  KillingResidual r;
  r.zxi_z = lie(kZ, kZ, kXi);
  r.zxi_xi = lie(kXi, kZ, kXi);
  r.zz_z = lie(kZ, kZ, kZ);
  r.zz_xi = lie(kXi, kZ, kZ);
  r.xixi_z = lie(kZ, kXi, kXi);
  r.xixi_xi = lie(kXi, kXi, kXi);
  return r;
}

ProjectiveCoefficients projectivize(const ChartConnection2D& g) {
  if (!g.is_symmetric()) throw std::invalid_argument("projectivize: connection has torsion");
  ProjectiveCoefficients k;
  k.k0 = -g(kXi, kZ, kZ);
  k.k1 = g(kZ, kZ, kZ) - g(kXi, kZ, kXi).scaled(2);
  k.k2 = g(kZ, kZ, kXi).scaled(2) - g(kXi, kXi, kXi);
  k.k3 = g(kZ, kXi, kXi);
  return k;
}

LiouvilleInvariants liouville_invariants(const ProjectiveCoefficients& k) {
  auto dz = [](const Expr& e) { return d(e, kZ); };
  auto dx = [](const Expr& e) { return d(e, kXi); };
  LiouvilleInvariants out;
  out.l1 = dx(dz(k.k1)).scaled(2) - dz(dz(k.k2)) - dx(dx(k.k0)).scaled(3) - (k.k0 * dz(k.k3)).scaled(6) -
           (k.k3 * dz(k.k0)).scaled(3) + (k.k0 * dx(k.k2)).scaled(3) + (k.k2 * dx(k.k0)).scaled(3) +
           k.k1 * dz(k.k2) - (k.k1 * dx(k.k1)).scaled(2);
  out.l2 = dx(dz(k.k2)).scaled(2) - dx(dx(k.k1)) - dz(dz(k.k3)).scaled(3) + (k.k3 * dx(k.k0)).scaled(6) +
           (k.k0 * dx(k.k3)).scaled(3) - (k.k3 * dz(k.k1)).scaled(3) - (k.k1 * dz(k.k3)).scaled(3) -
           k.k2 * dx(k.k1) + (k.k2 * dz(k.k2)).scaled(2);
  return out;
}

}  // namespace rigidgeo::chart
