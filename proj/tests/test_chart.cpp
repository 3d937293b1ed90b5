#include <doctest.h>

#include "rigidgeo/chart.hpp"
#include "support/generators.hpp"

using namespace rigidgeo;
using namespace rigidgeo::chart;
using rigidgeo::testing::Gen;

namespace {

ChartConnection2D reference_flat() { return ChartConnection2D::symmetric(1, 0, 0, 0, 1, 0); }

struct Family {
  ExactComplex f11, f22;
  Expr f12 = Expr::func("f12"), g22 = Expr::func("g22"), g12 = Expr::func("g12");
  ChartConnection2D conn() const {
    return ChartConnection2D::symmetric(Expr(f11 + 1), f12, g12, 0, Expr(f22 + 1), g22);
  }
};

ChartConnection2D random_connection(Gen& gen) {
  std::array<Expr, 6> e;
  for (auto& x : e) x = gen.expr();
  return ChartConnection2D::symmetric(e[0], e[1], e[2], e[3], e[4], e[5]);
}

}  // namespace

TEST_CASE("curvature of simple connections") {
  CHECK(curvature_2d(ChartConnection2D::symmetric(0, 0, 0, 0, 0, 0)).is_zero());
  CHECK(curvature_2d(reference_flat()).is_zero());
  CHECK(reference_flat().is_torsion_free());

  const auto r = curvature_2d(ChartConnection2D::symmetric(Expr::xi(), 0, 0, 0, 0, 0));
  CHECK_FALSE(r.is_zero());
  CHECK(r(kZ, kXi, kZ, kZ) == Expr(1));
  CHECK(r(kZ, kZ, kXi, kZ) == Expr(-1));
}

TEST_CASE("curvature is antisymmetric in the differentiation pair") {
  Gen gen;
  for (int t = 0; t < 40; ++t) {
    const auto r = curvature_2d(random_connection(gen));
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) CHECK((r(l, i, j, k) + r(l, j, i, k)).is_zero());
  }
}

TEST_CASE("torsion of a general connection") {
  std::array<Expr, 8> g{};
  g[1] = Expr::xi();  // Gamma^z_{z xi}
  const auto c = ChartConnection2D::general(g);
  CHECK_FALSE(c.is_torsion_free());
  CHECK(c.torsion(kZ, kZ, kXi) == Expr::xi());
  CHECK_THROWS_AS(projectivize(c), std::invalid_argument);
}

TEST_CASE("Killing residual of the family reproduces the classical system") {
  const Expr a = Expr::func_zxi("a"), b = Expr::func_zxi("b");
  auto da = [](int dz, int dxi) { return Expr::func_zxi("a", dz, dxi); };
  auto db = [](int dz, int dxi) { return Expr::func_zxi("b", dz, dxi); };

  Gen gen;
  for (int t = 0; t < 10; ++t) {
    Family f{gen.exact(), gen.exact()};
    const auto r = killing_residual(f.conn(), {a, b});
    const Expr one(1);
    const Expr f11(f.f11), f22(f.f22);
    const Expr df12 = differentiate(f.f12, Variable::Xi), dg12 = differentiate(f.g12, Variable::Xi),
               dg22 = differentiate(f.g22, Variable::Xi);

    CHECK(r.zz_z == da(2, 0) + (one + f11) * da(1, 0) + (f.f12 * db(1, 0)).scaled(2));
    CHECK(r.zz_xi == db(2, 0) + (one + f22.scaled(2) - f11) * db(1, 0));
    CHECK(r.zxi_z == da(1, 1) + (f11 - f22) * da(0, 1) + f.g12 * db(1, 0) + f.f12 * db(0, 1) + df12 * b);
    CHECK(r.zxi_xi == db(1, 1) + (one + f22) * da(1, 0) + (f.g22 - f.f12) * db(1, 0));
    // The a_xi coefficient is 2 f12 - g22.
    CHECK(r.xixi_z == da(0, 2) - f.g12 * da(1, 0) + (f.f12.scaled(2) - f.g22) * da(0, 1) +
                               (f.g12 * db(0, 1)).scaled(2) + dg12 * b);
    CHECK(r.xixi_xi == db(0, 2) + (one + f22).scaled(2) * da(0, 1) - f.g12 * db(1, 0) + f.g22 * db(0, 1) +
                               dg22 * b);
  }
}

TEST_CASE("Killing residual on simple fields") {
  const VectorFieldExpr dz{1, 0};
  CHECK(killing_residual(ChartConnection2D::symmetric(3, ExactComplex(0, 1), -2, 5, 1, 7), dz).is_zero());
  CHECK(killing_residual(Family{2, 3}.conn(), dz).is_zero());
  const auto r = killing_residual(reference_flat(), {Expr::z(), 0});
  CHECK_FALSE(r.is_zero());
  CHECK(r.zz_z == Expr(1));
}

TEST_CASE("property: Killing residual is linear in the field") {
  Gen gen;
  for (int t = 0; t < 60; ++t) {
    const auto c = random_connection(gen);
    const VectorFieldExpr x{gen.expr(), gen.expr()}, y{gen.expr(), gen.expr()};
    const auto rx = killing_residual(c, x).components();
    const auto ry = killing_residual(c, y).components();
    const auto rs = killing_residual(c, {x.a + y.a, x.b + y.b}).components();
    for (std::size_t i = 0; i < 6; ++i) CHECK(rs[i] == rx[i] + ry[i]);
  }
}

TEST_CASE("projectivization") {
  const auto zero = projectivize(ChartConnection2D::symmetric(0, 0, 0, 0, 0, 0));
  CHECK(zero == ProjectiveCoefficients{0, 0, 0, 0});

  const auto ref = projectivize(reference_flat());
  CHECK(ref == ProjectiveCoefficients{0, -1, 0, 0});

  Family f{ExactComplex::rational(2, 3), ExactComplex(-1, 4)};
  const auto k = projectivize(f.conn());
  CHECK(k.k0.is_zero());
  CHECK(k.k1 == Expr((f.f11 + 1) - ExactComplex(2) * (f.f22 + 1)));
  CHECK(k.k2 == f.f12.scaled(2) - f.g22);
  CHECK(k.k3 == f.g12);
}

TEST_CASE("property: projective shifts leave K0..K3 unchanged") {
  Gen gen;
  for (int t = 0; t < 60; ++t) {
    const auto c = random_connection(gen);
    const Expr wz = t % 2 ? Expr(gen.exact()) : gen.expr();
    const Expr wx = t % 2 ? Expr(gen.exact()) : gen.expr();
    CHECK(projectivize(c.projective_shift(wz, wx)) == projectivize(c));
  }
}

TEST_CASE("Liouville invariants") {
  CHECK(liouville_invariants({0, 0, 0, 0}).vanish());

  const ProjectiveCoefficients formal{0, ExactComplex(3, -1), Expr::func("k2"), Expr::func("k3")};
  CHECK(liouville_invariants(formal).vanish());

  const auto l = liouville_invariants({0, Expr::xi().pow(2), 0, 0});
  CHECK(l.l1 == Expr::xi().pow(3).scaled(-4));

  const auto zdep = liouville_invariants({0, Expr::z() * Expr::xi(), 0, 0});
  CHECK(zdep.l1 == Expr(2) - (Expr::z().pow(2) * Expr::xi()).scaled(2));

  Family f{ExactComplex::rational(-5, 2), ExactComplex(0, 2)};
  CHECK(liouville_invariants(projectivize(f.conn())).vanish());
  CHECK(liouville_invariants(projectivize(reference_flat())).vanish());
}
