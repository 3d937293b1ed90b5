#include <doctest.h>

#include <complex>

#include "rigidgeo/expr.hpp"
#include "support/generators.hpp"

using namespace rigidgeo;
using rigidgeo::testing::Gen;
using cd = std::complex<double>;

TEST_CASE("exact complex parsing and printing") {
  CHECK(ExactComplex::parse("3/2-1/4i") == ExactComplex(mpq_class(3, 2), mpq_class(-1, 4)));
  CHECK(ExactComplex::parse("-i") == ExactComplex(0, -1));
  CHECK(ExactComplex::parse("2i") == ExactComplex(0, 2));
  CHECK(ExactComplex::parse(" 6/4 ") == ExactComplex::rational(3, 2));
  CHECK(ExactComplex::parse("0.25+1.5i") == ExactComplex(mpq_class(1, 4), mpq_class(3, 2)));
  CHECK(ExactComplex::parse("-3").str() == "-3");
  CHECK(ExactComplex(mpq_class(3, 2), mpq_class(-1, 4)).str() == "3/2-1/4i");
  CHECK(ExactComplex(0, 1).str() == "i");

  CHECK_THROWS_AS(ExactComplex::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(ExactComplex::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(ExactComplex::parse("i+1"), std::invalid_argument);
  CHECK_THROWS_AS(ExactComplex::parse("2x"), std::invalid_argument);
  CHECK_THROWS_AS(ExactComplex(0).inverse(), std::domain_error);

  Gen gen;
  for (int k = 0; k < 100; ++k) {
    const ExactComplex c = gen.exact();
    CHECK(ExactComplex::parse(c.str()) == c);
  }
}

TEST_CASE("exact complex field arithmetic") {
  const ExactComplex i = ExactComplex::imag_unit();
  CHECK(i * i == -1);
  CHECK(ExactComplex(3, 4).norm_squared() == 25);
  CHECK(ExactComplex(1, 1).inverse() == ExactComplex(mpq_class(1, 2), mpq_class(-1, 2)));
  CHECK(ExactComplex(2).pow(-3) == ExactComplex::rational(1, 8));
}

TEST_CASE("group elements") {
  CHECK_THROWS_AS(GroupElement::make(1, 1, 1, 1), std::invalid_argument);
  const auto s = GroupElement::S();
  CHECK((s * s).is_identity());  // S^2 = -1
  const auto g = GroupElement::make(2, 1, 1, 1);
  CHECK((g * g.inverse()).is_identity());
  CHECK(std::abs(s.apply(cd(0, 2)) - cd(0, 0.5)) < 1e-15);
}

TEST_CASE("ring operations on the documented examples") {
  const Expr z = Expr::z();
  const Expr xi = Expr::xi();
  CHECK(add(z, -z).is_zero());

  const auto gamma = GroupElement::make(2, 1, 1, 1);
  CHECK(mul(Expr::linform(gamma, 2), Expr::linform(gamma, -2)) == Expr(1));

  const Expr f1 = Expr::func("f", 1);
  CHECK(mul(f1 + xi, xi) == xi * f1 + xi.pow(2));

  // Exponentials merge and cancel.
  CHECK(Expr::exp_z(3) * Expr::exp_z(-3) == Expr(1));
  CHECK(Expr::exp_z(1) * Expr::exp_z(2) == Expr::exp_z(3));
  CHECK(Expr::exp_z(0) == Expr(1));

  // A cocycle with c = 0 is the constant d.
  CHECK(Expr::linform(GroupElement::T(), -4) == Expr(1));
  CHECK(Expr::linform(GroupElement::make(-1, 0, 0, -1), 3) == Expr(-1));
  CHECK(Expr::func_at("f", GroupElement::identity(), 2) == Expr::func("f", 2));
}

TEST_CASE("differentiation rules") {
  const Expr xi = Expr::xi();
  CHECK(differentiate(xi.pow(3), Variable::Xi) == xi.pow(2).scaled(3));
  CHECK(differentiate(xi.pow(3), Variable::Z).is_zero());

  const auto gamma = GroupElement::make(2, 1, 1, 1);
  CHECK(differentiate(Expr::func_at("f", gamma), Variable::Xi) ==
        Expr::func_at("f", gamma, 1) * Expr::linform(gamma, -2));
  CHECK(differentiate(Expr::linform(gamma, -3), Variable::Xi) == Expr::linform(gamma, -4).scaled(-3));

  const ExactComplex mu = ExactComplex::rational(6);
  CHECK(differentiate(Expr::exp_z(-mu), Variable::Z) == Expr::exp_z(-mu).scaled(-mu));
  CHECK(differentiate(Expr::exp_z(-mu), Variable::Xi).is_zero());

  CHECK(differentiate(Expr::func_zxi("a", 1, 0), Variable::Xi) == Expr::func_zxi("a", 1, 1));
  CHECK(differentiate(Expr::func("f"), Variable::Z).is_zero());
}

TEST_CASE("chain rule through a Moebius argument matches finite differences") {
  // f(x) = x^3 + 2x with its exact derivatives.
  Bindings b;
  b.functions["f"] = [](int, int m, cd, cd x) -> cd {
    switch (m) {
      case 0: return x * x * x + 2.0 * x;
      case 1: return 3.0 * x * x + 2.0;
      case 2: return 6.0 * x;
      case 3: return 6.0;
      default: return 0.0;
    }
  };
  const auto gamma = GroupElement::make(2, 1, 1, 1);
  const Expr fg = Expr::func_at("f", gamma);
  const Expr dfg = differentiate(fg, Variable::Xi);
  const cd xi0(0.3, 1.2);
  const double h = 1e-6;
  auto at = [&](const Expr& e, cd x) {
    b.xi = x;
    return eval_numeric(e, b);
  };
  const cd fd = (at(fg, xi0 + h) - at(fg, xi0 - h)) / (2 * h);
  CHECK(std::abs(fd - at(dfg, xi0)) < 1e-7);
}

TEST_CASE("numeric evaluation") {
  Bindings b;
  b.xi = cd(0, 2);
  CHECK(std::abs(eval_numeric(Expr::xi().pow(2), b) - cd(-4, 0)) < 1e-15);
  b.xi = cd(0, 1);
  CHECK(std::abs(eval_numeric(Expr::linform(GroupElement::S(), -1), b) - cd(0, -1)) < 1e-15);

  b.xi = cd(0, 0);
  CHECK_THROWS_AS(eval_numeric(Expr::linform(GroupElement::S(), -1), b), std::domain_error);
  b.xi = cd(0, 1);
  CHECK_THROWS_AS(eval_numeric(Expr::z(), b), std::invalid_argument);
  CHECK_THROWS_AS(eval_numeric(Expr::func("nobody"), b), std::invalid_argument);
}

TEST_CASE("substitution and z-structure") {
  const Expr law = Expr::xi().pow(2);  // f := xi^2
  const Expr e = Expr::func("f", 1) * Expr::func("f") + Expr::func("g");
  CHECK(substitute_function(e, "f", law) == Expr::xi().pow(3).scaled(2) + Expr::func("g"));

  const Expr x = Expr::z() * Expr::exp_z(2) * Expr::xi() + Expr::exp_z(2).scaled(3) + Expr::func("f");
  const auto parts = split_z_structure(x);
  REQUIRE(parts.size() == 3);
  CHECK(parts.at(ZKey{2, 1}) == Expr::xi());
  CHECK(parts.at(ZKey{2, 0}) == Expr(3));
  CHECK(parts.at(ZKey{0, 0}) == Expr::func("f"));
  CHECK_THROWS_AS(split_z_structure(Expr::func_zxi("a")), std::invalid_argument);
}

TEST_CASE("serialization is deterministic") {
  const Expr e = Expr::func("f12", 1) * Expr::linform(GroupElement::S(), -2) - Expr::exp_z(-6).scaled(3) +
                 Expr::xi();
  CHECK(e.str() == renormalize(e).str());
  CHECK(e.str() == "xi + f12'(xi)*(1*xi)^-2 + (-3)*exp((-6)*z)");
}

// ---------------------------------------------------------------------------
// Property suites (fixed seed, >= 200 cases each)

TEST_CASE("property: normal form idempotence and ring axioms") {
  Gen gen;
  for (int k = 0; k < 250; ++k) {
    const Expr x = gen.expr(), y = gen.expr(), w = gen.expr();
    CHECK(renormalize(x) == x);
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK((x + y) + w == x + (y + w));
    CHECK((x * y) * w == x * (y * w));
    CHECK(x * (y + w) == x * y + x * w);
    CHECK((x - x).is_zero());
  }
}

TEST_CASE("property: Leibniz rule is exact") {
  Gen gen;
  for (int k = 0; k < 250; ++k) {
    const Expr x = gen.expr(), y = gen.expr();
    for (Variable v : {Variable::Z, Variable::Xi})
      CHECK(differentiate(x * y, v) == differentiate(x, v) * y + x * differentiate(y, v));
  }
}

TEST_CASE("property: mixed partials commute") {
  Gen gen;
  for (int k = 0; k < 250; ++k) {
    const Expr x = gen.expr();
    CHECK(differentiate(differentiate(x, Variable::Z), Variable::Xi) ==
          differentiate(differentiate(x, Variable::Xi), Variable::Z));
  }
}

TEST_CASE("property: evaluation is a ring homomorphism") {
  Gen gen;
  for (int k = 0; k < 250; ++k) {
    const Expr x = gen.expr(), y = gen.expr();
    const cd z0(gen.real(-1, 1), gen.real(-1, 1));
    const cd xi0(gen.real(-1, 1), gen.real(0.5, 2));
    const Bindings b = rigidgeo::testing::sample_bindings(z0, xi0);
    const cd ex = eval_numeric(x, b), ey = eval_numeric(y, b);
    const double mx = rigidgeo::testing::magnitude(x, b), my = rigidgeo::testing::magnitude(y, b);
    CHECK(std::abs(eval_numeric(x + y, b) - (ex + ey)) <= 1e-10 * (mx + my + 1));
    CHECK(std::abs(eval_numeric(x * y, b) - ex * ey) <= 1e-10 * (mx * my + 1));
  }
}
