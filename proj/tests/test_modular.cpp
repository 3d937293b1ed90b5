#include <doctest.h>

#include <cmath>

#include "rigidgeo/modular.hpp"
#include "support/generators.hpp"

using namespace rigidgeo;
using namespace rigidgeo::modular;
using rigidgeo::testing::Gen;

TEST_CASE("divisor sums and coefficients") {
  CHECK(divisor_sigma(1, 1) == 1);
  CHECK(divisor_sigma(1, 6) == 12);
  CHECK(divisor_sigma(3, 2) == 9);
  CHECK(divisor_sigma(3, 12) == 2044);
  CHECK(divisor_sigma(0, 36) == 9);
  CHECK_THROWS_AS(divisor_sigma(1, 0), std::invalid_argument);

  const auto e2 = QSeries::e2(4), e4 = QSeries::e4(4);
  CHECK(e2.coefficients() == std::vector<double>{1, -24, -72, -96, -168});
  CHECK(e4.coefficients() == std::vector<double>{1, 240, 2160, 6720, 17520});
  CHECK(QSeries::e2().truncation() == 64);
  CHECK_THROWS_AS(QSeries::by_name("E6"), std::invalid_argument);
}

TEST_CASE("transformation laws under S and T") {
  const cd xi(0, 2);
  const cd e4 = eval_eisenstein("E4", xi), e4s = eval_eisenstein("E4", -1.0 / xi);
  CHECK(std::abs(e4s - std::pow(xi, 4) * e4) / std::abs(e4s) < 1e-10);

  const cd e2 = eval_eisenstein("E2", xi), e2s = eval_eisenstein("E2", -1.0 / xi);
  CHECK(std::abs(e2s - xi * xi * e2 - 12.0 * xi / cd(0, 2 * std::numbers::pi)) < 1e-10);
  CHECK(std::abs(e2s - xi * xi * e2 - kE2Constant * xi) < 1e-10);

  for (cd p : {cd(0.3, 1.1), cd(-0.45, 0.8)})
    CHECK(std::abs(eval_eisenstein("E2", p + 1.0) - eval_eisenstein("E2", p)) < 1e-12);
}

TEST_CASE("term-by-term derivatives match central differences") {
  const double h = 1e-5;
  for (const std::string name : {"E2", "E4"})
    for (cd p : {cd(0.1, 1.0), cd(-0.3, 0.7), cd(0.5, 2.0)})
      for (int m = 0; m < 3; ++m) {
        const cd fd = (eval_eisenstein(name, p + h, m) - eval_eisenstein(name, p - h, m)) / (2 * h);
        const cd exact = eval_eisenstein(name, p, m + 1);
        CAPTURE(name);
        CAPTURE(m);
        CHECK(std::abs(fd - exact) / std::abs(exact) < 1e-6);
      }
}

TEST_CASE("evaluation preconditions") {
  CHECK_THROWS_AS(eval_qseries(QSeries::e2(), cd(0.2, 0)), std::domain_error);
  CHECK_THROWS_AS(eval_qseries(QSeries::e2(), cd(0.2, -1)), std::domain_error);
  CHECK_THROWS_AS(eval_qseries(QSeries::e2(2), cd(0, 0.1)), std::range_error);
  CHECK(required_truncation(cd(0, 2)) == 64);
  CHECK(required_truncation(cd(0, 0.01)) > 600);
}

TEST_CASE("E2 and E4 laws at randomized modular group elements") {
  Gen gen;
  for (int g = 0; g < 10; ++g) {
    const auto gamma = gen.sl2z(5);
    for (int k = 0; k < 10; ++k) {
      const cd xi(gen.real(-1, 1), gen.real(0.5, 2));
      const cd u = gamma.cocycle(xi), gx = gamma.apply(xi);
      const cd c = gamma.c.to_complex();
      const cd e4 = eval_eisenstein("E4", xi), e4g = eval_eisenstein("E4", gx);
      const cd e2 = eval_eisenstein("E2", xi), e2g = eval_eisenstein("E2", gx);
      CAPTURE(gamma.str());
      CHECK(normalized_residual(e4, {e4g * std::pow(u, -4)}) < 1e-8);
      CHECK(normalized_residual(e2, {e2g / (u * u), -kE2Constant * c / u}) < 1e-8);
    }
  }
}

TEST_CASE("numeric equivariance check") {
  const cd f11(1, 0), f22(3, 0);
  const auto t = numeric_equivariance_check_serial(f11, f22, GroupElement::T(), default_sample_points());
  CHECK(t.max_residual < 1e-12);

  const auto s = numeric_equivariance_check_serial(f11, f22, GroupElement::S(), default_sample_points());
  CHECK(s.samples.size() == 3);
  CHECK(s.max_residual < 1e-8);
  CHECK(std::abs(s.s * kE2Constant - (f22 - 2.0 * f11)) < 1e-14);
  CHECK(std::abs(s.t * kE2Constant + f22) < 1e-14);

  NumericCheckOptions wrong;
  wrong.s_factor = 2;
  const auto w = numeric_equivariance_check_serial(f11, f22, GroupElement::S(), default_sample_points(), wrong);
  CHECK(w.max_by_law[0] > 1e-3);

  Gen gen;
  for (int k = 0; k < 10; ++k) {
    const auto gamma = gen.sl2z(5);
    const cd a(gen.real(-2, 2), gen.real(-2, 2)), b(gen.real(-2, 2), gen.real(-2, 2));
    CAPTURE(gamma.str());
    CHECK(numeric_equivariance_check_serial(a, b, gamma, default_sample_points()).max_residual < 1e-8);
  }

  const auto degenerate = numeric_equivariance_check_serial(0, 0, GroupElement::S(), default_sample_points());
  CHECK(degenerate.degenerate_scaling);
  CHECK(degenerate.s == cd(0));
  CHECK(degenerate.max_residual < 1e-8);

  CHECK_THROWS_AS(numeric_equivariance_check_serial(f11, f22, GroupElement::make(1, ExactComplex::rational(1, 2), 0, 1),
                                                    default_sample_points()),
                  std::invalid_argument);
  CHECK_THROWS_AS(numeric_equivariance_check_serial(f11, f22, GroupElement::S(), {cd(0, -1)}), std::invalid_argument);
}

TEST_CASE("residual of the f12 law scales linearly with a perturbation of s") {
  const cd f11(1, 0), f22(3, 0);
  const std::vector<cd> pts = {cd(0, 2)};
  std::vector<double> res;
  for (double eps : {1e-3, 2e-3, 4e-3}) {
    NumericCheckOptions o;
    o.s_factor = 1 + eps;
    res.push_back(numeric_equivariance_check_serial(f11, f22, GroupElement::S(), pts, o).samples[0].absolute[0]);
  }
  CHECK(res[1] / res[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(res[2] / res[0] == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("serial and parallel numeric checks agree") {
  Gen gen;
  std::vector<cd> pts;
  for (int k = 0; k < 64; ++k) pts.emplace_back(gen.real(-1, 1), gen.real(0.3, 3));
  const auto gamma = GroupElement::make(2, 1, 1, 1);
  const auto a = numeric_equivariance_check_serial(cd(0.5, 1), cd(-2, 0.25), gamma, pts);
  const auto b = numeric_equivariance_check_parallel(cd(0.5, 1), cd(-2, 0.25), gamma, pts);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].xi == b.samples[i].xi);
    CHECK(a.samples[i].normalized == b.samples[i].normalized);
  }
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.max_residual < 1e-8);
}
