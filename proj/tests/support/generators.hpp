#pragma once

// Seeded generators for property-style tests.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "rigidgeo/expr.hpp"

namespace rigidgeo::testing {

inline constexpr std::uint64_t kSeed = 20261015;

class Gen {
 public:
  explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// Small Gaussian rational, never zero when nonzero = true.
  ExactComplex exact(bool nonzero = false) {
    for (;;) {
      ExactComplex c(mpq_class(integer(-6, 6), integer(1, 4)), mpq_class(integer(-3, 3), integer(1, 3)));
      if (!nonzero || !c.is_zero()) return c;
    }
  }

  /// Real rational with small height, nonzero.
  ExactComplex rational_nonzero() {
    for (;;) {
      ExactComplex c = ExactComplex::rational(integer(-7, 7), integer(1, 5));
      if (!c.is_zero()) return c;
    }
  }

  /// SL(2, Z) element with entries bounded by `bound`.
  GroupElement sl2z(int bound = 5, bool allow_c_zero = true) {
    for (;;) {
      const long a = integer(-bound, bound), b = integer(-bound, bound);
      const long c = integer(-bound, bound), d = integer(-bound, bound);
      if (a * d - b * c != 1) continue;
      if (!allow_c_zero && c == 0) continue;
      return GroupElement::make(a, b, c, d);
    }
  }

  /// SL(2, Q(i)) element built from elementary factors.
  GroupElement sl2_exact() {
    auto upper = [&] { return GroupElement::make(1, exact(), 0, 1); };
    auto lower = [&] { return GroupElement::make(1, 0, exact(), 1); };
    GroupElement g = upper() * lower();
    if (coin()) g = g * upper();
    return g;
  }

  /// A small library of group elements so random exprs share atoms.
  const std::vector<GroupElement>& group_pool() {
    static const std::vector<GroupElement> pool = {
        GroupElement::S(), GroupElement::make(2, 1, 1, 1), GroupElement::make(1, 0, 3, 1),
        GroupElement::make(1, ExactComplex(0, 1), 0, 1)};
    return pool;
  }

  Expr atom() {
    const auto& pool = group_pool();
    switch (integer(0, 8)) {
      case 0: return Expr::z();
      case 1: return Expr::xi();
      case 2: return Expr::func("f", integer(0, 2));
      case 3: return Expr::func("g", integer(0, 1));
      case 4: return Expr::func_at("f", pool[static_cast<std::size_t>(integer(0, 3))], integer(0, 1));
      case 5: {
        int n = integer(-2, 2);
        if (n == 0) n = -1;
        return Expr::linform(pool[static_cast<std::size_t>(integer(0, 2))], n);
      }
      case 6: {
        static const ExactComplex lambdas[] = {1, -2, ExactComplex(mpq_class(1, 2), 1)};
        return Expr::exp_z(lambdas[integer(0, 2)]);
      }
      case 7: return Expr::func_zxi("h", integer(0, 1), integer(0, 1));
      default: return Expr(exact(true));
    }
  }

  Expr expr(int max_terms = 4, int max_factors = 3) {
    Expr out;
    const int terms = integer(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Expr m(exact(true));
      const int factors = integer(0, max_factors);
      for (int f = 0; f < factors; ++f) m = m * atom();
      out += m;
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Numeric oracles for the symbols used by Gen::expr():
/// f(x) = exp(0.3 x), g(x) = exp(-0.7 x), h(z, x) = exp(0.2 z + 0.5 x).
inline Bindings sample_bindings(std::complex<double> z, std::complex<double> xi) {
  Bindings b;
  b.z = z;
  b.xi = xi;
  auto exp_oracle = [](double alpha) {
    return [alpha](int, int m, std::complex<double>, std::complex<double> x) {
      return std::pow(alpha, m) * std::exp(alpha * x);
    };
  };
  b.functions["f"] = exp_oracle(0.3);
  b.functions["g"] = exp_oracle(-0.7);
  b.functions["h"] = [](int dz, int dx, std::complex<double> zz, std::complex<double> x) {
    return std::pow(0.2, dz) * std::pow(0.5, dx) * std::exp(0.2 * zz + 0.5 * x);
  };
  return b;
}

/// Sum of absolute values of the monomials: the natural scale for rounding error.
inline double magnitude(const Expr& e, const Bindings& b) {
  double s = 0;
  for (const auto& m : e.terms()) s += std::abs(eval_numeric(Expr::from_monomials({m}), b));
  return s;
}

}  // namespace rigidgeo::testing
