#pragma once

// Eisenstein series E2, E4 on the modular group as numeric witnesses for the
// weight-2 quasimodular and weight-4 transformation laws.

#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "rigidgeo/expr.hpp"

namespace rigidgeo::modular {

using cd = std::complex<double>;

/// sigma_k(n) = sum of d^k over divisors d of n.
long long divisor_sigma(int k, long long n);

class QSeries {
 public:
  /// a_0 = 1, a_n = -24 sigma_1(n).
  static QSeries e2(int truncation = 64);
  /// a_0 = 1, a_n = 240 sigma_3(n).
  static QSeries e4(int truncation = 64);
  /// Throws std::invalid_argument for names other than E2, E4.
  static QSeries by_name(const std::string& name, int truncation = 64);

  const std::string& name() const { return name_; }
  int weight() const { return weight_; }
  int truncation() const { return static_cast<int>(coeff_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coeff_; }

 private:
  std::string name_;
  int weight_ = 0;
  std::vector<double> coeff_;
};

/// E2(gamma xi) = (c xi + d)^2 E2(xi) + K c (c xi + d) with K = 12 / (2 pi i).
inline const cd kE2Constant = cd(12.0, 0.0) / cd(0.0, 2.0 * std::numbers::pi);

/// Smallest N >= 64 with |q|^N below eps and every omitted term of the m-th
/// derivative of E4 (the faster-growing series) below eps.
int required_truncation(cd xi, int derivative = 0, double eps = 1e-16);

/// m-th xi-derivative of sum a_n q^n, q = exp(2 pi i xi), using all stored terms.
/// Throws std::domain_error if Im xi <= 0 and std::range_error if |q|^N >= eps.
cd eval_qseries(const QSeries& s, cd xi, int derivative = 0, double eps = 1e-16);

/// Evaluation with a series truncated adaptively for this point.
cd eval_eisenstein(const std::string& name, cd xi, int derivative = 0);

/// |lhs - sum(rhs)| / max(1, |lhs| + sum |rhs_i|).
double normalized_residual(cd lhs, std::initializer_list<cd> rhs_terms);

struct NumericCheckOptions {
  double s_factor = 1.0;  ///< multiplies s in f12 = s E2 (perturbation witness)
  double t_factor = 1.0;  ///< multiplies t in g22 = t E2
};

struct SampleResidual {
  cd xi;
  std::array<double, 3> normalized{};  ///< laws of f12, g12, g22
  std::array<double, 3> absolute{};
};

struct NumericCheckResult {
  cd s, t;
  bool degenerate_scaling = false;  ///< f22 = 2 f11 = 0, so s = t = 0
  std::vector<SampleResidual> samples;
  std::array<double, 3> max_by_law{};
  double max_residual = 0.0;
};

const std::vector<cd>& default_sample_points();

/// f12 = s E2, g22 = t E2 with s K = f22 - 2 f11 and t K = -f22, w = E4,
/// g12 = (w - f12' + g22') / 2. Throws std::invalid_argument unless gamma is
/// in SL(2, Z) and every sample point lies in the upper half-plane.
NumericCheckResult numeric_equivariance_check_serial(cd f11, cd f22, const GroupElement& gamma,
                                                     const std::vector<cd>& points,
                                                     const NumericCheckOptions& options = {});
/// Same result, sample points evaluated with OpenMP.
NumericCheckResult numeric_equivariance_check_parallel(cd f11, cd f22, const GroupElement& gamma,
                                                       const std::vector<cd>& points,
                                                       const NumericCheckOptions& options = {});

}  // namespace rigidgeo::modular
