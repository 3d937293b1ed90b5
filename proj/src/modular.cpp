#include "rigidgeo/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rigidgeo::modular {

long long divisor_sigma(int k, long long n) {
  if (n <= 0) throw std::invalid_argument("divisor_sigma: n must be positive");
  auto power = [k](long long d) {
    long long p = 1;
    for (int e = 0; e < k; ++e) p *= d;
    return p;
  };
  long long s = 0;
  for (long long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    s += power(d);
    if (d * d != n) s += power(n / d);
  }
  return s;
}

QSeries QSeries::e2(int truncation) {
  QSeries s;
  s.name_ = "E2";
  s.weight_ = 2;
  s.coeff_.resize(static_cast<std::size_t>(truncation) + 1);
  s.coeff_[0] = 1;
  for (int n = 1; n <= truncation; ++n) s.coeff_[static_cast<std::size_t>(n)] = -24.0 * double(divisor_sigma(1, n));
  return s;
}

QSeries QSeries::e4(int truncation) {
  QSeries s;
  s.name_ = "E4";
  s.weight_ = 4;
  s.coeff_.resize(static_cast<std::size_t>(truncation) + 1);
  s.coeff_[0] = 1;
  for (int n = 1; n <= truncation; ++n) s.coeff_[static_cast<std::size_t>(n)] = 240.0 * double(divisor_sigma(3, n));
  return s;
}

QSeries QSeries::by_name(const std::string& name, int truncation) {
  if (name == "E2") return e2(truncation);
  if (name == "E4") return e4(truncation);
  throw std::invalid_argument("unknown q-series '" + name + "' (valid: E2, E4)");
}

namespace {

void require_upper_half_plane(cd xi) {
  if (!(xi.imag() > 0)) throw std::domain_error("q-series evaluation needs Im xi > 0");
}

}  // namespace

int required_truncation(cd xi, int derivative, double eps) {
  require_upper_half_plane(xi);
  const double log_q = -2.0 * std::numbers::pi * xi.imag();  // log |q|
  const double log_eps = std::log(eps);
  // log of the bound 240 n^(3+m) (2 pi)^m |q|^n on the n-th E4 term.
  auto log_bound = [&](double n) {
    return std::log(240.0) + (3.0 + derivative) * std::log(n) + derivative * std::log(2.0 * std::numbers::pi) +
           n * log_q;
  };
  const double peak = (3.0 + derivative) / -log_q;  // the bound decreases beyond its peak
  int n = 64;
  while (n * log_q >= log_eps || n <= peak || log_bound(n) >= log_eps) ++n;
  return n;
}

cd eval_qseries(const QSeries& s, cd xi, int derivative, double eps) {
  require_upper_half_plane(xi);
  if (derivative < 0) throw std::invalid_argument("eval_qseries: negative derivative order");
  const cd two_pi_i(0, 2 * std::numbers::pi);
  const cd q = std::exp(two_pi_i * xi);
  if (std::pow(std::abs(q), s.truncation()) >= eps)
    throw std::range_error("eval_qseries: truncation " + std::to_string(s.truncation()) +
                           " insufficient at this point");
  const auto& a = s.coefficients();
  cd sum = derivative == 0 ? cd(a[0]) : cd(0);
  cd qn = 1;
  for (std::size_t n = 1; n < a.size(); ++n) {
    qn *= q;
    cd factor = 1;
    const cd step = two_pi_i * double(n);
    for (int k = 0; k < derivative; ++k) factor *= step;
    sum += a[n] * factor * qn;
  }
  return sum;
}

cd eval_eisenstein(const std::string& name, cd xi, int derivative) {
  return eval_qseries(QSeries::by_name(name, required_truncation(xi, derivative)), xi, derivative);
}

double normalized_residual(cd lhs, std::initializer_list<cd> rhs_terms) {
  cd diff = lhs;
  double scale = std::abs(lhs);
  for (const cd& t : rhs_terms) {
    diff -= t;
    scale += std::abs(t);
  }
  return std::abs(diff) / std::max(1.0, scale);
}

const std::vector<cd>& default_sample_points() {
  static const std::vector<cd> pts = {cd(0, 2), cd(1, 2), cd(-1, 3)};
  return pts;
}

namespace {

struct Setup {
  cd f11, f22, s, t, c, d, a, b;
  bool degenerate = false;
};

Setup prepare(cd f11, cd f22, const GroupElement& gamma, const std::vector<cd>& points,
              const NumericCheckOptions& options) {
  for (const ExactComplex* e : {&gamma.a, &gamma.b, &gamma.c, &gamma.d})
    if (!e->is_real() || e->re().get_den() != 1)
      throw std::invalid_argument("numeric equivariance check needs gamma in SL(2, Z), got " + gamma.str());
  for (const cd& p : points)
    if (!(p.imag() > 0)) throw std::invalid_argument("sample points must lie in the upper half-plane");
  Setup s;
  s.f11 = f11;
  s.f22 = f22;
  s.degenerate = std::abs(f22) == 0.0 && std::abs(f11) == 0.0;
  s.s = s.degenerate ? cd(0) : (f22 - 2.0 * f11) / kE2Constant * options.s_factor;
  s.t = s.degenerate ? cd(0) : -f22 / kE2Constant * options.t_factor;
  s.a = gamma.a.to_complex();
  s.b = gamma.b.to_complex();
  s.c = gamma.c.to_complex();
  s.d = gamma.d.to_complex();
  return s;
}

SampleResidual residual_at(const Setup& st, cd xi) {
  const cd u = st.c * xi + st.d;
  const cd gx = (st.a * xi + st.b) / u;
  // E2, E2', E4 at xi and at gamma xi.
  const cd e2 = eval_eisenstein("E2", xi), de2 = eval_eisenstein("E2", xi, 1), e4 = eval_eisenstein("E4", xi);
  const cd e2g = eval_eisenstein("E2", gx), de2g = eval_eisenstein("E2", gx, 1), e4g = eval_eisenstein("E4", gx);

  const cd f12 = st.s * e2, f12g = st.s * e2g;
  const cd g22 = st.t * e2, g22g = st.t * e2g;
  const cd g12 = 0.5 * (e4 - st.s * de2 + st.t * de2);
  const cd g12g = 0.5 * (e4g - st.s * de2g + st.t * de2g);
  const cd c = st.c;

  SampleResidual r;
  r.xi = xi;
  const cd t2[] = {f12g / (u * u), -c * st.f22 / u, 2.0 * c * st.f11 / u};
  const cd t5[] = {g12g / std::pow(u, 4), c * c * (st.f11 - st.f22) / (u * u), c * (f12g - g22g) / std::pow(u, 3)};
  const cd t6[] = {g22g / (u * u), c * st.f22 / u};
  r.normalized[0] = normalized_residual(f12, {t2[0], t2[1], t2[2]});
  r.normalized[1] = normalized_residual(g12, {t5[0], t5[1], t5[2]});
  r.normalized[2] = normalized_residual(g22, {t6[0], t6[1]});
  r.absolute[0] = std::abs(f12 - t2[0] - t2[1] - t2[2]);
  r.absolute[1] = std::abs(g12 - t5[0] - t5[1] - t5[2]);
  r.absolute[2] = std::abs(g22 - t6[0] - t6[1]);
  return r;
}

NumericCheckResult finish(const Setup& st, std::vector<SampleResidual> samples) {
  NumericCheckResult out;
  out.s = st.s;
  out.t = st.t;
  out.degenerate_scaling = st.degenerate;
  out.samples = std::move(samples);
  for (const auto& r : out.samples)
    for (std::size_t e = 0; e < 3; ++e) out.max_by_law[e] = std::max(out.max_by_law[e], r.normalized[e]);
  out.max_residual = *std::max_element(out.max_by_law.begin(), out.max_by_law.end());
  return out;
}

}  // namespace

NumericCheckResult numeric_equivariance_check_serial(cd f11, cd f22, const GroupElement& gamma,
                                                     const std::vector<cd>& points,
                                                     const NumericCheckOptions& options) {
  const Setup st = prepare(f11, f22, gamma, points, options);
  std::vector<SampleResidual> samples;
  samples.reserve(points.size());
  for (const cd& p : points) samples.push_back(residual_at(st, p));
  return finish(st, std::move(samples));
}

NumericCheckResult numeric_equivariance_check_parallel(cd f11, cd f22, const GroupElement& gamma,
                                                       const std::vector<cd>& points,
                                                       const NumericCheckOptions& options) {
  const Setup st = prepare(f11, f22, gamma, points, options);
  std::vector<SampleResidual> samples(points.size());
  const auto n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < n; ++i)
    samples[static_cast<std::size_t>(i)] = residual_at(st, points[static_cast<std::size_t>(i)]);
  return finish(st, std::move(samples));
}

}  // namespace rigidgeo::modular
