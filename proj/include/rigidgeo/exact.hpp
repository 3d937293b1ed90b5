#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rigidgeo {

/// Exact Gaussian-rational number re + im*i.
///
/// Both parts are kept canonical (reduced, positive denominator), so
/// equality is plain componentwise comparison.
class ExactComplex {
 public:
  ExactComplex() = default;
  ExactComplex(long re) : re_(re) {}  // NOLINT: implicit from integers is intended
  ExactComplex(mpq_class re, mpq_class im = 0);

  /// p/q with the denominator q != 0.
  static ExactComplex rational(long p, long q = 1);
  static ExactComplex imag_unit() { return ExactComplex(0, 1); }

  /// Parses "3", "-1/2", "2i", "-i", "3/2-1/4i", "0.25+1.5i".
  static ExactComplex parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  ExactComplex conj() const { return {re_, -im_}; }
  ExactComplex norm_squared() const { return {re_ * re_ + im_ * im_, 0}; }
  /// Throws std::domain_error on zero.
  ExactComplex inverse() const;
  ExactComplex pow(int n) const;

  std::complex<double> to_complex() const {
    return {re_.get_d(), im_.get_d()};
  }

  std::string str() const;

  ExactComplex operator-() const { return {-re_, -im_}; }
  ExactComplex& operator+=(const ExactComplex& o);
  ExactComplex& operator-=(const ExactComplex& o);
  ExactComplex& operator*=(const ExactComplex& o);
  ExactComplex& operator/=(const ExactComplex& o);

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  /// Arbitrary but fixed total order (real part first); used for canonical sorting.
  friend bool operator<(const ExactComplex& a, const ExactComplex& b) {
    if (a.re_ != b.re_) return a.re_ < b.re_;
    return a.im_ < b.im_;
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

std::ostream& operator<<(std::ostream& os, const ExactComplex& c);

}  // namespace rigidgeo
