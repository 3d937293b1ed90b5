#include "rigidgeo/exact.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rigidgeo {

namespace {

void canon(mpq_class& q) { q.canonicalize(); }

// Unsigned decimal or fraction: "12", "3/4", "0.125". Empty means 1 (as in "i").
mpq_class parse_magnitude(std::string_view s, std::string_view whole) {
  if (s.empty()) return 1;
  auto bad = [&] {
    return std::invalid_argument("malformed exact complex: '" + std::string(whole) + "'");
  };
  const auto slash = s.find('/');
  const auto dot = s.find('.');
  auto digits_only = [](std::string_view t) {
    if (t.empty()) return false;
    for (char ch : t)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  if (slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw bad();
    mpq_class q{mpz_class{std::string(num), 10}, mpz_class{std::string(den), 10}};
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
    canon(q);
    return q;
  }
  if (dot != std::string_view::npos) {
    const auto ip = s.substr(0, dot);
    const auto fp = s.substr(dot + 1);
    if ((!ip.empty() && !digits_only(ip)) || (!fp.empty() && !digits_only(fp)) ||
        (ip.empty() && fp.empty()))
      throw bad();
    mpz_class scale = 1;
    for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
    mpz_class n(std::string(ip.empty() ? "0" : ip) + std::string(fp), 10);
    mpq_class q(n, scale);
    canon(q);
    return q;
  }
  if (!digits_only(s)) throw bad();
  return mpq_class(mpz_class(std::string(s), 10));
}

}  // namespace

ExactComplex::ExactComplex(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  canon(re_);
  canon(im_);
}

ExactComplex ExactComplex::rational(long p, long q) {
  if (q == 0) throw std::domain_error("ExactComplex::rational: zero denominator");
  mpq_class r(p, q);
  canon(r);
  return {r, 0};
}

ExactComplex ExactComplex::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty exact complex literal");

  // Split into signed terms at '+'/'-' that are not leading.
  ExactComplex out;
  bool seen_re = false, seen_im = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string_view term(s.data() + pos, end - pos);
    if (term.empty()) throw std::invalid_argument("malformed exact complex: '" + s + "'");
    const bool imag = term.back() == 'i';
    if (imag) term.remove_suffix(1);
    if (!term.empty() && term.back() == '*') term.remove_suffix(1);
    mpq_class mag = parse_magnitude(term, s);
    if (!imag && term.empty()) throw std::invalid_argument("malformed exact complex: '" + s + "'");
    if (sign < 0) mag = -mag;
    if (imag) {
      if (seen_im) throw std::invalid_argument("duplicate imaginary part in '" + s + "'");
      seen_im = true;
      out.im_ = mag;
    } else {
      if (seen_re || seen_im) throw std::invalid_argument("malformed exact complex: '" + s + "'");
      seen_re = true;
      out.re_ = mag;
    }
    pos = end;
  }
  return out;
}

ExactComplex ExactComplex::inverse() const {
  if (is_zero()) throw std::domain_error("ExactComplex: division by zero");
  mpq_class n = re_ * re_ + im_ * im_;
  return {re_ / n, -im_ / n};
}

ExactComplex ExactComplex::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  ExactComplex result(1), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

ExactComplex& ExactComplex::operator+=(const ExactComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o) {
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) { return *this *= o.inverse(); }

std::string ExactComplex::str() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_re && !has_im) return "0";
  std::ostringstream os;
  if (has_re) os << re_.get_str();
  if (has_im) {
    mpq_class mag = abs(im_);
    if (sgn(im_) < 0)
      os << '-';
    else if (has_re)
      os << '+';
    if (mag != 1) os << mag.get_str();
    os << 'i';
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExactComplex& c) { return os << c.str(); }

}  // namespace rigidgeo
