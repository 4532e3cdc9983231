#include "skl/ring.hpp"

#include <sstream>
#include <stdexcept>

namespace skl {

GaussRat::GaussRat(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussRat GaussRat::i_pow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1};
    case 1: return {0, 1};
    case 2: return {-1};
    default: return {0, -1};
  }
}

bool GaussRat::is_unit_of_order_four() const {
  return (sgn(im_) == 0 && abs(re_) == 1) || (sgn(re_) == 0 && abs(im_) == 1);
}

GaussRat& GaussRat::operator+=(const GaussRat& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  if (o.is_zero()) throw std::domain_error("GaussRat: division by zero");
  Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
  *this *= o.conj();
  re_ /= norm;
  im_ /= norm;
  return *this;
}

bool operator<(const GaussRat& a, const GaussRat& b) {
  if (a.re_ != b.re_) return a.re_ < b.re_;
  return a.im_ < b.im_;
}

std::string GaussRat::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string imag = im_ == 1 ? "i" : im_ == -1 ? "-i" : im_.get_str() + "i";
  if (sgn(re_) == 0) return imag;
  return "(" + re_.get_str() + (sgn(im_) > 0 ? "+" : "") + imag + ")";
}

LaurentPoly::LaurentPoly(GaussRat c) {
  if (!c.is_zero()) terms_.emplace(0, std::move(c));
}

LaurentPoly LaurentPoly::monomial(const GaussRat& c, long exponent) {
  LaurentPoly p;
  p.add_term(exponent, c);
  return p;
}

LaurentPoly LaurentPoly::loop_value() {
  LaurentPoly p;
  p.add_term(2, -1);
  p.add_term(-2, -1);
  return p;
}

GaussRat LaurentPoly::coeff(long exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? GaussRat{} : it->second;
}

long LaurentPoly::min_exponent() const {
  if (terms_.empty()) throw std::logic_error("min_exponent of zero polynomial");
  return terms_.begin()->first;
}

long LaurentPoly::max_exponent() const {
  if (terms_.empty()) throw std::logic_error("max_exponent of zero polynomial");
  return terms_.rbegin()->first;
}

void LaurentPoly::add_term(long exponent, const GaussRat& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, -c);
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
  *this = *this * o;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const GaussRat& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
  LaurentPoly result(1);
  LaurentPoly base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) out << " + ";
    first = false;
    out << it->second.to_string();
    if (it->first != 0) out << "*z^" << it->first;
  }
  return out.str();
}

LaurentPoly lp_twist(const LaurentPoly& a) {
  LaurentPoly r;
  for (const auto& [e, c] : a.terms()) r.add_term(e, c * GaussRat::i_pow(e));
  return r;
}

GaussRat lp_eval(const LaurentPoly& a, const GaussRat& zeta) {
  if (!zeta.is_unit_of_order_four())
    throw std::invalid_argument("lp_eval: zeta must be one of 1, -1, i, -i (got " +
                                zeta.to_string() + ")");
  // zeta = i^k
  long k = 0;
  while (GaussRat::i_pow(k) != zeta) ++k;
  GaussRat total;
  for (const auto& [e, c] : a.terms()) total += c * GaussRat::i_pow(k * e);
  return total;
}

std::complex<double> lp_eval_approx(const LaurentPoly& a, std::complex<double> zeta) {
  std::complex<double> total{0.0, 0.0};
  for (const auto& [e, c] : a.terms())
    total += c.to_complex() * std::pow(zeta, static_cast<double>(e));
  return total;
}

}  // namespace skl
