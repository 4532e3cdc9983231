#pragma once

// Exact coefficient arithmetic: Gaussian rationals and Laurent polynomials
// in the skein parameter zeta.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <string>

namespace skl {

using Integer = mpz_class;
using Rational = mpq_class;

/// Element of Q(i). Both parts are kept as reduced fractions, so equality
/// is plain member-wise comparison.
class GaussRat {
 public:
  GaussRat() = default;
  GaussRat(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussRat(Rational re, Rational im = 0);

  static GaussRat i() { return GaussRat(0, 1); }
  /// i^k for any integer k.
  static GaussRat i_pow(long k);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_unit_of_order_four() const;

  GaussRat conj() const { return {re_, -im_}; }
  GaussRat operator-() const { return {-re_, -im_}; }
  GaussRat& operator+=(const GaussRat& o);
  GaussRat& operator-=(const GaussRat& o);
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
  /// Lexicographic on (re, im); only used for canonical ordering.
  friend bool operator<(const GaussRat& a, const GaussRat& b);

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string to_string() const;

 private:
  Rational re_;
  Rational im_;
};

/// Finitely supported map exponent -> coefficient. Zero coefficients are
/// never stored.
class LaurentPoly {
 public:
  using Terms = std::map<long, GaussRat>;

  LaurentPoly() = default;
  LaurentPoly(GaussRat c);  // NOLINT(google-explicit-constructor)
  LaurentPoly(long c) : LaurentPoly(GaussRat(c)) {}  // NOLINT

  static LaurentPoly monomial(const GaussRat& c, long exponent);
  /// zeta^exponent
  static LaurentPoly zeta(long exponent = 1) { return monomial(1, exponent); }
  /// Value of a trivial loop, -zeta^2 - zeta^-2.
  static LaurentPoly loop_value();

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  GaussRat coeff(long exponent) const;
  long min_exponent() const;
  long max_exponent() const;
  void add_term(long exponent, const GaussRat& c);

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const GaussRat& c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const GaussRat& c) { return a *= c; }
  friend LaurentPoly operator*(const GaussRat& c, LaurentPoly a) { return a *= c; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  LaurentPoly pow(unsigned n) const;
  std::string to_string() const;

 private:
  Terms terms_;
};

inline LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }

/// f(zeta) -> f(i zeta): the coefficient at exponent k picks up i^k.
LaurentPoly lp_twist(const LaurentPoly& a);

/// Exact evaluation at a fourth root of unity. Throws std::invalid_argument
/// for any other zeta.
GaussRat lp_eval(const LaurentPoly& a, const GaussRat& zeta);

/// Approximate evaluation at an arbitrary nonzero complex zeta. Floating
/// point; never used by the verification paths.
std::complex<double> lp_eval_approx(const LaurentPoly& a, std::complex<double> zeta);

}  // namespace skl
