#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaff {

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// a + b i with a, b exact rationals
class GaussRat {
 public:
  GaussRat() = default;
  GaussRat(long n) : re_(n) {}
  GaussRat(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRat i() { return GaussRat(0, 1); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRat conj() const { return GaussRat(re_, -im_); }
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }
  GaussRat inverse() const;

  GaussRat operator-() const { return GaussRat(-re_, -im_); }
  GaussRat& operator+=(const GaussRat& o);
  GaussRat& operator-=(const GaussRat& o);
  GaussRat& operator*=(const GaussRat& o);
  GaussRat& operator/=(const GaussRat& o);

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  // field interface shared with QRat
  static GaussRat zero() { return GaussRat(); }
  static GaussRat one() { return GaussRat(1); }
  int term_count() const { return (sgn(re_) != 0) + (sgn(im_) != 0); }
  std::string str() const;
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  // exact square root in Q(i), if one exists
  std::optional<GaussRat> sqrt() const;

 private:
  mpq_class re_{0}, im_{0};
};

// sum_k c[k] q^(low+k); trimmed so that c.front() and c.back() are nonzero
class LPoly {
 public:
  LPoly() = default;
  LPoly(GaussRat c0, int exp = 0);
  static LPoly monomial(GaussRat c, int exp) { return LPoly(std::move(c), exp); }

  bool is_zero() const { return c_.empty(); }
  int low() const { return low_; }
  int high() const { return low_ + int(c_.size()) - 1; }
  int size() const { return int(c_.size()); }
  const GaussRat& lowest() const { return c_.front(); }
  const GaussRat& highest() const { return c_.back(); }
  GaussRat coeff(int exp) const;
  const std::vector<GaussRat>& coeffs() const { return c_; }
  int term_count() const;
  bool is_constant_one() const { return low_ == 0 && c_.size() == 1 && c_[0].is_one(); }

  LPoly shifted(int by) const;
  LPoly operator-() const;
  LPoly& operator+=(const LPoly& o);
  LPoly& operator-=(const LPoly& o);
  friend LPoly operator+(LPoly a, const LPoly& b) { return a += b; }
  friend LPoly operator-(LPoly a, const LPoly& b) { return a -= b; }
  friend LPoly operator*(const LPoly& a, const LPoly& b);
  LPoly scaled(const GaussRat& s) const;
  friend bool operator==(const LPoly& a, const LPoly& b) { return a.low_ == b.low_ && a.c_ == b.c_; }

  GaussRat eval(const GaussRat& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  std::string str() const;

  // polynomial helpers on the coefficient vectors (low ignored)
  static LPoly from_coeffs(int low, std::vector<GaussRat> c);
  static LPoly gcd(const LPoly& a, const LPoly& b);         // monic, low = 0
  static LPoly div_exact(const LPoly& a, const LPoly& b);   // b | a as polynomials, low shifts subtract

 private:
  void trim();
  int low_ = 0;
  std::vector<GaussRat> c_;
};

// Element of Q(i)(q): numerator / denominator in canonical form:
//   gcd(num, den) = 1, den has no q factor, den.lowest() == 1, zero is 0/1.
class QRat {
 public:
  QRat() : den_(GaussRat(1)) {}
  QRat(long n) : num_(GaussRat(n)), den_(GaussRat(1)) {}
  QRat(GaussRat c) : num_(std::move(c)), den_(GaussRat(1)) {}
  QRat(LPoly p) : num_(std::move(p)), den_(GaussRat(1)) {}
  QRat(LPoly num, LPoly den);

  static QRat q() { return QRat(LPoly(GaussRat(1), 1)); }
  static QRat q_pow(int k) { return QRat(LPoly(GaussRat(1), k)); }
  static QRat i() { return QRat(GaussRat::i()); }
  static QRat zero() { return QRat(); }
  static QRat one() { return QRat(1); }

  const LPoly& num() const { return num_; }
  const LPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_constant_one() && den_.is_constant_one(); }
  bool is_laurent() const { return den_.is_constant_one(); }
  int term_count() const { return num_.term_count() + den_.term_count(); }

  QRat operator-() const;
  QRat& operator+=(const QRat& o);
  QRat& operator-=(const QRat& o);
  QRat& operator*=(const QRat& o);
  QRat& operator/=(const QRat& o);
  friend QRat operator+(QRat a, const QRat& b) { return a += b; }
  friend QRat operator-(QRat a, const QRat& b) { return a -= b; }
  friend QRat operator*(QRat a, const QRat& b) { return a *= b; }
  friend QRat operator/(QRat a, const QRat& b) { return a /= b; }
  friend bool operator==(const QRat& a, const QRat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const QRat& a, const QRat& b) { return !(a == b); }

  QRat inverse() const;
  QRat pow(int k) const;
  // q -> q^-1 with complex conjugation of coefficients
  QRat bar_conj() const;

  GaussRat eval_at(const GaussRat& q0) const;
  std::complex<double> eval_numeric(std::complex<double> q0) const;
  std::optional<QRat> sqrt() const;

  std::string str() const;
  static QRat parse(const std::string& s);

 private:
  void canonicalize();
  LPoly num_, den_;
};

QRat qint(int k);
QRat qbinom(int m, int k);
inline std::ostream& operator<<(std::ostream& os, const QRat& x) { return os << x.str(); }
inline std::ostream& operator<<(std::ostream& os, const GaussRat& x) { return os << x.str(); }
inline GaussRat eval_at(const QRat& x, const GaussRat& q0) { return x.eval_at(q0); }

}  // namespace qaff
