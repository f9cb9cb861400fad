#include "qaff/qscalar.hpp"

#include <algorithm>
#include <cctype>

namespace qaff {

// ---------------------------------------------------------------- GaussRat

GaussRat& GaussRat::operator+=(const GaussRat& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

GaussRat& GaussRat::operator-=(const GaussRat& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussRat GaussRat::inverse() const {
  if (is_zero()) throw DivisionByZero("GaussRat: division by zero");
  if (sgn(im_) == 0) return GaussRat(1 / re_);
  mpq_class n = norm2();
  return GaussRat(re_ / n, -im_ / n);
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  if (o.is_zero()) throw DivisionByZero("GaussRat: division by zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

static std::optional<mpq_class> rational_sqrt(const mpq_class& a) {
  if (sgn(a) < 0) return std::nullopt;
  const mpz_class& n = a.get_num();
  const mpz_class& d = a.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return mpq_class(rn, rd);
}

std::optional<GaussRat> GaussRat::sqrt() const {
  if (sgn(im_) == 0) {
    if (sgn(re_) >= 0) {
      auto r = rational_sqrt(re_);
      if (!r) return std::nullopt;
      return GaussRat(*r);
    }
    auto r = rational_sqrt(-re_);
    if (!r) return std::nullopt;
    return GaussRat(0, *r);
  }
  auto modulus = rational_sqrt(norm2());
  if (!modulus) return std::nullopt;
  auto x = rational_sqrt((re_ + *modulus) / 2);
  if (!x || sgn(*x) == 0) return std::nullopt;
  mpq_class y = im_ / (2 * *x);
  return GaussRat(*x, y);
}

std::string GaussRat::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "*i";
  std::string s = "(" + re_.get_str();
  s += sgn(im_) > 0 ? "+" : "-";
  mpq_class m = abs(im_);
  s += (m == 1 ? std::string("i") : m.get_str() + "*i") + ")";
  return s;
}

// ---------------------------------------------------------------- LPoly

LPoly::LPoly(GaussRat c0, int exp) : low_(exp) {
  if (!c0.is_zero()) c_.push_back(std::move(c0));
  else low_ = 0;
}

LPoly LPoly::from_coeffs(int low, std::vector<GaussRat> c) {
  LPoly p;
  p.low_ = low;
  p.c_ = std::move(c);
  p.trim();
  return p;
}

void LPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero()) ++lead;
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + long(lead));
    low_ += int(lead);
  }
  if (c_.empty()) low_ = 0;
}

GaussRat LPoly::coeff(int exp) const {
  int k = exp - low_;
  if (k < 0 || k >= int(c_.size())) return GaussRat();
  return c_[size_t(k)];
}

int LPoly::term_count() const {
  int n = 0;
  for (const auto& x : c_) n += x.is_zero() ? 0 : 1;
  return n;
}

LPoly LPoly::shifted(int by) const {
  LPoly p = *this;
  if (!p.c_.empty()) p.low_ += by;
  return p;
}

LPoly LPoly::operator-() const {
  LPoly p = *this;
  for (auto& x : p.c_) x = -x;
  return p;
}

LPoly& LPoly::operator+=(const LPoly& o) {
  if (o.c_.empty()) return *this;
  if (c_.empty()) return *this = o;
  int lo = std::min(low_, o.low_);
  int hi = std::max(high(), o.high());
  if (lo < low_) {
    c_.insert(c_.begin(), size_t(low_ - lo), GaussRat());
    low_ = lo;
  }
  if (int(c_.size()) < hi - lo + 1) c_.resize(size_t(hi - lo + 1));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[size_t(o.low_ - low_) + k] += o.c_[k];
  trim();
  return *this;
}

LPoly& LPoly::operator-=(const LPoly& o) { return *this += -o; }

LPoly operator*(const LPoly& a, const LPoly& b) {
  if (a.c_.empty() || b.c_.empty()) return LPoly();
  std::vector<GaussRat> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      c[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return LPoly::from_coeffs(a.low_ + b.low_, std::move(c));
}

LPoly LPoly::scaled(const GaussRat& s) const {
  if (s.is_zero()) return LPoly();
  LPoly p = *this;
  for (auto& x : p.c_) x *= s;
  return p;
}

GaussRat LPoly::eval(const GaussRat& x) const {
  if (c_.empty()) return GaussRat();
  if (x.is_zero()) {
    if (low_ < 0) throw PoleError("Laurent polynomial has a pole at q=0");
    return low_ == 0 ? c_[0] : GaussRat();
  }
  GaussRat acc;
  for (size_t k = c_.size(); k-- > 0;) {
    acc *= x;
    acc += c_[k];
  }
  GaussRat xp = GaussRat(1);
  GaussRat base = low_ >= 0 ? x : x.inverse();
  for (int k = 0; k < std::abs(low_); ++k) xp *= base;
  return acc * xp;
}

std::complex<double> LPoly::eval(std::complex<double> x) const {
  std::complex<double> acc = 0;
  for (size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k].to_complex();
  return acc * std::pow(x, low_);
}

static std::string q_part(int e) { return e == 1 ? "q" : "q^" + std::to_string(e); }

std::string LPoly::str() const {
  if (c_.empty()) return "0";
  std::string s;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    const GaussRat& c = c_[k];
    if (c.is_zero()) continue;
    int e = low_ + int(k);
    bool neg = false;
    std::string body;
    if (c.is_real()) {
      neg = sgn(c.re()) < 0;
      mpq_class m = abs(c.re());
      if (e == 0) body = m.get_str();
      else body = m == 1 ? q_part(e) : m.get_str() + "*" + q_part(e);
    } else if (sgn(c.re()) == 0) {
      neg = sgn(c.im()) < 0;
      mpq_class m = abs(c.im());
      body = m == 1 ? "i" : m.get_str() + "*i";
      if (e != 0) body += "*" + q_part(e);
    } else {
      body = c.str();
      if (e != 0) body += "*" + q_part(e);
    }
    if (first) s = (neg ? "-" : "") + body;
    else s += (neg ? " - " : " + ") + body;
    first = false;
  }
  return s;
}

// Coefficient vectors as ordinary polynomials (ascending degree).
using PolyVec = std::vector<GaussRat>;

static void trim_high(PolyVec& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

static void poly_rem_inplace(PolyVec& a, const PolyVec& b) {
  const size_t db = b.size() - 1;
  GaussRat inv_lead = b.back().inverse();
  while (a.size() >= b.size()) {
    GaussRat f = a.back() * inv_lead;
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < db; ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim_high(a);
  }
}

LPoly LPoly::gcd(const LPoly& x, const LPoly& y) {
  PolyVec a = x.c_, b = y.c_;
  if (a.empty()) std::swap(a, b);
  if (a.empty()) return LPoly();
  while (!b.empty()) {
    if (b.size() == 1) return LPoly(GaussRat(1));
    poly_rem_inplace(a, b);
    std::swap(a, b);
  }
  GaussRat inv = a.back().inverse();
  for (auto& c : a) c *= inv;
  return from_coeffs(0, std::move(a));
}

LPoly LPoly::div_exact(const LPoly& a, const LPoly& b) {
  if (b.c_.empty()) throw DivisionByZero("LPoly: division by zero");
  if (a.c_.empty()) return LPoly();
  if (b.c_.size() == 1) return a.scaled(b.c_[0].inverse()).shifted(-b.low_);
  PolyVec r = a.c_;
  const PolyVec& d = b.c_;
  if (r.size() < d.size()) throw std::logic_error("LPoly::div_exact: not divisible");
  PolyVec quo(r.size() - d.size() + 1);
  GaussRat inv_lead = d.back().inverse();
  for (size_t k = quo.size(); k-- > 0;) {
    GaussRat f = r[k + d.size() - 1] * inv_lead;
    if (f.is_zero()) continue;
    for (size_t i = 0; i < d.size(); ++i) r[k + i] -= f * d[i];
    quo[k] = std::move(f);
  }
  for (const auto& c : r)
    if (!c.is_zero()) throw std::logic_error("LPoly::div_exact: not divisible");
  return from_coeffs(a.low_ - b.low_, std::move(quo));
}

// ---------------------------------------------------------------- QRat

QRat::QRat(LPoly num, LPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DivisionByZero("QRat: zero denominator");
  canonicalize();
}

void QRat::canonicalize() {
  if (num_.is_zero()) {
    den_ = LPoly(GaussRat(1));
    return;
  }
  if (den_.low() != 0) {
    num_ = num_.shifted(-den_.low());
    den_ = den_.shifted(-den_.low());
  }
  if (den_.size() == 1) {
    if (!den_.lowest().is_one()) num_ = num_.scaled(den_.lowest().inverse());
    den_ = LPoly(GaussRat(1));
    return;
  }
  LPoly g = LPoly::gcd(num_, den_);
  if (g.size() > 1) {
    num_ = LPoly::div_exact(num_, g);
    den_ = LPoly::div_exact(den_, g);
  }
  if (!den_.lowest().is_one()) {
    GaussRat s = den_.lowest().inverse();
    num_ = num_.scaled(s);
    den_ = den_.scaled(s);
  }
}

QRat QRat::operator-() const {
  QRat r = *this;
  r.num_ = -r.num_;
  return r;
}

QRat& QRat::operator+=(const QRat& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (is_laurent() && o.is_laurent()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    canonicalize();
    return *this;
  }
  LPoly g = LPoly::gcd(den_, o.den_);
  if (g.size() > 1) {
    LPoly od = LPoly::div_exact(o.den_, g);
    LPoly td = LPoly::div_exact(den_, g);
    num_ = num_ * od + o.num_ * td;
    den_ = den_ * od;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  canonicalize();
  return *this;
}

QRat& QRat::operator-=(const QRat& o) { return *this += -o; }

QRat& QRat::operator*=(const QRat& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = QRat();
  if (is_laurent() && o.is_laurent()) {
    num_ = num_ * o.num_;
    return *this;
  }
  LPoly an = num_, ad = den_, bn = o.num_, bd = o.den_;
  if (bd.size() > 1) {
    LPoly g = LPoly::gcd(an, bd);
    if (g.size() > 1) {
      an = LPoly::div_exact(an, g);
      bd = LPoly::div_exact(bd, g);
    }
  }
  if (ad.size() > 1) {
    LPoly g = LPoly::gcd(bn, ad);
    if (g.size() > 1) {
      bn = LPoly::div_exact(bn, g);
      ad = LPoly::div_exact(ad, g);
    }
  }
  num_ = an * bn;
  den_ = ad * bd;
  if (!den_.lowest().is_one() || den_.low() != 0) {
    int sh = den_.low();
    GaussRat s = den_.lowest().inverse();
    num_ = num_.scaled(s).shifted(-sh);
    den_ = den_.scaled(s).shifted(-sh);
  }
  return *this;
}

QRat QRat::inverse() const {
  if (is_zero()) throw DivisionByZero("QRat: division by zero");
  QRat r;
  r.num_ = den_;
  r.den_ = num_;
  r.canonicalize();
  return r;
}

QRat& QRat::operator/=(const QRat& o) { return *this *= o.inverse(); }

QRat QRat::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  QRat r(1), b = *this;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

static LPoly reflect_conj(const LPoly& p) {
  if (p.is_zero()) return p;
  std::vector<GaussRat> c(p.coeffs().rbegin(), p.coeffs().rend());
  for (auto& x : c) x = x.conj();
  return LPoly::from_coeffs(-p.high(), std::move(c));
}

QRat QRat::bar_conj() const { return QRat(reflect_conj(num_), reflect_conj(den_)); }

GaussRat QRat::eval_at(const GaussRat& q0) const {
  GaussRat d = den_.eval(q0);
  if (d.is_zero()) throw PoleError("QRat::eval_at: pole at " + q0.str() + " in " + str());
  return num_.eval(q0) / d;
}

std::complex<double> QRat::eval_numeric(std::complex<double> q0) const {
  std::complex<double> d = den_.eval(q0);
  if (std::abs(d) == 0.0) throw PoleError("QRat::eval_numeric: pole");
  return num_.eval(q0) / d;
}

static std::optional<LPoly> lpoly_sqrt(const LPoly& p) {
  if (p.is_zero()) return LPoly();
  if (p.low() % 2 != 0 || (p.size() - 1) % 2 != 0) return std::nullopt;
  auto s0 = p.lowest().sqrt();
  if (!s0) return std::nullopt;
  const int n = (p.size() - 1) / 2;
  std::vector<GaussRat> s(size_t(n + 1));
  s[0] = *s0;
  GaussRat inv2s0 = (GaussRat(2) * s[0]).inverse();
  for (int k = 1; k <= n; ++k) {
    GaussRat acc = p.coeffs()[size_t(k)];
    for (int j = 1; j < k; ++j) acc -= s[size_t(j)] * s[size_t(k - j)];
    s[size_t(k)] = acc * inv2s0;
  }
  LPoly r = LPoly::from_coeffs(p.low() / 2, std::move(s));
  if (!(r * r == p)) return std::nullopt;
  return r;
}

std::optional<QRat> QRat::sqrt() const {
  auto n = lpoly_sqrt(num_);
  auto d = lpoly_sqrt(den_);
  if (!n || !d) return std::nullopt;
  return QRat(*n, *d);
}

std::string QRat::str() const { return "(" + num_.str() + ")/(" + den_.str() + ")"; }

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  QRat run() {
    QRat v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("QRat::parse: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  QRat expr() {
    QRat v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  QRat term() {
    QRat v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) {
        QRat d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else return v;
    }
  }
  QRat unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  QRat power() {
    QRat b = atom();
    if (eat('^')) {
      bool neg = eat('-');
      if (!neg) eat('+');
      skip();
      mpz_class e = integer();
      if (!e.fits_sint_p()) fail("exponent too large");
      int k = int(e.get_si());
      if (neg) k = -k;
      if (k < 0 && b.is_zero()) fail("zero to a negative power");
      return b.pow(k);
    }
    return b;
  }
  mpz_class integer() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return mpz_class(s_.substr(start, pos_ - start));
  }
  QRat atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      QRat v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == 'q') {
      ++pos_;
      return QRat::q();
    }
    if (c == 'i') {
      ++pos_;
      return QRat::i();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return QRat(GaussRat(mpq_class(integer())));
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

QRat QRat::parse(const std::string& s) { return Parser(s).run(); }

QRat qint(int k) {
  if (k < 0) throw std::domain_error("qint: negative index");
  std::vector<GaussRat> c(size_t(k), GaussRat(1));
  return QRat(LPoly::from_coeffs(0, std::move(c)));
}

QRat qbinom(int m, int k) {
  if (k < 0 || k > m) throw std::domain_error("qbinom: need 0 <= k <= m");
  QRat num(1), den(1);
  for (int j = 0; j < k; ++j) {
    num *= qint(m - j);
    den *= qint(k - j);
  }
  QRat r = num / den;
  if (!r.is_laurent()) throw std::logic_error("qbinom: result is not a Laurent polynomial");
  return r;
}

}  // namespace qaff
