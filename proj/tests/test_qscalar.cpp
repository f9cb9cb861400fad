#include <gtest/gtest.h>

#include <random>

#include "qaff/qscalar.hpp"

using namespace qaff;

namespace {
QRat P(const char* s) { return QRat::parse(s); }
const QRat q = QRat::q();
const QRat qi = QRat::q_pow(-1);
}  // namespace

TEST(QRat, ArithExamples) {
  EXPECT_EQ((q - qi) + qi, q);
  EXPECT_EQ((q * q - 1) / (q - 1), q + 1);
  EXPECT_EQ((1 + q) * (1 + qi), qi + 2 + q);
  EXPECT_THROW(q / QRat(0), DivisionByZero);
}

TEST(QRat, CanonicalForm) {
  QRat a = (q * q - 1) / (q * q + 2 * q + 1);
  EXPECT_EQ(a, (q - 1) / (q + 1));
  EXPECT_TRUE(a.den().lowest().is_one());
  EXPECT_EQ(a.den().low(), 0);
  // q-power factors live in the numerator
  QRat b = QRat(1) / (q * q * (1 + q));
  EXPECT_EQ(b.num().low(), -2);
  EXPECT_EQ(b.den(), (1 + q).num());
  EXPECT_TRUE((q - q).is_zero());
  EXPECT_EQ((q - q).str(), "(0)/(1)");
  // denominator normalized to lowest coefficient 1
  QRat c = QRat(1) / (2 + 4 * q);
  EXPECT_EQ(c.den().str(), "1 + 2*q");
  EXPECT_EQ(c.num().str(), "1/2");
}

TEST(QRat, QInt) {
  EXPECT_EQ(qint(1), QRat(1));
  EXPECT_EQ(qint(3), 1 + q + q * q);
  EXPECT_TRUE(qint(0).is_zero());
  EXPECT_EQ(eval_at(qint(3), GaussRat(1)), GaussRat(3));
  EXPECT_THROW(qint(-1), std::domain_error);
}

TEST(QRat, QBinom) {
  EXPECT_EQ(qbinom(5, 0), QRat(1));
  EXPECT_EQ(qbinom(3, 1), 1 + q + q * q);
  EXPECT_EQ(qbinom(3, 2), 1 + q + q * q);
  EXPECT_THROW(qbinom(2, 3), std::domain_error);
  EXPECT_THROW(qbinom(2, -1), std::domain_error);
  EXPECT_EQ(eval_at(qbinom(3, 1), GaussRat(1)), GaussRat(3));
}

TEST(QRat, QBinomProperties) {
  for (int m = 0; m <= 6; ++m) {
    long classical = 1;
    for (int k = 0; k <= m; ++k) {
      QRat b = qbinom(m, k);
      EXPECT_TRUE(b.is_laurent()) << m << " " << k;
      QRat num(1), den(1);
      for (int j = 0; j < k; ++j) {
        num *= qint(m - j);
        den *= qint(k - j);
      }
      EXPECT_EQ(b * den, num);
      EXPECT_EQ(b, qbinom(m, m - k));
      EXPECT_EQ(eval_at(b, GaussRat(1)), GaussRat(classical)) << m << " " << k;
      classical = classical * (m - k) / (k + 1);
    }
  }
}

TEST(QRat, EvalAt) {
  EXPECT_EQ(eval_at(q - qi, GaussRat(1)), GaussRat(0));
  EXPECT_EQ(eval_at(q + qi, GaussRat(2)), GaussRat(mpq_class(5, 2)));
  EXPECT_THROW(eval_at(QRat(1) / (q - 1), GaussRat(1)), PoleError);
  EXPECT_THROW(eval_at(qi, GaussRat(0)), PoleError);
  // (q^2-1)/(q-1) is canonical q+1: no pole at 1
  EXPECT_EQ(eval_at((q * q - 1) / (q - 1), GaussRat(1)), GaussRat(2));
  EXPECT_EQ(eval_at(QRat::i() * q, GaussRat(0, 1)), GaussRat(-1));
}

TEST(QRat, StringRoundTrip) {
  EXPECT_EQ(qint(3).str(), "(1 + q + q^2)/(1)");
  std::vector<QRat> xs = {QRat(0),
                          qi,
                          -q * q + QRat(mpq_class(1, 3)),
                          QRat::i() * (q + 1) / (q * q + 1),
                          (QRat(GaussRat(2, -3)) * q - 5) / (1 - 2 * q * q * q),
                          QRat(GaussRat(0, mpq_class(-1, 2))) * qi};
  for (const auto& x : xs) EXPECT_EQ(QRat::parse(x.str()), x) << x.str();
  EXPECT_EQ(P("(q^-1 + q)/(1)"), q + qi);
  EXPECT_EQ(P("1/2*i*q^2 - 3"), QRat(GaussRat(0, mpq_class(1, 2))) * q * q - 3);
  EXPECT_THROW(P("q^"), ParseError);
  EXPECT_THROW(P("(1 + q"), ParseError);
  EXPECT_THROW(P("1/0"), ParseError);
  EXPECT_THROW(P("x"), ParseError);
}

TEST(QRat, Sqrt) {
  QRat s = q * q / (q.pow(4) + 1);
  auto r = (s * s).sqrt();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r * *r, s * s);
  EXPECT_FALSE(QRat(2).sqrt().has_value());
  EXPECT_FALSE(q.sqrt().has_value());
  auto m = QRat(-4).sqrt();
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(*m, QRat(GaussRat(0, 2)));
  auto z = QRat(GaussRat(3, 4)).sqrt();
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ(*z * *z, QRat(GaussRat(3, 4)));
}

TEST(QRat, BarConj) {
  EXPECT_EQ((QRat::i() * q).bar_conj(), -QRat::i() * qi);
  EXPECT_EQ(qint(3).bar_conj(), 1 + qi + qi * qi);
}

namespace {
QRat random_small(std::mt19937& g) {
  std::uniform_int_distribution<int> coef(-3, 3), ex(-2, 2), pick(0, 3);
  auto poly = [&] {
    QRat p(0);
    int terms = 1 + pick(g) % 3;
    for (int t = 0; t < terms; ++t) p += QRat(GaussRat(coef(g), pick(g) == 0 ? coef(g) : 0)) * QRat::q_pow(ex(g));
    return p;
  };
  QRat n = poly();
  QRat d = poly();
  while (d.is_zero()) d = poly();
  return n / d;
}
}  // namespace

TEST(QRat, FieldAxiomsRandomized) {
  std::mt19937 g(20261015);
  for (int trial = 0; trial < 150; ++trial) {
    QRat a = random_small(g), b = random_small(g), c = random_small(g);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), QRat(1));
      EXPECT_EQ((b / a) * a, b);
    }
    // cross-multiplication equality agrees with structural equality
    if (!b.is_zero() && !c.is_zero()) {
      QRat x = a / b, y = (a * c) / (b * c);
      EXPECT_EQ(x, y);
      EXPECT_EQ(x.num() * y.den(), y.num() * x.den());
    }
  }
}
