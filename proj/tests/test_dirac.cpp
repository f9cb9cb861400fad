#include <gtest/gtest.h>

#include "qaff/dirac.hpp"

using namespace qaff;

namespace {
const QRat q = QRat::q();
const QRat qi = QRat::q_pow(-1);

const ClassicalBackend& be1() {
  static ClassicalBackend b = classical_backend(1, -3, 3, 1);
  return b;
}
const ClassicalBackend& be2() {
  static ClassicalBackend b = classical_backend(1, -3, 3, 2);
  return b;
}
const QClifford& cl() {
  static QClifford c;
  return c;
}
const FockSpace& fock3() {
  static FockSpace f(cl(), 3);
  return f;
}

VectorPotential unit(int n, int i, QRat c = QRat(1)) {
  VectorPotential a;
  a.add(n, i, c);
  return a;
}
PVec one(const PState& s) { return {{s, GaussRat(1)}}; }
}  // namespace

TEST(ClassicalBackend, MeasuredLevels) {
  EXPECT_EQ(be1().kappa_eff, GaussRat(4));
  EXPECT_EQ(be1().k_eff, GaussRat(4));
  EXPECT_EQ(be1().coefficient(), GaussRat(2));
  EXPECT_TRUE(be1().relations.all_pass());
  EXPECT_EQ(be1().relations.count(Status::Fail), 0u);

  auto b = classical_backend(2, -2, 2, 1, GaussRat(mpq_class(1, 2)));
  EXPECT_EQ(b.kappa_eff, GaussRat(1));
  EXPECT_EQ(b.k_eff, GaussRat(2));
  EXPECT_TRUE(b.relations.all_pass());
}

TEST(ClassicalBackend, WindowPrecondition) {
  EXPECT_THROW(classical_backend(1, -1, 1, 1), MarginError);
  EXPECT_THROW(classical_backend(0, -3, 3, 1), BackendError);
}

TEST(ClassicalBackend, ZeroModeSquaresToOne) {
  for (const auto& s : be1().states())
    for (int a = 1; a <= 3; ++a) EXPECT_EQ(be1().psi(0, 0, a, be1().psi(0, 0, a, one(s))), one(s));
}

TEST(ClassicalBackend, StateCounts) {
  // H_f graded dims 4, 12, 24; H_b 2, 6, 12
  EXPECT_EQ(be1().states().size(), 4u * 2 + 4 * 6 + 12 * 2);
  EXPECT_EQ(be2().states().size(), 224u);
}

TEST(ClassicalDirac, SelfAdjointAndGraded) {
  DiracMatrix d = build_Q(be1());
  EXPECT_EQ(d.dim(), 56u);
  EXPECT_EQ(d.truncated, 0u);
  EXPECT_TRUE(self_adjoint_residual(d).is_zero());
  for (const auto& s : be1().states()) {
    PVec v = one(s);
    PVec x = be1().grading(be1().Q(v)) + be1().Q(be1().grading(v));
    EXPECT_TRUE(x.empty());
  }
}

TEST(ClassicalDirac, PreservesEnergy) {
  DiracMatrix d = build_Q(be1());
  auto states = be1().states();
  for (size_t r = 0; r < d.dim(); ++r)
    for (const auto& [c, v] : d.classical.row(int(r))) EXPECT_EQ(states[r].energy(2), states[size_t(c)].energy(2));
}

TEST(ClassicalDirac, AffineInA) {
  VectorPotential a = unit(1, 1, QRat(3)), b = unit(-1, 2, QRat(GaussRat(0, 1)));
  VectorPotential ab = a;
  ab.add(-1, 2, QRat(GaussRat(0, 1)));
  EXPECT_EQ(build_QA(be1(), VectorPotential{}).classical, build_Q(be1()).classical);
  Mat<GaussRat> lin = build_QA(be1(), ab).classical - build_QA(be1(), a).classical - build_QA(be1(), b).classical +
                      build_Q(be1()).classical;
  EXPECT_TRUE(lin.is_zero());
  VectorPotential c = a;
  c.central = QRat(7);
  EXPECT_EQ(build_QA(be1(), c).classical, build_QA(be1(), a).classical);
  EXPECT_THROW(build_QA(be1(), unit(5, 1)), MarginError);
}

TEST(ClassicalCovariance, SpotOracles) {
  // dX for X = X^1_1 is 1 * X^1_1; [A^0_1, X^0_2] = lambda_123 = c0 at direction 3
  auto y = bracket_plus_dX(be1(), unit(1, 1), VectorPotential{});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y.at({1, 1}), GaussRat(1));
  y = bracket_plus_dX(be1(), unit(0, 2), unit(0, 1));
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y.at({0, 3}), GaussRat(1));
  y = bracket_plus_dX(be1(), unit(-1, 1), unit(1, 2));
  EXPECT_EQ(y.at({0, 3}), GaussRat(-1));
  EXPECT_EQ(y.at({-1, 1}), GaussRat(-1));
}

TEST(ClassicalCovariance, ConstantLoopWithoutPotential) {
  for (int a = 1; a <= 3; ++a) EXPECT_TRUE(classical_covariance(be2(), unit(0, a), VectorPotential{}).is_zero());
}

TEST(ClassicalCovariance, GenericPair) {
  VectorPotential X, A;
  X.add(-1, 1, QRat(2));
  X.add(0, 3, QRat(GaussRat(1, 1)));
  X.add(1, 2, QRat(-5));
  A.add(-1, 3, QRat(GaussRat(mpq_class(1, 3))));
  A.add(1, 1, QRat(4));
  A.add(0, 2, QRat(GaussRat(0, -2)));
  EXPECT_TRUE(classical_covariance(be2(), X, A).is_zero());
}

TEST(ClassicalCovariance, SuiteAtCutoffTwo) {
  Report r = classical_covariance_suite(be2());
  EXPECT_EQ(r.checks.size(), 92u);
  EXPECT_TRUE(r.all_pass());
}

TEST(Spectrum, ClassicalSmallestCutoff) {
  auto b = classical_backend(1, -1, 1, 0);
  Spectrum s = spectrum(build_Q(b));
  ASSERT_EQ(s.values.size(), 8u);
  for (size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(s.values[k], -1.0, 1e-12);
    EXPECT_NEAR(s.values[k + 4], 1.0, 1e-12);
  }
  EXPECT_EQ(s.positive, 4u);
  EXPECT_EQ(s.negative, 4u);
  EXPECT_LT(s.symmetry_defect, 1e-9);
}

TEST(Spectrum, CutoffOneSymmetric) {
  Spectrum s = spectrum(build_Q(be1()));
  EXPECT_LT(s.symmetry_defect, 1e-9);
  EXPECT_EQ(s.positive, 28u);
  EXPECT_EQ(s.negative, 28u);
}

TEST(Spectrum, ScalingSweepIsContinuous) {
  VectorPotential a = unit(1, 1);
  a.add(-1, 1, QRat(1));
  a.add(0, 3, QRat(GaussRat(mpq_class(1, 2))));
  std::vector<double> prev = spectrum(build_Q(be1())).values;
  for (int k = 1; k <= 10; ++k) {
    Spectrum s = spectrum(build_QA(be1(), a.scaled(QRat(GaussRat(mpq_class(k, 10))))));
    ASSERT_EQ(s.values.size(), prev.size());
    for (size_t j = 0; j < prev.size(); ++j) {
      EXPECT_TRUE(std::isfinite(s.values[j]));
      EXPECT_LT(std::abs(s.values[j] - prev[j]), 2.0);
    }
    prev = s.values;
  }
}

TEST(Spectrum, ZeroMatrix) {
  DiracMatrix d;
  d.backend = "classical";
  Basis b{Label{0}, Label{1}, Label{2}};
  d.classical = Mat<GaussRat>(b, b);
  d.creations = {0, 0, 0};
  Spectrum s = spectrum(d);
  EXPECT_EQ(s.zero, 3u);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(DeformedCovariance, CartanAndFinitePart) {
  for (Gen x : {Gen::K0, Gen::K1, Gen::K0inv, Gen::K1inv, Gen::E1, Gen::F1})
    for (int n = -1; n <= 1; ++n)
      for (int i = -1; i <= 1; ++i) EXPECT_TRUE(deformed_psi_covariance(x, unit(n, i), fock3(), 1).is_zero());
}

TEST(DeformedCovariance, AffineGeneratorsFail) {
  // e0: nonzero residual vanishing at q=1; f0: nonzero even at q=1 (vacuum has f0 = 0)
  Mat<QRat> r = deformed_psi_covariance(Gen::E0, unit(0, 1), fock3(), 1);
  EXPECT_FALSE(r.is_zero());
  for (size_t k = 0; k < r.nrows(); ++k)
    for (const auto& [c, v] : r.row(int(k))) EXPECT_TRUE(v.eval_at(GaussRat(1)).is_zero());
  r = deformed_psi_covariance(Gen::F0, unit(0, -1), fock3(), 1);
  bool classical_defect = false;
  for (size_t k = 0; k < r.nrows(); ++k)
    for (const auto& [c, v] : r.row(int(k))) classical_defect = classical_defect || !v.eval_at(GaussRat(1)).is_zero();
  EXPECT_TRUE(classical_defect);
  Report s = deformed_covariance_suite(fock3(), 1);
  EXPECT_EQ(s.count(Status::Pass), 6u);
  EXPECT_EQ(s.count(Status::Fail), 2u);
}

TEST(DeformedCovariance, MarginGuard) {
  FockSpace f(cl(), 2);
  EXPECT_THROW(deformed_psi_covariance(Gen::E1, unit(0, 0), f, 1), MarginError);
}

TEST(DeformedDirac, Structure) {
  FockSpace f(cl(), 1);
  auto b = deformed0_backend(f, -2, 2);
  DiracMatrix d = build_Q(b);
  EXPECT_EQ(d.dim(), f.states().size() * 15);
  EXPECT_EQ(build_QA(b, VectorPotential{}).deformed, d.deformed);
  // t_0 on A^0_1 is [2]_q
  Mat<QRat> t0 = b.T(0, 0);
  int c = b.hb.index_of(0, 1);
  EXPECT_EQ(t0.at(c, c), q + qi);
  Mat<QRat> t1 = b.T(1, 1);
  EXPECT_EQ(t1.at(b.hb.index_of(1, 1), b.hb.index_of(0, 0)), q + qi);
}

TEST(Cocycle, PrintedValues) {
  Cocycle cx = Cocycle::level_one();
  EXPECT_EQ(cx.generator(Gen::E0, {{{-1, 1}, QRat(1)}}), -qi);
  EXPECT_EQ(cx.generator(Gen::F0, {{{1, -1}, QRat(1)}}), qi);
  EXPECT_TRUE(cx.generator(Gen::E1, {{{-1, 1}, QRat(1)}}).is_zero());
  EXPECT_TRUE(cx.generator(Gen::E0, {{{0, 1}, QRat(1)}}).is_zero());
  cx.multiplier = QRat(3);
  EXPECT_EQ(cx.generator(Gen::F0, {{{1, -1}, QRat(1)}}), QRat(3) * qi);
}

TEST(Cocycle, ExtensionRule) {
  Cocycle cx = Cocycle::level_one();
  LoopVec a{{{0, 0}, QRat(1)}};
  EXPECT_EQ(cx.word({Gen::E0, Gen::F0}, a), cx.generator(Gen::E0, adjoint_act({Gen::F0}, a, -9, 9).vec));
  EXPECT_TRUE(cx.word({}, a).is_zero());
}

TEST(Cocycle, SuiteFindings) {
  Report r = cocycle_suite(Cocycle::level_one());
  std::map<std::string, const Check*> by;
  for (const auto& c : r.checks) by[c.name] = &c;
  ASSERT_TRUE(by.count("lambda_e0(A^-1_1) = -q^-1"));
  ASSERT_TRUE(by.count("lambda_f0(A^1_-1) = q^-1"));
  EXPECT_EQ(by["lambda_e0(A^-1_1) = -q^-1"]->status, Status::Pass);
  EXPECT_EQ(by["lambda_f0(A^1_-1) = q^-1"]->params.at("value"), "(q^-1)/(1)");
  EXPECT_EQ(by["word evaluation independent of bracketing"]->status, Status::Pass);
  const Check* ef = by.at("relation [e0, f0] = (K-K^-1)/(q-q^-1)");
  EXPECT_EQ(ef->status, Status::Fail);
  ASSERT_EQ(ef->residual_nnz, 1u);
  EXPECT_EQ(ef->residual[0], "A^0_0 : (-q^-2 - q^-1 - 1)/(1)");
  // the literal rule also breaks the four K-conjugations of e0, f0
  size_t fails = r.count(Status::Fail);
  EXPECT_EQ(fails, 5u);
  EXPECT_EQ(by.at("comparison: rule with x.c = eps(x) c")->params.at("inconsistent_relations"),
            "[e0, f0] = (K-K^-1)/(q-q^-1)");
}

TEST(Cocycle, CounitTwist) {
  Cocycle cx = Cocycle::level_one();
  cx.counit_twist = true;
  Report r = cocycle_suite(cx);
  EXPECT_EQ(r.count(Status::Fail), 1u);
}
