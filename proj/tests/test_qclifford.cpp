#include <gtest/gtest.h>

#include "qaff/qclifford.hpp"

using namespace qaff;

namespace {
const QRat q = QRat::q();
const QRat qi = QRat::q_pow(-1);
QRat at1(const QRat& x) { return QRat(x.eval_at(GaussRat(1))); }

const QClifford& cl() {
  static QClifford c;
  return c;
}
const FockSpace& fock2() {
  static FockSpace f(cl(), 2);
  return f;
}
FockVec vac(int s = 1) { return {{FockState{{}, s}, QRat(1)}}; }
}  // namespace

TEST(BilinearB, ClosedForm) {
  EXPECT_EQ(bilinear_B(0, 0, 0, 0), QRat(1));
  EXPECT_EQ(bilinear_B(0, 1, 0, -1), QRat(-1));
  EXPECT_EQ(bilinear_B(0, -1, 0, 1), -q * q);
  EXPECT_EQ(bilinear_B(2, 0, -2, 0), QRat::q_pow(-4));
  EXPECT_TRUE(bilinear_B(1, 0, 0, 0).is_zero());
  EXPECT_TRUE(bilinear_B(0, 1, 0, 1).is_zero());
  // psi labels
  EXPECT_EQ(bilinear_B_psi(1, 0, -1, 0), q * q);
  EXPECT_EQ(at1(bilinear_B_psi(0, 1, 0, -1)), QRat(-1));
}

TEST(BilinearB, SolvedFormIsUnique) {
  BSolveResult s = solve_B(2);
  EXPECT_EQ(s.interior_rank, 1u);
  EXPECT_FALSE(s.form.empty());
  for (const auto& [k, v] : s.form) EXPECT_EQ(v, bilinear_B(k[0], k[1], k[2], k[3]));
}

TEST(BilinearB, Invariance) {
  for (Gen x : kAllGens) EXPECT_TRUE(B_invariance_residual(x).is_zero()) << gen_name(x);
}

TEST(Clifford, ClassicalAnticommutators) {
  for (int n = -1; n <= 1; ++n)
    for (int m = -1; m <= 1; ++m)
      for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
          CComb r = anticommutator(cl(), n, a, m, b);
          CComb got;
          for (const auto& [w, c] : r) add_to(got, w, at1(c));
          CComb want;
          if (a == b && n == -m) want[{}] = QRat(2);
          EXPECT_EQ(got, want) << n << a << m << b;
        }
}

TEST(Clifford, WeightBasisPairOffPairing) {
  // psi^0_1 psi^0_0 + psi^0_0 psi^0_1 -> 0 at q=1
  CComb s{{{psi_letter(0, 1), psi_letter(0, 0)}, QRat(1)}, {{psi_letter(0, 0), psi_letter(0, 1)}, QRat(1)}};
  for (const auto& [w, c] : cl().reduce(s)) EXPECT_TRUE(at1(c).is_zero()) << word_str(w);
}

TEST(Clifford, ZeroModeSymmetricPartIsScalar) {
  // P(A0 (x) A0) collapses to B: the trivial eigenvector is worth B(t)
  const BraidOp& b = cl().braid();
  for (const auto& e : b.eigen) {
    if (e.value != QRat::q_pow(-4)) continue;
    auto t = rref(e.projector.transpose()).rows.at(0);
    CComb word;
    QRat Bt;
    for (const auto& [k, c] : t) {
      const auto& p = b.R.rows()[size_t(k)].parts;
      add_to(word, {{p[0][0], p[0][1]}, {p[1][0], p[1][1]}}, c);
      Bt += c * bilinear_B(p[0][0], p[0][1], p[1][0], p[1][1]);
    }
    EXPECT_EQ(cl().reduce(word), (CComb{{{}, Bt}}));
  }
}

TEST(Clifford, NormalWordUnchanged) {
  CWord w{psi_letter(2, 1), psi_letter(1, 0), psi_letter(1, -1), psi_letter(0, 0), psi_letter(-1, 1)};
  ASSERT_TRUE(QClifford::is_normal(w));
  EXPECT_EQ(cl().reduce(w), (CComb{{w, QRat(1)}}));
}

TEST(Clifford, ModeConservation) {
  CWord w{psi_letter(-1, 1), psi_letter(2, -1), psi_letter(0, 0), psi_letter(1, 1)};
  for (const auto& [out, c] : cl().reduce(w)) {
    int e = 0;
    for (const auto& l : out) e += psi_mode(l);
    EXPECT_EQ(e, 2);
    EXPECT_TRUE(QClifford::is_normal(out));
  }
}

TEST(Vacuum, FrozenGamma) {
  VacuumModule v = build_vacuum(cl());
  EXPECT_EQ(v.kernel_dim, 1u);
  EXPECT_EQ(v[0].at(0, 0), q);
  EXPECT_EQ(v[0].at(1, 1), -qi);
  EXPECT_EQ(v[0].nnz(), 2u);
  EXPECT_EQ(v[1].at(0, 1), QRat(-1));
  EXPECT_EQ(v[1].nnz(), 1u);
  EXPECT_EQ(v[-1].at(1, 0), q * q + QRat(1));
  EXPECT_EQ(v[-1].nnz(), 1u);
  EXPECT_TRUE(vacuum_report(cl(), v).all_pass());
}

TEST(Flatness, CreationQuotient) {
  for (int E = 1; E <= 3; ++E) {
    EXPECT_EQ(creation_quotient_dim(cl(), E), classical_fermion_count(E)) << E;
    EXPECT_EQ(ordered_creation_words(E).size(), classical_fermion_count(E));
  }
  EXPECT_EQ(classical_fermion_count(3), 13u);
}

TEST(Fock, Dimensions) {
  FockSpace f0(cl(), 0);
  EXPECT_EQ(f0.states().size(), 2u);
  FockSpace f1(cl(), 1);
  EXPECT_EQ(f1.states().size(), 8u);
  auto d = fock2().graded_dims();
  EXPECT_EQ(d[0], 2u);
  EXPECT_EQ(d[1], 6u);
  EXPECT_EQ(d[2], 12u);
  FockState s{{psi_letter(2, 1), psi_letter(1, 0)}, 1};
  EXPECT_EQ(s.energy(), 3);
}

TEST(Fock, PsiOnVacuum) {
  const auto& f = fock2();
  for (int i : {1, 0, -1}) {
    EXPECT_TRUE(f.apply_psi(-1, i, vac()).vec.empty());
    auto r = f.apply_psi(1, i, vac());
    EXPECT_EQ(r.vec, (FockVec{{FockState{{psi_letter(1, i)}, 1}, QRat(1)}}));
  }
  auto over = FockSpace(cl(), 0).apply_psi(1, 0, vac());
  EXPECT_TRUE(over.overflow);
  EXPECT_TRUE(over.vec.empty());
  // psi^-1_1 psi^1_-1 |+> = B-scalar terms
  auto r = f.apply_psi(-1, 1, f.apply_psi(1, -1, vac()).vec);
  ASSERT_EQ(r.vec.size(), 1u);
  EXPECT_EQ(r.vec.begin()->first, (FockState{{}, 1}));
  EXPECT_EQ(at1(r.vec.begin()->second), QRat(-2));
}

TEST(Fock, CreationActionIsAssociative) {
  FockSpace f(cl(), 3);
  for (const auto& s : f.states())
    for (int n = 1; n <= 2; ++n)
      for (int m = 1; m <= 2; ++m) {
        if (s.energy() + m + n > f.emax()) continue;
        for (int i : {1, 0, -1})
          for (int j : {1, 0, -1}) {
            FockVec v{{s, QRat(1)}};
            auto two = f.apply_psi(n, i, f.apply_psi(m, j, v).vec);
            auto one = f.apply_word({psi_letter(n, i), psi_letter(m, j)}, v);
            EXPECT_EQ(two.vec, one.vec);
          }
      }
}

TEST(Fock, AnnihilatorsOnOneParticleStates) {
  // psi^-1_j psi^1_i |s> = 2 B(psi^-1_j, psi^1_i)-type scalar at q=1, zero off the pairing
  const auto& f = fock2();
  for (int s : {1, -1})
    for (int i : {1, 0, -1})
      for (int j : {1, 0, -1}) {
        auto r = f.apply_psi(-1, j, f.apply_psi(1, i, vac(s)).vec);
        FockVec at;
        for (const auto& [st, c] : r.vec) add_to(at, st, at1(c));
        FockVec want;
        if (i + j == 0) add_to(want, FockState{{}, s}, at1(bilinear_B_psi(-1, j, 1, i)) * QRat(2));
        EXPECT_EQ(at, want) << i << j << s;
      }
}

// Recorded finding: the inhomogeneous relations are not confluent in degree 3 at generic q,
// but every disagreement vanishes at q = 1; the creation quotient loses dimension from E = 4.
TEST(Clifford, NonConfluenceVanishesClassically) {
  ConfluenceProbe p = confluence_probe(cl(), 1);
  EXPECT_EQ(p.words, 729u);
  EXPECT_GT(p.disagree, 0u);
  EXPECT_EQ(p.disagree_at_q1, 0u);
  EXPECT_EQ(creation_quotient_dim(cl(), 4), 21u);
  EXPECT_EQ(classical_fermion_count(4), 24u);
}

TEST(Fock, UqWeights) {
  const auto& f = fock2();
  Mat<QRat> K1 = f.uq_action(Gen::K1);
  // vacuum sector carries the spin weights q^{+-1}
  EXPECT_EQ(K1.at(f.index_of({{}, 1}), f.index_of({{}, 1})), q);
  EXPECT_EQ(K1.at(f.index_of({{}, -1}), f.index_of({{}, -1})), qi);
  Mat<QRat> E1 = f.uq_action(Gen::E1);
  for (size_t r = 0; r < E1.nrows(); ++r)
    for (const auto& [c, v] : E1.row(int(r))) {
      QRat wr = K1.at(int(r), int(r)), wc = K1.at(c, c);
      EXPECT_EQ(wr, wc * q * q);
    }
}

TEST(Fock, FiniteRelations) {
  Report r = fock_relation_report(FockSpace(cl(), 2));
  for (const auto& c : r.checks) {
    bool affine = c.name.find("e0") != std::string::npos || c.name.find("f0") != std::string::npos ||
                  c.name.find("i=0") != std::string::npos || c.name.find("j=0") != std::string::npos;
    if (!affine) EXPECT_EQ(c.status, Status::Pass) << c.name;
  }
}

TEST(Clifford, Suite) {
  Report r = clifford_suite(cl(), 3, 1);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.count(Status::Fail), 0u);
}
