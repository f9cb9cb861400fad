#include <gtest/gtest.h>

#include "qaff/uq.hpp"

using namespace qaff;

namespace {
const QRat q = QRat::q();
const QRat qi = QRat::q_pow(-1);
const QRat t = q + qi;

SparseVec<QRat> unit(const TruncatedModule& m, int n, int i) { return {{m.index_of(n, i), QRat(1)}}; }
SparseVec<QRat> vec(const TruncatedModule& m, std::initializer_list<std::tuple<QRat, int, int>> terms) {
  SparseVec<QRat> v;
  for (const auto& [c, n, i] : terms) v[m.index_of(n, i)] = c;
  return v;
}
}  // namespace

TEST(Modules, DefiningTable) {
  auto m = build_defining(-4, 4);
  EXPECT_EQ(m.basis.size(), 18u);
  EXPECT_EQ(m[Gen::F1].apply(unit(m, 0, 1)), unit(m, 0, -1));
  EXPECT_EQ(m[Gen::E0].apply(unit(m, 2, 1)), unit(m, 3, -1));
  EXPECT_EQ(m[Gen::K1].apply(unit(m, 1, -1)), vec(m, {{qi, 1, -1}}));
  EXPECT_TRUE(m[Gen::E1].apply(unit(m, 0, 1)).empty());
  EXPECT_TRUE(m[Gen::F0].apply(unit(m, 0, 1)).empty());
  EXPECT_TRUE(m[Gen::E0].apply(unit(m, 0, -1)).empty());
  EXPECT_EQ(m[Gen::F0].apply(unit(m, 0, -1)), unit(m, -1, 1));
  // truncation: e0 out of the window is dropped
  EXPECT_TRUE(m[Gen::E0].apply(unit(m, 4, 1)).empty());
  EXPECT_EQ(m[Gen::K0] * m[Gen::K1], m.identity());
}

TEST(Modules, AdjointTable) {
  auto m = build_adjoint(-3, 3);
  EXPECT_EQ(m[Gen::E1].apply(unit(m, 0, 0)), vec(m, {{t, 0, 1}}));
  EXPECT_EQ(m[Gen::F0].apply(unit(m, 1, -1)), vec(m, {{t, 0, 0}}));
  EXPECT_EQ(m[Gen::K1].apply(unit(m, 2, 1)), vec(m, {{q * q, 2, 1}}));
  EXPECT_EQ(m[Gen::E0].apply(unit(m, 0, 0)), unit(m, 1, -1));
  EXPECT_EQ(m[Gen::F1].apply(unit(m, 0, 1)), unit(m, 0, 0));
  EXPECT_EQ(m[Gen::K0] * m[Gen::K1], m.identity());
}

TEST(Modules, AdjointAct) {
  auto r = adjoint_act({Gen::E0}, {{{0, 0}, QRat(1)}}, -3, 3);
  EXPECT_EQ(r.vec, (LoopVec{{{1, -1}, QRat(1)}}));
  EXPECT_FALSE(r.overflow);
  r = adjoint_act({Gen::F1}, {{{0, 1}, QRat(1)}}, -3, 3);
  EXPECT_EQ(r.vec, (LoopVec{{{0, 0}, QRat(1)}}));
  LoopVec a{{{2, 0}, q}, {{-1, 1}, QRat(3)}};
  EXPECT_EQ(adjoint_act({Gen::K1, Gen::K1inv}, a, -3, 3).vec, a);
  r = adjoint_act({Gen::E0, Gen::E0}, {{{2, 1}, QRat(1)}}, -3, 3);
  EXPECT_TRUE(r.overflow);
}

TEST(Relations, AllHoldOnBothModules) {
  for (auto kind : {ModuleKind::Defining, ModuleKind::Adjoint}) {
    auto m = build_module(kind, -6, 6);
    Report rep = verify_relations(m, 3);
    EXPECT_EQ(rep.checks.size(), 23u);
    for (const auto& c : rep.checks) EXPECT_EQ(c.status, Status::Pass) << kind_name(kind) << ": " << c.name;
  }
}

TEST(Relations, SerreHandEntry) {
  // Serre e, i=1, j=0 on v^0_+: e1^3 e0 - [3] e1^2 e0 e1 + [3] e1 e0 e1^2 - e0 e1^3
  auto m = build_defining(-4, 4);
  auto rs = defining_relations();
  const Relation* serre = nullptr;
  for (const auto& r : rs)
    if (r.name == "Serre e i=1 j=0") serre = &r;
  ASSERT_NE(serre, nullptr);
  EXPECT_EQ(required_margin(*serre), 1);
  // only e1 e0 acts nontrivially on v^0_+ among the words? e0 v+ = v^1_-, e1 v^1_- = v^1_+, e1 v^1_+ = 0
  EXPECT_EQ(m.word({Gen::E1, Gen::E0}).apply(unit(m, 0, 1)), unit(m, 1, 1));
  EXPECT_TRUE(relation_residual(*serre, m, 3).is_zero());
}

TEST(Relations, MarginGuard) {
  auto m = build_defining(-6, 6);
  EXPECT_EQ(required_margin(defining_relations()), 3);
  EXPECT_THROW(verify_relations(m, 0), MarginError);
  EXPECT_THROW(verify_relations(m, 2), MarginError);
}

TEST(Relations, BrokenTableFails) {
  auto m = build_adjoint(-6, 6);
  m.act[size_t(gidx(Gen::E1))] = m[Gen::E1].scaled(q);
  Report rep = verify_relations(m, 3);
  EXPECT_FALSE(rep.all_pass());
}

TEST(Hopf, TensorActionExamples) {
  auto conv = HopfConvention::standard();
  auto d = build_defining(0, 0);
  Mat<QRat> k = hopf_tensor_action(Gen::K1, d, d, conv);
  // diag(q^{e1+e2}) on (+,+), (+,-), (-,+), (-,-)
  std::vector<QRat> expect = {q * q, 1, 1, qi * qi};
  for (int r = 0; r < 4; ++r) EXPECT_EQ(k.at(r, r), expect[size_t(r)]);
  EXPECT_EQ(k.nnz(), 4u);
  Mat<QRat> e = hopf_tensor_action(Gen::E1, d, d, conv);
  // e1 (v- (x) v-) = v+ (x) v- + q^-1 v- (x) v+
  SparseVec<QRat> out = e.apply({{3, QRat(1)}});
  EXPECT_EQ(out, (SparseVec<QRat>{{1, QRat(1)}, {2, qi}}));
  // opposite coproduct swaps the factors
  Mat<QRat> eop = hopf_tensor_action(Gen::E1, d, d, conv, true);
  EXPECT_EQ(eop.apply({{3, QRat(1)}}), (SparseVec<QRat>{{1, qi}, {2, QRat(1)}}));
  auto triv = build_trivial();
  for (Gen g : kAllGens)
    EXPECT_EQ(hopf_tensor_action(g, triv, triv, conv), Mat<QRat>::identity(hopf_tensor_action(g, triv, triv, conv).rows()).scaled(conv.eps(g)));
}

TEST(Hopf, AxiomsOnModules) {
  auto conv = HopfConvention::standard();
  for (auto m : {build_defining(-3, 3), build_adjoint(-2, 2), build_trivial()}) {
    Report rep = hopf_axiom_suite(conv, m, m.kind == ModuleKind::Trivial ? 0 : 1);
    EXPECT_EQ(rep.checks.size(), 24u);
    for (const auto& c : rep.checks) EXPECT_EQ(c.status, Status::Pass) << m.name << ": " << c.name;
  }
}

TEST(Hopf, TensorSquareIsModule) {
  // the relations hold on the tensor square, interior
  auto conv = HopfConvention::standard();
  auto d = build_defining(-4, 4);
  Module dd = tensor_module(d, d, conv);
  for (const auto& r : defining_relations()) {
    Mat<QRat> acc(dd.basis, dd.basis);
    for (const auto& [c, w] : r.terms) acc += dd.word(w).scaled(c);
    auto cols = interior_columns(dd.basis, -4, 4, 3);
    EXPECT_TRUE(acc.select_cols(cols).is_zero()) << r.name;
  }
}
