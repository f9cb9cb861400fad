#include <gtest/gtest.h>

#include <random>

#include "qaff/linalg.hpp"
#include "qaff/qscalar.hpp"

using namespace qaff;
using M = Mat<QRat>;

namespace {
const QRat q = QRat::q();
const QRat qi = QRat::q_pow(-1);

Basis basis(int n) {
  Basis b;
  for (int k = 0; k < n; ++k) b.push_back(Label{k});
  return b;
}

M dense(int n, const std::vector<QRat>& entries) {
  M m(basis(n), basis(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.set(r, c, entries[size_t(r * n + c)]);
  return m;
}
}  // namespace

TEST(Linalg, Matmul) {
  M a = dense(2, {1, q, 0, 2});
  EXPECT_EQ(M::identity(basis(2)) * a, a);
  EXPECT_EQ(M::diagonal(basis(2), {q, qi}) * M::diagonal(basis(2), {qi, q}), M::identity(basis(2)));
  M shift = dense(2, {0, 1, 0, 0});
  EXPECT_TRUE((shift * shift).is_zero());
  M other(basis(3), basis(3));
  EXPECT_THROW(a * other, BasisMismatch);
}

TEST(Linalg, Kron) {
  EXPECT_EQ(kron(M::identity(basis(2)), M::identity(basis(2))), M::identity(kron(M::identity(basis(2)), M::identity(basis(2))).rows()));
  M k = kron(M::diagonal(basis(2), {q, 1}), M::diagonal(basis(2), {1, q}));
  ASSERT_EQ(k.nrows(), 4u);
  std::vector<QRat> expect = {q, q * q, 1, q};
  for (int d = 0; d < 4; ++d) EXPECT_EQ(k.at(d, d), expect[size_t(d)]);
  EXPECT_EQ(k.nnz(), 4u);
  EXPECT_EQ(k.rows()[1].str(), "0|1");
  EXPECT_TRUE(kron(dense(2, {1, 2, 3, 4}), M(basis(2), basis(2))).is_zero());
}

TEST(Linalg, Kernel) {
  EXPECT_EQ(kernel(M(basis(3), basis(3))).size(), 3u);
  EXPECT_TRUE(kernel(M::identity(basis(3))).empty());
  M r1 = dense(2, {1, q, q, q * q});
  auto ker = kernel(r1);
  ASSERT_EQ(ker.size(), 1u);
  // proportional to (q, -1)
  const auto& v = ker[0];
  EXPECT_EQ(v.at(0) * QRat(-1), v.at(1) * q);
}

TEST(Linalg, DenseSparseAgree) {
  std::mt19937 g(7);
  std::uniform_int_distribution<int> c(-2, 2), e(-1, 1), z(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5;
    M m(basis(n), basis(n + 2));
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n + 2; ++k)
        if (z(g) == 0) m.set(r, k, QRat(c(g)) * QRat::q_pow(e(g)) + QRat(c(g)));
    // force a dependency
    for (const auto& [k, v] : m.row(0)) m.add(n - 1, k, v * (q + 1));
    std::vector<SparseVec<QRat>> rows;
    for (int r = 0; r < n; ++r) rows.push_back(m.row(r));
    auto ed = detail::rref_dense(rows, size_t(n + 2));
    auto es = detail::rref_sparse(rows, size_t(n + 2));
    EXPECT_EQ(ed.pivots, es.pivots);
    auto kd = kernel_from_echelon(ed), ks = kernel_from_echelon(es);
    EXPECT_EQ(kd, ks);
    for (const auto& v : ks) EXPECT_TRUE(m.apply(v).empty());
  }
}

TEST(Linalg, InverseAndRank) {
  M a = dense(3, {q, 1, 0, 0, q, 1, 1, 0, q});
  M ai = inverse(a);
  EXPECT_EQ(a * ai, M::identity(basis(3)));
  EXPECT_EQ(ai * a, M::identity(basis(3)));
  EXPECT_THROW(inverse(dense(2, {1, q, q, q * q})), SingularMatrix);
  EXPECT_EQ(rank(dense(2, {1, q, q, q * q})), 1u);
}

TEST(Linalg, MinpolyAndProjectors) {
  EXPECT_TRUE(minpoly_check(M(basis(2), basis(2)), {QRat(0)}));
  EXPECT_TRUE(minpoly_check(M::identity(basis(3)), {QRat(1)}));
  M d = M::diagonal(basis(2), {qi, -q});
  EXPECT_EQ(eigenprojector(d, {qi, -q}, qi), M::diagonal(basis(2), {1, 0}));
  EXPECT_EQ(eigenprojector(M::identity(basis(2)), {QRat(1)}, QRat(1)), M::identity(basis(2)));
  EXPECT_THROW(eigenprojector(d, {qi, qi}, qi), EigenError);
  EXPECT_THROW(eigenprojector(d, {qi}, qi), EigenError);
  // non-diagonal: conjugate by an invertible matrix
  M s = dense(2, {1, q, 1, 1 + q * q});
  M m = s * d * inverse(s);
  M p1 = eigenprojector(m, {qi, -q}, qi), p2 = eigenprojector(m, {qi, -q}, -q);
  EXPECT_EQ(p1 * p1, p1);
  EXPECT_TRUE((p1 * p2).is_zero());
  EXPECT_EQ(p1 + p2, M::identity(basis(2)));
  EXPECT_EQ(m * p1, p1.scaled(qi));
  EXPECT_EQ(QRat(long(rank(p1))), QRat(eval_at(trace(p1), GaussRat(1))));
}
