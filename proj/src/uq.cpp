#include "qaff/uq.hpp"

#include <algorithm>

namespace qaff {

std::string gen_name(Gen g) {
  static const char* names[] = {"e0", "e1", "f0", "f1", "K0", "K1", "K0^-1", "K1^-1"};
  return names[gidx(g)];
}

Gen parse_gen(const std::string& s) {
  for (Gen g : kAllGens)
    if (gen_name(g) == s) return g;
  if (s == "K0inv") return Gen::K0inv;
  if (s == "K1inv") return Gen::K1inv;
  throw std::invalid_argument("unknown generator '" + s + "'");
}

int gen_node(Gen g) {
  switch (g) {
    case Gen::E0: case Gen::F0: case Gen::K0: case Gen::K0inv: return 0;
    default: return 1;
  }
}

int gen_mode_shift(Gen g) { return g == Gen::E0 ? 1 : g == Gen::F0 ? -1 : 0; }

std::string word_name(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) s += (k ? " " : "") + gen_name(w[k]);
  return s;
}

std::string kind_name(ModuleKind k) {
  switch (k) {
    case ModuleKind::Defining: return "defining";
    case ModuleKind::Adjoint: return "adjoint";
    default: return "trivial";
  }
}

Mat<QRat> Module::word(const Word& w) const {
  if (w.empty()) return identity();
  Mat<QRat> m = (*this)[w.back()];
  for (size_t k = w.size() - 1; k-- > 0;) m = (*this)[w[k]] * m;
  return m;
}

std::vector<int> kind_weights(ModuleKind kind) {
  switch (kind) {
    case ModuleKind::Defining: return {1, -1};
    case ModuleKind::Adjoint: return {1, 0, -1};
    default: return {0};
  }
}

std::vector<std::pair<QRat, std::pair<int, int>>> act_table(ModuleKind kind, Gen g, int n, int i) {
  const QRat q = QRat::q();
  std::vector<std::pair<QRat, std::pair<int, int>>> out;
  auto put = [&](QRat c, int n2, int i2) { out.emplace_back(std::move(c), std::make_pair(n2, i2)); };
  if (kind == ModuleKind::Trivial) {
    if (g == Gen::K0 || g == Gen::K1 || g == Gen::K0inv || g == Gen::K1inv) put(1, n, i);
    return out;
  }
  // K1 exponent per unit weight: defining q^{+-1}, adjoint q^{2i}
  const int wexp = kind == ModuleKind::Defining ? i : 2 * i;
  switch (g) {
    case Gen::K1: case Gen::K0inv: put(QRat::q_pow(wexp), n, i); return out;
    case Gen::K1inv: case Gen::K0: put(QRat::q_pow(-wexp), n, i); return out;
    default: break;
  }
  if (kind == ModuleKind::Defining) {
    if (g == Gen::F1 && i == 1) put(1, n, -1);
    if (g == Gen::E0 && i == 1) put(1, n + 1, -1);
    if (g == Gen::E1 && i == -1) put(1, n, 1);
    if (g == Gen::F0 && i == -1) put(1, n - 1, 1);
    return out;
  }
  const QRat t = q + q.inverse();
  switch (g) {
    case Gen::F1: if (i > -1) put(1, n, i - 1); break;
    case Gen::E0: if (i > -1) put(1, n + 1, i - 1); break;
    case Gen::E1: if (i < 1) put(t, n, i + 1); break;
    case Gen::F0: if (i < 1) put(t, n - 1, i + 1); break;
    default: break;
  }
  return out;
}

int TruncatedModule::index_of(int n, int i) const {
  if (!in_window(n)) return -1;
  const auto w = kind_weights(kind);
  auto it = std::find(w.begin(), w.end(), i);
  if (it == w.end()) return -1;
  return (n - lo) * int(w.size()) + int(it - w.begin());
}

TruncatedModule build_module(ModuleKind kind, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("build_module: empty window");
  TruncatedModule m;
  m.kind = kind;
  m.lo = lo;
  m.hi = hi;
  m.name = kind_name(kind) + "[" + std::to_string(lo) + ".." + std::to_string(hi) + "]";
  const auto ws = kind_weights(kind);
  for (int n = lo; n <= hi; ++n)
    for (int i : ws) m.basis.push_back(Label::site(n, i));
  for (Gen g : kAllGens) {
    Mat<QRat> a(m.basis, m.basis);
    for (size_t c = 0; c < m.basis.size(); ++c) {
      for (auto& [coef, dst] : act_table(kind, g, m.mode(int(c)), m.weight(int(c)))) {
        int r = m.index_of(dst.first, dst.second);
        if (r >= 0) a.add(r, int(c), coef);
      }
    }
    m.act[size_t(gidx(g))] = std::move(a);
  }
  return m;
}

TruncatedModule build_trivial() { return build_module(ModuleKind::Trivial, 0, 0); }

// ---------------------------------------------------------------- Hopf

HopfConvention HopfConvention::standard() {
  HopfConvention h;
  h.name = "standard";
  const Gen E[2] = {Gen::E0, Gen::E1}, F[2] = {Gen::F0, Gen::F1}, K[2] = {Gen::K0, Gen::K1},
            Ki[2] = {Gen::K0inv, Gen::K1inv};
  for (int i = 0; i < 2; ++i) {
    h.coproduct[size_t(gidx(E[i]))] = {{1, {E[i]}, {}}, {1, {K[i]}, {E[i]}}};
    h.coproduct[size_t(gidx(F[i]))] = {{1, {F[i]}, {Ki[i]}}, {1, {}, {F[i]}}};
    h.coproduct[size_t(gidx(K[i]))] = {{1, {K[i]}, {K[i]}}};
    h.coproduct[size_t(gidx(Ki[i]))] = {{1, {Ki[i]}, {Ki[i]}}};
    h.antipode[size_t(gidx(E[i]))] = {-1, {Ki[i], E[i]}};
    h.antipode[size_t(gidx(F[i]))] = {-1, {F[i], K[i]}};
    h.antipode[size_t(gidx(K[i]))] = {1, {Ki[i]}};
    h.antipode[size_t(gidx(Ki[i]))] = {1, {K[i]}};
    h.counit[size_t(gidx(E[i]))] = 0;
    h.counit[size_t(gidx(F[i]))] = 0;
    h.counit[size_t(gidx(K[i]))] = 1;
    h.counit[size_t(gidx(Ki[i]))] = 1;
  }
  return h;
}

std::pair<QRat, Word> HopfConvention::S(const Word& w) const {
  QRat c(1);
  Word out;
  for (size_t k = w.size(); k-- > 0;) {
    const auto& [sc, sw] = S(w[k]);
    c *= sc;
    out.insert(out.end(), sw.begin(), sw.end());
  }
  return {c, out};
}

Mat<QRat> hopf_tensor_action(Gen x, const Module& m1, const Module& m2, const HopfConvention& conv, bool opposite) {
  Basis b;
  for (const auto& l1 : m1.basis)
    for (const auto& l2 : m2.basis) b.push_back(tensor(l1, l2));
  Mat<QRat> acc(b, b);
  for (const auto& t : conv.delta(x)) {
    const Word& w1 = opposite ? t.right : t.left;
    const Word& w2 = opposite ? t.left : t.right;
    acc += kron(m1.word(w1), m2.word(w2)).scaled(t.coef);
  }
  return acc;
}

Module tensor_module(const Module& m1, const Module& m2, const HopfConvention& conv, bool opposite) {
  Module t;
  t.name = m1.name + (opposite ? " (x)op " : " (x) ") + m2.name;
  for (const auto& l1 : m1.basis)
    for (const auto& l2 : m2.basis) t.basis.push_back(tensor(l1, l2));
  for (Gen g : kAllGens) t.act[size_t(gidx(g))] = hopf_tensor_action(g, m1, m2, conv, opposite);
  return t;
}

std::vector<int> interior_columns(const Basis& b, int lo, int hi, int margin) {
  std::vector<int> out;
  for (size_t k = 0; k < b.size(); ++k) {
    bool ok = true;
    for (const auto& part : b[k].parts) {
      int n = part[0];
      if (n < lo + margin || n > hi - margin) ok = false;
    }
    if (ok) out.push_back(int(k));
  }
  return out;
}

Report hopf_axiom_suite(const HopfConvention& conv, const TruncatedModule& m, int margin) {
  Report rep;
  rep.suite = "hopf-axioms";
  rep.config["convention"] = conv.name;
  rep.config["module"] = m.name;
  rep.config["margin"] = std::to_string(margin);
  Module mm = tensor_module(m, m, conv);
  auto mm_word = [&](const Word& w) { return mm.word(w); };
  for (Gen x : kAllGens) {
    Mat<QRat> left, right;
    bool first = true;
    for (const auto& t : conv.delta(x)) {
      Mat<QRat> l = kron(mm_word(t.left), m.word(t.right)).scaled(t.coef);
      Mat<QRat> r = kron(m.word(t.left), mm_word(t.right)).scaled(t.coef);
      if (first) {
        left = l;
        right = r;
        first = false;
      } else {
        left += l;
        right += r;
      }
    }
    auto cols = interior_columns(left.cols(), m.lo, m.hi, margin);
    rep.checks.push_back(residual_check("coassociativity " + gen_name(x), "(Delta(x)id)Delta = (id(x)Delta)Delta",
                                        (left - right).select_cols(cols)));
    Mat<QRat> s_left(m.basis, m.basis), s_right(m.basis, m.basis);
    for (const auto& t : conv.delta(x)) {
      auto [c1, w1] = conv.S(t.left);
      auto [c2, w2] = conv.S(t.right);
      s_left += (m.word(w1) * m.word(t.right)).scaled(t.coef * c1);
      s_right += (m.word(t.left) * m.word(w2)).scaled(t.coef * c2);
    }
    Mat<QRat> eps = m.identity().scaled(conv.eps(x));
    auto icols = interior_columns(m.basis, m.lo, m.hi, margin);
    rep.checks.push_back(residual_check("antipode m(S(x)id)Delta " + gen_name(x), "m(S(x)id)Delta(x) = eps(x) 1",
                                        (s_left - eps).select_cols(icols)));
    rep.checks.push_back(residual_check("antipode m(id(x)S)Delta " + gen_name(x), "m(id(x)S)Delta(x) = eps(x) 1",
                                        (s_right - eps).select_cols(icols)));
  }
  return rep;
}

// ---------------------------------------------------------------- relations

std::vector<Relation> defining_relations(const CartanData& cd) {
  const QRat q = QRat::q();
  const QRat inv_qq = QRat(1) / (q - q.inverse());
  const Gen E[2] = {Gen::E0, Gen::E1}, F[2] = {Gen::F0, Gen::F1}, K[2] = {Gen::K0, Gen::K1},
            Ki[2] = {Gen::K0inv, Gen::K1inv};
  std::vector<Relation> rs;
  rs.push_back({"K0 K1 = K1 K0", "K_i K_j = K_j K_i", {{1, {Gen::K0, Gen::K1}}, {-1, {Gen::K1, Gen::K0}}}});
  for (int i = 0; i < 2; ++i) {
    rs.push_back({"K" + std::to_string(i) + " K" + std::to_string(i) + "^-1 = 1", "K_i K_i^-1 = 1",
                  {{1, {K[i], Ki[i]}}, {-1, {}}}});
    rs.push_back({"K" + std::to_string(i) + "^-1 K" + std::to_string(i) + " = 1", "K_i^-1 K_i = 1",
                  {{1, {Ki[i], K[i]}}, {-1, {}}}});
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::string ij = std::to_string(i) + std::to_string(j);
      rs.push_back({"K" + std::to_string(i) + " e" + std::to_string(j) + " K" + std::to_string(i) + "^-1 = q^" +
                        std::to_string(cd.alpha[size_t(i)][size_t(j)]) + " e" + std::to_string(j),
                    "K_i e_j K_i^-1 = q^alpha_ij e_j",
                    {{1, {K[i], E[j], Ki[i]}}, {-QRat::q_pow(cd.alpha[size_t(i)][size_t(j)]), {E[j]}}}});
      rs.push_back({"K" + std::to_string(i) + " f" + std::to_string(j) + " K" + std::to_string(i) + "^-1 = q^" +
                        std::to_string(-cd.alpha[size_t(i)][size_t(j)]) + " f" + std::to_string(j),
                    "K_i f_j K_i^-1 = q^-alpha_ij f_j",
                    {{1, {K[i], F[j], Ki[i]}}, {-QRat::q_pow(-cd.alpha[size_t(i)][size_t(j)]), {F[j]}}}});
    }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Relation r{"[e" + std::to_string(i) + ", f" + std::to_string(j) + "]" + (i == j ? " = (K-K^-1)/(q-q^-1)" : " = 0"),
                 "[e_i, f_j] = delta_ij (K_i - K_i^-1)/(q - q^-1)",
                 {{1, {E[i], F[j]}}, {-1, {F[j], E[i]}}}};
      if (i == j) {
        r.terms.push_back({-inv_qq, {K[i]}});
        r.terms.push_back({inv_qq, {Ki[i]}});
      }
      rs.push_back(std::move(r));
    }
  for (int pass = 0; pass < 2; ++pass) {
    const Gen* X = pass == 0 ? E : F;
    const char* xn = pass == 0 ? "e" : "f";
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (i == j) continue;
        const int deg = 1 - cd.a[size_t(i)][size_t(j)];
        Relation r{std::string("Serre ") + xn + " i=" + std::to_string(i) + " j=" + std::to_string(j),
                   std::string("sum_k (-1)^k [1-a_ij choose k]_q ") + xn + "_i^{1-a_ij-k} " + xn + "_j " + xn + "_i^k = 0",
                   {}};
        for (int k = 0; k <= deg; ++k) {
          Word w(size_t(deg - k), X[i]);
          w.push_back(X[j]);
          w.insert(w.end(), size_t(k), X[i]);
          QRat c = qbinom(deg, k);
          r.terms.push_back({k % 2 ? -c : c, w});
        }
        rs.push_back(std::move(r));
      }
  }
  return rs;
}

int required_margin(const Relation& r) {
  int m = 0;
  for (const auto& [c, w] : r.terms) {
    int shift = 0;
    for (size_t k = w.size(); k-- > 0;) {
      shift += gen_mode_shift(w[k]);
      m = std::max(m, std::abs(shift));
    }
  }
  return m;
}

int required_margin(const std::vector<Relation>& rs) {
  int m = 0;
  for (const auto& r : rs) m = std::max(m, required_margin(r));
  return m;
}

Mat<QRat> relation_residual(const Relation& r, const TruncatedModule& m, int margin) {
  Mat<QRat> acc(m.basis, m.basis);
  for (const auto& [c, w] : r.terms) acc += m.word(w).scaled(c);
  return acc.select_cols(interior_columns(m.basis, m.lo, m.hi, margin));
}

Report verify_relations(const TruncatedModule& m, int margin) {
  const auto rs = defining_relations();
  const int need = required_margin(rs);
  if (margin < need)
    throw MarginError("verify_relations: margin " + std::to_string(margin) + " is smaller than the relation word reach " +
                      std::to_string(need));
  Report rep;
  rep.suite = "relations";
  rep.config["module"] = m.name;
  rep.config["margin"] = std::to_string(margin);
  for (const auto& r : rs) {
    Check c = residual_check(r.name, r.anchor, relation_residual(r, m, margin));
    c.params["module"] = kind_name(m.kind);
    rep.checks.push_back(std::move(c));
  }
  // level zero: K0 K1 acts as 1
  Relation lvl{"K0 K1 = 1", "level zero: K_0 = K_1^-1", {{1, {Gen::K0, Gen::K1}}, {-1, {}}}};
  Check c = residual_check(lvl.name, lvl.anchor, relation_residual(lvl, m, margin));
  c.params["module"] = kind_name(m.kind);
  rep.checks.push_back(std::move(c));
  // weight grading of e1, f1
  bool graded = true;
  const int unit = m.kind == ModuleKind::Defining ? 1 : 2;
  for (Gen g : {Gen::E1, Gen::F1}) {
    const int step = g == Gen::E1 ? 2 : -2;
    const auto& a = m[g];
    for (size_t r = 0; r < a.nrows(); ++r)
      for (const auto& [col, v] : a.row(int(r)))
        if (unit * (m.weight(int(r)) - m.weight(col)) != step) graded = false;
  }
  rep.checks.push_back(bool_check("weight grading of e1, f1", "e_1 raises the K_1 exponent by 2", graded));
  return rep;
}

ActResult adjoint_act(const Word& w, const LoopVec& a, int lo, int hi, ModuleKind kind) {
  ActResult res;
  LoopVec cur = a;
  for (size_t k = w.size(); k-- > 0;) {
    LoopVec next;
    for (const auto& [key, coef] : cur)
      for (auto& [c, dst] : act_table(kind, w[k], key.first, key.second)) {
        if (dst.first < lo || dst.first > hi) res.overflow = true;
        auto& slot = next[dst];
        slot += c * coef;
        if (slot.is_zero()) next.erase(dst);
      }
    cur = std::move(next);
  }
  res.vec = std::move(cur);
  return res;
}

}  // namespace qaff
