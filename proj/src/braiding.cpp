#include "qaff/braiding.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace qaff {

namespace {

Label pair_label(int n1, int i1, int n2, int i2) { return Label(std::vector<std::vector<int>>{{n1, i1}, {n2, i2}}); }

int total_weight(const Label& l) { return l.parts[0][1] + l.parts[1][1]; }

std::string pair_str(const PairKey& k) {
  return "(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")x(" + std::to_string(k[2]) + "," +
         std::to_string(k[3]) + ")";
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

void add_terms(LoopBraid::Terms& t, std::pair<int, int> at, const Mat<QRat>& m) {
  auto it = t.find(at);
  if (it == t.end()) t.emplace(at, m);
  else {
    it->second += m;
    if (it->second.is_zero()) t.erase(it);
  }
}

LoopBraid::Terms shifted(const LoopBraid::Terms& t, int dx, int dy) {
  LoopBraid::Terms out;
  for (const auto& [xy, m] : t) out.emplace(std::make_pair(xy.first + dx, xy.second + dy), m);
  return out;
}

// the standard symmetric blocks used by the consistency checks
std::vector<std::array<int, 3>> test_blocks() {
  std::vector<std::array<int, 3>> out;
  for (int N = -2; N <= 2; ++N) {
    int lo = (N >= 0 ? N / 2 : (N - 1) / 2) - 2;
    out.push_back({N, lo, N - lo});
  }
  return out;
}

std::string block_name(const std::array<int, 3>& b) {
  return "N=" + std::to_string(b[0]) + " [" + std::to_string(b[1]) + "," + std::to_string(b[2]) + "]";
}

Check mat_check(std::string name, std::string anchor, const Mat<QRat>& residual, std::string where) {
  Check c = residual_check(std::move(name), std::move(anchor), residual);
  c.params["block"] = std::move(where);
  return c;
}

}  // namespace

// ---------------------------------------------------------------- zero-mode braiding

std::vector<QRat> BraidOp::eigenvalues() const {
  std::vector<QRat> v;
  for (const auto& e : eigen) v.push_back(e.value);
  return v;
}

QRat piece_eigenvalue(ModuleKind kind, int dim) {
  const QRat q = QRat::q();
  if (kind == ModuleKind::Defining) {
    if (dim == 3) return q.inverse();
    if (dim == 1) return -q;
  } else if (kind == ModuleKind::Adjoint) {
    if (dim == 5) return q * q;
    if (dim == 3) return -QRat::q_pow(-2);
    if (dim == 1) return QRat::q_pow(-4);
  }
  throw ConventionFailure("no eigenvalue for a " + std::to_string(dim) + "-dimensional piece of the " +
                          kind_name(kind) + " tensor square");
}

BraidOp build_braid(ModuleKind kind, const HopfConvention& hopf) {
  if (kind == ModuleKind::Trivial) throw std::invalid_argument("build_braid: trivial module has no braiding");
  BraidOp b;
  b.kind = kind;
  b.zero = build_module(kind, 0, 0);
  b.square = tensor_module(b.zero, b.zero, hopf);
  const Basis& W = b.square.basis;
  const Mat<QRat>& E = b.square[Gen::E1];
  const Mat<QRat>& F = b.square[Gen::F1];

  std::set<int, std::greater<int>> wts;
  for (const auto& l : W) wts.insert(total_weight(l));

  std::vector<SparseVec<QRat>> cols;
  std::vector<QRat> diag;
  for (int w : wts) {
    std::vector<int> idx;
    for (size_t k = 0; k < W.size(); ++k)
      if (total_weight(W[k]) == w) idx.push_back(int(k));
    for (const auto& v0 : kernel(E.select_cols(idx))) {
      SparseVec<QRat> v;
      for (const auto& [k, c] : v0) v.emplace(idx[size_t(k)], c);
      std::vector<SparseVec<QRat>> chain{v};
      while (true) {
        auto nx = F.apply(chain.back());
        if (nx.empty()) break;
        chain.push_back(std::move(nx));
        if (chain.size() > W.size()) throw ConventionFailure("build_braid: f1 chain does not terminate");
      }
      int dim = int(chain.size());
      b.submodule_dims.push_back(dim);
      QRat mu = piece_eigenvalue(kind, dim);
      for (auto& c : chain) {
        cols.push_back(std::move(c));
        diag.push_back(mu);
      }
    }
  }
  std::vector<int> dims = b.submodule_dims;
  std::sort(dims.begin(), dims.end());
  std::vector<int> want = kind == ModuleKind::Defining ? std::vector<int>{1, 3} : std::vector<int>{1, 3, 5};
  if (dims != want || cols.size() != W.size())
    throw ConventionFailure("build_braid: submodule dimensions {" + join_ints(b.submodule_dims) + "} for " +
                            kind_name(kind));

  Basis cb;
  for (size_t k = 0; k < cols.size(); ++k) cb.push_back(Label{int(k)});
  Mat<QRat> B(W, cb);
  for (size_t k = 0; k < cols.size(); ++k)
    for (const auto& [r, v] : cols[k]) B.set(r, int(k), v);
  Mat<QRat> Binv = inverse(B);
  std::vector<QRat> dinv;
  for (const auto& d : diag) dinv.push_back(d.inverse());
  b.R = B * Mat<QRat>::diagonal(cb, diag) * Binv;
  b.Rinv = B * Mat<QRat>::diagonal(cb, dinv) * Binv;

  std::vector<QRat> values;
  for (const auto& d : diag)
    if (std::find(values.begin(), values.end(), d) == values.end()) values.push_back(d);
  for (const auto& mu : values) {
    EigenData e;
    e.value = mu;
    e.multiplicity = int(std::count(diag.begin(), diag.end(), mu));
    e.projector = eigenprojector(b.R, values, mu);
    b.eigen.push_back(std::move(e));
  }
  return b;
}

std::vector<QRat> poly_from_roots(const std::vector<QRat>& roots) {
  std::vector<QRat> c{QRat(1)};
  for (const auto& mu : roots) {
    std::vector<QRat> n(c.size() + 1, QRat(0));
    for (size_t k = 0; k < c.size(); ++k) {
      n[k + 1] += c[k];
      n[k] -= mu * c[k];
    }
    c = std::move(n);
  }
  return c;
}

Mat<QRat> inverse_via_minpoly(const Mat<QRat>& R, const std::vector<QRat>& roots) {
  // c0 + c1 R + ... + R^d = 0  =>  R^-1 = -(c1 + c2 R + ... + R^{d-1}) / c0
  auto c = poly_from_roots(roots);
  if (c[0].is_zero()) throw SingularMatrix("inverse_via_minpoly: zero root");
  Mat<QRat> id = Mat<QRat>::identity(R.rows());
  Mat<QRat> acc(R.rows(), R.cols());
  for (size_t k = c.size() - 1; k >= 1; --k) acc = acc * R + id.scaled(c[k]);
  return acc.scaled(-c[0].inverse());
}

Report hecke_report(const BraidOp& b) {
  Report r;
  r.suite = "hecke";
  r.config["kind"] = kind_name(b.kind);
  const std::string anchor = "minimal polynomial of R on the zero-mode tensor square";
  auto vals = b.eigenvalues();
  {
    Check c = residual_check("minimal polynomial", anchor, poly_in(b.R, vals));
    std::string poly;
    for (const auto& mu : vals) poly += "(R - (" + mu.str() + "))";
    c.params["polynomial"] = poly;
    r.checks.push_back(c);
  }
  {
    std::vector<int> mult;
    std::string ev;
    for (const auto& e : b.eigen) {
      mult.push_back(e.multiplicity);
      ev += (ev.empty() ? "" : ",") + e.value.str();
    }
    // (3,1) / (3,5,1) in the order -q^-2, q^2, q^-4 (adjoint) and q^-1, -q (defining)
    std::vector<QRat> order = b.kind == ModuleKind::Defining
                                  ? std::vector<QRat>{QRat::q().inverse(), -QRat::q()}
                                  : std::vector<QRat>{-QRat::q_pow(-2), QRat::q_pow(2), QRat::q_pow(-4)};
    std::vector<int> m;
    for (const auto& mu : order)
      for (const auto& e : b.eigen)
        if (e.value == mu) m.push_back(e.multiplicity);
    std::vector<int> want = b.kind == ModuleKind::Defining ? std::vector<int>{3, 1} : std::vector<int>{3, 5, 1};
    Check c = bool_check("eigenspace multiplicities", "multiplicities of the eigenvalues", m == want,
                         "got " + join_ints(m));
    c.params["multiplicities"] = join_ints(m);
    c.params["eigenvalues"] = ev;
    r.checks.push_back(c);
  }
  {
    Mat<QRat> id = Mat<QRat>::identity(b.R.rows());
    r.checks.push_back(residual_check("inverse via minimal polynomial", anchor,
                                      inverse_via_minpoly(b.R, vals) * b.R - id));
    r.checks.push_back(residual_check("R R^-1 = 1", anchor, b.R * b.Rinv - id));
    Check c = bool_check("det at q=1 nonzero", anchor, true);
    try {
      Mat<QRat> r1 = b.R.map([](const QRat& x) { return QRat(x.eval_at(GaussRat(1))); });
      inverse(r1);
    } catch (const std::exception& e) {
      c = bool_check("det at q=1 nonzero", anchor, false, e.what());
    }
    r.checks.push_back(c);
  }
  for (Gen g : kAllGens) {
    const Mat<QRat>& X = b.square[g];
    Check c = residual_check("equivariance " + gen_name(g), "R commutes with the tensor action", b.R * X - X * b.R);
    r.checks.push_back(c);
  }
  {
    Mat<QRat> r1 = b.R.map([](const QRat& x) { return QRat(x.eval_at(GaussRat(1))); });
    const Basis& W = b.R.rows();
    Mat<QRat> flip(W, W);
    for (size_t k = 0; k < W.size(); ++k) {
      const auto& p = W[k].parts;
      flip.set(b.R.index_of_row(pair_label(p[1][0], p[1][1], p[0][0], p[0][1])), int(k), QRat(1));
    }
    r.checks.push_back(residual_check("flip at q=1", "classical limit of R is the flip", r1 - flip));
  }
  return r;
}

// ---------------------------------------------------------------- mode rules

std::vector<std::string> ModeRules::describe() const {
  return {"R Y1 = Y2 R^-1", "R Y2 = Y1 R + C Y2", "R^-1 Y1 = Y2 R^-1 - C Y1", "R^-1 Y2 = Y1 R",
          "C = " + coefficient};
}

ModeRules mode_rules_with(const BraidOp& b, const Mat<QRat>& C, std::string label) {
  ModeRules r;
  r.kind = b.kind;
  r.R0 = b.R;
  r.R0inv = b.Rinv;
  r.C = C;
  r.coefficient = std::move(label);
  return r;
}

ModeRules mode_rules_with(const BraidOp& b, const QRat& scalar) {
  return mode_rules_with(b, Mat<QRat>::identity(b.R.rows()).scaled(scalar), "(" + scalar.str() + ")*1");
}

ModeRules derived_mode_rules(const BraidOp& b) { return mode_rules_with(b, b.R - b.Rinv, "R0 - R0^-1"); }

ModeRules derive_mode_rules(const BraidOp& b, const Mat<QRat>& C, std::string label) {
  ModeRules rules = mode_rules_with(b, C, label);
  Report rep = mode_rule_report(b, rules, label);
  if (!rep.all_pass()) throw ModeRuleError("mode rules with C = " + label + " are inconsistent", rep);
  return rules;
}

ModeRules derive_mode_rules(const BraidOp& b, const QRat& scalar) {
  return derive_mode_rules(b, Mat<QRat>::identity(b.R.rows()).scaled(scalar), "(" + scalar.str() + ")*1");
}

void add_to(PairVec& acc, const PairKey& k, const QRat& c) {
  if (c.is_zero()) return;
  auto it = acc.find(k);
  if (it == acc.end()) acc.emplace(k, c);
  else {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

LoopBraid::LoopBraid(ModeRules rules, PushOrder order, int central_offset, size_t budget)
    : rules_(std::move(rules)), order_(order), central_offset_(central_offset), budget_(budget) {
  weights_ = kind_weights(rules_.kind);
}

int LoopBraid::zero_index(int i1, int i2) const {
  int k = rules_.R0.index_of_col(pair_label(0, i1, 0, i2));
  if (k < 0) throw std::out_of_range("LoopBraid: bad weight pair");
  return k;
}

const LoopBraid::Terms& LoopBraid::push(int a, int b, bool inv) const {
  auto key = std::make_tuple(a, b, inv);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  if (a < 0 || b < 0) throw std::invalid_argument("LoopBraid::push: negative exponent");
  if (++steps_ > budget_) throw BudgetExceeded("LoopBraid: rewrite budget exceeded");
  Terms out;
  if (a == 0 && b == 0) {
    out.emplace(std::make_pair(0, 0), inv ? rules_.R0inv : rules_.R0);
  } else {
    bool y1 = a > 0 && (order_ == PushOrder::Y1First || b == 0);
    if (y1) {
      out = shifted(push(a - 1, b, true), 0, 1);                 // R Y1 = Y2 R^-1
      if (inv) add_terms(out, {a, b}, rules_.C.scaled(QRat(-1)));  // R^-1 Y1 = Y2 R^-1 - C Y1
    } else {
      out = shifted(push(a, b - 1, false), 1, 0);  // R^-1 Y2 = Y1 R
      if (!inv) add_terms(out, {a, b}, rules_.C);   // R Y2 = Y1 R + C Y2
    }
  }
  return cache_.emplace(key, std::move(out)).first->second;
}

PairVec LoopBraid::apply(const PairVec& v, bool inv) const {
  PairVec out;
  const Basis& W = rules_.R0.rows();
  for (const auto& [k, c] : v) {
    int shift = std::min(k[0], k[2]) - central_offset_;
    const Terms& t = push(k[0] - shift, k[2] - shift, inv);
    int col = zero_index(k[1], k[3]);
    for (const auto& [xy, M] : t)
      for (const auto& [r, m] : M.column(col)) {
        const auto& p = W[size_t(r)].parts;
        add_to(out, {xy.first + shift, p[0][1], xy.second + shift, p[1][1]}, c * m);
      }
  }
  return out;
}

Basis LoopBraid::block_basis(int N, int lo, int hi, const std::vector<int>& weights) {
  Basis b;
  for (int s = lo; s <= hi; ++s)
    for (int i : weights)
      for (int j : weights) b.push_back(pair_label(s, i, N - s, j));
  return b;
}

Mat<QRat> LoopBraid::block(int N, int lo, int hi, bool inv) const {
  Basis B = block_basis(N, lo, hi, weights_);
  std::map<PairKey, int> where;
  for (size_t k = 0; k < B.size(); ++k) {
    const auto& p = B[k].parts;
    where[{p[0][0], p[0][1], p[1][0], p[1][1]}] = int(k);
  }
  Mat<QRat> m(B, B);
  for (size_t k = 0; k < B.size(); ++k) {
    const auto& p = B[k].parts;
    for (const auto& [key, c] : apply(PairKey{p[0][0], p[0][1], p[1][0], p[1][1]}, inv)) {
      auto it = where.find(key);
      if (it == where.end()) throw std::logic_error("LoopBraid::block: block not invariant at " + pair_str(key));
      m.set(it->second, int(k), c);
    }
  }
  return m;
}

PairVec first_rule_apply(const BraidOp& b, const PairKey& key, bool inv) {
  if (b.eigen.size() != 2) throw std::invalid_argument("first_rule_apply: needs a quadratic minimal polynomial");
  const QRat s = b.eigen[0].value + b.eigen[1].value, p = b.eigen[0].value * b.eigen[1].value;
  const Mat<QRat> id = Mat<QRat>::identity(b.R.rows());
  std::map<std::tuple<int, int, bool>, LoopBraid::Terms> memo;
  // R^2 = s R - p  =>  R^-1 = (s - R)/p,  R = s - p R^-1
  std::function<LoopBraid::Terms(int, int, bool)> fr = [&](int a, int c, bool iv) -> LoopBraid::Terms {
    auto k = std::make_tuple(a, c, iv);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    LoopBraid::Terms out;
    if (a == 0 && c == 0) out.emplace(std::make_pair(0, 0), iv ? b.Rinv : b.R);
    else if (c == 0) {
      if (!iv) out = shifted(fr(a - 1, 0, true), 0, 1);
      else {
        for (const auto& [xy, m] : fr(a, 0, false)) add_terms(out, xy, m.scaled(-p.inverse()));
        add_terms(out, {a, 0}, id.scaled(s / p));
      }
    } else {
      if (iv) out = shifted(fr(0, c - 1, false), 1, 0);
      else {
        for (const auto& [xy, m] : fr(0, c, true)) add_terms(out, xy, m.scaled(-p));
        add_terms(out, {0, c}, id.scaled(s));
      }
    }
    return memo.emplace(k, out).first->second;
  };
  int shift = std::min(key[0], key[2]);
  int col = b.R.index_of_col(pair_label(0, key[1], 0, key[3]));
  PairVec out;
  for (const auto& [xy, M] : fr(key[0] - shift, key[2] - shift, inv))
    for (const auto& [r, m] : M.column(col)) {
      const auto& pr = b.R.rows()[size_t(r)].parts;
      add_to(out, {xy.first + shift, pr[0][1], xy.second + shift, pr[1][1]}, m);
    }
  return out;
}

namespace {

Mat<QRat> pairvec_diff(const std::vector<std::pair<PairKey, PairVec>>& cols) {
  // rows: union of keys; residual matrix for reporting
  std::set<PairKey> keys;
  for (const auto& [k, v] : cols)
    for (const auto& [kk, c] : v) keys.insert(kk);
  Basis rb, cb;
  std::map<PairKey, int> where;
  for (const auto& k : keys) {
    where[k] = int(rb.size());
    rb.push_back(pair_label(k[0], k[1], k[2], k[3]));
  }
  for (const auto& [k, v] : cols) cb.push_back(pair_label(k[0], k[1], k[2], k[3]));
  Mat<QRat> m(rb, cb);
  for (size_t c = 0; c < cols.size(); ++c)
    for (const auto& [kk, v] : cols[c].second) m.set(where[kk], int(c), v);
  return m;
}

PairVec combine(const PairVec& a, const QRat& ca, const PairVec& b, const QRat& cb) {
  PairVec out;
  for (const auto& [k, v] : a) add_to(out, k, ca * v);
  for (const auto& [k, v] : b) add_to(out, k, cb * v);
  return out;
}

PairVec shift_vec(const PairVec& v, int d1, int d2) {
  PairVec out;
  for (const auto& [k, c] : v) out.emplace(PairKey{k[0] + d1, k[1], k[2] + d2, k[3]}, c);
  return out;
}

std::vector<PairKey> window_pairs(int lo, int hi, const std::vector<int>& weights) {
  std::vector<PairKey> out;
  for (int n1 = lo; n1 <= hi; ++n1)
    for (int i1 : weights)
      for (int n2 = lo; n2 <= hi; ++n2)
        for (int i2 : weights) out.push_back({n1, i1, n2, i2});
  return out;
}

}  // namespace

Report mode_rule_report(const BraidOp& b, const ModeRules& rules, const std::string& tag) {
  Report r;
  r.suite = "mode-rules";
  r.config["kind"] = kind_name(b.kind);
  r.config["coefficient"] = tag;
  const std::string anchor = "Y-shift relations for R";
  LoopBraid y1(rules, PushOrder::Y1First), y2(rules, PushOrder::Y2First), off(rules, PushOrder::Y1First, 1);
  for (const auto& blk : test_blocks()) {
    const auto [N, lo, hi] = blk;
    try {
      Mat<QRat> R = y1.block(N, lo, hi), Ri = y1.block(N, lo, hi, true);
      Mat<QRat> id = Mat<QRat>::identity(R.rows());
      r.checks.push_back(mat_check("[" + tag + "] R R^-1 = 1", anchor, R * Ri - id, block_name(blk)));
      r.checks.push_back(mat_check("[" + tag + "] R^-1 R = 1", anchor, Ri * R - id, block_name(blk)));
      r.checks.push_back(mat_check("[" + tag + "] push order independence", anchor, R - y2.block(N, lo, hi),
                                   block_name(blk)));
      r.checks.push_back(mat_check("[" + tag + "] push order independence (inverse)", anchor,
                                   Ri - y2.block(N, lo, hi, true), block_name(blk)));
      r.checks.push_back(mat_check("[" + tag + "] centrality of Y1 Y2", anchor, R - off.block(N, lo, hi),
                                   block_name(blk)));
    } catch (const std::exception& e) {
      Check c = bool_check("[" + tag + "] rewriting", anchor, false, e.what());
      c.params["block"] = block_name(blk);
      r.checks.push_back(c);
    }
  }
  return r;
}

Report yrelation_report(const BraidOp& b) {
  Report r;
  r.suite = "y-relations";
  r.config["kind"] = kind_name(b.kind);
  const QRat q = QRat::q();
  const std::string anchor = "Y-shift relations for R";

  // scalar coefficient as displayed for the kind
  const QRat displayed = b.kind == ModuleKind::Defining ? q - q.inverse() : q * q - QRat::q_pow(-2);
  {
    Report s = mode_rule_report(b, mode_rules_with(b, displayed), "C=" + displayed.str());
    r.append(s);
  }
  ModeRules derived = derived_mode_rules(b);
  {
    Mat<QRat> id = Mat<QRat>::identity(b.R.rows());
    Check c = bool_check("derived C is scalar", anchor, true);
    c.status = Status::Flagged;
    for (const auto& mu : std::vector<QRat>{b.R.at(0, 0) - b.Rinv.at(0, 0)})
      if (derived.C == id.scaled(mu)) {
        c.status = Status::Pass;
        c.params["C"] = mu.str();
      }
    if (c.status != Status::Pass) c.params["C"] = "operator R0 - R0^-1 (not a multiple of 1)";
    r.checks.push_back(c);
    r.append(mode_rule_report(b, derived, "C=R0-R0^-1"));
  }

  // minimal polynomials of the loop R on blocks
  LoopBraid lb(derived);
  std::vector<QRat> zero_vals = b.eigenvalues();
  std::vector<std::pair<std::string, std::vector<QRat>>> polys{{"zero-mode minimal polynomial", zero_vals}};
  if (b.kind == ModuleKind::Adjoint) {
    auto ext = zero_vals;
    ext.push_back(-QRat::q_pow(4));
    polys.push_back({"zero-mode minimal polynomial times (R + q^4)", ext});
  }
  for (const auto& [name, vals] : polys) {
    for (const auto& blk : test_blocks()) {
      Check c = mat_check("loop R: " + name, "minimal polynomial on shifted vectors",
                          poly_in(lb.block(blk[0], blk[1], blk[2]), vals), block_name(blk));
      // for the three-eigenvalue case the outcome is recorded, not asserted
      if (c.status == Status::Fail && b.kind == ModuleKind::Adjoint && vals.size() == 3) c.status = Status::Flagged;
      r.checks.push_back(c);
    }
  }

  // second relation from the first and the quadratic minimal polynomial
  if (b.eigen.size() == 2) {
    auto pairs = window_pairs(-2, 2, kind_weights(b.kind));
    for (const auto& [name, coef] : std::vector<std::pair<std::string, QRat>>{
             {"C=" + displayed.str(), displayed}, {"C=" + (b.eigen[0].value + b.eigen[1].value).str(),
                                                   b.eigen[0].value + b.eigen[1].value}}) {
      std::vector<std::pair<PairKey, PairVec>> res;
      for (const auto& k : pairs) {
        PairKey k2{k[0], k[1], k[2] + 1, k[3]};
        PairVec lhs = first_rule_apply(b, k2, false);
        PairVec rhs = combine(shift_vec(first_rule_apply(b, k, false), 1, 0), QRat(1), PairVec{{k2, QRat(1)}}, coef);
        res.emplace_back(k, combine(lhs, QRat(1), rhs, QRat(-1)));
      }
      Check c = residual_check("[" + name + "] R Y2 = Y1 R + C Y2 from R Y1 = Y2 R^-1 and the quadratic",
                               "second relation follows from the first", pairvec_diff(res));
      c.params["window"] = "-2..2";
      r.checks.push_back(c);
    }
    // engine agreement
    std::vector<std::pair<PairKey, PairVec>> res;
    for (const auto& k : pairs)
      res.emplace_back(k, combine(first_rule_apply(b, k, false), QRat(1), lb.apply(k), QRat(-1)));
    r.checks.push_back(residual_check("first-rule rewriting agrees with the four-rule engine",
                                      "second relation follows from the first", pairvec_diff(res)));
  }
  return r;
}

Report loop_equivariance_report(const BraidOp& b, int L) {
  Report r;
  r.suite = "loop-equivariance";
  r.config["kind"] = kind_name(b.kind);
  r.config["window"] = "0.." + std::to_string(L);
  TruncatedModule m = build_module(b.kind, 0, L);
  Module T = tensor_module(m, m, HopfConvention::standard());
  LoopBraid lb(derived_mode_rules(b));
  Mat<QRat> R(T.basis, T.basis);
  std::map<Label, int> where;
  for (size_t k = 0; k < T.basis.size(); ++k) where[T.basis[k]] = int(k);
  for (size_t k = 0; k < T.basis.size(); ++k) {
    const auto& p = T.basis[k].parts;
    for (const auto& [key, c] : lb.apply(PairKey{p[0][0], p[0][1], p[1][0], p[1][1]}))
      R.set(where.at(pair_label(key[0], key[1], key[2], key[3])), int(k), c);
  }
  auto cols = interior_columns(T.basis, 0, L, 1);
  for (Gen g : kAllGens) {
    Check c = residual_check("loop R commutes with " + gen_name(g), "equivariance on loop modes",
                             (T[g] * R - R * T[g]).select_cols(cols));
    if (c.status == Status::Fail) c.status = Status::Flagged;
    r.checks.push_back(c);
  }
  return r;
}

// ---------------------------------------------------------------- normal ordering

bool mode_ordered(const PairKey& k) { return k[0] <= k[2]; }

NormalOrderResult normal_order(const LoopBraid& lb, const PairVec& word, const QRat& keep) {
  NormalOrderResult res;
  PairVec pending;
  for (const auto& [k, c] : word) {
    if (mode_ordered(k)) add_to(res.out, k, c);
    else add_to(pending, k, c);
  }
  const QRat f = keep.inverse();
  while (!pending.empty()) {
    if (++res.steps > 10000) throw BudgetExceeded("normal_order: step budget exceeded (confluence failure)");
    // most disordered first
    auto it = std::max_element(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
      return a.first[0] - a.first[2] < b.first[0] - b.first[2];
    });
    PairKey k = it->first;
    QRat c = it->second;
    pending.erase(it);
    // x == keep^-1 R x; if R x contains x itself, solve for x
    PairVec img = lb.apply(k);
    QRat self = QRat(0);
    if (auto s = img.find(k); s != img.end()) {
      self = s->second * f;
      img.erase(s);
    }
    QRat scale = c * f / (QRat(1) - self);
    for (const auto& [kk, v] : img) {
      if (mode_ordered(kk)) add_to(res.out, kk, scale * v);
      else add_to(pending, kk, scale * v);
    }
  }
  return res;
}

NormalOrderResult normal_order(const LoopBraid& lb, const PairKey& k, const QRat& keep) {
  return normal_order(lb, PairVec{{k, QRat(1)}}, keep);
}

OrderedComplement::OrderedComplement(const LoopBraid& lb, std::vector<QRat> all_eigenvalues,
                                     std::vector<QRat> ideal_eigenvalues, bool strict_equal_modes)
    : lb_(lb), all_(std::move(all_eigenvalues)), ideal_(std::move(ideal_eigenvalues)), strict_(strict_equal_modes) {}

bool OrderedComplement::is_ordered(const PairKey& k) const {
  if (k[0] != k[2]) return k[0] < k[2];
  return strict_ ? k[1] > k[3] : true;
}

const OrderedComplement::BlockData& OrderedComplement::data(int N, int lo, int hi) const {
  auto key = std::make_tuple(N, lo, hi);
  if (auto it = blocks_.find(key); it != blocks_.end()) return it->second;
  BlockData d;
  Mat<QRat> R = lb_.block(N, lo, hi);
  d.basis = R.rows();
  Mat<QRat> P(d.basis, d.basis);
  for (const auto& mu : ideal_) P += eigenprojector(R, all_, mu);
  d.P = P;
  auto ech = rref(P.transpose());
  d.ideal_basis = ech.rows;  // rows of rref(P^T) span the column space of P
  for (size_t k = 0; k < d.basis.size(); ++k) {
    const auto& p = d.basis[k].parts;
    if (is_ordered({p[0][0], p[0][1], p[1][0], p[1][1]})) d.ordered_idx.push_back(int(k));
  }
  if (d.ideal_basis.size() + d.ordered_idx.size() != d.basis.size())
    throw std::logic_error("OrderedComplement: ideal dimension " + std::to_string(d.ideal_basis.size()) +
                           " + ordered dimension " + std::to_string(d.ordered_idx.size()) + " != block dimension " +
                           std::to_string(d.basis.size()));
  Basis cb;
  for (size_t k = 0; k < d.basis.size(); ++k) cb.push_back(Label{int(k)});
  Mat<QRat> S(d.basis, cb);
  size_t c = 0;
  for (const auto& v : d.ideal_basis) {
    for (const auto& [r, x] : v) S.set(r, int(c), x);
    ++c;
  }
  for (int o : d.ordered_idx) S.set(o, int(c++), QRat(1));
  d.solver = inverse(S);
  return blocks_.emplace(key, std::move(d)).first->second;
}

const Mat<QRat>& OrderedComplement::ideal_projector(int N, int lo, int hi) const { return data(N, lo, hi).P; }

BlockSplit OrderedComplement::split(const PairKey& k) const {
  BlockSplit out;
  int N = k[0] + k[2], lo = std::min(k[0], k[2]), hi = std::max(k[0], k[2]);
  if (is_ordered(k)) {
    out.ordered.emplace(k, QRat(1));
    return out;
  }
  const BlockData& d = data(N, lo, hi);
  int col = -1;
  for (size_t j = 0; j < d.basis.size(); ++j) {
    const auto& p = d.basis[j].parts;
    if (PairKey{p[0][0], p[0][1], p[1][0], p[1][1]} == k) col = int(j);
  }
  SparseVec<QRat> coords = d.solver.column(col);
  const size_t ni = d.ideal_basis.size();
  for (const auto& [j, x] : coords) {
    if (size_t(j) < ni) {
      for (const auto& [r, v] : d.ideal_basis[size_t(j)]) {
        const auto& p = d.basis[size_t(r)].parts;
        add_to(out.ideal, {p[0][0], p[0][1], p[1][0], p[1][1]}, x * v);
      }
    } else {
      const auto& p = d.basis[size_t(d.ordered_idx[size_t(j) - ni])].parts;
      add_to(out.ordered, {p[0][0], p[0][1], p[1][0], p[1][1]}, x);
    }
  }
  return out;
}

Report normal_order_suite(int lo, int hi, size_t budget) {
  Report r;
  r.suite = "normal-order";
  r.config["window"] = std::to_string(lo) + ".." + std::to_string(hi);
  r.config["kind"] = "defining";
  BraidOp b = build_braid(ModuleKind::Defining);
  ModeRules rules = derived_mode_rules(b);
  LoopBraid y1(rules, PushOrder::Y1First, 0, budget), y2(rules, PushOrder::Y2First, 0, budget),
      off(rules, PushOrder::Y1First, 1, budget);
  const QRat keep = -QRat::q(), ideal = QRat::q().inverse();
  const std::string anchor = "ordering modulo the ideal generated by (q^-1 + R)(V x V)";

  std::vector<std::string> bad_term, bad_order, bad_sum, bad_idem, bad_conf, bad_ideal, bad_fixed;
  size_t max_steps = 0, count = 0;
  for (const auto& k : window_pairs(lo, hi, kind_weights(ModuleKind::Defining))) {
    ++count;
    NormalOrderResult a;
    try {
      a = normal_order(y1, k, keep);
    } catch (const std::exception& e) {
      bad_term.push_back(pair_str(k) + ": " + e.what());
      continue;
    }
    max_steps = std::max(max_steps, a.steps);
    if (mode_ordered(k) && a.out != PairVec{{k, QRat(1)}}) bad_fixed.push_back(pair_str(k));
    for (const auto& [kk, c] : a.out) {
      if (!mode_ordered(kk)) bad_order.push_back(pair_str(k) + " -> " + pair_str(kk));
      if (kk[0] + kk[2] != k[0] + k[2]) bad_sum.push_back(pair_str(k) + " -> " + pair_str(kk));
    }
    if (normal_order(y1, a.out, keep).out != a.out) bad_idem.push_back(pair_str(k));
    try {
      if (normal_order(y2, k, keep).out != a.out || normal_order(off, k, keep).out != a.out)
        bad_conf.push_back(pair_str(k));
    } catch (const std::exception& e) {
      bad_conf.push_back(pair_str(k) + ": " + e.what());
    }
    // (R - q^-1)(input - output) = 0
    PairVec diff = a.out;
    add_to(diff, k, QRat(-1));
    PairVec img = y1.apply(diff);
    for (const auto& [kk, c] : diff) add_to(img, kk, -ideal * c);
    if (!img.empty()) bad_ideal.push_back(pair_str(k));
  }
  auto list_check = [&](std::string name, const std::vector<std::string>& bad) {
    Check c = bool_check(std::move(name), anchor, bad.empty());
    c.residual_nnz = bad.size();
    for (size_t j = 0; j < bad.size() && j < kResidualCap; ++j) c.residual.push_back(bad[j]);
    c.params["monomials"] = std::to_string(count);
    r.checks.push_back(c);
  };
  list_check("terminates within budget", bad_term);
  list_check("ordered input unchanged", bad_fixed);
  list_check("output ordered (p <= q)", bad_order);
  list_check("mode sum conserved", bad_sum);
  list_check("idempotent", bad_idem);
  list_check("confluence across push orders", bad_conf);
  list_check("difference lies in the ideal", bad_ideal);
  r.checks.back().params["max_steps"] = std::to_string(max_steps);
  return r;
}

}  // namespace qaff
