#include "qaff/dirac.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <set>

namespace qaff {

void VectorPotential::add(int n, int i, const QRat& c) {
  if (c.is_zero()) return;
  auto it = coef.find({n, i});
  if (it == coef.end()) coef.emplace(std::make_pair(n, i), c);
  else {
    it->second += c;
    if (it->second.is_zero()) coef.erase(it);
  }
}

VectorPotential VectorPotential::scaled(const QRat& s) const {
  VectorPotential r;
  for (const auto& [k, v] : coef) r.add(k.first, k.second, v * s);
  r.central = central * s;
  return r;
}

std::pair<int, int> VectorPotential::mode_range() const {
  if (coef.empty()) return {0, 0};
  int lo = coef.begin()->first.first, hi = lo;
  for (const auto& [k, v] : coef) {
    lo = std::min(lo, k.first);
    hi = std::max(hi, k.first);
  }
  return {lo, hi};
}

std::string VectorPotential::str() const {
  std::string s;
  for (const auto& [k, v] : coef) {
    if (!s.empty()) s += " + ";
    s += v.str() + " A^" + std::to_string(k.first) + "_" + std::to_string(k.second);
  }
  if (!central.is_zero()) s += (s.empty() ? "" : " + ") + central.str() + " c";
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------- classical fermions

namespace {

constexpr int kMaxMode = 21;

int levi(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return (b - a + 3) % 3 == 1 ? 1 : -1;
}

int bit_of(int n, int a) {
  if (n < 1 || n > kMaxMode) throw BackendError("fermion mode out of range: " + std::to_string(n));
  return 3 * (n - 1) + (a - 1);
}

GaussRat to_gauss(const QRat& x) { return x.eval_at(GaussRat(1)); }

// psi^n_a on a single factor state; the zero-mode factor is graded (dim 4) or not (dim 2)
std::optional<std::pair<GaussRat, FState>> psi_one(bool graded, int n, int a, const FState& s) {
  FState t = s;
  if (n > 0) {
    if (n > kMaxMode) return std::nullopt;
    uint64_t m = uint64_t(1) << bit_of(n, a);
    if (s.occ & m) return std::nullopt;
    int pos = std::popcount(s.occ & (m - 1));
    t.occ |= m;
    return std::make_pair(GaussRat(pos % 2 ? -1 : 1), t);
  }
  if (n < 0) {
    if (-n > kMaxMode) return std::nullopt;
    uint64_t m = uint64_t(1) << bit_of(-n, a);
    if (!(s.occ & m)) return std::nullopt;
    int pos = std::popcount(s.occ & (m - 1));
    t.occ &= ~m;
    return std::make_pair(GaussRat(pos % 2 ? -2 : 2), t);
  }
  int s1 = graded ? s.spin / 2 : s.spin;
  int g = graded ? s.spin % 2 : 0;
  GaussRat c = std::popcount(s.occ) % 2 ? GaussRat(-1) : GaussRat(1);
  int s2 = s1;
  switch (a) {
    case 1: s2 = 1 - s1; break;
    case 2: s2 = 1 - s1; c *= s1 == 0 ? GaussRat::i() : -GaussRat::i(); break;
    default: if (s1 == 1) c = -c;
  }
  t.spin = graded ? 2 * s2 + (1 - g) : s2;
  return std::make_pair(c, t);
}

std::vector<FState> factor_states(int zero_dim, int emax) {
  std::vector<uint64_t> occs;
  std::function<void(int, int, uint64_t)> rec = [&](int next, int rem, uint64_t occ) {
    occs.push_back(occ);
    for (int b = next; b < 3 * std::max(emax, 0); ++b) {
      int n = b / 3 + 1;
      if (n <= rem) rec(b + 1, rem - n, occ | (uint64_t(1) << b));
    }
  };
  rec(0, emax, 0);
  std::vector<FState> out;
  for (uint64_t o : occs)
    for (int s = 0; s < zero_dim; ++s) out.push_back(FState{s, o});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int FState::energy() const {
  int e = 0;
  for (uint64_t o = occ; o; o &= o - 1) e += std::countr_zero(o) / 3 + 1;
  return e;
}
int FState::count() const { return std::popcount(occ); }

int PState::energy(int nparts) const {
  int e = 0;
  for (int p = 0; p < nparts; ++p) e += part[size_t(p)].energy();
  return e;
}
int PState::creations(int nparts) const {
  int e = 0;
  for (int p = 0; p < nparts; ++p) e += part[size_t(p)].count();
  return e;
}

void add_to(PVec& acc, const PState& s, const GaussRat& c) {
  if (c.is_zero()) return;
  auto it = acc.find(s);
  if (it == acc.end()) acc.emplace(s, c);
  else {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}
PVec operator+(PVec a, const PVec& b) {
  for (const auto& [s, c] : b) add_to(a, s, c);
  return a;
}
PVec scaled(const PVec& v, const GaussRat& c) {
  PVec r;
  if (c.is_zero()) return r;
  for (const auto& [s, x] : v) r.emplace(s, x * c);
  return r;
}

namespace {

// per-state caches for the expensive operators, keyed by backend identity
struct ClassicalCache {
  std::map<std::tuple<int, int, int, int, PState>, PVec> current;
  std::map<std::pair<int, PState>, PVec> q;
  std::map<std::pair<std::string, int>, int> ids;
};
ClassicalCache& cache() {
  static ClassicalCache c;
  return c;
}
// operators depend only on c0 and the number of copies
int cache_id(const ClassicalBackend& b) {
  auto& ids = cache().ids;
  return ids.emplace(std::make_pair(b.c0.str(), b.copies), int(ids.size())).first->second;
}

}  // namespace

PVec ClassicalBackend::psi(int part, int n, int a, const PVec& v) const {
  PVec out;
  for (const auto& [s, c] : v) {
    auto r = psi_one(part == 0, n, a, s.part[size_t(part)]);
    if (!r) continue;
    PState t = s;
    t.part[size_t(part)] = r->second;
    add_to(out, t, c * r->first);
  }
  return out;
}

PVec ClassicalBackend::current(int part, int n, int a, const PVec& v) const {
  PVec out;
  for (const auto& [s, coef] : v) {
    auto key = std::make_tuple(cache_id(*this), part, n, a, s);
    auto hit = cache().current.find(key);
    if (hit == cache().current.end()) {
      PVec r;
      const FState& f = s.part[size_t(part)];
      int E = f.energy(), span = E + std::abs(n) + 1;
      for (int b = 1; b <= 3; ++b)
        for (int c = 1; c <= 3; ++c) {
          int e = levi(a, b, c);
          if (!e) continue;
          GaussRat w = -c0 * GaussRat(e) / GaussRat(4);
          for (int p = -span; p <= span; ++p) {
            auto t1 = psi_one(part == 0, n - p, c, f);
            if (!t1) continue;
            auto t2 = psi_one(part == 0, p, b, t1->second);
            if (!t2) continue;
            PState t = s;
            t.part[size_t(part)] = t2->second;
            add_to(r, t, w * t1->first * t2->first);
          }
        }
      hit = cache().current.emplace(key, std::move(r)).first;
    }
    for (const auto& [t, x] : hit->second) add_to(out, t, x * coef);
  }
  return out;
}

PVec ClassicalBackend::T(int n, int a, const PVec& v) const {
  PVec out;
  for (int p = 1; p <= copies; ++p) out = out + current(p, n, a, v);
  return out;
}

PVec ClassicalBackend::Q(const PVec& v) const {
  const GaussRat i = GaussRat::i(), i3 = GaussRat::i() / GaussRat(3);
  PVec out;
  for (const auto& [s, coef] : v) {
    auto key = std::make_pair(cache_id(*this), s);
    auto hit = cache().q.find(key);
    if (hit == cache().q.end()) {
      PVec r, one{{s, GaussRat(1)}};
      int ef = s.part[0].energy(), eb = s.energy(nparts()) - ef;
      for (int a = 1; a <= 3; ++a) {
        for (int n = -ef - 1; n <= eb + 1; ++n) r = r + scaled(psi(0, n, a, T(-n, a, one)), i);
        for (int n = -ef - 1; n <= ef + 1; ++n) r = r + scaled(psi(0, n, a, current(0, -n, a, one)), i3);
      }
      hit = cache().q.emplace(key, std::move(r)).first;
    }
    for (const auto& [t, x] : hit->second) add_to(out, t, x * coef);
  }
  return out;
}

PVec ClassicalBackend::psi_pair(const std::map<std::pair<int, int>, GaussRat>& y, const PVec& v) const {
  PVec out;
  for (const auto& [k, c] : y) out = out + scaled(psi(0, -k.first, k.second, v), c);
  return out;
}

PVec ClassicalBackend::QA(const VectorPotential& A, const PVec& v) const {
  std::map<std::pair<int, int>, GaussRat> y;
  for (const auto& [k, c] : A.coef) y[k] = to_gauss(c);
  return Q(v) + scaled(psi_pair(y, v), GaussRat::i() * coefficient());
}

PVec ClassicalBackend::grading(const PVec& v) const {
  PVec out;
  for (const auto& [s, c] : v) {
    const FState& f = s.part[0];
    bool neg = (f.count() + f.spin % 2) % 2;
    out.emplace(s, neg ? -c : c);
  }
  return out;
}

std::vector<PState> ClassicalBackend::states() const {
  std::vector<PState> out{PState{}};
  for (int p = 0; p < nparts(); ++p) {
    auto fs = factor_states(zero_dim(p), emax);
    std::vector<PState> next;
    for (const auto& s : out)
      for (const auto& f : fs) {
        PState t = s;
        t.part[size_t(p)] = f;
        if (t.energy(p + 1) <= emax) next.push_back(t);
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Label ClassicalBackend::label(const PState& s) const {
  std::vector<std::vector<int>> parts;
  for (int p = 0; p < nparts(); ++p) {
    const FState& f = s.part[size_t(p)];
    std::vector<int> v{f.spin};
    for (uint64_t o = f.occ; o; o &= o - 1) {
      int b = std::countr_zero(o);
      v.push_back(b / 3 + 1);
      v.push_back(b % 3 + 1);
    }
    parts.push_back(std::move(v));
  }
  return Label(std::move(parts));
}

namespace {

// residual vectors per column state -> matrix with rows the states that appear
Mat<GaussRat> residual_matrix(const ClassicalBackend& b, const std::vector<PState>& cols,
                              const std::vector<PVec>& res) {
  std::set<PState> rows;
  for (const auto& v : res)
    for (const auto& [s, c] : v) rows.insert(s);
  Basis rb, cb;
  std::map<PState, int> ri;
  for (const auto& s : rows) {
    ri[s] = int(rb.size());
    rb.push_back(b.label(s));
  }
  for (const auto& s : cols) cb.push_back(b.label(s));
  Mat<GaussRat> m(rb, cb);
  for (size_t k = 0; k < res.size(); ++k)
    for (const auto& [s, c] : res[k]) m.set(ri.at(s), int(k), c);
  return m;
}

PVec unit(const PState& s) { return PVec{{s, GaussRat(1)}}; }

PVec minus(PVec a, const PVec& b) { return a + scaled(b, GaussRat(-1)); }

// vacuum expectation of [cur(n,a), cur(-n,a)] / n, times 4
GaussRat measure_level(const std::function<PVec(int, int, const PVec&)>& cur) {
  PVec vac = unit(PState{});
  PVec r = minus(cur(1, 1, cur(-1, 1, vac)), cur(-1, 1, cur(1, 1, vac)));
  auto it = r.find(PState{});
  return it == r.end() ? GaussRat(0) : GaussRat(4) * it->second;
}

}  // namespace

Report classical_relation_report(const ClassicalBackend& b) {
  Report r;
  r.suite = "classical_relations";
  auto states = b.states();
  const int M = std::min(2, b.emax + 1);

  // Clifford relations on H_f
  {
    std::vector<PVec> res(states.size());
    for (int n = -b.emax - 1; n <= b.emax + 1; ++n)
      for (int m = -b.emax - 1; m <= b.emax + 1; ++m)
        for (int a = 1; a <= 3; ++a)
          for (int c = 1; c <= 3; ++c)
            for (size_t k = 0; k < states.size(); ++k) {
              PVec v = unit(states[k]);
              PVec x = b.psi(0, n, a, b.psi(0, m, c, v)) + b.psi(0, m, c, b.psi(0, n, a, v));
              if (a == c && n == -m) x = minus(x, scaled(v, GaussRat(2)));
              res[k] = res[k] + scaled(x, GaussRat(1 + 7 * (n + 9) + 37 * (m + 9) + 211 * a + 1009 * c));
            }
    r.checks.push_back(residual_check("psi^n_a psi^m_b + psi^m_b psi^n_a = 2 delta_ab delta_n,-m",
                                      "fermion anticommutation relations", residual_matrix(b, states, res)));
  }

  auto check_currents = [&](const std::string& tag, const GaussRat& level,
                            const std::function<PVec(int, int, const PVec&)>& cur) {
    std::vector<PVec> res(states.size());
    for (int n = -M; n <= M; ++n)
      for (int m = -M; m <= M; ++m)
        for (int a = 1; a <= 3; ++a)
          for (int c = 1; c <= 3; ++c)
            for (size_t k = 0; k < states.size(); ++k) {
              PVec v = unit(states[k]);
              PVec x = minus(cur(n, a, cur(m, c, v)), cur(m, c, cur(n, a, v)));
              for (int d = 1; d <= 3; ++d)
                if (int e = levi(a, c, d)) x = minus(x, scaled(cur(n + m, d, v), b.c0 * GaussRat(e)));
              if (a == c && n == -m) x = minus(x, scaled(v, level * GaussRat(n) / GaussRat(4)));
              // keep terms distinguishable per (n,m,a,c) by summing with a generic weight
              res[k] = res[k] + scaled(x, GaussRat(1 + 7 * (n + M) + 37 * (m + M) + 211 * a + 1009 * c));
            }
    Check ch = residual_check("[" + tag + "^n_a, " + tag + "^m_b] = lambda_abc " + tag +
                                  "^{n+m}_c + (level/4) delta_ab n delta_n,-m",
                              "affine current commutation relations", residual_matrix(b, states, res));
    ch.params["level"] = level.str();
    ch.params["modes"] = std::to_string(-M) + ".." + std::to_string(M);
    r.checks.push_back(ch);
  };
  check_currents("K", b.kappa_eff, [&](int n, int a, const PVec& v) { return b.current(0, n, a, v); });
  check_currents("T", b.k_eff, [&](int n, int a, const PVec& v) { return b.T(n, a, v); });

  {
    std::vector<PVec> res(states.size());
    for (int n = -M; n <= M; ++n)
      for (int m = -M; m <= M; ++m)
        for (int a = 1; a <= 3; ++a)
          for (int d = 1; d <= 3; ++d)
            for (size_t k = 0; k < states.size(); ++k) {
              PVec v = unit(states[k]);
              PVec x = minus(b.current(0, n, a, b.psi(0, m, d, v)), b.psi(0, m, d, b.current(0, n, a, v)));
              for (int c = 1; c <= 3; ++c)
                if (int e = levi(a, d, c)) x = minus(x, scaled(b.psi(0, n + m, c, v), b.c0 * GaussRat(e)));
              res[k] = res[k] + scaled(x, GaussRat(1 + 7 * (n + M) + 37 * (m + M) + 211 * a + 1009 * d));
            }
    r.checks.push_back(residual_check("[K^n_a, psi^m_d] = lambda_adc psi^{n+m}_c",
                                      "fermions transform in the adjoint", residual_matrix(b, states, res)));
  }

  Check lv = bool_check("kappa_eff = 4 c0^2, k_eff = copies * kappa_eff", "levels of the fermionic currents",
                        b.kappa_eff == GaussRat(4) * b.c0 * b.c0 && b.k_eff == GaussRat(b.copies) * b.kappa_eff);
  lv.params["kappa_eff"] = b.kappa_eff.str();
  lv.params["k_eff"] = b.k_eff.str();
  r.checks.push_back(lv);
  r.config["copies"] = std::to_string(b.copies);
  r.config["emax"] = std::to_string(b.emax);
  r.config["c0"] = b.c0.str();
  return r;
}

ClassicalBackend classical_backend(int copies, int lo, int hi, int emax, GaussRat c0) {
  if (copies < 1 || copies > kMaxCopies) throw BackendError("copies must be in 1.." + std::to_string(kMaxCopies));
  if (emax < 0) throw BackendError("emax must be nonnegative");
  if (lo > -emax - 1 || hi < emax + 1) throw MarginError("window must contain [-emax-1, emax+1]");
  ClassicalBackend b;
  b.copies = copies;
  b.lo = lo;
  b.hi = hi;
  b.emax = emax;
  b.c0 = std::move(c0);
  b.kappa_eff = measure_level([&](int n, int a, const PVec& v) { return b.current(0, n, a, v); });
  b.k_eff = measure_level([&](int n, int a, const PVec& v) { return b.T(n, a, v); });
  // the central term must be a single constant across modes and directions
  PVec vac = unit(PState{});
  for (int n = 1; n <= emax + 1; ++n)
    for (int a = 1; a <= 3; ++a)
      for (int p = 0; p <= 1; ++p) {
        auto cur = [&](int m, const PVec& v) { return p == 0 ? b.current(0, m, a, v) : b.T(m, a, v); };
        PVec x = minus(cur(n, cur(-n, vac)), cur(-n, cur(n, vac)));
        GaussRat want = (p == 0 ? b.kappa_eff : b.k_eff) * GaussRat(n) / GaussRat(4);
        x = minus(x, scaled(vac, want));
        if (!x.empty())
          throw BackendError("central term is not (const) n delta: mode " + std::to_string(n) + ", direction " +
                             std::to_string(a));
      }
  b.relations = classical_relation_report(b);
  if (!b.relations.all_pass()) throw BackendError("classical backend fails its own current relations");
  return b;
}

// ---------------------------------------------------------------- classical Dirac matrices

namespace {

DiracMatrix assemble(const ClassicalBackend& b, const std::function<PVec(const PVec&)>& op) {
  auto states = b.states();
  std::map<PState, int> idx;
  Basis basis;
  DiracMatrix d;
  d.backend = "classical";
  d.emax = b.emax;
  for (const auto& s : states) {
    idx[s] = int(basis.size());
    basis.push_back(b.label(s));
    d.creations.push_back(s.creations(b.nparts()));
  }
  d.classical = Mat<GaussRat>(basis, basis);
  for (size_t c = 0; c < states.size(); ++c)
    for (const auto& [s, x] : op(unit(states[c]))) {
      auto it = idx.find(s);
      if (it == idx.end()) ++d.truncated;
      else d.classical.set(it->second, int(c), x);
    }
  return d;
}

}  // namespace

DiracMatrix build_Q(const ClassicalBackend& b) {
  return assemble(b, [&](const PVec& v) { return b.Q(v); });
}

DiracMatrix build_QA(const ClassicalBackend& b, const VectorPotential& A) {
  auto [lo, hi] = A.mode_range();
  if (lo < b.lo || hi > b.hi) throw MarginError("vector potential leaves the window");
  return assemble(b, [&](const PVec& v) { return b.QA(A, v); });
}

Mat<GaussRat> self_adjoint_residual(const DiracMatrix& d) {
  if (!d.is_classical()) throw BackendError("self-adjointness is defined for the classical backend");
  std::vector<GaussRat> g;
  for (int c : d.creations) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), 2, unsigned(c));
    g.push_back(GaussRat(mpq_class(z)));
  }
  Mat<GaussRat> gq = Mat<GaussRat>::diagonal(d.classical.rows(), g) * d.classical;
  Mat<GaussRat> adj = gq.transpose().map([](const GaussRat& x) { return x.conj(); });
  return gq - adj;
}

std::map<std::pair<int, int>, GaussRat> bracket_plus_dX(const ClassicalBackend& b, const VectorPotential& X,
                                                        const VectorPotential& A) {
  std::map<std::pair<int, int>, GaussRat> y;
  auto put = [&](int n, int d, const GaussRat& c) {
    auto& slot = y[{n, d}];
    slot += c;
    if (slot.is_zero()) y.erase({n, d});
  };
  for (const auto& [ka, va] : A.coef)
    for (const auto& [kx, vx] : X.coef)
      for (int d = 1; d <= 3; ++d)
        if (int e = levi(ka.second, kx.second, d))
          put(ka.first + kx.first, d, b.c0 * GaussRat(e) * to_gauss(va) * to_gauss(vx));
  for (const auto& [kx, vx] : X.coef) put(kx.first, kx.second, GaussRat(kx.first) * to_gauss(vx));
  return y;
}

Mat<GaussRat> classical_covariance(const ClassicalBackend& b, const VectorPotential& X, const VectorPotential& A) {
  for (const auto* p : {&X, &A}) {
    auto [lo, hi] = p->mode_range();
    if (lo < b.lo || hi > b.hi) throw MarginError("X or A leaves the window");
  }
  auto xhat = [&](const PVec& v) {
    PVec out;
    for (const auto& [k, c] : X.coef) out = out + scaled(b.J(-k.first, k.second, v), GaussRat::i() * to_gauss(c));
    return out;
  };
  auto y = bracket_plus_dX(b, X, A);
  auto states = b.states();
  std::vector<PVec> res;
  for (const auto& s : states) {
    PVec v = unit(s);
    PVec r = minus(xhat(b.QA(A, v)), b.QA(A, xhat(v)));
    res.push_back(minus(r, scaled(b.psi_pair(y, v), b.coefficient())));
  }
  return residual_matrix(b, states, res);
}

Report classical_covariance_suite(const ClassicalBackend& b, int mode_lo, int mode_hi) {
  Report r;
  r.suite = "classical_covariance";
  const std::string anchor = "[X, Q_A] = ((k+kappa)/4) <psi, [A,X] + dX>";
  std::vector<VectorPotential> units;
  for (int n = mode_lo; n <= mode_hi; ++n)
    for (int a = 1; a <= 3; ++a) {
      VectorPotential u;
      u.add(n, a, QRat(1));
      units.push_back(u);
    }
  for (const auto& X : units) {
    std::vector<const VectorPotential*> as{nullptr};
    for (const auto& A : units) as.push_back(&A);
    for (const auto* A : as) {
      VectorPotential a0;
      const VectorPotential& AA = A ? *A : a0;
      Check c = residual_check("X = " + X.str() + ", A = " + AA.str(), anchor, classical_covariance(b, X, AA));
      r.checks.push_back(c);
    }
  }
  // one generic pair with every mode and direction present, complex coefficients
  VectorPotential X, A;
  for (int n = mode_lo; n <= mode_hi; ++n)
    for (int a = 1; a <= 3; ++a) {
      X.add(n, a, QRat(GaussRat(mpq_class(n + 2 * a, 3), mpq_class(a - n))));
      A.add(n, a, QRat(GaussRat(mpq_class(a * a - n), mpq_class(1, 2 + a))));
    }
  r.checks.push_back(residual_check("generic X, A on modes " + std::to_string(mode_lo) + ".." +
                                        std::to_string(mode_hi),
                                    anchor, classical_covariance(b, X, A)));
  {
    auto y1 = bracket_plus_dX(b, X, A), y2 = bracket_plus_dX(b, X, A.scaled(QRat(2))),
         y0 = bracket_plus_dX(b, X, VectorPotential{});
    bool ok = true;
    std::set<std::pair<int, int>> keys;
    for (auto* y : {&y0, &y1, &y2})
      for (const auto& [k, v] : *y) keys.insert(k);
    auto at = [](const auto& m, const std::pair<int, int>& k) {
      auto it = m.find(k);
      return it == m.end() ? GaussRat(0) : it->second;
    };
    for (const auto& k : keys) ok = ok && at(y2, k) - at(y0, k) == GaussRat(2) * (at(y1, k) - at(y0, k));
    r.checks.push_back(bool_check("doubling A doubles the [A,X] term", anchor, ok));
  }
  r.config["emax"] = std::to_string(b.emax);
  r.config["modes"] = std::to_string(mode_lo) + ".." + std::to_string(mode_hi);
  r.config["coefficient"] = b.coefficient().str();
  return r;
}

// ---------------------------------------------------------------- deformed level 0

Mat<QRat> Deformed0Backend::T(int n, int i) const {
  const Basis& bs = hb.basis;
  Mat<QRat> t(bs, bs);
  if (i == 1) t = hb[Gen::E1];
  else if (i == -1) t = hb[Gen::F1];
  else t = (hb[Gen::K1] - hb[Gen::K1inv]).scaled((QRat::q() - QRat::q().inverse()).inverse());
  Mat<QRat> shift(bs, bs);
  for (size_t c = 0; c < bs.size(); ++c) {
    int r = hb.index_of(hb.mode(int(c)) + n, hb.weight(int(c)));
    if (r >= 0) shift.set(r, int(c), QRat(1));
  }
  return shift * t;
}

Deformed0Backend deformed0_backend(const FockSpace& fock, int lo, int hi, QRat coefficient) {
  Deformed0Backend b;
  b.fock = &fock;
  b.hb = build_adjoint(lo, hi);
  b.coefficient = std::move(coefficient);
  return b;
}

DiracMatrix build_Q(const Deformed0Backend& b) {
  const FockSpace& fs = *b.fock;
  DiracMatrix d;
  d.backend = "deformed0";
  d.emax = fs.emax();
  Mat<QRat> idf = Mat<QRat>::identity(fs.basis()), idb = b.hb.identity();
  d.deformed = kron(Mat<QRat>(fs.basis(), fs.basis()), Mat<QRat>(b.hb.basis, b.hb.basis));
  for (int n = -fs.emax(); n <= fs.emax(); ++n)
    for (int i = -1; i <= 1; ++i) {
      bool of = false;
      Mat<QRat> p = fs.psi_matrix(n, i, &of);
      d.truncated += of;
      d.deformed += kron(p, b.T(-n, i)).scaled(QRat::i());
    }
  for (const auto& s : fs.states())
    for (size_t k = 0; k < b.hb.basis.size(); ++k) d.creations.push_back(int(s.creation.size()));
  return d;
}

Mat<QRat> psi_potential(const FockSpace& fs, const VectorPotential& A) {
  Mat<QRat> m(fs.basis(), fs.basis());
  for (const auto& [k, c] : A.coef) m += fs.psi_matrix(-k.first, k.second).scaled(c);
  return m;
}

DiracMatrix build_QA(const Deformed0Backend& b, const VectorPotential& A) {
  DiracMatrix d = build_Q(b);
  d.deformed += kron(psi_potential(*b.fock, A), b.hb.identity()).scaled(QRat::i() * b.coefficient);
  return d;
}

namespace {

struct FockOps {
  const FockSpace& fs;
  std::map<Gen, Mat<QRat>> gens;
  explicit FockOps(const FockSpace& f) : fs(f) {
    for (Gen g : kAllGens) gens.emplace(g, fs.uq_action(g));
  }
  Mat<QRat> word(const Word& w) const {
    Mat<QRat> m = Mat<QRat>::identity(fs.basis());
    for (size_t k = w.size(); k-- > 0;) m = gens.at(w[k]) * m;
    return m;
  }
};

LoopVec loop_of(const VectorPotential& A) {
  LoopVec v;
  for (const auto& [k, c] : A.coef) v[k] = c;
  return v;
}

Mat<QRat> psi_covariance_with(const FockOps& ops, Gen x, const VectorPotential& A, int interior_emax,
                              const HopfConvention& conv) {
  const FockSpace& fs = ops.fs;
  if (fs.emax() < interior_emax + 2) throw MarginError("Fock cutoff must exceed the interior by 2");
  auto [lo, hi] = A.mode_range();
  if (lo < -1 || hi > 1) throw MarginError("potential must be supported on modes -1..1");
  Mat<QRat> L = psi_potential(fs, A);
  Mat<QRat> lhs(fs.basis(), fs.basis());
  for (const auto& t : conv.delta(x)) {
    auto [sc, sw] = conv.S(t.right);
    lhs += (ops.word(t.left) * L * ops.word(sw)).scaled(t.coef * sc);
  }
  ActResult moved = adjoint_act(Word{x}, loop_of(A), -1000, 1000);
  VectorPotential xa;
  for (const auto& [k, c] : moved.vec) xa.add(k.first, k.second, c);
  Mat<QRat> res = lhs - psi_potential(fs, xa);
  std::vector<int> cols;
  for (size_t k = 0; k < fs.states().size(); ++k)
    if (fs.states()[k].energy() <= interior_emax) cols.push_back(int(k));
  return res.select_cols(cols);
}

}  // namespace

Mat<QRat> deformed_psi_covariance(Gen x, const VectorPotential& A, const FockSpace& fs, int interior_emax,
                                  const HopfConvention& conv) {
  if (fs.emax() < interior_emax + 2) throw MarginError("Fock cutoff must exceed the interior by 2");
  FockOps ops(fs);
  return psi_covariance_with(ops, x, A, interior_emax, conv);
}

Report deformed_covariance_suite(const FockSpace& fs, int interior_emax, int mode_lo, int mode_hi) {
  Report r;
  r.suite = "deformed_covariance";
  if (fs.emax() < interior_emax + 2) throw MarginError("Fock cutoff must exceed the interior by 2");
  FockOps ops(fs);
  HopfConvention conv = HopfConvention::standard();
  for (Gen x : kAllGens) {
    Mat<QRat> acc;
    bool have = false;
    std::vector<std::string> failing;
    for (int n = mode_lo; n <= mode_hi; ++n)
      for (int i = -1; i <= 1; ++i) {
        VectorPotential A;
        A.add(n, i, QRat(1));
        Mat<QRat> res = psi_covariance_with(ops, x, A, interior_emax, conv);
        if (!res.is_zero()) failing.push_back("A^" + std::to_string(n) + "_" + std::to_string(i));
        // the report shows the first offending A
        if (!have || (acc.is_zero() && !res.is_zero())) acc = res;
        have = true;
      }
    Check c = residual_check("x = " + gen_name(x) + ": sum x' L_A S(x'') = L_{x.A}",
                             "deformed covariance, psi part", acc);
    if (!failing.empty()) {
      c.status = Status::Fail;
      std::string s;
      for (const auto& f : failing) s += (s.empty() ? "" : ",") + f;
      c.params["failing_A"] = s;
    }
    r.checks.push_back(c);
  }
  r.config["fock_emax"] = std::to_string(fs.emax());
  r.config["interior_emax"] = std::to_string(interior_emax);
  r.config["modes"] = std::to_string(mode_lo) + ".." + std::to_string(mode_hi);
  return r;
}

// ---------------------------------------------------------------- cocycle

Cocycle Cocycle::level_one() {
  Cocycle c;
  c.values[{Gen::E0, {-1, 1}}] = -QRat::q_pow(-1);
  c.values[{Gen::F0, {1, -1}}] = QRat::q_pow(-1);
  return c;
}

QRat Cocycle::generator(Gen x, const LoopVec& a) const {
  QRat s;
  for (const auto& [k, c] : a) {
    auto it = values.find({x, k});
    if (it != values.end()) s += it->second * c;
  }
  return s * multiplier;
}

QRat Cocycle::word(const Word& w, const LoopVec& a) const {
  if (w.empty()) return QRat();
  Word rest(w.begin() + 1, w.end());
  QRat v = generator(w[0], adjoint_act(rest, a, -1000, 1000).vec);
  if (counit_twist) {
    QRat e = HopfConvention::standard().eps(w[0]);
    if (!e.is_zero()) v += e * word(rest, a);
  }
  return v;
}

Report cocycle_suite(const Cocycle& cx, int lo, int hi) {
  Report r;
  r.suite = "cocycle";
  const std::string anchor = "cocycle relation lambda_xy(A) = lambda_x(y.A)";
  auto unit_vec = [](int n, int i) { return LoopVec{{{n, i}, QRat(1)}}; };
  const HopfConvention conv = HopfConvention::standard();
  auto eps = [&](Gen g) { return conv.eps(g); };

  auto value_check = [&](Gen x, int n, int i, const QRat& printed, const std::string& shown) {
    QRat v = cx.generator(x, unit_vec(n, i));
    Check c = bool_check("lambda_" + gen_name(x) + "(A^" + std::to_string(n) + "_" + std::to_string(i) +
                             ") = " + shown,
                         "level one values of lambda", v == printed * cx.multiplier);
    c.params["value"] = v.str();
    c.params["multiplier"] = cx.multiplier.str();
    if (c.status == Status::Fail) {
      c.residual.push_back((v - printed * cx.multiplier).str());
      c.residual_nnz = 1;
    }
    r.checks.push_back(c);
  };
  value_check(Gen::E0, -1, 1, -QRat::q_pow(-1), "-q^-1");
  value_check(Gen::F0, 1, -1, QRat::q_pow(-1), "q^-1");

  {
    bool ok = true;
    std::string bad;
    for (const auto& [k, v] : cx.values) {
      bool allowed = (k.first == Gen::E0 && k.second == std::make_pair(-1, 1)) ||
                     (k.first == Gen::F0 && k.second == std::make_pair(1, -1));
      if (!allowed && !v.is_zero()) {
        ok = false;
        bad = gen_name(k.first) + " at A^" + std::to_string(k.second.first) + "_" + std::to_string(k.second.second);
      }
    }
    r.checks.push_back(bool_check("lambda supported on e0 at A^-1_1 and f0 at A^1_-1", "only nonzero forms", ok, bad));
  }

  {
    size_t n = 0, bad = 0;
    for (Gen x : kAllGens)
      for (Gen y : kAllGens)
        for (Gen z : kAllGens)
          for (int m = -1; m <= 1; ++m)
            for (int i = -1; i <= 1; ++i) {
              LoopVec a = unit_vec(m, i);
              QRat left = cx.word({x, y}, adjoint_act({z}, a, -1000, 1000).vec);
              QRat right = cx.generator(x, adjoint_act({y, z}, a, -1000, 1000).vec);
              if (cx.counit_twist) {
                left += eps(x) * eps(y) * cx.word({z}, a);
                right += eps(x) * cx.word({y, z}, a);
              }
              ++n;
              bad += left != right || left != cx.word({x, y, z}, a);
            }
    r.checks.push_back(bool_check("word evaluation independent of bracketing", anchor, bad == 0,
                                  std::to_string(bad) + " of " + std::to_string(n) + " disagree"));
  }

  for (const auto& rel : defining_relations()) {
    Check c;
    c.name = "relation " + rel.name;
    c.anchor = anchor;
    for (int n = lo; n <= hi; ++n)
      for (int i = -1; i <= 1; ++i) {
        QRat s;
        for (const auto& [coef, w] : rel.terms) s += coef * cx.word(w, unit_vec(n, i));
        if (!s.is_zero()) {
          ++c.residual_nnz;
          if (c.residual.size() < kResidualCap)
            c.residual.push_back("A^" + std::to_string(n) + "_" + std::to_string(i) + " : " + s.str());
        }
      }
    c.status = c.residual_nnz == 0 ? Status::Pass : Status::Fail;
    r.checks.push_back(c);
  }
  if (!cx.counit_twist) {
    // same relations with x.c = eps(x) c, for comparison only
    Cocycle tw = cx;
    tw.counit_twist = true;
    std::string failing;
    for (const auto& rel : defining_relations()) {
      bool bad = false;
      for (int n = lo; n <= hi && !bad; ++n)
        for (int i = -1; i <= 1 && !bad; ++i) {
          QRat s;
          for (const auto& [coef, w] : rel.terms) s += coef * tw.word(w, unit_vec(n, i));
          bad = !s.is_zero();
        }
      if (bad) failing += (failing.empty() ? "" : "; ") + rel.name;
    }
    Check c;
    c.name = "comparison: rule with x.c = eps(x) c";
    c.anchor = anchor;
    c.status = Status::Flagged;
    c.params["inconsistent_relations"] = failing.empty() ? "none" : failing;
    r.checks.push_back(c);
  }
  r.config["window"] = std::to_string(lo) + ".." + std::to_string(hi);
  r.config["multiplier"] = cx.multiplier.str();
  return r;
}

}  // namespace qaff
