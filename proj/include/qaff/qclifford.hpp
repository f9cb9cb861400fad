#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qaff/braiding.hpp"

namespace qaff {

// Letters are adjoint labels (A-mode, weight); psi^n_i is the letter A^{-n}_i.
using Letter = std::pair<int, int>;
using CWord = std::vector<Letter>;
using CComb = std::map<CWord, QRat>;

inline Letter psi_letter(int n, int i) { return {-n, i}; }
inline int psi_mode(const Letter& l) { return -l.first; }
std::string word_str(const CWord& w);  // in psi labels, e.g. "psi^1_0 psi^0_-1"
void add_to(CComb& acc, const CWord& w, const QRat& c);

// B(A^n_i, A^-n_-i) = b_i q^{-2n}, b_1 = -1, b_0 = 1, b_-1 = -q^2; zero otherwise.
QRat bilinear_B(int n1, int i1, int n2, int i2);
inline QRat bilinear_B_psi(int n1, int i1, int n2, int i2) { return bilinear_B(-n1, i1, -n2, i2); }

struct BSolveResult {
  size_t unknowns = 0;
  size_t solution_dim = 0;       // dimension of the invariant covectors on the window
  size_t interior_rank = 0;      // rank after restricting to interior pairs
  std::map<PairKey, QRat> form;  // normalized so that B(A^0_0, A^0_0) = 1 (interior pairs)
};
BSolveResult solve_B(int L = 2);
// B o Delta(x) - eps(x) B on interior columns of the adjoint window [-L, L]
Mat<QRat> B_invariance_residual(Gen x, int L = 3);

struct CliffordBudget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class QClifford {
 public:
  explicit QClifford(size_t budget = 200000);

  const BraidOp& braid() const { return braid_; }
  const LoopBraid& loop() const { return loop_; }
  const OrderedComplement& complement() const { return *oc_; }
  std::vector<QRat> loop_eigenvalues() const;
  std::vector<QRat> positive_eigenvalues() const;

  static bool ordered(const Letter& a, const Letter& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  }
  static bool is_normal(const CWord& w);

  // u (x) v = ideal part + ordered part; the ideal part is worth its B-value
  struct PairSplit {
    QRat scalar;
    PairVec ordered;
  };
  PairSplit split(const Letter& a, const Letter& b) const;

  CComb reduce(const CComb& c) const;
  CComb reduce(const CWord& w) const { return reduce(CComb{{w, QRat(1)}}); }
  size_t last_steps() const { return steps_; }

 private:
  size_t budget_;
  BraidOp braid_;
  LoopBraid loop_;
  std::unique_ptr<OrderedComplement> oc_;
  mutable std::map<std::pair<Letter, Letter>, PairSplit> cache_;
  mutable size_t steps_ = 0;
};

// anticommutator of psi^n_a psi^m_b in the orthonormal basis a, b in {x, y, z} = {1, 2, 3}
CComb orthonormal_psi(int n, int a);  // as a combination of single letters
CComb multiply(const CComb& a, const CComb& b);
CComb anticommutator(const QClifford& cl, int n, int a, int m, int b);

// ---------------------------------------------------------------- vacuum module

struct VacuumError : std::runtime_error {
  VacuumError(const std::string& w, size_t d) : std::runtime_error(w), dim(d) {}
  size_t dim;
};

struct VacuumModule {
  TruncatedModule spin;  // defining zero modes, basis (0,+1), (0,-1)
  std::map<int, Mat<QRat>> gamma;  // weight i -> action of A^0_i
  size_t kernel_dim = 0;
  QRat scale;
  const Mat<QRat>& operator[](int i) const { return gamma.at(i); }
};

VacuumModule build_vacuum(const QClifford& cl);
Report vacuum_report(const QClifford& cl, const VacuumModule& v);

// ---------------------------------------------------------------- Fock space

struct FockState {
  CWord creation;  // normal-ordered letters with A-mode < 0
  int spin = 1;
  friend bool operator<(const FockState& a, const FockState& b) {
    return std::tie(a.creation, a.spin) < std::tie(b.creation, b.spin);
  }
  friend bool operator==(const FockState& a, const FockState& b) {
    return a.creation == b.creation && a.spin == b.spin;
  }
  int energy() const;
  std::string str() const;
};
using FockVec = std::map<FockState, QRat>;
void add_to(FockVec& acc, const FockState& s, const QRat& c);

struct FockResult {
  FockVec vec;
  bool overflow = false;
};

class FockSpace {
 public:
  FockSpace(const QClifford& cl, int emax);

  int emax() const { return emax_; }
  const std::vector<FockState>& states() const { return states_; }
  const Basis& basis() const { return basis_; }
  const VacuumModule& vacuum() const { return vac_; }
  const QClifford& clifford() const { return cl_; }
  int index_of(const FockState& s) const;
  std::map<int, size_t> graded_dims() const;

  // word acting on |spin>, reduced to normal form (states above emax dropped, flagged)
  FockResult normal_form(const CComb& words, int spin) const;
  FockResult apply_psi(int n, int i, const FockVec& v) const;
  FockResult apply_word(const CWord& w, const FockVec& v) const;  // rightmost letter first
  Mat<QRat> psi_matrix(int n, int i, bool* overflow = nullptr) const;

  // iterated coproduct across letters (left to right) and the vacuum, then normal form
  FockResult uq_act(Gen x, const FockState& s) const;
  Mat<QRat> uq_action(Gen x, bool* overflow = nullptr) const;

 private:
  const QClifford& cl_;
  int emax_;
  VacuumModule vac_;
  std::vector<FockState> states_;
  Basis basis_;
  std::map<FockState, int> index_;
};

// creation words with total energy E that are ordered: the candidate basis
std::vector<CWord> ordered_creation_words(int E);
// dimension of the creation algebra (letters with A-mode < 0) modulo the ideal, at energy E
size_t creation_quotient_dim(const QClifford& cl, int E);
inline size_t classical_fermion_count(int E) {
  // coefficient of x^E in prod_n (1 + x^n)^3
  std::vector<size_t> c(size_t(E) + 1, 0);
  c[0] = 1;
  for (int n = 1; n <= E; ++n)
    for (int rep = 0; rep < 3; ++rep)
      for (int e = E; e >= n; --e) c[size_t(e)] += c[size_t(e - n)];
  return c[size_t(E)];
}

// (xy)z against x(yz) for all letters with psi-modes in [-R, R]
struct ConfluenceProbe {
  size_t words = 0, disagree = 0, disagree_at_q1 = 0;
  std::vector<std::string> examples;
};
ConfluenceProbe confluence_probe(const QClifford& cl, int R);

Report clifford_suite(const QClifford& cl, int emax = 3, int mode_range = 2);
Report fock_relation_report(const FockSpace& fs);

}  // namespace qaff
