#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qaff/linalg.hpp"
#include "qaff/report.hpp"
#include "qaff/uq.hpp"

namespace qaff {

struct EigenData {
  QRat value;
  int multiplicity = 0;
  Mat<QRat> projector;
};

struct BraidOp {
  ModuleKind kind = ModuleKind::Defining;
  TruncatedModule zero;  // window [0,0]
  Module square;         // zero (x) zero
  Mat<QRat> R, Rinv;
  std::vector<EigenData> eigen;
  std::vector<int> submodule_dims;  // in order of discovery (highest weight first)

  std::vector<QRat> eigenvalues() const;
  std::vector<int> weights() const { return kind_weights(kind); }
};

struct ConventionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigenvalue attached to an irreducible piece of the given dimension.
QRat piece_eigenvalue(ModuleKind kind, int dim);

BraidOp build_braid(ModuleKind kind, const HopfConvention& hopf = HopfConvention::standard());

// coefficients of prod (x - mu) (ascending powers, monic)
std::vector<QRat> poly_from_roots(const std::vector<QRat>& roots);
// R^-1 as a polynomial in R via the minimal polynomial
Mat<QRat> inverse_via_minpoly(const Mat<QRat>& R, const std::vector<QRat>& roots);

Report hecke_report(const BraidOp& b);

// ---------------------------------------------------------------- mode rules

// R Y1 = Y2 R^-1, R Y2 = Y1 R + C Y2, R^-1 Y1 = Y2 R^-1 - C Y1, R^-1 Y2 = Y1 R
// C acts on the zero-mode square; Y1, Y2 shift the mode of the first/second factor.
struct ModeRules {
  ModuleKind kind = ModuleKind::Defining;
  Mat<QRat> R0, R0inv, C;
  std::string coefficient;  // human-readable coefficient description
  std::vector<std::string> describe() const;
};

ModeRules mode_rules_with(const BraidOp& b, const Mat<QRat>& C, std::string label);
ModeRules mode_rules_with(const BraidOp& b, const QRat& scalar);
// Derived operator coefficient C = R0 - R0^-1
ModeRules derived_mode_rules(const BraidOp& b);

struct ModeRuleError : std::runtime_error {
  ModeRuleError(const std::string& w, Report r) : std::runtime_error(w), report(std::move(r)) {}
  Report report;
};

// Validated rule set: throws ModeRuleError (carrying the residual report) on inconsistency.
ModeRules derive_mode_rules(const BraidOp& b, const Mat<QRat>& C, std::string label);
ModeRules derive_mode_rules(const BraidOp& b, const QRat& scalar);

using PairKey = std::array<int, 4>;  // n1, i1, n2, i2
using PairVec = std::map<PairKey, QRat>;
void add_to(PairVec& acc, const PairKey& k, const QRat& c);

enum class PushOrder { Y1First, Y2First };

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loop braiding on pairs of loop-module vectors, computed by pushing R through the shifts.
class LoopBraid {
 public:
  using Terms = std::map<std::pair<int, int>, Mat<QRat>>;

  explicit LoopBraid(ModeRules rules, PushOrder order = PushOrder::Y1First, int central_offset = 0,
                     size_t budget = 10000);

  const ModeRules& rules() const { return rules_; }
  const std::vector<int>& weights() const { return weights_; }
  const Basis& zero_square() const { return rules_.R0.rows(); }

  // R^{+-1} Y1^a Y2^b w = sum_{(x,y)} Y1^x Y2^y M w, with a, b >= 0
  const Terms& push(int a, int b, bool inv) const;

  PairVec apply(const PairVec& v, bool inv = false) const;
  PairVec apply(const PairKey& k, bool inv = false) const { return apply(PairVec{{k, QRat(1)}}, inv); }

  static Basis block_basis(int N, int lo, int hi, const std::vector<int>& weights);
  Mat<QRat> block(int N, int lo, int hi, bool inv = false) const;
  int zero_index(int i1, int i2) const;

 private:
  ModeRules rules_;
  PushOrder order_;
  int central_offset_;
  size_t budget_;
  std::vector<int> weights_;
  mutable std::map<std::tuple<int, int, bool>, Terms> cache_;
  mutable size_t steps_ = 0;
};

// R on Y-monomials built from the first rule and a quadratic minimal polynomial only.
PairVec first_rule_apply(const BraidOp& b, const PairKey& k, bool inv);

// Consistency report for a rule set (inverse, push-order independence, centrality, minimal polynomials).
Report mode_rule_report(const BraidOp& b, const ModeRules& rules, const std::string& tag);
// Full Y-relation report for a kind: displayed coefficient, derived coefficient, second-from-first claim.
Report yrelation_report(const BraidOp& b);
// Loop-level equivariance of the rewritten R on a window [0, L] (informational).
Report loop_equivariance_report(const BraidOp& b, int L);

// ---------------------------------------------------------------- normal ordering

struct NormalOrderResult {
  PairVec out;
  size_t steps = 0;
};

bool mode_ordered(const PairKey& k);  // n1 <= n2

// Defining kind: x == mu_keep^-1 R x modulo the ideal, until all modes are ordered.
NormalOrderResult normal_order(const LoopBraid& lb, const PairVec& word, const QRat& keep_eigenvalue);
NormalOrderResult normal_order(const LoopBraid& lb, const PairKey& k, const QRat& keep_eigenvalue);

// Decomposition of a block vector into (ideal part) + (ordered part), the ideal being
// the span of the given eigenvalues of the loop R on the block [lo, hi] of total mode N.
struct BlockSplit {
  PairVec ideal, ordered;
};
class OrderedComplement {
 public:
  OrderedComplement(const LoopBraid& lb, std::vector<QRat> all_eigenvalues, std::vector<QRat> ideal_eigenvalues,
                    bool strict_equal_modes);
  // pair must be a block basis element; its block is [min(n1,n2), max(n1,n2)]
  BlockSplit split(const PairKey& k) const;
  bool is_ordered(const PairKey& k) const;
  const Mat<QRat>& ideal_projector(int N, int lo, int hi) const;

 private:
  struct BlockData {
    Basis basis;
    Mat<QRat> P;        // projector onto the ideal eigenspaces
    Mat<QRat> solver;   // inverse of [ideal basis | ordered units]
    std::vector<SparseVec<QRat>> ideal_basis;
    std::vector<int> ordered_idx;
  };
  const BlockData& data(int N, int lo, int hi) const;

  const LoopBraid& lb_;
  std::vector<QRat> all_, ideal_;
  bool strict_;
  mutable std::map<std::tuple<int, int, int>, BlockData> blocks_;
};

Report normal_order_suite(int lo, int hi, size_t budget = 10000);

}  // namespace qaff
