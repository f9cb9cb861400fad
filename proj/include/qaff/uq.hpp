#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qaff/linalg.hpp"
#include "qaff/qscalar.hpp"
#include "qaff/report.hpp"

namespace qaff {

enum class Gen { E0, E1, F0, F1, K0, K1, K0inv, K1inv };
inline constexpr std::array<Gen, 8> kAllGens = {Gen::E0, Gen::E1, Gen::F0, Gen::F1,
                                                Gen::K0, Gen::K1, Gen::K0inv, Gen::K1inv};
inline int gidx(Gen g) { return int(g); }
std::string gen_name(Gen g);
Gen parse_gen(const std::string& s);
int gen_node(Gen g);           // 0 or 1
int gen_mode_shift(Gen g);     // e0: +1, f0: -1, else 0

// Operator word: w = {a, b, c} means a*b*c (c acts first). Empty word = 1.
using Word = std::vector<Gen>;
std::string word_name(const Word& w);

struct CartanData {
  std::array<std::array<int, 2>, 2> a;
  std::array<std::array<int, 2>, 2> alpha;
  static CartanData affine_sl2() { return {{{{2, -2}, {-2, 2}}}, {{{2, -2}, {-2, 2}}}}; }
};

// A represented module: labelled basis plus one matrix per generator.
struct Module {
  std::string name;
  Basis basis;
  std::array<Mat<QRat>, 8> act;

  const Mat<QRat>& operator[](Gen g) const { return act[size_t(gidx(g))]; }
  Mat<QRat> word(const Word& w) const;
  Mat<QRat> identity() const { return Mat<QRat>::identity(basis); }
};

enum class ModuleKind { Defining, Adjoint, Trivial };
std::string kind_name(ModuleKind k);

// (mode, weight) -> coefficient; unbounded loop vector
using LoopVec = std::map<std::pair<int, int>, QRat>;

// Action table on a single basis vector, before truncation.
std::vector<std::pair<QRat, std::pair<int, int>>> act_table(ModuleKind kind, Gen g, int n, int i);
std::vector<int> kind_weights(ModuleKind kind);

struct TruncatedModule : Module {
  ModuleKind kind = ModuleKind::Trivial;
  int lo = 0, hi = 0;

  int mode(int index) const { return basis[size_t(index)].parts[0][0]; }
  int weight(int index) const { return basis[size_t(index)].parts[0][1]; }
  int index_of(int n, int i) const;
  bool in_window(int n) const { return lo <= n && n <= hi; }
};

TruncatedModule build_module(ModuleKind kind, int lo, int hi);
inline TruncatedModule build_defining(int lo, int hi) { return build_module(ModuleKind::Defining, lo, hi); }
inline TruncatedModule build_adjoint(int lo, int hi) { return build_module(ModuleKind::Adjoint, lo, hi); }
TruncatedModule build_trivial();

// ---------------------------------------------------------------- Hopf structure

struct HopfTerm {
  QRat coef;
  Word left, right;
};

struct HopfConvention {
  std::string name;
  std::array<std::vector<HopfTerm>, 8> coproduct;
  std::array<std::pair<QRat, Word>, 8> antipode;
  std::array<QRat, 8> counit;

  static HopfConvention standard();
  const std::vector<HopfTerm>& delta(Gen g) const { return coproduct[size_t(gidx(g))]; }
  const std::pair<QRat, Word>& S(Gen g) const { return antipode[size_t(gidx(g))]; }
  QRat eps(Gen g) const { return counit[size_t(gidx(g))]; }
  // S of a word (antihomomorphism), as a sum with one term
  std::pair<QRat, Word> S(const Word& w) const;
};

Mat<QRat> hopf_tensor_action(Gen x, const Module& m1, const Module& m2, const HopfConvention& conv,
                             bool opposite = false);
Module tensor_module(const Module& m1, const Module& m2, const HopfConvention& conv, bool opposite = false);

// Columns whose every tensor factor has mode within [lo+margin, hi-margin].
std::vector<int> interior_columns(const Basis& b, int lo, int hi, int margin);

Report hopf_axiom_suite(const HopfConvention& conv, const TruncatedModule& m, int margin);

// ---------------------------------------------------------------- relations

struct Relation {
  std::string name;
  std::string anchor;
  std::vector<std::pair<QRat, Word>> terms;  // sum c_w w = 0
};

std::vector<Relation> defining_relations(const CartanData& cd = CartanData::affine_sl2());
int required_margin(const Relation& r);
int required_margin(const std::vector<Relation>& rs);

struct MarginError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Mat<QRat> relation_residual(const Relation& r, const TruncatedModule& m, int margin);
Report verify_relations(const TruncatedModule& m, int margin);

// adjoint action of a word on a loop vector; overflow set if support leaves [lo,hi]
struct ActResult {
  LoopVec vec;
  bool overflow = false;
};
ActResult adjoint_act(const Word& w, const LoopVec& a, int lo, int hi, ModuleKind kind = ModuleKind::Adjoint);

}  // namespace qaff
