#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qaff/qclifford.hpp"
#include "qaff/report.hpp"
#include "qaff/uq.hpp"

namespace qaff {

// finitely supported A^n_i plus the coefficient of c
struct VectorPotential {
  std::map<std::pair<int, int>, QRat> coef;
  QRat central;

  QRat at(int n, int i) const {
    auto it = coef.find({n, i});
    return it == coef.end() ? QRat() : it->second;
  }
  void add(int n, int i, const QRat& c);
  VectorPotential scaled(const QRat& s) const;
  std::pair<int, int> mode_range() const;  // {0, 0} when empty
  bool empty() const { return coef.empty(); }
  std::string str() const;
};

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- classical fermions

// One Clifford Fock factor: zero-mode spinor index plus occupied creation modes,
// bit 3(n-1)+(a-1) for psi^n_a, n >= 1, a in {1,2,3}.
struct FState {
  int spin = 0;
  uint64_t occ = 0;
  auto operator<=>(const FState&) const = default;
  int energy() const;
  int count() const;
};

inline constexpr int kMaxCopies = 3;

// H_f (x) H_b; part[0] is H_f, part[1..copies] the H_b factors
struct PState {
  std::array<FState, kMaxCopies + 1> part{};
  auto operator<=>(const PState&) const = default;
  int energy(int nparts) const;
  int creations(int nparts) const;
};
using PVec = std::map<PState, GaussRat>;
void add_to(PVec& acc, const PState& s, const GaussRat& c);
PVec operator+(PVec a, const PVec& b);
PVec scaled(const PVec& v, const GaussRat& c);

struct ClassicalBackend {
  int copies = 1;
  int lo = -3, hi = 3;  // modes allowed in X, A
  int emax = 2;
  GaussRat c0 = 1;
  GaussRat kappa_eff, k_eff;
  Report relations;

  int nparts() const { return copies + 1; }
  GaussRat coefficient() const { return (k_eff + kappa_eff) / GaussRat(4); }
  int zero_dim(int part) const { return part == 0 ? 4 : 2; }

  PVec psi(int part, int n, int a, const PVec& v) const;
  PVec current(int part, int n, int a, const PVec& v) const;  // K on part 0, T-pieces on the others
  PVec T(int n, int a, const PVec& v) const;                  // sum over the H_b copies
  PVec J(int n, int a, const PVec& v) const { return current(0, n, a, v) + T(n, a, v); }
  PVec Q(const PVec& v) const;
  PVec psi_pair(const std::map<std::pair<int, int>, GaussRat>& y, const PVec& v) const;  // sum psi^p_d Y^-p_d
  PVec QA(const VectorPotential& A, const PVec& v) const;
  PVec grading(const PVec& v) const;

  std::vector<PState> states() const;  // total energy <= emax
  Label label(const PState& s) const;
};

// pre: window contains [-emax-1, emax+1]
ClassicalBackend classical_backend(int copies, int lo, int hi, int emax, GaussRat c0 = 1);

struct DiracMatrix {
  std::string backend;
  int emax = 0;
  Mat<GaussRat> classical;  // classical backend
  Mat<QRat> deformed;       // deformed backend
  std::vector<int> creations;  // per basis state, for the Fock norm 2^{#creations}
  size_t truncated = 0;        // entries dropped above the cutoff
  bool is_classical() const { return backend == "classical"; }
  size_t dim() const { return creations.size(); }
};

DiracMatrix build_Q(const ClassicalBackend& b);
DiracMatrix build_QA(const ClassicalBackend& b, const VectorPotential& A);
// G Q - (G Q)^dagger, G = diag(2^{#creations})
Mat<GaussRat> self_adjoint_residual(const DiracMatrix& d);

Report classical_relation_report(const ClassicalBackend& b);

// [Xhat, Q_A] - c <psi, [A,X] + dX> on all states of energy <= emax
Mat<GaussRat> classical_covariance(const ClassicalBackend& b, const VectorPotential& X, const VectorPotential& A);
std::map<std::pair<int, int>, GaussRat> bracket_plus_dX(const ClassicalBackend& b, const VectorPotential& X,
                                                        const VectorPotential& A);
Report classical_covariance_suite(const ClassicalBackend& b, int mode_lo = -1, int mode_hi = 1);

// ---------------------------------------------------------------- deformed level 0

struct Deformed0Backend {
  const FockSpace* fock = nullptr;
  TruncatedModule hb;  // adjoint loop window
  QRat coefficient = 1;
  Mat<QRat> T(int n, int i) const;  // shift by n after t_i
};

Deformed0Backend deformed0_backend(const FockSpace& fock, int lo, int hi, QRat coefficient = 1);
DiracMatrix build_Q(const Deformed0Backend& b);
DiracMatrix build_QA(const Deformed0Backend& b, const VectorPotential& A);

// sum_i A^{-n}_i psi^n_i on the Fock space: letter (m, j) weighted by A at (m, j)
Mat<QRat> psi_potential(const FockSpace& fs, const VectorPotential& A);

// sum x' L_A S(x'') - L_{x.A}, columns of energy <= interior_emax; fs.emax() must be >= interior_emax + 2
Mat<QRat> deformed_psi_covariance(Gen x, const VectorPotential& A, const FockSpace& fs, int interior_emax,
                                  const HopfConvention& conv = HopfConvention::standard());
Report deformed_covariance_suite(const FockSpace& fs, int interior_emax, int mode_lo = -1, int mode_hi = 1);

// ---------------------------------------------------------------- cocycle

struct Cocycle {
  std::map<std::pair<Gen, std::pair<int, int>>, QRat> values;
  QRat multiplier = 1;
  bool counit_twist = false;  // x.c = eps(x) c instead of 0

  static Cocycle level_one();
  QRat generator(Gen x, const LoopVec& a) const;
  // lambda_{x1}(x2..xk . A); with the twist, sum_j eps(x1..x_{j-1}) lambda_{xj}(x_{j+1}..xk . A)
  QRat word(const Word& w, const LoopVec& a) const;
};

Report cocycle_suite(const Cocycle& cx, int lo = -2, int hi = 2);

// ---------------------------------------------------------------- numerics

struct Spectrum {
  std::vector<double> values;
  size_t positive = 0, negative = 0, zero = 0;
  double symmetry_defect = 0;  // max |lambda_k + lambda_{N-1-k}|
};

// classical: conjugated by G^{1/2}; deformed: evaluated at q0; then (M + M^dagger)/2
Spectrum spectrum(const DiracMatrix& d, double q0 = 1.0);

}  // namespace qaff
