#include <Eigen/Dense>

#include <cmath>

#include "qaff/dirac.hpp"

namespace qaff {

Spectrum spectrum(const DiracMatrix& d, double q0) {
  if (!(q0 > 0)) throw std::invalid_argument("q0 must be positive");
  const Eigen::Index n = Eigen::Index(d.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  if (d.is_classical()) {
    for (Eigen::Index r = 0; r < n; ++r)
      for (const auto& [c, v] : d.classical.row(int(r)))
        m(r, c) = v.to_complex() * std::pow(2.0, 0.5 * (d.creations[size_t(r)] - d.creations[size_t(c)]));
  } else {
    for (Eigen::Index r = 0; r < n; ++r)
      for (const auto& [c, v] : d.deformed.row(int(r))) {
        std::complex<double> x = v.eval_numeric({q0, 0.0});
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
          throw PoleError("matrix entry has a pole at q0 = " + std::to_string(q0));
        m(r, c) = x;
      }
  }
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Spectrum s;
  if (n == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  for (Eigen::Index k = 0; k < n; ++k) s.values.push_back(es.eigenvalues()(k));
  for (double v : s.values) {
    if (v > 1e-9) ++s.positive;
    else if (v < -1e-9) ++s.negative;
    else ++s.zero;
  }
  for (size_t k = 0; k < s.values.size(); ++k)
    s.symmetry_defect = std::max(s.symmetry_defect, std::abs(s.values[k] + s.values[s.values.size() - 1 - k]));
  return s;
}

}  // namespace qaff
