#pragma once

#include <json.hpp>

#include <string>

#include "qaff/dirac.hpp"
#include "qaff/linalg.hpp"
#include "qaff/report.hpp"

namespace qaff {

inline constexpr const char* kArtifactVersion = "0.1.0";

template <class F>
nlohmann::json mat_json(const Mat<F>& m) {
  nlohmann::json rows = nlohmann::json::array(), cols = nlohmann::json::array(), entries = nlohmann::json::array();
  for (const auto& l : m.rows()) rows.push_back(l.str());
  for (const auto& l : m.cols()) cols.push_back(l.str());
  for (size_t r = 0; r < m.nrows(); ++r)
    for (const auto& [c, v] : m.row(int(r))) entries.push_back({r, c, v.str()});
  return {{"rows", rows}, {"cols", cols}, {"entries", entries}};
}

nlohmann::json report_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
// stable text: sorted keys, two-space indent, trailing newline
std::string dump(const nlohmann::json& j);

nlohmann::json fock_basis_json(const FockSpace& fs);

struct PotentialError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
// {"n,i": "QRat", ..., "central": "QRat"}
VectorPotential potential_from_json(const nlohmann::json& j);
nlohmann::json potential_json(const VectorPotential& a);

}  // namespace qaff
