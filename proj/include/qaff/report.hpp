#pragma once

#include <map>
#include <string>
#include <vector>

#include "qaff/linalg.hpp"
#include "qaff/qscalar.hpp"

namespace qaff {

enum class Status { Pass, Fail, Flagged };
inline const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    default: return "FLAGGED";
  }
}

struct Check {
  std::string name;
  std::string anchor;  // which displayed identity the check is about
  Status status = Status::Pass;
  size_t residual_nnz = 0;
  std::vector<std::string> residual;  // "row -> col : value" entries, capped
  std::map<std::string, std::string> params;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  std::map<std::string, std::string> config;

  bool all_pass() const {
    for (const auto& c : checks)
      if (c.status == Status::Fail) return false;
    return true;
  }
  size_t count(Status s) const {
    size_t n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
  }
  void append(const Report& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }
};

inline constexpr size_t kResidualCap = 40;

template <class F>
Check residual_check(std::string name, std::string anchor, const Mat<F>& residual) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual_nnz = residual.nnz();
  c.status = c.residual_nnz == 0 ? Status::Pass : Status::Fail;
  for (size_t r = 0; r < residual.nrows() && c.residual.size() < kResidualCap; ++r)
    for (const auto& [col, v] : residual.row(int(r))) {
      if (c.residual.size() >= kResidualCap) break;
      c.residual.push_back(residual.cols()[size_t(col)].str() + " -> " + residual.rows()[r].str() + " : " + v.str());
    }
  return c;
}

inline Check bool_check(std::string name, std::string anchor, bool ok, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.status = ok ? Status::Pass : Status::Fail;
  if (!ok && !detail.empty()) {
    c.residual.push_back(detail);
    c.residual_nnz = 1;
  }
  if (ok && !detail.empty()) c.params["detail"] = detail;
  return c;
}

}  // namespace qaff
