#include "qaff/json_io.hpp"

namespace qaff {

using nlohmann::json;

json report_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"status", status_name(c.status)},
                      {"residual_nnz", c.residual_nnz},
                      {"residual", c.residual},
                      {"params", c.params}});
  }
  return {{"suite", r.suite},
          {"version", kArtifactVersion},
          {"config", r.config},
          {"checks", checks},
          {"summary",
           {{"pass", r.count(Status::Pass)},
            {"fail", r.count(Status::Fail)},
            {"flagged", r.count(Status::Flagged)},
            {"all_pass", r.all_pass()}}}};
}

Report report_from_json(const json& j) {
  Report r;
  r.suite = j.at("suite").get<std::string>();
  r.config = j.at("config").get<std::map<std::string, std::string>>();
  for (const auto& c : j.at("checks")) {
    Check k;
    k.name = c.at("name").get<std::string>();
    k.anchor = c.at("anchor").get<std::string>();
    std::string s = c.at("status").get<std::string>();
    k.status = s == "PASS" ? Status::Pass : s == "FAIL" ? Status::Fail : Status::Flagged;
    k.residual_nnz = c.at("residual_nnz").get<size_t>();
    k.residual = c.at("residual").get<std::vector<std::string>>();
    k.params = c.at("params").get<std::map<std::string, std::string>>();
    r.checks.push_back(std::move(k));
  }
  return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json fock_basis_json(const FockSpace& fs) {
  json states = json::array();
  for (const auto& s : fs.states()) {
    int w = s.spin;
    for (const auto& l : s.creation) w += 2 * l.second;
    states.push_back({{"state", s.str()}, {"energy", s.energy()}, {"weight", w}});
  }
  json dims = json::object();
  for (const auto& [e, d] : fs.graded_dims()) dims[std::to_string(e)] = d;
  return {{"emax", fs.emax()}, {"states", states}, {"graded_dims", dims}};
}

VectorPotential potential_from_json(const json& j) {
  if (!j.is_object()) throw PotentialError("potential must be a JSON object");
  VectorPotential a;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw PotentialError("value for '" + k + "' must be a QRat string");
    QRat x;
    try {
      x = QRat::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw PotentialError("bad QRat for '" + k + "': " + e.what());
    }
    if (k == "central") {
      a.central = x;
      continue;
    }
    auto comma = k.find(',');
    if (comma == std::string::npos) throw PotentialError("key '" + k + "' is not of the form n,i");
    try {
      size_t p1 = 0, p2 = 0;
      int n = std::stoi(k.substr(0, comma), &p1), i = std::stoi(k.substr(comma + 1), &p2);
      if (p1 != comma || p2 != k.size() - comma - 1) throw std::invalid_argument("trailing");
      a.add(n, i, x);
    } catch (const std::logic_error&) {
      throw PotentialError("key '" + k + "' is not of the form n,i");
    }
  }
  return a;
}

json potential_json(const VectorPotential& a) {
  json j = json::object();
  for (const auto& [k, v] : a.coef) j[std::to_string(k.first) + "," + std::to_string(k.second)] = v.str();
  if (!a.central.is_zero()) j["central"] = a.central.str();
  return j;
}

}  // namespace qaff
