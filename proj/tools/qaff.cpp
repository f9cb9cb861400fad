#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "qaff/braiding.hpp"
#include "qaff/dirac.hpp"
#include "qaff/json_io.hpp"
#include "qaff/qclifford.hpp"
#include "qaff/uq.hpp"

using namespace qaff;
using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Config {
  std::string window = "-6..6";
  int margin = 3;
  std::optional<int> emax;
  std::string q = "symbolic";
  std::string suites = "relations,hecke,clifford,covariance,cocycle";
  std::string backend = "classical";
  std::string format;
  std::string out;
  std::string kind = "adjoint";
  std::string potential;
  int sweep = 0;
  std::string target;

  int lo = -6, hi = 6;
  std::optional<double> q0;

  void resolve() {
    auto dots = window.find("..");
    if (dots == std::string::npos) throw UsageError("--window must look like A..B");
    try {
      lo = std::stoi(window.substr(0, dots));
      hi = std::stoi(window.substr(dots + 2));
    } catch (const std::logic_error&) {
      throw UsageError("--window must look like A..B");
    }
    if (lo > hi) throw UsageError("--window: empty range");
    if (margin < 0) throw UsageError("--margin must be nonnegative");
    if (emax && *emax < 0) throw UsageError("--emax must be nonnegative");
    if (backend != "classical" && backend != "deformed0") throw UsageError("--backend must be classical or deformed0");
    if (q != "symbolic") {
      double v = 0;
      try {
        if (q.find('/') != std::string::npos) v = mpq_class(q).get_d();
        else {
          size_t pos = 0;
          v = std::stod(q, &pos);
          if (pos != q.size()) throw std::invalid_argument(q);
        }
      } catch (const std::exception&) {
        throw UsageError("--q must be 'symbolic' or a positive rational");
      }
      if (!(v > 0)) throw UsageError("--q must be positive");
      q0 = v;
    }
  }

  json echo() const {
    json j = {{"window", window}, {"margin", margin}, {"q", q}, {"backend", backend}};
    if (emax) j["emax"] = *emax;
    return j;
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, sep);)
    if (!t.empty()) out.push_back(t);
  return out;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

std::map<std::string, std::string> flat(const json& j) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : j.items()) m[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return m;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Config& c) {
  if (!c.format.empty() && c.format != "json") throw UsageError("verify writes json only");
  auto suites = split(c.suites, ',');
  if (suites.empty()) throw UsageError("--suite: nothing selected");
  static const std::set<std::string> known = {"relations", "hecke", "clifford", "covariance", "cocycle",
                                              "normal-order"};
  for (const auto& s : suites)
    if (!known.count(s)) throw UsageError("unknown suite '" + s + "'");
  bool uses_relations = std::find(suites.begin(), suites.end(), "relations") != suites.end();
  if (uses_relations) {
    int need = required_margin(defining_relations());
    if (c.margin < need)
      throw UsageError("--margin " + std::to_string(c.margin) + " is below the relation word length " +
                       std::to_string(need));
    if (c.hi - c.lo < 2 * c.margin) throw UsageError("--window has no interior for this margin");
  }

  Report all;
  all.suite = "verify";
  all.config = flat(c.echo());
  all.config["suites"] = c.suites;
  for (const auto& s : suites) {
    Report r;
    if (s == "relations") {
      r = verify_relations(build_defining(c.lo, c.hi), c.margin);
      r.append(verify_relations(build_adjoint(c.lo, c.hi), c.margin));
    } else if (s == "hecke") {
      r = hecke_report(build_braid(ModuleKind::Defining));
      r.append(hecke_report(build_braid(ModuleKind::Adjoint)));
    } else if (s == "normal-order") {
      r = normal_order_suite(-3, 3);
    } else if (s == "clifford") {
      QClifford cl;
      r = clifford_suite(cl, c.emax.value_or(3));
    } else if (s == "covariance") {
      int e = c.emax.value_or(c.backend == "classical" ? 2 : 1);
      if (c.backend == "classical") {
        auto b = classical_backend(1, std::min(c.lo, -e - 1), std::max(c.hi, e + 1), e);
        r = b.relations;
        r.append(classical_covariance_suite(b));
      } else {
        QClifford cl;
        FockSpace fs(cl, e + 2);
        r = deformed_covariance_suite(fs, e);
      }
    } else if (s == "cocycle") {
      r = cocycle_suite(Cocycle::level_one(), c.lo + c.margin, c.hi - c.margin);
    }
    std::cerr << s << ": " << r.count(Status::Pass) << " pass, " << r.count(Status::Fail) << " fail, "
              << r.count(Status::Flagged) << " flagged\n";
    for (auto& ch : r.checks) ch.params["suite"] = s;
    all.append(r);
  }
  emit(c, dump(report_json(all)));
  return all.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------- build

json braid_json(const BraidOp& b) {
  json eig = json::array();
  for (const auto& e : b.eigen) eig.push_back({{"value", e.value.str()}, {"multiplicity", e.multiplicity}});
  return {{"kind", kind_name(b.kind)}, {"matrix", mat_json(b.R)}, {"eigenvalues", eig}};
}

VectorPotential load_potential(const Config& c) {
  if (c.potential.empty()) return {};
  std::ifstream f(c.potential);
  if (!f) throw PotentialError("cannot read potential file " + c.potential);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw PotentialError(std::string("potential file is not JSON: ") + e.what());
  }
  VectorPotential a = potential_from_json(j);
  for (const auto& [k, v] : a.coef) {
    bool ok = c.backend == "classical" ? (k.second >= 1 && k.second <= 3) : (k.second >= -1 && k.second <= 1);
    if (!ok) throw PotentialError("potential index " + std::to_string(k.second) + " invalid for " + c.backend);
  }
  return a;
}

struct DiracBuild {
  std::unique_ptr<QClifford> cl;
  std::unique_ptr<FockSpace> fs;
  std::optional<ClassicalBackend> classical;
  std::optional<Deformed0Backend> deformed;
  int emax = 0;

  DiracMatrix make(const VectorPotential& a) const {
    if (classical) return build_QA(*classical, a);
    return build_QA(*deformed, a);
  }
};

DiracBuild dirac_backend(const Config& c, int default_emax) {
  DiracBuild d;
  d.emax = c.emax.value_or(default_emax);
  if (c.backend == "classical") {
    d.classical = classical_backend(1, std::min(c.lo, -d.emax - 1), std::max(c.hi, d.emax + 1), d.emax);
  } else {
    d.cl = std::make_unique<QClifford>();
    d.fs = std::make_unique<FockSpace>(*d.cl, d.emax);
    d.deformed = deformed0_backend(*d.fs, c.lo, c.hi);
  }
  return d;
}

int cmd_build(const Config& c) {
  if (!c.format.empty() && c.format != "json") throw UsageError("build writes json only");
  if (c.target == "defining" || c.target == "adjoint") {
    TruncatedModule m = c.target == "defining" ? build_defining(c.lo, c.hi) : build_adjoint(c.lo, c.hi);
    if (!c.out.empty() && std::filesystem::is_directory(c.out)) {
      for (Gen g : kAllGens) {
        std::ofstream f(std::filesystem::path(c.out) / (c.target + "_" + gen_name(g) + ".json"));
        f << dump(mat_json(m[g]));
      }
      return 0;
    }
    json j = json::object();
    for (Gen g : kAllGens) j[gen_name(g)] = mat_json(m[g]);
    emit(c, dump({{"module", c.target}, {"window", c.window}, {"generators", j}}));
    return 0;
  }
  if (c.target == "braid") {
    if (c.kind != "defining" && c.kind != "adjoint") throw UsageError("--kind must be defining or adjoint");
    emit(c, dump(braid_json(build_braid(c.kind == "defining" ? ModuleKind::Defining : ModuleKind::Adjoint))));
    return 0;
  }
  if (c.target == "fock") {
    QClifford cl;
    FockSpace fs(cl, c.emax.value_or(2));
    emit(c, dump(fock_basis_json(fs)));
    return 0;
  }
  if (c.target == "dirac") {
    DiracBuild b = dirac_backend(c, 1);
    VectorPotential a = load_potential(c);
    DiracMatrix d = b.make(a);
    json meta = {{"backend", d.backend}, {"emax", d.emax}, {"dim", d.dim()}, {"truncated", d.truncated},
                 {"potential", potential_json(a)}};
    if (b.classical) {
      meta["kappa_eff"] = b.classical->kappa_eff.str();
      meta["k_eff"] = b.classical->k_eff.str();
      meta["self_adjoint"] = self_adjoint_residual(d).is_zero();
    } else {
      meta["window"] = c.window;
    }
    json m = d.is_classical() ? mat_json(d.classical) : mat_json(d.deformed);
    emit(c, dump({{"metadata", meta}, {"matrix", m}}));
    return 0;
  }
  throw UsageError("unknown build target '" + c.target + "'");
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Config& c) {
  std::string fmt = c.format.empty() ? "csv" : c.format;
  if (fmt != "csv" && fmt != "json") throw UsageError("--format must be csv or json");
  if (c.q == "symbolic" && c.backend == "deformed0") throw UsageError("spectrum needs a numeric --q");
  double q0 = c.q0.value_or(1.0);
  if (c.backend == "classical" && q0 != 1.0) throw UsageError("classical spectra are taken at q = 1");
  if (c.sweep < 0) throw UsageError("--sweep must be nonnegative");
  VectorPotential a = load_potential(c);
  std::string id = c.potential.empty() ? "0" : std::filesystem::path(c.potential).stem().string();
  DiracBuild b = dirac_backend(c, c.backend == "classical" ? 0 : 1);

  std::vector<std::pair<std::string, VectorPotential>> runs;
  if (c.sweep == 0) runs.emplace_back(id, a);
  else
    for (int k = 1; k <= c.sweep; ++k)
      runs.emplace_back(id + "*" + std::to_string(k) + "/" + std::to_string(c.sweep),
                        a.scaled(QRat(GaussRat(mpq_class(k, c.sweep)))));

  std::ostringstream csv;
  csv << "index,eigenvalue,cutoff,q0,potential-id\n";
  json rows = json::array();
  for (const auto& [pid, pot] : runs) {
    Spectrum s = spectrum(b.make(pot), q0);
    for (size_t k = 0; k < s.values.size(); ++k) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g", s.values[k]);
      csv << k << "," << buf << "," << b.emax << "," << q0 << "," << pid << "\n";
      rows.push_back({{"index", k}, {"eigenvalue", s.values[k]}, {"cutoff", b.emax}, {"q0", q0}, {"potential-id", pid}});
    }
    std::cerr << pid << ": " << s.positive << " positive, " << s.negative << " negative, " << s.zero
              << " zero, symmetry defect " << s.symmetry_defect << "\n";
  }
  emit(c, fmt == "csv" ? csv.str() : dump(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // let "--window -6..6" through: CLI11 would read the value as a flag
  std::vector<std::string> args(argv, argv + argc);
  for (size_t k = 1; k + 1 < args.size(); ++k)
    if (args[k] == "--window") {
      args[k] += "=" + args[k + 1];
      args.erase(args.begin() + long(k) + 1);
    }
  std::vector<char*> av;
  for (auto& s : args) av.push_back(s.data());

  Config c;
  CLI::App app{"exact computations for U_q(sl2^) modules, braidings, q-Clifford Fock spaces and Dirac operators"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_option("--window", c.window, "mode window A..B");
    s->add_option("--margin", c.margin, "interior margin");
    s->add_option("--emax", c.emax, "energy cutoff");
    s->add_option("--q", c.q, "symbolic or a positive rational");
    s->add_option("--backend", c.backend, "classical or deformed0");
    s->add_option("--format", c.format, "json or csv");
    s->add_option("--out", c.out, "output path (default stdout)");
  };
  auto* verify = app.add_subcommand("verify", "run verification suites");
  common(verify);
  verify->add_option("--suite", c.suites, "comma separated: relations,hecke,clifford,covariance,cocycle,normal-order");
  auto* build = app.add_subcommand("build", "dump an object as JSON");
  common(build);
  build->add_option("target", c.target, "defining, adjoint, braid, fock or dirac")->required();
  build->add_option("--kind", c.kind, "braid module: defining or adjoint");
  build->add_option("--potential", c.potential, "vector potential JSON file");
  auto* spect = app.add_subcommand("spectrum", "eigenvalues of Q_A");
  common(spect);
  spect->add_option("--potential", c.potential, "vector potential JSON file");
  spect->add_option("--sweep", c.sweep, "scale the potential by k/N, k = 1..N");

  try {
    app.parse(int(av.size()), av.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    c.resolve();
    if (*verify) return cmd_verify(c);
    if (*build) return cmd_build(c);
    return cmd_spectrum(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const MarginError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
