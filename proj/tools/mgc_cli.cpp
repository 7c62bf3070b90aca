// mgc: command-line front end for the matchgate commutant toolkit.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mgc/applications.hpp"
#include "mgc/bridge_gt.hpp"
#include "mgc/clifford_matchgate.hpp"
#include "mgc/pairing.hpp"
#include "mgc/serialization.hpp"
#include "mgc/verify.hpp"

using namespace mgc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::string n = "1";
  std::string k = "2";
  std::uint64_t seed = 7;
  int samples = 10000;
  double tolerance = 1e-9;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool ranges) {
  cmd->add_option("--n", c.n, ranges ? "qubits, a value or a range lo:hi" : "qubits");
  cmd->add_option("--k", c.k, ranges ? "replicas, a value or a range lo:hi" : "replicas");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--samples", c.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", c.tolerance, "numerical tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "write output to this file instead of stdout");
}

std::pair<int, int> parse_range(const std::string& s, const char* what) {
  auto colon = s.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {v, v};
    }
    std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    int lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    int hi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    if (hi < lo) throw UsageError(std::string("empty range for --") + what);
    return {lo, hi};
  } catch (const UsageError&) {
    throw;
  } catch (const std::logic_error&) {
    throw UsageError(std::string("bad value for --") + what + ": '" + s + "'");
  }
}

int single(const std::string& s, const char* what) {
  auto [lo, hi] = parse_range(s, what);
  if (lo != hi) throw UsageError(std::string("--") + what + " takes a single value here");
  return lo;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write '" + c.out + "'");
  f << text;
}

// flat records -> CSV; columns in order of first appearance
std::string records_csv(const json& records) {
  Table t;
  for (const json& r : records)
    for (auto& [key, v] : r.items())
      if (std::find(t.columns.begin(), t.columns.end(), key) == t.columns.end()) t.columns.push_back(key);
  for (const json& r : records) {
    std::vector<json> row;
    for (auto& col : t.columns) row.push_back(r.contains(col) ? r.at(col) : json());
    t.rows.push_back(std::move(row));
  }
  return to_csv(t);
}

void emit_records(const Common& c, const json& records) {
  emit(c, c.format == "csv" ? records_csv(records) : records.dump(2) + "\n");
}

void require_json(const Common& c, const char* cmd) {
  if (c.format != "json") throw UsageError(std::string(cmd) + " only writes JSON");
}

// --- commands -------------------------------------------------------------

int cmd_dim(const Common& c) {
  auto [n0, n1] = parse_range(c.n, "n");
  auto [k0, k1] = parse_range(c.k, "k");
  if (n0 < 1 || k0 < 1) throw UsageError("n and k must be positive");
  Table t{{"n", "k", "dim_matchgate", "dim_clifford_matchgate", "equal"}, {}};
  for (int n = n0; n <= n1; ++n)
    for (int k = k0; k <= k1; ++k) {
      BigInt mg = commutant_dim(n, k), cm = cm_dim(n, k);
      t.rows.push_back({n, k, bigint_to_json(mg), bigint_to_json(cm), mg == cm});
    }
  emit(c, c.format == "csv" ? to_csv(t) : to_json(t).dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const Common& c, const std::string& level, bool samples_given) {
  VerifyOptions opt;
  opt.level = level == "full" ? VerifyLevel::Full : VerifyLevel::Quick;
  opt.seed = c.seed;
  opt.samples = samples_given ? c.samples : 0;
  auto results = run_verification(opt);
  if (c.format == "json") {
    json arr = json::array();
    for (auto& r : results)
      arr.push_back({{"id", r.id}, {"name", r.name}, {"status", status_name(r.status)},
                     {"residual", r.residual}, {"detail", r.detail}});
    emit(c, arr.dump(2) + "\n");
  } else {
    emit(c, format_report(results));
  }
  return all_passed(results) ? kExitOk : kExitCheck;
}

json gram_metadata(const std::vector<OperatorExpansion>& ops, double tol, bool expect_identity) {
  json meta = json::object();
  Eigen::MatrixXcd g = gram_matrix(ops);
  meta["rank"] = gram_rank(g, tol);
  if (expect_identity) {
    double dev = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    meta["max_deviation_from_identity"] = dev;
    meta["identity"] = dev <= std::max(tol, 1e-7);
  }
  if (g.rows() <= 64) meta["gram"] = gram_to_json(g);
  return meta;
}

int cmd_basis(const Common& c, const std::string& which) {
  require_json(c, "basis");
  int n = single(c.n, "n"), k = single(c.k, "k");
  if (n < 1 || k < 1) throw UsageError("n and k must be positive");
  json doc = {{"n", n}, {"k", k}, {"which", which}};
  json elements = json::array();
  std::vector<OperatorExpansion> ops;
  if (which == "gt") {
    for (auto& e : gt_basis(n, k)) {
      elements.push_back(gt_element_to_json(e));
      ops.push_back(std::move(e.op));
    }
  } else if (which == "pairing") {
    for (auto& r : weight_tuples(n, k))
      for (auto& [cfg, op] : sector_pairings(r, n)) {
        elements.push_back({{"config", config_to_json(cfg)}, {"operator", operator_to_json(op)}});
        ops.push_back(std::move(op));
      }
  } else {
    if (n * k > 12) throw CapacityError("pattern basis export is gated to nk <= 12");
    for (auto& o : enumerate_occupancies(n, k)) {
      auto op = pattern_operator(o, n, true);
      elements.push_back({{"occupancy", occupancy_to_json(o)}, {"operator", operator_to_json(op)}});
      ops.push_back(std::move(op));
    }
  }
  doc["count"] = ops.size();
  doc["metadata"] = gram_metadata(ops, c.tolerance, which != "pairing");
  doc["elements"] = elements;
  emit(c, doc.dump() + "\n");
  return kExitOk;
}

int cmd_twirl(const Common& c, const std::string& input, const std::string& ensemble, const std::string& basis_file,
              const std::string& expect_file) {
  require_json(c, "twirl");
  auto w = operator_from_json(read_json_file(input));
  OperatorExpansion out;
  if (!basis_file.empty()) {
    // project onto an exported orthonormal basis
    auto ops = operators_from_json(read_json_file(basis_file));
    out = OperatorExpansion(w.n(), w.k());
    for (auto& o : ops) {
      if (o.n() != w.n() || o.k() != w.k()) throw UsageError("basis and operator shapes differ");
      out += hs_inner(o, w) * o;
    }
  } else if (ensemble == "matchgate") {
    out = matchgate_twirl(w);
  } else {
    out = cm_twirl(w);
  }
  emit(c, operator_to_json(out).dump() + "\n");
  if (!expect_file.empty()) {
    auto ref = operator_from_json(read_json_file(expect_file));
    if (ref.n() != out.n() || ref.k() != out.k()) throw UsageError("reference operator has another shape");
    double dev = max_coeff_diff(ref, out);
    std::cerr << "max coefficient deviation from reference: " << format_real(dev) << "\n";
    if (dev > c.tolerance) return kExitCheck;
  }
  return kExitOk;
}

int cmd_frame_potential(const Common& c, const std::string& kind, const std::string& ensemble,
                        const std::vector<std::string>& modes) {
  auto [n0, n1] = parse_range(c.n, "n");
  auto [k0, k1] = parse_range(c.k, "k");
  if (n0 < 1 || k0 < 1) throw UsageError("n and k must be positive");
  Ensemble e = ensemble == "matchgate" ? Ensemble::Matchgate : Ensemble::CliffordMatchgate;
  json records = json::array();
  for (int n = n0; n <= n1; ++n)
    for (int k = k0; k <= k1; ++k)
      for (const auto& mode : modes) {
        if (kind == "unitary") {
          if (e != Ensemble::Matchgate) throw UsageError("unitary frame potential is for the matchgate ensemble");
          if (mode == "closed") {
            records.push_back(result_record("unitary_frame_potential", n, k, mode,
                                            to_double(unitary_frame_potential_closed(n, k)), std::nullopt,
                                            "commutant dimension product"));
          } else if (mode == "rmt") {
            records.push_back(result_record("unitary_frame_potential", n, k, mode,
                                            to_double(unitary_frame_potential_rmt(n, k)), std::nullopt,
                                            "Gamma-function product"));
          } else if (mode == "mc") {
            auto m = unitary_frame_potential_mc(n, k, c.samples, c.seed);
            records.push_back(result_record("unitary_frame_potential", n, k, mode, m.value, m.stderr_,
                                            "E|Tr U|^{2k}"));
          } else {
            throw UsageError("mode '" + mode + "' does not apply to the unitary frame potential");
          }
        } else {
          std::string q = e == Ensemble::Matchgate ? "state_frame_potential" : "cm_state_frame_potential";
          if (mode == "closed") {
            records.push_back(result_record(q, n, k, mode, to_double(state_frame_potential_closed(n, k, e)),
                                            std::nullopt,
                                            e == Ensemble::Matchgate ? "1/Tr P0" : "pattern generating function"));
          } else if (mode == "selberg") {
            if (e != Ensemble::Matchgate) throw UsageError("the Selberg form is for the matchgate ensemble");
            records.push_back(result_record(q, n, k, mode, state_frame_potential_selberg(n, k), std::nullopt,
                                            "Selberg Gamma product"));
          } else if (mode == "mc") {
            auto m = state_frame_potential_mc(n, k, e, c.samples, c.seed);
            records.push_back(result_record(q, n, k, mode, m.value, m.stderr_, "E|<0|U|0>|^{2k}"));
          } else {
            throw UsageError("mode '" + mode + "' does not apply to the state frame potential");
          }
        }
      }
  emit_records(c, records);
  return kExitOk;
}

int cmd_sre(const Common& c) {
  auto [n0, n1] = parse_range(c.n, "n");
  if (n0 < 1) throw UsageError("n must be positive");
  json records = json::array();
  for (int n = n0; n <= n1; ++n) {
    records.push_back(result_record("sre_annealed", n, 4, "closed", sre_annealed_closed(n), std::nullopt,
                                    "-log2(2^n / C_{n+1})"));
    if (n <= 2)
      records.push_back(result_record("sre_annealed", n, 4, "direct", sre_annealed_direct(n), std::nullopt,
                                      "k=4 twirl of the vacuum against Q4"));
    records.push_back(result_record("sre_asymptotic", n, 4, "asymptotic", sre_asymptotic(n, true), std::nullopt,
                                    "large-n expansion with the 1/n term"));
  }
  emit_records(c, records);
  return kExitOk;
}

int cmd_definetti(const Common& c, int l) {
  auto [n0, n1] = parse_range(c.n, "n");
  auto [k0, k1] = parse_range(c.k, "k");
  if (n0 < 1 || k0 < 1) throw UsageError("n and k must be positive");
  if (l < 1 || l >= k0) throw UsageError("need 1 <= l < k");
  json records = json::array();
  for (int n = n0; n <= n1; ++n)
    for (int k = k0; k <= k1; ++k) {
      json r = {{"n", n}, {"k", k}, {"l", l}, {"bound", definetti_bound(n, k, l)},
                {"ratio", definetti_ratio(n, k, l)},
                {"ratio_via_trace", vacuum_trace(n, k - l) / vacuum_trace(n, k)}};
      records.push_back(r);
    }
  emit_records(c, records);
  return kExitOk;
}

int cmd_nongauss(const Common& c, const std::string& state_file, const std::vector<std::string>& measures) {
  StateVec psi = state_from_json(read_json_file(state_file));
  int k = single(c.k, "k");
  auto size = static_cast<std::uint64_t>(psi.size());
  if (size < 2 || (size & (size - 1))) throw UsageError("state length must be a power of two");
  int n = 0;
  while ((std::uint64_t{1} << n) < size) ++n;
  json records = json::array();
  for (const auto& m : measures) {
    if (m == "faf") {
      records.push_back(result_record("faf", n, k, "covariance", faf(psi, k), std::nullopt, "n - Tr[(M^T M)^k]/2"));
    } else if (m == "phi0") {
      records.push_back(result_record("phi0", n, k, "projector", phi0(psi, k), std::nullopt, "Tr[P0 rho^{(x)k}]"));
    } else if (m == "residual") {
      records.push_back(result_record("gaussianity_residual", n, 2, "bridge", gaussianity_residual(psi), std::nullopt,
                                      "||Lambda psi(x)psi||"));
    } else if (m == "covariance") {
      if (c.format == "csv") throw UsageError("the covariance matrix is only written as JSON");
      RealMatrix cov = covariance_matrix(psi);
      json rows = json::array();
      for (Eigen::Index a = 0; a < cov.rows(); ++a) {
        json row = json::array();
        for (Eigen::Index b = 0; b < cov.cols(); ++b) row.push_back(cov(a, b));
        rows.push_back(row);
      }
      records.push_back({{"quantity", "covariance"}, {"n", n}, {"value", rows}});
    } else {
      throw UsageError("unknown measure '" + m + "'");
    }
  }
  emit_records(c, records);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matchgate and Clifford-matchgate commutant toolkit"};
  app.require_subcommand(1);

  Common c;
  auto* dim = app.add_subcommand("dim", "commutant dimensions for both ensembles");
  add_common(dim, c, true);

  std::string level = "quick";
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, c, false);
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  std::string which = "gt";
  auto* basis = app.add_subcommand("basis", "export a commutant basis");
  add_common(basis, c, false);
  basis->add_option("--which", which, "gt, pairing or pattern")->check(CLI::IsMember({"gt", "pairing", "pattern"}));

  std::string input, ensemble = "matchgate", basis_file, expect_file;
  auto* twirl = app.add_subcommand("twirl", "twirl an operator read from JSON");
  add_common(twirl, c, false);
  twirl->add_option("--input", input, "operator JSON file")->required()->check(CLI::ExistingFile);
  twirl->add_option("--ensemble", ensemble, "matchgate or clifford-matchgate")
      ->check(CLI::IsMember({"matchgate", "clifford-matchgate"}));
  twirl->add_option("--basis", basis_file, "project onto an exported basis instead")->check(CLI::ExistingFile);
  twirl->add_option("--expect", expect_file, "fail unless the result matches this operator within --tolerance")
      ->check(CLI::ExistingFile);

  std::string kind = "unitary";
  std::vector<std::string> modes = {"closed"};
  auto* fp = app.add_subcommand("frame-potential", "unitary or state frame potentials");
  add_common(fp, c, true);
  fp->add_option("--kind", kind, "unitary or state")->check(CLI::IsMember({"unitary", "state"}));
  fp->add_option("--ensemble", ensemble, "matchgate or clifford-matchgate")
      ->check(CLI::IsMember({"matchgate", "clifford-matchgate"}));
  fp->add_option("--mode", modes, "closed, rmt, selberg, mc (repeatable)")
      ->check(CLI::IsMember({"closed", "rmt", "selberg", "mc"}));

  auto* sre = app.add_subcommand("sre", "annealed stabilizer Renyi entropy of Gaussian states");
  add_common(sre, c, true);

  int l = 1;
  auto* dft = app.add_subcommand("definetti", "Gaussian de Finetti bound and ratio");
  add_common(dft, c, true);
  dft->add_option("--l", l, "traced-out replicas")->required();

  std::string state_file;
  std::vector<std::string> measures = {"faf", "phi0", "residual"};
  auto* ng = app.add_subcommand("nongauss", "non-Gaussianity measures of a pure state");
  add_common(ng, c, false);
  ng->add_option("--state", state_file, "amplitude list JSON file")->required()->check(CLI::ExistingFile);
  ng->add_option("--measures", measures, "faf, phi0, residual, covariance")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dim->parsed()) return cmd_dim(c);
    if (verify->parsed()) return cmd_verify(c, level, verify->count("--samples") > 0);
    if (basis->parsed()) return cmd_basis(c, which);
    if (twirl->parsed()) return cmd_twirl(c, input, ensemble, basis_file, expect_file);
    if (fp->parsed()) return cmd_frame_potential(c, kind, ensemble, modes);
    if (sre->parsed()) return cmd_sre(c);
    if (dft->parsed()) return cmd_definetti(c, l);
    if (ng->parsed()) return cmd_nongauss(c, state_file, measures);
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ParseError& e) {
    std::cerr << "input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheck;
  }
  return kExitUsage;
}
