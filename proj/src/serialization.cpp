#include "mgc/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mgc {

namespace {

int get_int(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  const json& v = j.at(field);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

double get_real(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

std::string pattern_key(const std::vector<int>& rep) {
  std::string s = "[";
  for (std::size_t i = 0; i < rep.size(); ++i) s += (i ? "," : "") + std::to_string(rep[i]);
  return s + "]";
}

std::vector<int> parse_pattern_key(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("bad pattern key '" + s + "'");
  std::vector<int> out;
  std::string body = s.substr(1, s.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw ParseError("bad pattern key '" + s + "'");
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ParseError("bad pattern key '" + s + "'");
    }
  }
  return out;
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_null()) return "";
  std::string s = v.dump();
  return csv_cell(json(s));
}

}  // namespace

json operator_to_json(const OperatorExpansion& op) {
  std::vector<std::pair<std::vector<std::uint64_t>, cplx>> rows;
  for (const Term& t : op.terms()) rows.push_back({op.unpack(t.key), t.c});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  json terms = json::array();
  for (auto& [masks, c] : rows) terms.push_back({{"masks", masks}, {"re", c.real()}, {"im", c.imag()}});
  return {{"n", op.n()}, {"k", op.k()}, {"terms", terms}};
}

OperatorExpansion operator_from_json(const json& j) {
  int n = get_int(j, "n");
  int k = get_int(j, "k");
  if (n < 1 || k < 1) throw ParseError("n and k must be positive");
  if (2 * n * k > 64) throw ParseError("n*k too large for the key layout");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw ParseError("missing 'terms' array");
  OperatorExpansion shape(n, k);
  std::uint64_t limit = 2 * n >= 64 ? ~0ULL : (1ULL << (2 * n)) - 1;
  std::vector<Term> terms;
  for (const json& t : j.at("terms")) {
    if (!t.is_object() || !t.contains("masks") || !t.at("masks").is_array())
      throw ParseError("term needs a 'masks' array");
    const json& m = t.at("masks");
    if (static_cast<int>(m.size()) != k) throw ParseError("term has the wrong number of masks");
    std::vector<std::uint64_t> masks;
    for (const json& x : m) {
      if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0))
        throw ParseError("masks must be non-negative integers");
      std::uint64_t v = x.get<std::uint64_t>();
      if (v > limit) throw ParseError("mask names a mode beyond 2n");
      masks.push_back(v);
    }
    double re = t.contains("re") ? get_real(t.at("re"), "re") : 0.0;
    double im = t.contains("im") ? get_real(t.at("im"), "im") : 0.0;
    terms.push_back({shape.pack(masks), {re, im}});
  }
  return OperatorExpansion::from_terms(n, k, std::move(terms));
}

json weight_to_json(const HighestWeight& w) { return {{"k", w.k}, {"parts", w.parts}}; }

json pattern_to_json(const GTPattern& p) { return p.labels; }

json gt_element_to_json(const GTBasisElement& e) {
  return {{"weight", weight_to_json(e.weight)},
          {"source_pattern", pattern_to_json(e.source)},
          {"target_pattern", pattern_to_json(e.target)},
          {"operator", operator_to_json(e.op)}};
}

json occupancy_to_json(const PatternOccupancy& o) {
  json x = json::object();
  for (auto& [rep, c] : o.entries())
    if (c) x[pattern_key(rep)] = c;
  return {{"k", o.k}, {"x", x}};
}

PatternOccupancy occupancy_from_json(const json& j) {
  int k = get_int(j, "k");
  if (!j.contains("x") || !j.at("x").is_object()) throw ParseError("missing 'x' object");
  std::vector<std::pair<std::vector<int>, int>> entries;
  for (auto& [key, v] : j.at("x").items()) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ParseError("occupation numbers must be non-negative");
    entries.push_back({parse_pattern_key(key), v.get<int>()});
  }
  try {
    return occupancy_from_entries(k, entries);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

json config_to_json(const PairingConfig& c) { return {{"x", c.x}, {"label", c.str()}}; }

json gram_to_json(const Eigen::MatrixXcd& g) {
  json re = json::array(), im = json::array();
  for (Eigen::Index a = 0; a < g.rows(); ++a) {
    json r = json::array(), i = json::array();
    for (Eigen::Index b = 0; b < g.cols(); ++b) {
      r.push_back(g(a, b).real());
      i.push_back(g(a, b).imag());
    }
    re.push_back(r);
    im.push_back(i);
  }
  return {{"re", re}, {"im", im}};
}

std::vector<OperatorExpansion> operators_from_json(const json& j) {
  std::vector<OperatorExpansion> out;
  if (j.is_object() && j.contains("elements")) return operators_from_json(j.at("elements"));
  if (j.is_object() && j.contains("operator")) {
    out.push_back(operator_from_json(j.at("operator")));
    return out;
  }
  if (j.is_object()) {
    out.push_back(operator_from_json(j));
    return out;
  }
  if (!j.is_array()) throw ParseError("expected an operator or a list of operators");
  for (const json& e : j) {
    auto part = operators_from_json(e);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

StateVec state_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("amplitudes")) throw ParseError("state object needs 'amplitudes'");
    return state_from_json(j.at("amplitudes"));
  }
  if (!j.is_array() || j.empty()) throw ParseError("state must be a nonempty amplitude list");
  StateVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& a = j[i];
    if (a.is_number()) {
      v(i) = a.get<double>();
    } else if (a.is_array() && a.size() == 2) {
      v(i) = {get_real(a[0], "amplitude"), get_real(a[1], "amplitude")};
    } else {
      throw ParseError("amplitudes must be numbers or [re, im] pairs");
    }
  }
  return v;
}

json bigint_to_json(const BigInt& z) {
  if (z <= std::numeric_limits<long long>::max() && z >= std::numeric_limits<long long>::min())
    return z.convert_to<long long>();
  return z.str();
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + csv_cell(json(t.columns[c]));
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_cell(row[c]);
    out += "\n";
  }
  return out;
}

json to_json(const Table& t) {
  json out = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (std::size_t c = 0; c < t.columns.size() && c < row.size(); ++c) rec[t.columns[c]] = row[c];
    out.push_back(rec);
  }
  return out;
}

json result_record(const std::string& quantity, int n, int k, const std::string& mode, double value,
                   std::optional<double> stderr_, const std::string& formula) {
  json r = {{"quantity", quantity}, {"n", n}, {"k", k}, {"mode", mode}, {"value", value}};
  if (stderr_) r["stderr"] = *stderr_;
  r["formula_ref"] = formula;
  return r;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace mgc
