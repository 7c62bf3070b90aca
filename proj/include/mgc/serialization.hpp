#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgc/bridge_gt.hpp"
#include "mgc/clifford_matchgate.hpp"
#include "mgc/combinatorics.hpp"
#include "mgc/dense.hpp"
#include "mgc/majorana.hpp"
#include "mgc/pairing.hpp"

namespace mgc {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {"n":..,"k":..,"terms":[{"masks":[..],"re":..,"im":..}]}, terms in
// lexicographic order of their mask lists
json operator_to_json(const OperatorExpansion& op);
OperatorExpansion operator_from_json(const json& j);

json weight_to_json(const HighestWeight& w);
json pattern_to_json(const GTPattern& p);
// {weight, source_pattern, target_pattern, operator}
json gt_element_to_json(const GTBasisElement& e);

// {"k":..,"x":{"[]":..,"[1,2]":..}}; zero counts are omitted
json occupancy_to_json(const PatternOccupancy& o);
PatternOccupancy occupancy_from_json(const json& j);

json config_to_json(const PairingConfig& c);
json gram_to_json(const Eigen::MatrixXcd& g);

// Accepts one operator, a list of operators or basis elements, or an
// object holding such a list under "elements".
std::vector<OperatorExpansion> operators_from_json(const json& j);

// [a0, a1, ..] real amplitudes or [[re, im], ..]; may be wrapped as
// {"amplitudes": [...]}
StateVec state_from_json(const json& j);

json bigint_to_json(const BigInt& z);

// 17 significant digits, scientific
std::string format_real(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string to_csv(const Table& t);
json to_json(const Table& t);

json result_record(const std::string& quantity, int n, int k, const std::string& mode, double value,
                   std::optional<double> stderr_, const std::string& formula);

json read_json_file(const std::string& path);

}  // namespace mgc
