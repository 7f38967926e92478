#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lagcalc/group.hpp"
#include "lagcalc/tensor.hpp"

namespace cli {

using json = nlohmann::json;

/// Malformed command-line values; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "a,b,c" into doubles. An empty string yields an empty vector.
std::vector<double> parse_doubles(const std::string& text, const std::string& option);
std::vector<int> parse_ints(const std::string& text, const std::string& option);
Eigen::VectorXd parse_vector(const std::string& text, const std::string& option,
                             Eigen::Index expected = -1);

/// Splits a flat (y..., t...) list into a group point.
lagcalc::GroupPoint parse_point(const lagcalc::StepTwoGroup& g, const std::string& text,
                                const std::string& option);

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
json point_json(const lagcalc::GroupPoint& p);

/// Shortest round-trip decimal form; identical for identical doubles.
std::string format_double(double v);

json tensor_to_json(const lagcalc::LaguerreTensor& t);
lagcalc::LaguerreTensor tensor_from_json(const json& j);
lagcalc::LaguerreTensor load_tensor(const std::string& path);

/// Writes text to `path`, or to stdout when path is empty.
void emit(const std::string& text, const std::string& path);

}  // namespace cli
