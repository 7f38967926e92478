#include "lagcalc/group.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lagcalc/error.hpp"

namespace lagcalc {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

void StepTwoGroup::check_point(const GroupPoint& p) const {
  if (p.y.size() != m() || p.t.size() != r_)
    throw DimensionError("point shape (2n, r)",
                         "point has shape (" + std::to_string(p.y.size()) + ", " +
                             std::to_string(p.t.size()) + "), group expects (" +
                             std::to_string(m()) + ", " + std::to_string(r_) + ")");
}

StepTwoGroup make_group(int n, int r, std::vector<MatrixXd> B, double skew_tol) {
  if (n < 1 || r < 1) throw DimensionError("n >= 1, r >= 1", "group dimensions must be positive");
  if (static_cast<int>(B.size()) != r)
    throw DimensionError("B has r entries", "expected " + std::to_string(r) +
                                                " structure matrices, got " +
                                                std::to_string(B.size()));
  for (int beta = 0; beta < r; ++beta) {
    MatrixXd& b = B[beta];
    if (b.rows() != 2 * n || b.cols() != 2 * n)
      throw DimensionError("B^beta is 2n x 2n", "structure matrix " + std::to_string(beta + 1) +
                                                     " is " + std::to_string(b.rows()) + "x" +
                                                     std::to_string(b.cols()));
    if (!b.allFinite())
      throw DomainError("finite structure matrices",
                        "structure matrix " + std::to_string(beta + 1) + " has non-finite entries");
    const double scale = b.cwiseAbs().maxCoeff();
    const double asym = (b + b.transpose()).cwiseAbs().maxCoeff();
    if (asym > skew_tol * scale) {
      std::ostringstream msg;
      msg << "structure matrix " << beta + 1 << " is not skew-symmetric (max |B+B^T| = " << asym
          << ")";
      throw DomainError("B^beta skew-symmetric", msg.str());
    }
    b = (0.5 * (b - b.transpose())).eval();
  }
  StepTwoGroup g;
  g.n_ = n;
  g.r_ = r;
  g.B_ = std::move(B);
  return g;
}

VectorXd b_form(const StepTwoGroup& g, const VectorXd& x, const VectorXd& y) {
  if (x.size() != g.m() || y.size() != g.m())
    throw DimensionError("vectors of length 2n", "b_form: length mismatch");
  VectorXd out(g.r());
  for (int beta = 0; beta < g.r(); ++beta) out(beta) = x.dot(g.B(beta) * y);
  return out;
}

GroupPoint multiply(const StepTwoGroup& g, const GroupPoint& a, const GroupPoint& b) {
  g.check_point(a);
  g.check_point(b);
  return {a.y + b.y, a.t + b.t + 2.0 * b_form(g, a.y, b.y)};
}

GroupPoint inverse(const StepTwoGroup& g, const GroupPoint& a) {
  g.check_point(a);
  return {-a.y, -a.t};
}

GroupPoint identity(const StepTwoGroup& g) {
  return {VectorXd::Zero(g.m()), VectorXd::Zero(g.r())};
}

MatrixXd b_tau(const StepTwoGroup& g, const VectorXd& tau) {
  if (tau.size() != g.r())
    throw DimensionError("tau has length r", "tau has length " + std::to_string(tau.size()) +
                                                  ", group has r = " + std::to_string(g.r()));
  MatrixXd out = MatrixXd::Zero(g.m(), g.m());
  for (int beta = 0; beta < g.r(); ++beta) out += tau(beta) * g.B(beta);
  return out;
}

VectorXd vector_field_coefficients(const StepTwoGroup& g, int k, const GroupPoint& p) {
  g.check_point(p);
  if (k < 0 || k >= g.m())
    throw DimensionError("field index in range",
                         "vector field index " + std::to_string(k) + " outside [0, 2n)");
  VectorXd c = VectorXd::Zero(g.m() + g.r());
  c(k) = 1.0;
  for (int beta = 0; beta < g.r(); ++beta) c(g.m() + beta) = 2.0 * g.B(beta).col(k).dot(p.y);
  return c;
}

GroupPoint dilate(const StepTwoGroup& g, double lambda, const GroupPoint& p) {
  g.check_point(p);
  if (!(lambda > 0.0)) throw DomainError("lambda > 0", "dilation factor must be positive");
  return {lambda * p.y, lambda * lambda * p.t};
}

namespace {

StepTwoGroup heisenberg(int n) {
  MatrixXd b = MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    b(2 * j, 2 * j + 1) = 1.0;
    b(2 * j + 1, 2 * j) = -1.0;
  }
  return make_group(n, 1, {b}, 0.0);
}

StepTwoGroup quaternionic() {
  MatrixXd b1(4, 4), b2(4, 4), b3(4, 4);
  b1 << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  b2 << 0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0;
  b3 << 0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0;
  return make_group(2, 3, {b1, b2, b3}, 0.0);
}

MatrixXd matrix_from_json(const json& entry, int m, int beta) {
  const std::string where = "structure matrix " + std::to_string(beta + 1);
  if (!entry.is_array()) throw FormatError("B entries are arrays", where + " is not an array");
  MatrixXd b = MatrixXd::Zero(m, m);
  auto number = [&](const json& v) {
    if (!v.is_number()) throw FormatError("numeric entries", where + " has a non-numeric entry");
    return v.get<double>();
  };
  const std::size_t full = static_cast<std::size_t>(m) * m;
  const std::size_t upper = static_cast<std::size_t>(m) * (m - 1) / 2;
  if (!entry.empty() && entry.front().is_array()) {
    if (entry.size() != static_cast<std::size_t>(m))
      throw FormatError("2n rows", where + " has " + std::to_string(entry.size()) + " rows");
    for (int i = 0; i < m; ++i) {
      if (!entry[i].is_array() || entry[i].size() != static_cast<std::size_t>(m))
        throw FormatError("rows of length 2n", where + " row " + std::to_string(i + 1) +
                                                   " has the wrong length");
      for (int j = 0; j < m; ++j) b(i, j) = number(entry[i][j]);
    }
  } else if (entry.size() == full) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b(i, j) = number(entry[i * m + j]);
  } else if (entry.size() == upper) {
    std::size_t idx = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        b(i, j) = number(entry[idx++]);
        b(j, i) = -b(i, j);
      }
  } else {
    throw FormatError("B entry of size (2n)^2 or (2n)(2n-1)/2",
                      where + " has " + std::to_string(entry.size()) + " entries");
  }
  return b;
}

}  // namespace

StepTwoGroup preset(std::string_view name) {
  if (name == "quaternionic-heisenberg") return quaternionic();
  constexpr std::string_view prefix = "heisenberg-";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string rest(name.substr(prefix.size()));
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && !rest.empty() && n >= 1 && n <= 64) return heisenberg(n);
  }
  throw DomainError("known preset name", "unknown group preset '" + std::string(name) + "'");
}

StepTwoGroup parse_group_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("valid JSON", std::string("group file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("r") || !doc.contains("B"))
    throw FormatError("group object with n, r, B", "group JSON must have keys n, r and B");
  if (!doc["n"].is_number_integer() || !doc["r"].is_number_integer())
    throw FormatError("integer n and r", "group JSON n and r must be integers");
  if (doc.contains("m") && doc["m"].is_number_integer() && doc["m"].get<int>() % 2 != 0)
    throw DimensionError("m = 2n even", "odd horizontal dimension is not supported");
  const int n = doc["n"].get<int>();
  const int r = doc["r"].get<int>();
  if (n < 1 || r < 1 || n > 64 || r > 64)
    throw DimensionError("1 <= n, r <= 64", "group dimensions out of range");
  const json& B = doc["B"];
  if (!B.is_array() || B.size() != static_cast<std::size_t>(r))
    throw DimensionError("B has r entries", "group JSON B must be a list of r matrices");
  std::vector<MatrixXd> mats;
  for (int beta = 0; beta < r; ++beta) mats.push_back(matrix_from_json(B[beta], 2 * n, beta));
  return make_group(n, r, std::move(mats), 0.0);
}

StepTwoGroup load_group_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("readable group file", "cannot open group file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_group_json(buf.str());
}

StepTwoGroup resolve_group(const std::string& spec) {
  constexpr std::string_view prefix = "preset:";
  if (spec.rfind(prefix, 0) == 0) return preset(spec.substr(prefix.size()));
  if (spec == "quaternionic-heisenberg" || spec.rfind("heisenberg-", 0) == 0) return preset(spec);
  return load_group_json(spec);
}

std::string group_to_json(const StepTwoGroup& g) {
  json doc;
  doc["n"] = g.n();
  doc["r"] = g.r();
  doc["B"] = json::array();
  for (int beta = 0; beta < g.r(); ++beta) {
    json rows = json::array();
    for (int i = 0; i < g.m(); ++i) {
      json row = json::array();
      for (int j = 0; j < g.m(); ++j) row.push_back(g.B(beta)(i, j));
      rows.push_back(row);
    }
    doc["B"].push_back(rows);
  }
  return doc.dump();
}

}  // namespace lagcalc
