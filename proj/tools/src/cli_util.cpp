#include "cli_util.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lagcalc/error.hpp"

namespace cli {

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) parts.push_back(cur);
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

std::vector<double> parse_doubles(const std::string& text, const std::string& option) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const std::string& raw : split(text)) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw UsageError(option + ": '" + s + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& option) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (const std::string& raw : split(text)) {
    const std::string s = trim(raw);
    int v = 0;
    const char* begin = s.data();
    if (!s.empty() && s[0] == '+') ++begin;
    const auto res = std::from_chars(begin, s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw UsageError(option + ": '" + s + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& option,
                             Eigen::Index expected) {
  const std::vector<double> v = parse_doubles(text, option);
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected)
    throw UsageError(option + ": expected " + std::to_string(expected) + " values, got " +
                     std::to_string(v.size()));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

lagcalc::GroupPoint parse_point(const lagcalc::StepTwoGroup& g, const std::string& text,
                                const std::string& option) {
  const Eigen::VectorXd v = parse_vector(text, option, g.m() + g.r());
  return {v.head(g.m()), v.tail(g.r())};
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}

json point_json(const lagcalc::GroupPoint& p) {
  Eigen::VectorXd flat(p.y.size() + p.t.size());
  flat << p.y, p.t;
  return to_json(flat);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json tensor_to_json(const lagcalc::LaguerreTensor& t) {
  json j;
  j["format"] = "lagcalc-tensor-1";
  j["n"] = t.n();
  j["K"] = t.K;
  j["tau"] = to_json(t.frame.tau);
  j["mu"] = to_json(t.frame.mu);
  j["min_gap"] = t.frame.min_gap;
  j["O"] = to_json(t.frame.O);
  j["re"] = to_json(Eigen::MatrixXd(t.F.real()));
  j["im"] = to_json(Eigen::MatrixXd(t.F.imag()));
  return j;
}

namespace {

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                                 const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw lagcalc::FormatError("tensor file layout", std::string("tensor field '") + what +
                                                         "' has the wrong number of rows");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw lagcalc::FormatError("tensor file layout", std::string("tensor field '") + what +
                                                           "' has a malformed row");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw lagcalc::FormatError("tensor file layout",
                                   std::string("tensor field '") + what + "' has a non-number");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

lagcalc::LaguerreTensor tensor_from_json(const json& j) {
  try {
    if (j.value("format", "") != "lagcalc-tensor-1")
      throw lagcalc::FormatError("tensor file layout", "not a lagcalc tensor file");
    const int n = j.at("n").get<int>(), K = j.at("K").get<int>();
    if (n < 1 || K < 1 || n > 8 || K > 64)
      throw lagcalc::FormatError("tensor file layout", "tensor sizes out of range");
    lagcalc::LaguerreTensor t;
    t.K = K;
    const Eigen::Index side = static_cast<Eigen::Index>(std::pow(K, n));
    const Eigen::MatrixXd tau = matrix_from_json(json::array({j.at("tau")}), 1,
                                                 static_cast<Eigen::Index>(j.at("tau").size()), "tau");
    t.frame.tau = tau.row(0).transpose();
    t.frame.mu = matrix_from_json(json::array({j.at("mu")}), 1, n, "mu").row(0).transpose();
    t.frame.min_gap = j.value("min_gap", 0.0);
    t.frame.O = matrix_from_json(j.at("O"), 2 * n, 2 * n, "O");
    t.F = matrix_from_json(j.at("re"), side, side, "re").cast<std::complex<double>>() +
          std::complex<double>(0, 1) *
              matrix_from_json(j.at("im"), side, side, "im").cast<std::complex<double>>();
    return t;
  } catch (const json::exception& e) {
    throw lagcalc::FormatError("tensor file layout", std::string("malformed tensor file: ") + e.what());
  }
}

lagcalc::LaguerreTensor load_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lagcalc::FormatError("readable tensor file", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw lagcalc::FormatError("tensor file layout", "'" + path + "' is not valid JSON");
  }
  return tensor_from_json(j);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw lagcalc::FormatError("writable output path", "cannot open '" + path + "' for writing");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace cli
