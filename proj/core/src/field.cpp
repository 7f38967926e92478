#include "lagcalc/field.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lagcalc/error.hpp"
#include "lagcalc/parallel.hpp"
#include "lagcalc/quadrature.hpp"

namespace lagcalc {

using cd = std::complex<double>;

Axis centered_axis(std::size_t count, double h) {
  if (count < 2 || !(h > 0.0)) throw GridError("count >= 2, h > 0", "centered_axis: bad arguments");
  const double lo = -static_cast<double>(count / 2) * h;
  return {lo, lo + h * static_cast<double>(count - 1), count};
}

SampledField::SampledField(std::vector<Axis> axes, std::vector<cd> values,
                           std::optional<FieldContext> context)
    : axes_(std::move(axes)), values_(std::move(values)), context_(std::move(context)) {
  if (axes_.empty()) throw GridError("at least one axis", "field needs at least one axis");
  std::size_t total = 1;
  for (const Axis& a : axes_) {
    if (a.count < 2) throw GridError("axis count >= 2", "field axis has fewer than two nodes");
    if (!(a.max > a.min)) throw GridError("axis max > min", "field axis has max <= min");
    total *= a.count;
  }
  if (total != values_.size())
    throw GridError("value count equals product of axis counts",
                    "field has " + std::to_string(values_.size()) + " values, grid has " +
                        std::to_string(total) + " nodes");
  strides_.assign(axes_.size(), 1);
  for (std::size_t a = axes_.size() - 1; a > 0; --a) strides_[a - 1] = strides_[a] * axes_[a].count;
}

SampledField::SampledField(std::vector<Axis> axes) {
  std::size_t total = 1;
  for (const Axis& a : axes) total *= a.count;
  *this = SampledField(std::move(axes), std::vector<cd>(total));
}

std::vector<std::size_t> SampledField::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    idx[a] = flat / strides_[a];
    flat %= strides_[a];
  }
  return idx;
}

std::size_t SampledField::flatten(const std::vector<std::size_t>& idx) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) flat += idx[a] * strides_[a];
  return flat;
}

Eigen::VectorXd SampledField::point(std::size_t flat) const {
  Eigen::VectorXd x(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    x(a) = axes_[a].at(flat / strides_[a]);
    flat %= strides_[a];
  }
  return x;
}

double SampledField::cell_volume() const noexcept {
  double v = 1.0;
  for (const Axis& a : axes_) v *= a.step();
  return v;
}

namespace {

// Catmull-Rom weights for offsets -1, 0, 1, 2 at fractional position s.
void cubic_weights(double s, double w[4]) {
  const double s2 = s * s, s3 = s2 * s;
  w[0] = 0.5 * (-s3 + 2 * s2 - s);
  w[1] = 0.5 * (3 * s3 - 5 * s2 + 2);
  w[2] = 0.5 * (-3 * s3 + 4 * s2 + s);
  w[3] = 0.5 * (s3 - s2);
}

}  // namespace

cd SampledField::interpolate(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != axes_.size())
    throw DimensionError("point dimension matches grid", "interpolate: dimension mismatch");
  const std::size_t d = axes_.size();
  std::vector<long> base(d);
  std::vector<std::array<double, 4>> w(d);
  for (std::size_t a = 0; a < d; ++a) {
    const double u = (x(a) - axes_[a].min) / axes_[a].step();
    if (u < -1.0 || u > static_cast<double>(axes_[a].count)) return 0.0;
    const double fl = std::floor(u);
    base[a] = static_cast<long>(fl);
    cubic_weights(u - fl, w[a].data());
  }
  cd sum = 0.0;
  const std::size_t corners = std::size_t{1} << (2 * d);
  for (std::size_t c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t flat = 0;
    bool inside = true;
    for (std::size_t a = 0; a < d && inside; ++a) {
      const int off = static_cast<int>((c >> (2 * a)) & 3u);
      const long i = base[a] - 1 + off;
      if (i < 0 || i >= static_cast<long>(axes_[a].count)) {
        inside = false;
        break;
      }
      weight *= w[a][off];
      flat += static_cast<std::size_t>(i) * strides_[a];
    }
    if (inside && weight != 0.0) sum += weight * values_[flat];
  }
  return sum;
}

double SampledField::l1_norm() const {
  std::vector<double> a(values_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(values_[i]);
  return pairwise_sum(a) * cell_volume();
}

double SampledField::l2_norm() const {
  std::vector<double> a(values_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::norm(values_[i]);
  return std::sqrt(pairwise_sum(a) * cell_volume());
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (const cd& v : values_) m = std::max(m, std::abs(v));
  return m;
}

SampledField sample_field(const std::vector<Axis>& axes, const PointFunction& f) {
  SampledField out(axes);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = f(out.point(i)); });
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "field container I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw FormatError("complete field container", "field file '" + path + "' is truncated");
  return v;
}

nlohmann::json sidecar(const SampledField& f) {
  nlohmann::json doc;
  doc["format"] = "lagcalc-field";
  doc["version"] = 1;
  doc["axes"] = nlohmann::json::array();
  for (const Axis& a : f.axes())
    doc["axes"].push_back({{"min", a.min}, {"max", a.max}, {"count", a.count}});
  if (f.context()) doc["context"] = {{"group", f.context()->group}, {"tau", f.context()->tau}};
  return doc;
}

}  // namespace

void write_field(const std::string& path, const SampledField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("writable output path", "cannot open '" + path + "' for writing");
  out.write("LCFIELD1", 8);
  put<std::uint64_t>(out, f.dim());
  for (const Axis& a : f.axes()) {
    put<double>(out, a.min);
    put<double>(out, a.max);
    put<std::uint64_t>(out, a.count);
  }
  for (const cd& v : f.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw FormatError("writable output path", "failed writing '" + path + "'");
  std::ofstream side(path + ".json");
  side << sidecar(f).dump(2) << "\n";
}

SampledField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("readable field file", "cannot open field file '" + path + "'");
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "LCFIELD1", 8) != 0)
    throw FormatError("field container magic", "'" + path + "' is not a lagcalc field file");
  const auto dims = get<std::uint64_t>(in, path);
  if (dims == 0 || dims > 16)
    throw FormatError("1..16 axes", "field file '" + path + "' has an invalid axis count");
  std::vector<Axis> axes(dims);
  std::size_t total = 1;
  for (auto& a : axes) {
    a.min = get<double>(in, path);
    a.max = get<double>(in, path);
    a.count = get<std::uint64_t>(in, path);
    if (a.count < 2 || a.count > (std::size_t{1} << 26) || !(a.max > a.min))
      throw FormatError("valid axis", "field file '" + path + "' has an invalid axis");
    total *= a.count;
    if (total > (std::size_t{1} << 30))
      throw FormatError("grid size limit", "field file '" + path + "' grid is too large");
  }
  std::vector<cd> values(total);
  for (auto& v : values) {
    const double re = get<double>(in, path);
    const double im = get<double>(in, path);
    v = cd(re, im);
  }
  std::optional<FieldContext> ctx;
  std::ifstream side(path + ".json");
  if (side) {
    try {
      const auto doc = nlohmann::json::parse(side);
      if (doc.contains("context")) {
        FieldContext c;
        c.group = doc["context"].value("group", "");
        c.tau = doc["context"].value("tau", std::vector<double>{});
        ctx = c;
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("valid field sidecar",
                        "sidecar '" + path + ".json' is malformed: " + e.what());
    }
  }
  return SampledField(std::move(axes), std::move(values), std::move(ctx));
}

std::string field_to_csv(const SampledField& f) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t a = 0; a < f.dim(); ++a) out << "x" << a << ",";
  out << "re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Eigen::VectorXd x = f.point(i);
    for (Eigen::Index a = 0; a < x.size(); ++a) out << x(a) << ",";
    out << f[i].real() << "," << f[i].imag() << "\n";
  }
  return out.str();
}

std::vector<Axis> parse_grid_spec(const std::string& spec, std::size_t dims) {
  std::vector<Axis> axes;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    Axis a;
    char c1 = 0, c2 = 0;
    std::istringstream ps(part);
    long long count = 0;
    if (!(ps >> a.min >> c1 >> a.max >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2 ||
        !(a.max > a.min) || !ps.eof())
      throw DomainError("grid spec min:max:count", "malformed grid spec '" + part + "'");
    a.count = static_cast<std::size_t>(count);
    axes.push_back(a);
  }
  if (axes.size() == 1 && dims > 1) axes.assign(dims, axes.front());
  if (axes.size() != dims)
    throw DimensionError("grid spec has one axis per dimension",
                         "grid spec has " + std::to_string(axes.size()) + " axes, expected " +
                             std::to_string(dims));
  return axes;
}

}  // namespace lagcalc
