#include "commands.hpp"

#include <filesystem>
#include <sstream>

#include "cli_util.hpp"
#include "lagcalc/error.hpp"
#include "lagcalc/field.hpp"
#include "lagcalc/kernels.hpp"
#include "lagcalc/laguerre.hpp"
#include "lagcalc/parallel.hpp"
#include "lagcalc/spectral.hpp"
#include "lagcalc/tensor.hpp"
#include "lagcalc/twisted.hpp"
#include "selftest.hpp"

namespace cli {

using lagcalc::GroupPoint;
using lagcalc::SampledField;
using lagcalc::StepTwoGroup;
using Eigen::VectorXd;
using cd = std::complex<double>;

struct CommandState {
  std::string group = "preset:heisenberg-1";
  std::string tau;
  std::string out;
  std::string format;
  double tol = lagcalc::kDefaultDegeneracyTol;

  // group
  std::string a, b;
  double lambda = 1.0;
  // spectral
  std::string y;
  int samples = 64;
  // laguerre
  int k_scalar = 0, p_scalar = 0;
  double sigma = 0.0;
  std::string k_list, p_list, grid, op = "Z";
  bool basis = false;
  int j = 1;
  // convolve / tensor
  std::string path = "direct", f_file, g_file, field_file, tensor_file;
  int K = 8;
  bool inverse = false;
  // fundamental
  std::vector<std::string> points;
  double fs_tol = 1e-11;
  int fs_levels = 5;
  // szego
  int szego_k = 1, sphere_order = 32;
  std::string s;
  // selftest
  std::string suite = "all";
  unsigned long long seed = 42;
};

namespace {

StepTwoGroup load(const CommandState& st) { return lagcalc::resolve_group(st.group); }

VectorXd tau_of(const CommandState& st, const StepTwoGroup& g) {
  if (st.tau.empty()) throw UsageError("--tau is required");
  return parse_vector(st.tau, "--tau", g.r());
}

lagcalc::FieldContext context_of(const CommandState& st, const VectorXd& tau) {
  return {st.group, std::vector<double>(tau.data(), tau.data() + tau.size())};
}

bool wants_csv(const std::string& path) {
  return std::filesystem::path(path).extension() == ".csv";
}

// Field output: container when --out names a non-CSV file, CSV otherwise.
void emit_field(const SampledField& f, const std::string& path) {
  if (!path.empty() && !wants_csv(path))
    lagcalc::write_field(path, f);
  else
    emit(lagcalc::field_to_csv(f), path);
}

int print_json(const json& j, const std::string& path) {
  emit(j.dump(2), path);
  return 0;
}

json complex_matrix_json(const Eigen::MatrixXcd& m) {
  json out;
  out["re"] = to_json(Eigen::MatrixXd(m.real()));
  out["im"] = to_json(Eigen::MatrixXd(m.imag()));
  return out;
}

lagcalc::MultiIndexPair index_of(const CommandState& st) {
  const std::vector<int> k = parse_ints(st.k_list, "--k"), p = parse_ints(st.p_list, "--p");
  auto idx = st.basis ? lagcalc::MultiIndexPair::basis(p, k) : lagcalc::MultiIndexPair::raw(k, p);
  idx.validate();
  return idx;
}

void add_group_option(CLI::App* sub, CommandState& st) {
  sub->add_option("--group", st.group,
                  "Group: preset:NAME (heisenberg-N, quaternionic-heisenberg) or a JSON file")
      ->capture_default_str();
}

// ---------------------------------------------------------------- group

void register_group(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* grp = app.add_subcommand("group", "Group law and structure matrices");
  grp->require_subcommand(1);

  CLI::App* show = grp->add_subcommand("show", "Print the group as JSON {n, r, B}");
  add_group_option(show, st);
  out.push_back({show, [&st] {
                   emit(lagcalc::group_to_json(load(st)), "");
                   return 0;
                 }});

  CLI::App* mul = grp->add_subcommand("multiply", "Product of two points (y..., t...)");
  add_group_option(mul, st);
  mul->add_option("--a", st.a, "First point")->required();
  mul->add_option("--b", st.b, "Second point")->required();
  out.push_back({mul, [&st] {
                   const StepTwoGroup g = load(st);
                   const GroupPoint c = lagcalc::multiply(g, parse_point(g, st.a, "--a"),
                                                          parse_point(g, st.b, "--b"));
                   return print_json(json{{"point", point_json(c)}}, "");
                 }});

  CLI::App* inv = grp->add_subcommand("inverse", "Inverse of a point");
  add_group_option(inv, st);
  inv->add_option("--a", st.a, "Point")->required();
  out.push_back({inv, [&st] {
                   const StepTwoGroup g = load(st);
                   return print_json(
                       json{{"point", point_json(lagcalc::inverse(g, parse_point(g, st.a, "--a")))}}, "");
                 }});

  CLI::App* dil = grp->add_subcommand("dilate", "Parabolic dilation (lambda y, lambda^2 t)");
  add_group_option(dil, st);
  dil->add_option("--a", st.a, "Point")->required();
  dil->add_option("--lambda", st.lambda, "Dilation factor")->required();
  out.push_back({dil, [&st] {
                   const StepTwoGroup g = load(st);
                   return print_json(
                       json{{"point", point_json(lagcalc::dilate(g, st.lambda, parse_point(g, st.a, "--a")))}},
                       "");
                 }});

  CLI::App* bt = grp->add_subcommand("btau", "The skew matrix B^tau = sum_beta tau_beta B^beta");
  add_group_option(bt, st);
  bt->add_option("--tau", st.tau, "Central frequency, r comma-separated values")->required();
  out.push_back({bt, [&st] {
                   const StepTwoGroup g = load(st);
                   return print_json(json{{"B_tau", to_json(lagcalc::b_tau(g, tau_of(st, g)))}}, "");
                 }});
}

// ---------------------------------------------------------------- spectral

void register_spectral(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* spectral = app.add_subcommand("spectral", "Normal form of B^tau and degeneracy scans");
  spectral->require_subcommand(1);

  CLI::App* norm = spectral->add_subcommand(
      "normalize", "Orthogonal frame O with O^T B^tau O block diagonal; JSON {tau, mu, O, ...}");
  add_group_option(norm, st);
  norm->add_option("--tau", st.tau, "Central frequency")->required();
  norm->add_option("--tol", st.tol, "Relative degeneracy tolerance")->capture_default_str();
  norm->add_option("--out", st.out, "Output path (default stdout)");
  out.push_back({norm, [&st] {
                   const StepTwoGroup g = load(st);
                   const lagcalc::TauFrame f = lagcalc::normalize(g, tau_of(st, g), st.tol);
                   const Eigen::MatrixXd B = lagcalc::b_tau(g, f.tau);
                   json j;
                   j["tau"] = to_json(f.tau);
                   j["mu"] = to_json(f.mu);
                   j["O"] = to_json(f.O);
                   j["min_gap"] = f.min_gap;
                   j["normal_form_residual"] = (f.O.transpose() * B * f.O - f.J()).cwiseAbs().maxCoeff();
                   j["orthogonality_residual"] =
                       (f.O.transpose() * f.O - Eigen::MatrixXd::Identity(f.O.rows(), f.O.cols()))
                           .cwiseAbs()
                           .maxCoeff();
                   return print_json(j, st.out);
                 }});

  CLI::App* coords = spectral->add_subcommand("coords", "tau-coordinates and complex tau-coordinates of y");
  add_group_option(coords, st);
  coords->add_option("--tau", st.tau, "Central frequency")->required();
  coords->add_option("--y", st.y, "Horizontal point, 2n values")->required();
  out.push_back({coords, [&st] {
                   const StepTwoGroup g = load(st);
                   const lagcalc::TauFrame f = lagcalc::normalize(g, tau_of(st, g));
                   const VectorXd y = parse_vector(st.y, "--y", g.m());
                   const Eigen::VectorXcd z = lagcalc::complex_tau_coordinates(f, y);
                   json j;
                   j["tau_coordinates"] = to_json(lagcalc::tau_coordinates(f, y));
                   j["z_re"] = to_json(Eigen::VectorXd(z.real()));
                   j["z_im"] = to_json(Eigen::VectorXd(z.imag()));
                   return print_json(j, "");
                 }});

  CLI::App* scan = spectral->add_subcommand(
      "scan",
      "Sweep deterministic samples of the unit sphere in tau. CSV columns: tau_1..tau_r, "
      "mu_1..mu_n, min_gap, multiplicity (pattern joined by '+'), near_degenerate, near_crossing");
  add_group_option(scan, st);
  scan->add_option("--samples", st.samples, "Number of samples (r = 1 always uses 2)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  scan->add_option("--tol", st.tol, "Relative tolerance")->capture_default_str();
  scan->add_option("--format", st.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--out", st.out, "Output path (default stdout)");
  out.push_back({scan, [&st] {
                   const StepTwoGroup g = load(st);
                   const auto report =
                       lagcalc::degeneracy_scan(g, lagcalc::sphere_samples(g.r(), st.samples), st.tol);
                   auto pattern = [](const std::vector<int>& m) {
                     std::string s;
                     for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "+" : "") + std::to_string(m[i]);
                     return s;
                   };
                   if (st.format == "json") {
                     json j;
                     j["generic_multiplicity"] = report.generic_multiplicity;
                     j["degenerate_count"] = report.degenerate_count;
                     j["crossing_count"] = report.crossing_count;
                     j["samples"] = json::array();
                     for (const auto& s : report.samples)
                       j["samples"].push_back({{"tau", to_json(s.tau)},
                                               {"mu", to_json(s.mu)},
                                               {"min_gap", s.min_gap},
                                               {"multiplicity", s.multiplicity},
                                               {"near_degenerate", s.near_degenerate},
                                               {"near_crossing", s.near_crossing}});
                     return print_json(j, st.out);
                   }
                   std::ostringstream csv;
                   for (int b = 0; b < g.r(); ++b) csv << "tau_" << b + 1 << ',';
                   for (int j = 0; j < g.n(); ++j) csv << "mu_" << j + 1 << ',';
                   csv << "min_gap,multiplicity,near_degenerate,near_crossing\n";
                   for (const auto& s : report.samples) {
                     for (Eigen::Index b = 0; b < s.tau.size(); ++b) csv << format_double(s.tau(b)) << ',';
                     for (Eigen::Index j = 0; j < s.mu.size(); ++j) csv << format_double(s.mu(j)) << ',';
                     csv << format_double(s.min_gap) << ',' << pattern(s.multiplicity) << ','
                         << (s.near_degenerate ? 1 : 0) << ',' << (s.near_crossing ? 1 : 0) << '\n';
                   }
                   emit(csv.str(), st.out);
                   return 0;
                 }});
}

// ---------------------------------------------------------------- laguerre

void register_laguerre(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* lag = app.add_subcommand("laguerre", "Laguerre polynomials and exponential Laguerre functions");
  lag->require_subcommand(1);

  CLI::App* ev = lag->add_subcommand("eval", "L_k^{(p)}(sigma) and the normalized l_k^{(p)}(sigma)");
  ev->add_option("--k", st.k_scalar, "Degree k >= 0")->required();
  ev->add_option("--p", st.p_scalar, "Order p >= 0")->required();
  ev->add_option("--sigma", st.sigma, "Argument sigma >= 0")->required();
  out.push_back({ev, [&st] {
                   json j;
                   j["k"] = st.k_scalar;
                   j["p"] = st.p_scalar;
                   j["sigma"] = st.sigma;
                   j["L"] = lagcalc::laguerre_poly(st.k_scalar, st.p_scalar, st.sigma);
                   j["l"] = lagcalc::laguerre_l(st.k_scalar, st.p_scalar, st.sigma);
                   return print_json(j, "");
                 }});

  CLI::App* field = lag->add_subcommand(
      "field", "Sample an exponential Laguerre function on a grid. CSV columns: x0..x{2n-1}, re, im");
  add_group_option(field, st);
  field->add_option("--tau", st.tau, "Central frequency")->required();
  field->add_option("--k", st.k_list, "k per slot, comma-separated")->required();
  field->add_option("--p", st.p_list, "p per slot, comma-separated")->required();
  field->add_flag("--basis", st.basis, "Interpret (p, k) as a tensor address (entries >= 1)");
  field->add_option("--grid", st.grid, "min:max:count per axis, or one spec for all axes")->required();
  field->add_option("--out", st.out, "Output path; .csv for CSV, anything else for a field container");
  out.push_back({field, [&st] {
                   const StepTwoGroup g = load(st);
                   const VectorXd tau = tau_of(st, g);
                   const lagcalc::TauFrame f = lagcalc::normalize(g, tau);
                   const auto idx = index_of(st);
                   if (idx.n() != g.n()) throw UsageError("--k/--p need one entry per slot (n values)");
                   SampledField fld = lagcalc::sample_field(
                       lagcalc::parse_grid_spec(st.grid, g.m()),
                       [&](const VectorXd& y) { return lagcalc::exp_laguerre(f, idx, y); });
                   fld.set_context(context_of(st, tau));
                   emit_field(fld, st.out);
                   return 0;
                 }});

  CLI::App* sh = lag->add_subcommand("shift", "Exact action of Z_j or Zbar_j on a basis function");
  add_group_option(sh, st);
  sh->add_option("--tau", st.tau, "Central frequency")->required();
  sh->add_option("--op", st.op, "Z or Zbar")->check(CLI::IsMember({"Z", "Zbar"}))->required();
  sh->add_option("--j", st.j, "Slot, 1-based")->required();
  sh->add_option("--k", st.k_list, "k per slot")->required();
  sh->add_option("--p", st.p_list, "p per slot")->required();
  sh->add_flag("--basis", st.basis, "Interpret (p, k) as a tensor address");
  out.push_back({sh, [&st] {
                   const StepTwoGroup g = load(st);
                   const lagcalc::TauFrame f = lagcalc::normalize(g, tau_of(st, g));
                   const auto res = lagcalc::shift_apply(
                       f, st.op == "Z" ? lagcalc::ShiftOp::Z : lagcalc::ShiftOp::Zbar, st.j - 1,
                       index_of(st));
                   json j;
                   if (std::holds_alternative<lagcalc::Annihilated>(res)) {
                     j["annihilated"] = true;
                     j["coefficient"] = 0.0;
                   } else {
                     const auto& s = std::get<lagcalc::Shifted>(res);
                     j["annihilated"] = false;
                     j["coefficient"] = s.coefficient;
                     j["k"] = s.index.k;
                     j["p"] = s.index.p;
                   }
                   return print_json(j, "");
                 }});
}

// ---------------------------------------------------------------- convolve

void register_convolve(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* conv = app.add_subcommand(
      "convolve",
      "Twisted convolution f *_tau g of two field files over R^{2n}. Paths: direct (quadrature "
      "of the defining integral), fourier (frequency-side formula), tensor (Laguerre tensor "
      "product at --K, then synthesis). Output: field container or CSV (x0.., re, im)");
  add_group_option(conv, st);
  conv->add_option("--path", st.path, "direct, fourier or tensor")
      ->check(CLI::IsMember({"direct", "fourier", "tensor"}))
      ->capture_default_str();
  conv->add_option("--tau", st.tau, "Central frequency")->required();
  conv->add_option("--f", st.f_file, "Left factor (field container)")->required();
  conv->add_option("--g", st.g_file, "Right factor (field container)")->required();
  conv->add_option("--K", st.K, "Tensor truncation for --path tensor")->capture_default_str();
  conv->add_option("--out", st.out, "Output path; .csv for CSV, anything else for a field container");
  out.push_back({conv, [&st] {
                   const StepTwoGroup g = load(st);
                   const VectorXd tau = tau_of(st, g);
                   const SampledField f = lagcalc::read_field(st.f_file);
                   const SampledField h = lagcalc::read_field(st.g_file);
                   if (!f.same_grid(h))
                     throw lagcalc::GridError("fields share a grid", "convolve: --f and --g grids differ");
                   SampledField result;
                   if (st.path == "direct") {
                     result = lagcalc::twisted_convolve(f, h, g, tau);
                   } else if (st.path == "fourier") {
                     std::vector<std::size_t> all(f.size());
                     for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                     result = SampledField(f.axes(), lagcalc::twisted_convolve_fourier_at(f, h, g, tau, all));
                   } else {
                     const lagcalc::TauFrame frame = lagcalc::normalize(g, tau);
                     const auto T = lagcalc::tensor_multiply(lagcalc::laguerre_coefficients(f, frame, st.K),
                                                             lagcalc::laguerre_coefficients(h, frame, st.K));
                     result = lagcalc::synthesize_field(T, f.axes());
                   }
                   result.set_context(context_of(st, tau));
                   emit_field(result, st.out);
                   return 0;
                 }});
}

// ---------------------------------------------------------------- tensor

void register_tensor(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* ten = app.add_subcommand("tensor", "Laguerre tensors (coefficient matrices)");
  ten->require_subcommand(1);

  CLI::App* of = ten->add_subcommand("of-field", "Laguerre tensor of a field at tau; JSON tensor file");
  add_group_option(of, st);
  of->add_option("--tau", st.tau, "Central frequency")->required();
  of->add_option("--field", st.field_file, "Field container over R^{2n}")->required();
  of->add_option("--K", st.K, "Index range 1..K per slot")->capture_default_str();
  of->add_option("--out", st.out, "Output path (default stdout)");
  out.push_back({of, [&st] {
                   const StepTwoGroup g = load(st);
                   const lagcalc::TauFrame frame = lagcalc::normalize(g, tau_of(st, g));
                   const auto T = lagcalc::laguerre_coefficients(lagcalc::read_field(st.field_file), frame, st.K);
                   return print_json(tensor_to_json(T), st.out);
                 }});

  CLI::App* mul = ten->add_subcommand("multiply", "Matrix product of two tensor files");
  mul->add_option("--a", st.a, "Left tensor file")->required();
  mul->add_option("--b", st.b, "Right tensor file")->required();
  mul->add_option("--out", st.out, "Output path (default stdout)");
  out.push_back({mul, [&st] {
                   return print_json(
                       tensor_to_json(lagcalc::tensor_multiply(load_tensor(st.a), load_tensor(st.b))), st.out);
                 }});

  CLI::App* syn = ten->add_subcommand("synthesize", "Evaluate a tensor file on a grid (CSV or field)");
  syn->add_option("--tensor", st.tensor_file, "Tensor file")->required();
  syn->add_option("--grid", st.grid, "Grid spec")->required();
  syn->add_option("--out", st.out, "Output path; .csv for CSV, anything else for a field container");
  out.push_back({syn, [&st] {
                   const auto T = load_tensor(st.tensor_file);
                   emit_field(lagcalc::synthesize_field(T, lagcalc::parse_grid_spec(st.grid, 2 * T.n())), st.out);
                   return 0;
                 }});

  CLI::App* sub = ten->add_subcommand(
      "sublaplacian", "Diagonal Laguerre symbol of the sub-Laplacian (or its inverse) at tau");
  add_group_option(sub, st);
  sub->add_option("--tau", st.tau, "Central frequency")->required();
  sub->add_option("--K", st.K, "Raw degrees 0..K per slot")->capture_default_str();
  sub->add_flag("--inverse", st.inverse, "Entrywise reciprocal");
  out.push_back({sub, [&st] {
                   const StepTwoGroup g = load(st);
                   auto S = lagcalc::sublap_symbol(lagcalc::normalize(g, tau_of(st, g)), st.K);
                   if (st.inverse) S = lagcalc::sublap_inverse_symbol(S);
                   json j;
                   j["K"] = S.K;
                   j["inverse"] = S.inverse;
                   j["mu"] = to_json(S.frame.mu);
                   j["diagonal"] = to_json(S.diag);
                   return print_json(j, "");
                 }});
}

// ---------------------------------------------------------------- fundamental

void register_fundamental(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* fs = app.add_subcommand(
      "fundamental",
      "Fundamental solution of the sub-Laplacian. JSON records {point, value_re, value_im, "
      "est_error, nodes_used}; with --grid, CSV columns x0..x{2n+r-1}, re, im, est_error, nodes_used");
  add_group_option(fs, st);
  fs->add_option("--point", st.points, "Point y...,t... (repeatable)");
  fs->add_option("--grid", st.grid, "Grid over R^{2n+r}: min:max:count per axis");
  fs->add_option("--tol", st.fs_tol, "Relative refinement tolerance")->capture_default_str();
  fs->add_option("--levels", st.fs_levels, "Maximum refinement levels")->capture_default_str();
  fs->add_option("--format", st.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  fs->add_option("--out", st.out, "Output path (default stdout)");
  out.push_back({fs, [&st] {
                   const StepTwoGroup g = load(st);
                   lagcalc::FsQuadrature q;
                   q.tol = st.fs_tol;
                   q.max_levels = st.fs_levels;
                   const lagcalc::FundamentalSolver solver(g, q);
                   std::vector<GroupPoint> pts;
                   for (const auto& p : st.points) pts.push_back(parse_point(g, p, "--point"));
                   if (!st.grid.empty()) {
                     const SampledField grid(lagcalc::parse_grid_spec(st.grid, g.m() + g.r()));
                     for (std::size_t i = 0; i < grid.size(); ++i) {
                       const VectorXd x = grid.point(i);
                       pts.push_back({x.head(g.m()), x.tail(g.r())});
                     }
                   }
                   if (pts.empty()) throw UsageError("fundamental: give --point or --grid");
                   std::vector<lagcalc::FsResult> res(pts.size());
                   lagcalc::parallel_for(pts.size(),
                                         [&](std::size_t i) { res[i] = solver.evaluate(pts[i].y, pts[i].t); });
                   const std::string fmt = st.format.empty() ? (st.grid.empty() ? "json" : "csv") : st.format;
                   if (fmt == "json") {
                     json arr = json::array();
                     for (std::size_t i = 0; i < pts.size(); ++i)
                       arr.push_back({{"point", point_json(pts[i])},
                                      {"value_re", res[i].value.real()},
                                      {"value_im", res[i].value.imag()},
                                      {"est_error", res[i].est_error},
                                      {"nodes_used", res[i].nodes_used}});
                     return print_json(arr.size() == 1 ? arr[0] : arr, st.out);
                   }
                   std::ostringstream csv;
                   for (int a = 0; a < g.m() + g.r(); ++a) csv << 'x' << a << ',';
                   csv << "re,im,est_error,nodes_used\n";
                   for (std::size_t i = 0; i < pts.size(); ++i) {
                     for (Eigen::Index a = 0; a < pts[i].y.size(); ++a) csv << format_double(pts[i].y(a)) << ',';
                     for (Eigen::Index a = 0; a < pts[i].t.size(); ++a) csv << format_double(pts[i].t(a)) << ',';
                     csv << format_double(res[i].value.real()) << ',' << format_double(res[i].value.imag()) << ','
                         << format_double(res[i].est_error) << ',' << res[i].nodes_used << '\n';
                   }
                   emit(csv.str(), st.out);
                   return 0;
                 }});
}

// ---------------------------------------------------------------- szego

void register_szego(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* sz = app.add_subcommand(
      "szego", "Matrix Szego kernel S(y, s) on the quaternionic Heisenberg group; JSON {re, im}");
  sz->add_option("--k", st.szego_k, "k >= 1 (matrix size k + 1)")->required();
  sz->add_option("--y", st.y, "Horizontal point, 4 values")->required();
  sz->add_option("--s", st.s, "Central point, 3 values")->required();
  sz->add_option("--order", st.sphere_order, "Sphere rule order")->capture_default_str();
  out.push_back({sz, [&st] {
                   const Eigen::MatrixXcd S = lagcalc::szego_kernel(
                       st.szego_k, parse_vector(st.y, "--y", 4), parse_vector(st.s, "--s", 3), st.sphere_order);
                   json j = complex_matrix_json(S);
                   j["k"] = st.szego_k;
                   return print_json(j, "");
                 }});
}

// ---------------------------------------------------------------- selftest

void register_selftest(CLI::App& app, CommandState& st, std::vector<Command>& out) {
  CLI::App* self = app.add_subcommand(
      "selftest", "Run an invariant battery and print a pass/fail table (exit 1 on any failure)");
  self->add_option("suite", st.suite, "group, spectral, laguerre, twisted, tensor, kernels or all")
      ->check(CLI::IsMember(selftest_suites()))
      ->capture_default_str();
  self->add_option("--seed", st.seed, "Seed for the randomized instances")->capture_default_str();
  out.push_back({self, [&st] { return run_selftest(st.suite, st.seed, std::cout); }});
}

}  // namespace

std::shared_ptr<CommandState> register_commands(CLI::App& app, std::vector<Command>& out) {
  auto st = std::make_shared<CommandState>();
  register_group(app, *st, out);
  register_spectral(app, *st, out);
  register_laguerre(app, *st, out);
  register_convolve(app, *st, out);
  register_tensor(app, *st, out);
  register_fundamental(app, *st, out);
  register_szego(app, *st, out);
  register_selftest(app, *st, out);
  return st;
}

}  // namespace cli
