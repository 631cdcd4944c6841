// Command-line driver for the plane-wave DG conditioning experiments.
//
// Subcommands map one-to-one onto the drivers in pwdg/experiments.hpp:
//   cond-shape   Gram-matrix conditioning vs element shape
//   fit-check    conditioning law vs measurement over an (h, k, p) grid
//   solve        accuracy/conditioning sweep over p on one mesh
//   gmres-table  iteration counts and Hermitian-part eigenvalues
//   mesh-gen     deterministic mesh generation to a file
//
// Every subcommand accepts --config FILE with flat `key = value` lines
// (same keys as the long flags); explicit flags override the file.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure (CSV
// still written, failing rows carry NaN columns).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwdg/experiments.hpp"
#include "pwdg/mesh.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

pwdg::MeshKind parse_mesh_kind(const std::string& name) {
  if (name == "quad") return pwdg::MeshKind::quad;
  if (name == "tri") return pwdg::MeshKind::tri;
  if (name == "poly") return pwdg::MeshKind::poly;
  throw CLI::ValidationError("--mesh", "expected one of quad|tri|poly");
}

pwdg::Precision parse_precision(const std::string& name) {
  if (name == "f32") return pwdg::Precision::binary32;
  if (name == "f64") return pwdg::Precision::binary64;
  throw CLI::ValidationError("--precision", "expected f32 or f64");
}

pwdg::CongruenceMode parse_congruence(const std::string& name) {
  if (name == "hermitian") return pwdg::CongruenceMode::hermitian;
  if (name == "transpose") return pwdg::CongruenceMode::transpose;
  throw CLI::ValidationError("--congruence", "expected hermitian or transpose");
}

// "A:B:S" -> inclusive integer sequence from A towards B in steps of S.
std::vector<int> parse_int_range(const std::string& text) {
  int a = 0, b = 0, s = 1;
  if (std::sscanf(text.c_str(), "%d:%d:%d", &a, &b, &s) != 3 || s == 0)
    throw CLI::ValidationError("range", "expected A:B:S with nonzero step: " + text);
  std::vector<int> values;
  if (s > 0)
    for (int v = a; v <= b; v += s) values.push_back(v);
  else
    for (int v = a; v >= b; v += s) values.push_back(v);
  if (values.empty())
    throw CLI::ValidationError("range", "empty range: " + text);
  return values;
}

// "A:B:S" -> arithmetic sequence of doubles; "A:B:xF" -> geometric sequence
// multiplying by F (useful for h grids spanning octaves).
std::vector<double> parse_double_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw CLI::ValidationError("range", "expected A:B:S or A:B:xF: " + text);
  const double a = std::stod(text.substr(0, first));
  const double b = std::stod(text.substr(first + 1, second - first - 1));
  const std::string step = text.substr(second + 1);
  std::vector<double> values;
  if (!step.empty() && step.front() == 'x') {
    const double factor = std::stod(step.substr(1));
    if (!(factor > 0.0) || factor == 1.0)
      throw CLI::ValidationError("range", "geometric factor must be > 0, != 1");
    const bool down = factor < 1.0;
    for (double v = a; down ? v >= b * (1.0 - 1e-12) : v <= b * (1.0 + 1e-12);
         v *= factor)
      values.push_back(v);
  } else {
    const double s = std::stod(step);
    if (s == 0.0) throw CLI::ValidationError("range", "zero step: " + text);
    if (s > 0.0)
      for (double v = a; v <= b + 1e-12 * std::abs(b); v += s) values.push_back(v);
    else
      for (double v = a; v >= b - 1e-12 * std::abs(b); v += s) values.push_back(v);
  }
  if (values.empty())
    throw CLI::ValidationError("range", "empty range: " + text);
  return values;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file " + out_path);
  file << text;
  if (!file) throw std::runtime_error("write failed for " + out_path);
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// Merge a flat `key = value` file into a parsed subcommand: values apply
// only to options the command line left untouched, so explicit flags win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream file(path);
  if (!file)
    throw std::invalid_argument("cannot read config file " + path);
  std::map<std::string, std::string> entries;  // last occurrence wins
  std::string line;
  while (std::getline(file, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key = value: " + stripped);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::invalid_argument("bad config key in line: " + stripped);
    entries[key] = value;
  }
  for (const auto& [key, value] : entries) {
    CLI::Option* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr)
      throw std::invalid_argument("unknown config key: " + key);
    if (option->count() > 0) continue;  // set explicitly; flag wins
    option->add_result(value);
    option->run_callback();
  }
}

// Flags shared by the mesh-based subcommands.
struct MeshOptions {
  std::string mesh = "poly";
  int m = 8;
  std::uint64_t seed = 1;
  std::string mesh_file;
};

void add_mesh_options(CLI::App* cmd, MeshOptions& opts, bool with_file = true) {
  cmd->add_option("--mesh", opts.mesh, "Mesh kind: quad|tri|poly")
      ->default_str(opts.mesh);
  cmd->add_option("--m", opts.m, "Mesh refinement (m x m cells or seeds)")
      ->default_str(std::to_string(opts.m));
  cmd->add_option("--seed", opts.seed, "Random seed for the poly mesh")
      ->default_str(std::to_string(opts.seed));
  if (with_file)
    cmd->add_option("--mesh-file", opts.mesh_file,
                    "Load this mesh file instead of generating");
}

int run_cond_shape(double k, int p, double h, double theta0, int ngon_max,
                   double aspect_max, const std::string& out) {
  pwdg::CondShapeConfig config;
  config.k = k;
  config.p = p;
  config.h = h;
  config.theta0 = theta0;
  config.ngon_max = ngon_max;
  config.aspect_max = aspect_max;
  emit(pwdg::cmd_cond_shape(config).csv, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane-wave discontinuous Galerkin conditioning laboratory"};
  app.set_help_flag("--help", "Print help and exit");  // frees -h / --h
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // ----------------------------------------------------------- cond-shape
  auto* cond_shape = app.add_subcommand(
      "cond-shape", "Gram-matrix conditioning vs element shape");
  cond_shape->set_help_flag("--help", "Print help and exit");
  struct {
    double k = 10.0, h = 1.0, theta0 = 0.0, aspect_max = 16.0;
    int p = 15, ngon_max = 64;
    std::string out, config;
  } cs;
  cond_shape->add_option("--config", cs.config, "Flat key=value config file");
  cond_shape->add_option("--k", cs.k, "Wavenumber")->default_str("10");
  cond_shape->add_option("--p", cs.p, "Directions per element")->default_str("15");
  cond_shape->add_option("--h", cs.h, "Element size")->default_str("1");
  cond_shape->add_option("--theta0", cs.theta0, "Direction offset angle");
  cond_shape->add_option("--ngon-max", cs.ngon_max, "Largest n-gon")->default_str("64");
  cond_shape->add_option("--aspect-max", cs.aspect_max, "Largest aspect ratio")
      ->default_str("16");
  cond_shape->add_option("--out", cs.out, "Output CSV path (default stdout)");
  cond_shape->callback([&] {
    apply_config_file(cond_shape, cs.config);
    exit_code = run_cond_shape(cs.k, cs.p, cs.h, cs.theta0, cs.ngon_max,
                               cs.aspect_max, cs.out);
  });

  // ------------------------------------------------------------ fit-check
  auto* fit_check = app.add_subcommand(
      "fit-check", "Conditioning law vs measurement over an (h, k, p) grid");
  struct {
    std::string h_range, p_range, out, config;
    double k = 0.0;  // 0 = full default grid
    double theta0 = 0.0;
  } fc;
  fit_check->add_option("--config", fc.config, "Flat key=value config file");
  fit_check->add_option("--h-range", fc.h_range,
                        "h grid A:B:S (arithmetic) or A:B:xF (geometric); "
                        "default 0.5:0.03125:x0.5");
  fit_check->add_option("--k", fc.k, "Single wavenumber (default grid 5..30)");
  fit_check->add_option("--p-range", fc.p_range, "p grid A:B:S; default 5:23:2");
  fit_check->add_option("--theta0", fc.theta0, "Direction offset angle");
  fit_check->add_option("--out", fc.out, "Output CSV path (default stdout)");
  fit_check->callback([&] {
    apply_config_file(fit_check, fc.config);
    pwdg::FitCheckConfig config;
    if (!fc.h_range.empty()) config.h_values = parse_double_range(fc.h_range);
    if (fc.k > 0.0) config.k_values = {fc.k};
    if (!fc.p_range.empty()) {
      for (int p : parse_int_range(fc.p_range)) config.p_values.push_back(p);
    }
    config.theta0 = fc.theta0;
    emit(pwdg::cmd_fit_check(config).csv, fc.out);
    exit_code = kExitOk;
  });

  // ---------------------------------------------------------------- solve
  auto* solve = app.add_subcommand(
      "solve", "Accuracy/conditioning sweep over p on one mesh");
  struct {
    MeshOptions mesh;
    double k = 10.0, theta0 = 0.0;
    std::string p_range, precision = "f64", congruence = "hermitian";
    std::string out, dump, config;
  } sv;
  solve->add_option("--config", sv.config, "Flat key=value config file");
  add_mesh_options(solve, sv.mesh);
  solve->add_option("--k", sv.k, "Wavenumber")->default_str("10");
  solve->add_option("--p-range", sv.p_range, "p sweep A:B:S; default 3:23:2");
  solve->add_option("--precision", sv.precision, "f32 or f64")->default_str("f64");
  solve->add_option("--congruence", sv.congruence, "hermitian or transpose")
      ->default_str("hermitian");
  solve->add_option("--theta0", sv.theta0, "Direction offset angle");
  solve->add_option("--dump-system", sv.dump,
                    "Dump the last assembled system to this path");
  solve->add_option("--out", sv.out, "Output CSV path (default stdout)");
  solve->callback([&] {
    apply_config_file(solve, sv.config);
    pwdg::SolveConfig config;
    config.mesh_kind = parse_mesh_kind(sv.mesh.mesh);
    config.m = sv.mesh.m;
    config.seed = sv.mesh.seed;
    config.mesh_file = sv.mesh.mesh_file;
    config.k = sv.k;
    if (!sv.p_range.empty()) config.p_values = parse_int_range(sv.p_range);
    config.precision = parse_precision(sv.precision);
    config.congruence = parse_congruence(sv.congruence);
    config.theta0 = sv.theta0;
    config.dump_path = sv.dump;
    const pwdg::SolveResult result = pwdg::cmd_solve(config);
    emit(result.csv, sv.out);
    exit_code = result.numerical_failure ? kExitNumerical : kExitOk;
  });

  // ---------------------------------------------------------- gmres-table
  auto* gmres_table = app.add_subcommand(
      "gmres-table", "GMRES iteration counts and Hermitian-part eigenvalues");
  struct {
    MeshOptions mesh;
    double k = 10.0, theta0 = 0.0;
    std::string p_range, precision = "f64", congruence = "hermitian", out, config;
  } gt;
  gmres_table->add_option("--config", gt.config, "Flat key=value config file");
  add_mesh_options(gmres_table, gt.mesh);
  gmres_table->add_option("--k", gt.k, "Wavenumber")->default_str("10");
  gmres_table->add_option("--p-range", gt.p_range, "p sweep A:B:S; default 5:15:2");
  gmres_table->add_option("--precision", gt.precision, "f32 or f64")
      ->default_str("f64");
  gmres_table->add_option("--congruence", gt.congruence, "hermitian or transpose")
      ->default_str("hermitian");
  gmres_table->add_option("--theta0", gt.theta0, "Direction offset angle");
  gmres_table->add_option("--out", gt.out, "Output CSV path (default stdout)");
  gmres_table->callback([&] {
    apply_config_file(gmres_table, gt.config);
    pwdg::GmresTableConfig config;
    config.mesh_kind = parse_mesh_kind(gt.mesh.mesh);
    config.m = gt.mesh.m;
    config.seed = gt.mesh.seed;
    config.mesh_file = gt.mesh.mesh_file;
    config.k = gt.k;
    if (!gt.p_range.empty()) config.p_values = parse_int_range(gt.p_range);
    config.precision = parse_precision(gt.precision);
    config.congruence = parse_congruence(gt.congruence);
    config.theta0 = gt.theta0;
    const pwdg::GmresTableResult result = pwdg::cmd_gmres_table(config);
    emit(result.csv, gt.out);
    exit_code = result.numerical_failure ? kExitNumerical : kExitOk;
  });

  // ------------------------------------------------------------- mesh-gen
  auto* mesh_gen =
      app.add_subcommand("mesh-gen", "Write a deterministic mesh to a file");
  struct {
    MeshOptions mesh;
    std::string out, config;
  } mg;
  mesh_gen->add_option("--config", mg.config, "Flat key=value config file");
  add_mesh_options(mesh_gen, mg.mesh, /*with_file=*/false);
  mesh_gen->add_option("--out", mg.out, "Output mesh path")->required();
  mesh_gen->callback([&] {
    apply_config_file(mesh_gen, mg.config);
    pwdg::MeshGenConfig config;
    config.kind = parse_mesh_kind(mg.mesh.mesh);
    config.m = mg.mesh.m;
    config.seed = mg.mesh.seed;
    pwdg::write_mesh(pwdg::cmd_mesh_gen(config), mg.out);
    exit_code = kExitOk;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return exit_code;
}
