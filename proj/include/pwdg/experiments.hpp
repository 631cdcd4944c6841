#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pwdg/conditioning.hpp"
#include "pwdg/mesh.hpp"
#include "pwdg/orthogonalization.hpp"
#include "pwdg/solvers.hpp"

namespace pwdg {

// Drivers behind the command-line experiments.  Each returns structured
// rows plus the finished CSV text (exact headers, shortest round-trip
// number formatting, deterministic row order), so the same code path feeds
// the CLI, the tests, and the acceptance checks.

// ---------------------------------------------------------------- cond-shape
// Conditioning of the local Gram matrix versus element shape: regular
// n-gons and anisotropic rectangles at fixed h and k.
struct CondShapeConfig {
  double h = 1.0;
  double k = 10.0;
  int p = 15;
  int ngon_min = 3;
  int ngon_max = 64;
  double aspect_min = 1.0;
  double aspect_max = 16.0;
  double theta0 = 0.0;
};

struct CondShapeRow {
  std::string shape;  // "ngon" or "rect"
  double param = 0.0; // n for ngon, aspect ratio for rect
  int p = 0;
  double cond2 = 0.0;
};

struct CondShapeResult {
  std::vector<CondShapeRow> rows;
  std::string csv;  // header: shape,param,p,cond2
};

CondShapeResult cmd_cond_shape(const CondShapeConfig& config);

// ----------------------------------------------------------------- fit-check
// Conditioning law versus measured cond2 over an (h, k, p) grid, under both
// square-size conventions; the better-matching one is reported.
struct FitCheckConfig {
  std::vector<double> h_values;  // default 2^-1 ... 2^-5
  std::vector<double> k_values;  // default 5, 6, ..., 30
  std::vector<int> p_values;     // default 5, 7, ..., 23
  double theta0 = 0.0;
};

struct FitCheckResult {
  std::vector<FitRow> rows;          // rows for the calibrated convention
  SizeConvention calibrated = SizeConvention::side;
  double in_band_fraction = 0.0;        // ratios in [1, 10], calibrated
  double in_band_fraction_other = 0.0;  // same for the other convention
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::string csv;  // header: h,k,p,cond2,fit,ratio + trailing '#' summary
};

FitCheckResult cmd_fit_check(const FitCheckConfig& config);

// --------------------------------------------------------------------- solve
// Accuracy/conditioning sweep over p on one mesh: direct solves of the
// original and re-orthogonalized systems against the exact cylindrical-wave
// solution.
struct SolveConfig {
  MeshKind mesh_kind = MeshKind::poly;
  int m = 8;
  std::uint64_t seed = 1;
  std::string mesh_file;  // when set, load this mesh instead of generating
  double k = 10.0;
  std::vector<int> p_values = {3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23};
  Precision precision = Precision::binary64;
  CongruenceMode congruence = CongruenceMode::hermitian;
  double theta0 = 0.0;
  std::string dump_path;  // when set, dump the last assembled system here
};

struct SolveRow {
  int p = 0;
  double cond2_a = 0.0;
  double cond2_at = 0.0;      // NaN when the transform broke down
  double l2_err_lu_a = 0.0;   // relative L2 error, direct solve, original basis
  double l2_err_lu_at = 0.0;  // same through the transformed system
  bool breakdown = false;
  std::string note;  // per-row failure description, empty when clean
};

struct SolveResult {
  std::vector<SolveRow> rows;
  std::string csv;  // header: p,cond2_A,cond2_At,l2_err_lu_A,l2_err_lu_At,breakdown_flag
  bool numerical_failure = false;
};

SolveResult cmd_solve(const SolveConfig& config);

// First p at which the error trend turns: smallest p whose error exceeds
// `factor` times the best error seen at or before it.  Returns INT_MAX when
// the trend never turns.  NaN errors (failed rows) count as deteriorated.
int deterioration_onset(const std::vector<SolveRow>& rows, double factor = 3.0);

// --------------------------------------------------------------- gmres-table
// Iteration counts and extreme eigenvalues of the Hermitian parts for the
// original and transformed systems, with the residual contraction bound
// checked on every converged run.
struct GmresTableConfig {
  MeshKind mesh_kind = MeshKind::poly;
  int m = 8;
  std::uint64_t seed = 1;
  std::string mesh_file;
  double k = 10.0;
  std::vector<int> p_values = {5, 7, 9, 11, 13, 15};
  Precision precision = Precision::binary64;
  CongruenceMode congruence = CongruenceMode::hermitian;
  double theta0 = 0.0;
  double tol = 1e-10;
};

struct GmresTableRow {
  int p = 0;
  double lmin_ha = 0.0;
  double lmin_hainv = 0.0;
  int iters_a = 0;
  double lmin_hat = 0.0;     // NaN when the transform broke down
  double lmin_hatinv = 0.0;  // NaN when the transform broke down
  int iters_at = 0;          // -1 when the transform broke down
  // Contraction-bound audit (not part of the CSV schema):
  bool bound_applicable_a = false;
  bool bound_applicable_at = false;
  int bound_violations_a = 0;
  int bound_violations_at = 0;
  bool converged_a = false;
  bool converged_at = false;
  std::string note;
};

struct GmresTableResult {
  std::vector<GmresTableRow> rows;
  std::string csv;  // header: p,lmin_HA,lmin_HAinv,iters_A,lmin_HAt,lmin_HAtinv,iters_At
  bool numerical_failure = false;
};

GmresTableResult cmd_gmres_table(const GmresTableConfig& config);

// ------------------------------------------------------------------ mesh-gen
struct MeshGenConfig {
  MeshKind kind = MeshKind::poly;
  int m = 8;
  std::uint64_t seed = 1;
};

// Generates the mesh and returns it (the CLI writes it with write_mesh).
Mesh cmd_mesh_gen(const MeshGenConfig& config);

// Shared helper: the mesh a solve/gmres config describes (loaded from
// mesh_file when set, generated otherwise), validated.
Mesh resolve_mesh(MeshKind kind, int m, std::uint64_t seed,
                  const std::string& mesh_file);

constexpr int kNoOnset = std::numeric_limits<int>::max();

}  // namespace pwdg
