#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "weil/diagnostics.hpp"
#include "weil/index_set.hpp"
#include "weil/lstsq.hpp"
#include "weil/point_gen.hpp"
#include "weil/poly_basis.hpp"

namespace weil {

enum class ScalingRule { Linear, Quadratic };
enum class TargetKind { ExpSum, CosSum, AbsCube };

std::string to_string(ScalingRule r);
std::string to_string(TargetKind t);
ScalingRule parse_scaling_rule(const std::string& s);
TargetKind parse_target_kind(const std::string& s);

/// The repository's fixed coefficient set: the first d entries of
/// {0.8, 0.6, 0.4, 0.7, 0.3, 0.5, 0.9, 0.2}, cycled when d > 8.
std::vector<double> published_coefficients(int d);
/// d coefficients drawn uniformly from [0, 1) with UniformStream(seed).
std::vector<double> random_coefficients(int d, std::uint64_t seed);

/// exp(-sum c_i y_i), cos(sum c_i y_i) or |sum c_i y_i|^3.
TargetFunction make_target(TargetKind kind, std::vector<double> coeffs);

struct StudyConfig {
  IndexSetKind space = IndexSetKind::TotalDegree;
  int d = 2;
  int q_min = 1;
  int q_max = 10;
  ScalingRule scaling = ScalingRule::Quadratic;
  double c = 0.5;
  BasisSpec basis{Family::Chebyshev, Normalization::Orthonormal};
  WeightScheme weights = WeightScheme::unit();
  Provenance grid = Provenance::Weil;
  int repetitions = 1;
  std::uint64_t seed = 1;
  TargetKind target = TargetKind::ExpSum;
  std::vector<double> target_coeffs;  // empty: published set, or seeded if target_coeff_seed
  std::optional<std::uint64_t> target_coeff_seed;
  std::size_t n_test = 2000;
  int threads = 1;

  /// Validates, forces repetitions = 1 on Weil grids and fills target_coeffs.
  void resolve();
  /// "key=value" lines, one per field, in a fixed order.
  std::vector<std::string> echo() const;
};

/// Applies "key=value" lines (blank lines and '#' comments ignored) on top of
/// `cfg`. Unknown keys and malformed values throw ParseError with the line
/// number.
void apply_config_text(StudyConfig& cfg, std::istream& is);
void apply_config_entry(StudyConfig& cfg, const std::string& key, const std::string& value);

/// Realised sample size for one polynomial order: m_target from the scaling
/// rule, M = nearest_prime(2 m_target - 1), m = floor(M/2) + 1. Every grid
/// kind uses this m so that Weil and Monte Carlo cells have equal size.
struct CellPlan {
  int q = 0;
  std::size_t N = 0;
  std::size_t m_target = 0;
  std::uint64_t M = 0;
  std::size_t m = 0;
};

CellPlan plan_cell(const StudyConfig& cfg, int q);

/// Point set for one (q, repetition) cell. Monte Carlo seeds are
/// derive_seed(cfg.seed, q, rep).
SampleSet cell_samples(const StudyConfig& cfg, const CellPlan& plan, int rep);
std::uint64_t cell_seed(const StudyConfig& cfg, int q, int rep);
/// Seed of the shared uniform test set used by convergence studies.
std::uint64_t test_set_seed(const StudyConfig& cfg);

struct CellResult {
  CellPlan plan;
  double value = 0.0;               // arithmetic mean over repetitions (inf if any is singular)
  std::vector<double> rep_values;   // per repetition, in repetition order
  std::vector<std::uint64_t> rep_seeds;
};

/// cond(A) per cell, computed from the singular values of diag(sqrt w) D;
/// rank-deficient cells give +inf.
std::vector<CellResult> run_cond_study(const StudyConfig& cfg);
/// Discrete L2 error over the seeded uniform test set; failed fits give +inf.
std::vector<CellResult> run_conv_study(const StudyConfig& cfg);

/// The fit a convergence-study cell performs (exposed for cross-checks).
FitResult conv_cell_fit(const StudyConfig& cfg, const CellPlan& plan, const SampleSet& pts);

/// Writes the config echo, the realised-cell comments and "q,N,m,M,<value_name>".
void write_study_csv(std::ostream& os, const std::string& command, const StudyConfig& cfg,
                     const std::vector<CellResult>& cells, const std::string& value_name);
/// Per-repetition rows "q,rep,seed,<value_name>".
void write_repetitions_csv(std::ostream& os, const std::vector<CellResult>& cells, const std::string& value_name);

/// Writes the grid for nearest_prime(M_target) and returns the modulus used.
std::uint64_t cmd_points(std::uint64_t M_target, int d, std::ostream& out);

/// Box syntax: "lo:hi" per coordinate joined by 'x', e.g. "0:0.5x-1:1".
std::vector<Interval> parse_box(const std::string& s, int d);
std::string format_box(const std::vector<Interval>& box);
std::vector<std::vector<Interval>> default_boxes(int d);

struct EquidistRow {
  std::string box;
  double observed = 0.0;
  double arcsine = 0.0;
  double deviation = 0.0;
};

/// Box statistics for the Weil grid of nearest_prime(M_target); writes
/// "box,observed_fraction,arcsine_measure,abs_deviation" when `out` is set.
std::vector<EquidistRow> cmd_equidist(std::uint64_t M_target, int d, const std::vector<std::vector<Interval>>& boxes,
                                      std::ostream* out);

/// Reads points ("j,y1,...,yd" or "y1,...,yd") and values (last column) and
/// fits them. Throws ParseError on malformed or mismatched input.
FitResult cmd_fit(std::istream& points_csv, std::istream& values_csv, IndexSetKind space, int q,
                  const BasisSpec& basis, const WeightScheme& weights);

/// Runs the Gram-bound sweep and the stability and exponential-sum checks;
/// writes the gram report CSV and returns true when everything passes.
bool cmd_check_bounds(std::ostream& out, std::ostream& log, std::uint64_t seed);

}  // namespace weil
