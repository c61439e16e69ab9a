#include "weil/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "weil/csv.hpp"
#include "weil/errors.hpp"
#include "weil/primes.hpp"
#include "weil/random.hpp"

namespace weil {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTestStream = 0x7e57'5e75ULL;

// Runs fn(i) for i in [0, count) on `threads` workers. Results must be
// written to per-index slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

template <typename CellFn>
std::vector<CellResult> run_cells(const StudyConfig& cfg, CellFn&& cell_value) {
  std::vector<CellResult> cells;
  for (int q = cfg.q_min; q <= cfg.q_max; ++q) {
    CellResult r;
    r.plan = plan_cell(cfg, q);
    r.rep_values.assign(static_cast<std::size_t>(cfg.repetitions), 0.0);
    for (int rep = 0; rep < cfg.repetitions; ++rep) r.rep_seeds.push_back(cell_seed(cfg, q, rep));
    cells.push_back(std::move(r));
  }
  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  parallel_for(cells.size() * reps, cfg.threads, [&](std::size_t task) {
    auto& cell = cells[task / reps];
    const int rep = static_cast<int>(task % reps);
    cell.rep_values[static_cast<std::size_t>(rep)] = cell_value(cell.plan, cell_samples(cfg, cell.plan, rep));
  });
  for (auto& cell : cells) {
    double sum = 0.0;
    for (double v : cell.rep_values) sum += v;
    cell.value = sum / static_cast<double>(cell.rep_values.size());
  }
  return cells;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T v{};
  is >> v;
  if (!is || !is.eof()) throw ParseError("invalid value '" + value + "' for key '" + key + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  for (const auto& f : csv::split(value, ',')) {
    if (!f.empty()) out.push_back(csv::parse_double(f, 0));
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += csv::format_double(v[i]);
  }
  return s;
}

}  // namespace

std::string to_string(ScalingRule r) { return r == ScalingRule::Linear ? "linear" : "quadratic"; }

std::string to_string(TargetKind t) {
  switch (t) {
    case TargetKind::ExpSum: return "expsum";
    case TargetKind::CosSum: return "cossum";
    case TargetKind::AbsCube: return "abscube";
  }
  return "?";
}

ScalingRule parse_scaling_rule(const std::string& s) {
  if (s == "linear") return ScalingRule::Linear;
  if (s == "quadratic") return ScalingRule::Quadratic;
  throw InvalidArgument("unknown scaling rule '" + s + "' (expected linear or quadratic)");
}

TargetKind parse_target_kind(const std::string& s) {
  if (s == "expsum") return TargetKind::ExpSum;
  if (s == "cossum") return TargetKind::CosSum;
  if (s == "abscube") return TargetKind::AbsCube;
  throw InvalidArgument("unknown target '" + s + "' (expected expsum, cossum or abscube)");
}

std::vector<double> published_coefficients(int d) {
  static constexpr double kTable[] = {0.8, 0.6, 0.4, 0.7, 0.3, 0.5, 0.9, 0.2};
  std::vector<double> c(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = kTable[i % std::size(kTable)];
  return c;
}

std::vector<double> random_coefficients(int d, std::uint64_t seed) {
  UniformStream rng(seed);
  std::vector<double> c(static_cast<std::size_t>(d));
  for (auto& v : c) v = rng.next();
  return c;
}

TargetFunction make_target(TargetKind kind, std::vector<double> coeffs) {
  return [kind, coeffs = std::move(coeffs)](std::span<const double> y) {
    if (y.size() != coeffs.size()) throw InvalidArgument("target: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += coeffs[i] * y[i];
    switch (kind) {
      case TargetKind::ExpSum: return std::exp(-s);
      case TargetKind::CosSum: return std::cos(s);
      case TargetKind::AbsCube: return std::abs(s * s * s);
    }
    return 0.0;
  };
}

void StudyConfig::resolve() {
  if (d < 1) throw InvalidArgument("d must be >= 1");
  if (q_min < 0 || q_max < q_min) throw InvalidArgument("q range must satisfy 0 <= q_min <= q_max");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("scaling coefficient c must be positive");
  if (repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  if (n_test < 1) throw InvalidArgument("n_test must be >= 1");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  if (grid == Provenance::Weil) repetitions = 1;
  if (target_coeffs.empty()) {
    target_coeffs = target_coeff_seed ? random_coefficients(d, *target_coeff_seed) : published_coefficients(d);
  }
  if (target_coeffs.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("target_coeffs must have exactly d entries");
  }
}

std::vector<std::string> StudyConfig::echo() const {
  std::vector<std::string> out = {
      "space=" + to_string(space),
      "d=" + std::to_string(d),
      "q_min=" + std::to_string(q_min),
      "q_max=" + std::to_string(q_max),
      "scaling=" + to_string(scaling),
      "c=" + csv::format_double(c),
      "family=" + to_string(basis.family()),
      "normalization=" + to_string(basis.normalization()),
      "weights=" + to_string(weights),
      "grid=" + to_string(grid),
      "repetitions=" + std::to_string(repetitions),
      "seed=" + std::to_string(seed),
      "target=" + to_string(target),
      "target_coeffs=" + join_doubles(target_coeffs),
      "n_test=" + std::to_string(n_test),
  };
  if (target_coeff_seed) out.push_back("target_coeff_seed=" + std::to_string(*target_coeff_seed));
  return out;
}

void apply_config_entry(StudyConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "space") {
    cfg.space = parse_index_set_kind(value);
  } else if (key == "d") {
    cfg.d = parse_number<int>(key, value);
  } else if (key == "q_min") {
    cfg.q_min = parse_number<int>(key, value);
  } else if (key == "q_max") {
    cfg.q_max = parse_number<int>(key, value);
  } else if (key == "q_range") {
    const auto pos = value.find("..");
    if (pos == std::string::npos) throw ParseError("q_range must look like 'lo..hi'");
    cfg.q_min = parse_number<int>(key, value.substr(0, pos));
    cfg.q_max = parse_number<int>(key, value.substr(pos + 2));
  } else if (key == "scaling") {
    cfg.scaling = parse_scaling_rule(value);
  } else if (key == "c") {
    cfg.c = parse_number<double>(key, value);
  } else if (key == "family") {
    const Family f = parse_family(value);
    // Legendre only exists in orthonormal form.
    cfg.basis = BasisSpec(f, f == Family::Legendre ? Normalization::Orthonormal : cfg.basis.normalization());
  } else if (key == "normalization") {
    cfg.basis = BasisSpec(cfg.basis.family(), parse_normalization(value));
  } else if (key == "weights") {
    cfg.weights = parse_weight_scheme(value);
  } else if (key == "grid") {
    cfg.grid = parse_provenance(value);
  } else if (key == "repetitions") {
    cfg.repetitions = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "target") {
    cfg.target = parse_target_kind(value);
  } else if (key == "target_coeffs") {
    cfg.target_coeffs = parse_double_list(value);
  } else if (key == "target_coeff_seed") {
    cfg.target_coeff_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "n_test") {
    cfg.n_test = parse_number<std::size_t>(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_number<int>(key, value);
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

void apply_config_text(StudyConfig& cfg, std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string& s = line;
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string t) {
      const auto b = t.find_first_not_of(" \t");
      const auto e = t.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    try {
      apply_config_entry(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

CellPlan plan_cell(const StudyConfig& cfg, int q) {
  CellPlan p;
  p.q = q;
  p.N = static_cast<std::size_t>(index_set_cardinality(cfg.space, q, cfg.d));
  const double n = static_cast<double>(p.N);
  const double raw = cfg.scaling == ScalingRule::Linear ? cfg.c * n : cfg.c * n * n;
  p.m_target = static_cast<std::size_t>(std::max(1.0, std::round(raw)));
  const std::uint64_t M_target = std::max<std::uint64_t>(2, 2 * static_cast<std::uint64_t>(p.m_target) - 1);
  p.M = nearest_prime(M_target);
  p.m = static_cast<std::size_t>(p.M / 2 + 1);
  return p;
}

std::uint64_t cell_seed(const StudyConfig& cfg, int q, int rep) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(rep));
}

std::uint64_t test_set_seed(const StudyConfig& cfg) { return derive_seed(cfg.seed, kTestStream); }

SampleSet cell_samples(const StudyConfig& cfg, const CellPlan& plan, int rep) {
  switch (cfg.grid) {
    case Provenance::Weil: return weil_grid(plan.M, cfg.d).samples();
    case Provenance::McChebyshev: return mc_sample(McMeasure::Chebyshev, plan.m, cfg.d, cell_seed(cfg, plan.q, rep));
    case Provenance::McUniform: return mc_sample(McMeasure::Uniform, plan.m, cfg.d, cell_seed(cfg, plan.q, rep));
  }
  throw InvalidArgument("unknown grid");
}

std::vector<CellResult> run_cond_study(const StudyConfig& cfg) {
  return run_cells(cfg, [&](const CellPlan& plan, const SampleSet& pts) {
    const IndexSet lambda = IndexSet::build(cfg.space, plan.q, cfg.d);
    if (pts.size() < lambda.size()) return kInf;  // under-determined: rank < N
    const Eigen::VectorXd sqrt_w = compute_weights(cfg.weights, pts.points).array().sqrt();
    const Eigen::MatrixXd design = sqrt_w.asDiagonal() * basis_matrix(cfg.basis, lambda, pts);
    const ConditionReport rep = condition_report(design);
    return rep.cond_D * 1e-12 < 1.0 ? rep.cond_A : kInf;
  });
}

FitResult conv_cell_fit(const StudyConfig& cfg, const CellPlan& plan, const SampleSet& pts) {
  const IndexSet lambda = IndexSet::build(cfg.space, plan.q, cfg.d);
  const TargetFunction f = make_target(cfg.target, cfg.target_coeffs);
  Eigen::VectorXd values(pts.points.rows());
  std::vector<double> y(static_cast<std::size_t>(cfg.d));
  for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
    for (int k = 0; k < cfg.d; ++k) y[static_cast<std::size_t>(k)] = pts.points(i, k);
    values(i) = f(y);
  }
  return solve(pts, values, lambda, cfg.basis, cfg.weights);
}

std::vector<CellResult> run_conv_study(const StudyConfig& cfg) {
  const TargetFunction f = make_target(cfg.target, cfg.target_coeffs);
  const std::uint64_t test_seed = test_set_seed(cfg);
  return run_cells(cfg, [&](const CellPlan& plan, const SampleSet& pts) {
    try {
      const FitResult fit = conv_cell_fit(cfg, plan, pts);
      return l2_error(fit, f, cfg.n_test, test_seed).l2_error;
    } catch (const SingularSystemError&) {
      return kInf;
    } catch (const InvalidArgument&) {
      // under-determined cell (m < N)
      return kInf;
    }
  });
}

void write_study_csv(std::ostream& os, const std::string& command, const StudyConfig& cfg,
                     const std::vector<CellResult>& cells, const std::string& value_name) {
  os << "# command=" << command << '\n';
  for (const auto& line : cfg.echo()) os << "# " << line << '\n';
  os << "# test_seed=" << test_set_seed(cfg) << '\n';
  os << "q,N,m,M," << value_name << '\n';
  for (const auto& cell : cells) {
    const auto& p = cell.plan;
    if (!is_prime(p.M) || p.m != p.M / 2 + 1) throw std::logic_error("cell bookkeeping violated");
    os << p.q << ',' << p.N << ',' << p.m << ',' << p.M << ',' << csv::format_double(cell.value) << '\n';
  }
}

void write_repetitions_csv(std::ostream& os, const std::vector<CellResult>& cells, const std::string& value_name) {
  os << "q,rep,seed," << value_name << '\n';
  for (const auto& cell : cells) {
    for (std::size_t r = 0; r < cell.rep_values.size(); ++r) {
      os << cell.plan.q << ',' << r << ',' << cell.rep_seeds[r] << ',' << csv::format_double(cell.rep_values[r])
         << '\n';
    }
  }
}

std::uint64_t cmd_points(std::uint64_t M_target, int d, std::ostream& out) {
  if (M_target < 2) throw InvalidArgument("M_target must be >= 2");
  const std::uint64_t M = nearest_prime(M_target);
  write_points_csv(out, weil_grid(M, d).samples());
  return M;
}

std::vector<Interval> parse_box(const std::string& s, int d) {
  std::vector<Interval> box;
  std::size_t start = 0;
  while (start <= s.size()) {
    // 'x' separates coordinates; it never occurs inside a number here.
    auto end = s.find('x', start);
    if (end == std::string::npos) end = s.size();
    const std::string part = s.substr(start, end - start);
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw InvalidArgument("box component '" + part + "' must be lo:hi");
    try {
      box.push_back({csv::parse_double(part.substr(0, colon), 0), csv::parse_double(part.substr(colon + 1), 0)});
    } catch (const ParseError&) {
      throw InvalidArgument("box component '" + part + "' is not numeric");
    }
    start = end + 1;
  }
  if (box.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("box '" + s + "' has " + std::to_string(box.size()) + " components, expected " +
                          std::to_string(d));
  }
  for (const auto& iv : box) {
    if (!(iv.lo <= iv.hi) || iv.lo < -1.0 || iv.hi > 1.0) {
      throw InvalidArgument("box '" + s + "' must satisfy -1 <= lo <= hi <= 1 in every coordinate");
    }
  }
  return box;
}

std::string format_box(const std::vector<Interval>& box) {
  std::string s;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (i) s += 'x';
    auto num = [](double v) {
      std::ostringstream os;
      os << v;
      return os.str();
    };
    s += num(box[i].lo) + ':' + num(box[i].hi);
  }
  return s;
}

std::vector<std::vector<Interval>> default_boxes(int d) {
  const auto n = static_cast<std::size_t>(d);
  std::vector<Interval> lower_half(n, {-1.0, 1.0});
  lower_half[0] = {-1.0, 0.0};
  return {
      std::vector<Interval>(n, {0.0, 0.5}),
      lower_half,
      std::vector<Interval>(n, {-0.5, 0.5}),
  };
}

std::vector<EquidistRow> cmd_equidist(std::uint64_t M_target, int d, const std::vector<std::vector<Interval>>& boxes,
                                      std::ostream* out) {
  if (M_target < 2) throw InvalidArgument("M_target must be >= 2");
  const std::uint64_t M = nearest_prime(M_target);
  const SampleSet pts = weil_grid(M, d).samples();
  std::vector<EquidistRow> rows;
  for (const auto& box : boxes) {
    EquidistRow r;
    r.box = format_box(box);
    r.observed = equidist_box_fraction(pts, box);
    r.arcsine = arcsine_box_measure(box);
    r.deviation = std::abs(r.observed - r.arcsine);
    rows.push_back(r);
  }
  if (out) {
    *out << "# M=" << M << "\n# d=" << d << '\n';
    *out << "box,observed_fraction,arcsine_measure,abs_deviation\n";
    for (const auto& r : rows) {
      *out << r.box << ',' << csv::format_double(r.observed) << ',' << csv::format_double(r.arcsine) << ','
           << csv::format_double(r.deviation) << '\n';
    }
  }
  return rows;
}

FitResult cmd_fit(std::istream& points_csv, std::istream& values_csv, IndexSetKind space, int q,
                  const BasisSpec& basis, const WeightScheme& weights) {
  const csv::Table pts = [&] {
    try {
      return csv::read_table(points_csv);
    } catch (const ParseError& e) {
      throw ParseError(std::string("points: ") + e.what());
    }
  }();
  const csv::Table vals = [&] {
    try {
      return csv::read_table(values_csv);
    } catch (const ParseError& e) {
      throw ParseError(std::string("values: ") + e.what());
    }
  }();
  if (pts.rows.size() != vals.rows.size()) {
    throw ParseError("row count mismatch: " + std::to_string(pts.rows.size()) + " points but " +
                     std::to_string(vals.rows.size()) + " values");
  }
  const std::size_t skip = (!pts.header.empty() && pts.header.front() == "j") ? 1 : 0;
  const auto d = static_cast<int>(pts.header.size() - skip);
  if (d < 1) throw ParseError("points: no coordinate columns");

  Eigen::MatrixXd y(static_cast<Eigen::Index>(pts.rows.size()), d);
  Eigen::VectorXd f(static_cast<Eigen::Index>(vals.rows.size()));
  for (std::size_t i = 0; i < pts.rows.size(); ++i) {
    for (int k = 0; k < d; ++k) {
      const double v = pts.rows[i][skip + static_cast<std::size_t>(k)];
      if (!(std::abs(v) <= 1.0)) {
        throw ParseError("points: row " + std::to_string(i + 1) + " has a coordinate outside [-1, 1]");
      }
      y(static_cast<Eigen::Index>(i), k) = v;
    }
    f(static_cast<Eigen::Index>(i)) = vals.rows[i].back();
  }
  return solve(y, f, IndexSet::build(space, q, d), basis, weights);
}

bool cmd_check_bounds(std::ostream& out, std::ostream& log, std::uint64_t seed) {
  bool all = true;

  write_gram_report_csv_header(out);
  for (int d = 1; d <= 3; ++d) {
    for (int q = 1; q <= 3; ++q) {
      for (std::uint64_t M : {next_prime(2 * static_cast<std::uint64_t>(q) + 2), std::uint64_t{97}, std::uint64_t{997}}) {
        const IndexSet lambda = IndexSet::build(IndexSetKind::TotalDegree, q, d);
        const GramBoundReport r = check_gram_bounds(M, d, q, lambda, true);
        write_gram_report_csv_row(out, r);
        if (!r.pass) {
          log << "gram bound: M=" << M << " d=" << d << " q=" << q << " fails (max_offdiag="
              << csv::format_double(r.max_offdiag_abs) << ", diag range [" << csv::format_double(r.diag_min) << ", "
              << csv::format_double(r.diag_max) << "] vs [" << csv::format_double(r.diag_lo) << ", "
              << csv::format_double(r.diag_hi) << "])\n";
        }
        all = all && r.pass;
      }
    }
  }

  struct GapCase {
    int d;
    std::vector<MultiIndex> indices;
  };
  const std::vector<GapCase> gaps = {
      {1, {MultiIndex{1}, MultiIndex{2}}},
      {2, {MultiIndex{1, 1}, MultiIndex{1, 2}, MultiIndex{2, 1}, MultiIndex{2, 2}}},
  };
  for (const auto& g : gaps) {
    const IndexSet lambda = IndexSet::custom(g.d, g.indices);
    const std::uint64_t M = next_prime(stability_modulus_bound(g.d, lambda.size()));
    const double gap = spectral_gap(M, g.d, lambda);
    const bool ok = gap <= 0.5;
    log << "spectral gap: d=" << g.d << " N=" << lambda.size() << " M=" << M << " gap=" << csv::format_double(gap)
        << (ok ? " ok" : " FAIL") << '\n';
    all = all && ok;
  }

  // Exponential sums: random nonzero polynomials, primes above the degree.
  UniformStream rng(seed);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= 10007; ++p) {
    if (is_prime(p)) primes.push_back(p);
  }
  std::size_t failures = 0;
  constexpr int kCases = 200;
  for (int t = 0; t < kCases; ++t) {
    const int d = 1 + static_cast<int>(rng.next() * 6);
    std::vector<std::uint64_t> eligible;
    for (auto p : primes) {
      if (p > static_cast<std::uint64_t>(d)) eligible.push_back(p);
    }
    const std::uint64_t M = eligible[static_cast<std::size_t>(rng.next() * static_cast<double>(eligible.size()))];
    std::vector<std::int64_t> coeffs(static_cast<std::size_t>(d));
    bool nonzero = false;
    while (!nonzero) {
      for (auto& c : coeffs) {
        c = static_cast<std::int64_t>(rng.next() * static_cast<double>(M));
        nonzero = nonzero || c != 0;
      }
    }
    const double mag = std::abs(weil_exponential_sum(coeffs, M));
    if (mag > (d - 1) * std::sqrt(static_cast<double>(M)) + 1e-9) ++failures;
  }
  log << "exponential sums: " << kCases - static_cast<int>(failures) << "/" << kCases << " within (d-1) sqrt(M)\n";
  return all && failures == 0;
}

}  // namespace weil
