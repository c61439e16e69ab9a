// Command-line driver: point generation, fitting, studies and bound checks.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "weil/csv.hpp"
#include "weil/errors.hpp"
#include "weil/study.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 2, kNumerical = 3, kIo = 4 };

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw weil::IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool is_file() const { return static_cast<bool>(file_); }
  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw weil::IoError("failed writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw weil::IoError("cannot open '" + path + "' for reading");
  return in;
}

struct StudyFlags {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value, applied in order
  std::map<std::string, std::string> named;
  std::string out;
};

void add_study_options(CLI::App* cmd, StudyFlags& f) {
  cmd->add_option("--config", f.config_path, "key=value config file");
  cmd->add_option("--out", f.out, "output CSV (default stdout)");
  cmd->add_option("--set", f.overrides, "extra key=value override, repeatable");
  static const char* keys[] = {"space", "d",       "q_min",   "q_max",       "q_range", "scaling", "c",
                               "family", "normalization", "weights", "grid", "repetitions", "seed", "target",
                               "target_coeffs", "target_coeff_seed", "n_test", "threads"};
  for (const char* key : keys) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    cmd->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.named[key] = v; },
                                          std::string("config key ") + key);
  }
}

weil::StudyConfig build_config(const StudyFlags& f) {
  weil::StudyConfig cfg;
  if (!f.config_path.empty()) {
    auto in = open_input(f.config_path);
    weil::apply_config_text(cfg, in);
  }
  for (const auto& [key, value] : f.named) weil::apply_config_entry(cfg, key, value);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw weil::InvalidArgument("--set expects key=value, got '" + kv + "'");
    weil::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.resolve();
  return cfg;
}

int run_study(const StudyFlags& f, bool conv) {
  const weil::StudyConfig cfg = build_config(f);
  const auto cells = conv ? weil::run_conv_study(cfg) : weil::run_cond_study(cfg);
  const std::string value_name = conv ? "l2_error" : "cond_A";
  Output out(f.out);
  weil::write_study_csv(out.stream(), conv ? "conv-study" : "cond-study", cfg, cells, value_name);
  out.close();
  if (out.is_file() && cfg.grid != weil::Provenance::Weil) {
    Output reps(f.out + ".reps.csv");
    weil::write_repetitions_csv(reps.stream(), cells, value_name);
    reps.close();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial least squares on Weil point sets"};
  app.require_subcommand(1);

  // points
  std::uint64_t points_m = 0;
  int points_d = 1;
  std::string points_out;
  auto* points = app.add_subcommand("points", "write the Weil grid for nearest_prime(M)");
  points->add_option("--M", points_m, "target modulus")->required();
  points->add_option("--d", points_d, "dimension")->required();
  points->add_option("--out", points_out, "output CSV (default stdout)");

  // fit
  std::string fit_points, fit_values, fit_out, fit_space = "TD", fit_family = "chebyshev",
                                                fit_norm = "orthonormal", fit_weights = "unit";
  int fit_q = 0;
  auto* fit = app.add_subcommand("fit", "least-squares fit of sampled data");
  fit->add_option("--points", fit_points, "points CSV (j,y1..yd or y1..yd)")->required();
  fit->add_option("--values", fit_values, "values CSV, last column used")->required();
  fit->add_option("--q", fit_q, "polynomial order")->required();
  fit->add_option("--space", fit_space, "TP or TD");
  fit->add_option("--family", fit_family, "chebyshev or legendre");
  fit->add_option("--normalization", fit_norm, "unnormalized or orthonormal");
  fit->add_option("--weights", fit_weights, "unit or density_ratio[:uniform|:chebyshev]");
  fit->add_option("--out", fit_out, "coefficient CSV (default stdout); condition report goes to <out>.cond.csv");

  StudyFlags cond_flags, conv_flags;
  auto* cond = app.add_subcommand("cond-study", "condition numbers per polynomial order");
  add_study_options(cond, cond_flags);
  auto* conv = app.add_subcommand("conv-study", "approximation error per polynomial order");
  add_study_options(conv, conv_flags);

  // equidist
  std::uint64_t eq_m = 0;
  int eq_d = 2;
  std::vector<std::string> eq_boxes;
  std::string eq_out;
  auto* equidist = app.add_subcommand("equidist", "box counts against the arcsine measure");
  equidist->add_option("--M", eq_m, "target modulus")->required();
  equidist->add_option("--d", eq_d, "dimension");
  equidist->add_option("--box", eq_boxes, "box as lo:hi per coordinate joined by 'x', repeatable");
  equidist->add_option("--out", eq_out, "output CSV (default stdout)");

  // check-bounds
  std::uint64_t cb_seed = 1;
  std::string cb_out;
  auto* check = app.add_subcommand("check-bounds", "Gram, stability and exponential-sum checks");
  check->add_option("--seed", cb_seed, "seed for the random exponential-sum cases");
  check->add_option("--out", cb_out, "gram report CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*points) {
      Output out(points_out);
      const std::uint64_t M = weil::cmd_points(points_m, points_d, out.stream());
      out.close();
      (out.is_file() ? std::cout : std::cerr) << "M=" << M << '\n';
    } else if (*fit) {
      auto pin = open_input(fit_points);
      auto vin = open_input(fit_values);
      const weil::BasisSpec spec(weil::parse_family(fit_family), weil::parse_normalization(fit_norm));
      const weil::FitResult result = weil::cmd_fit(pin, vin, weil::parse_index_set_kind(fit_space), fit_q, spec,
                                                   weil::parse_weight_scheme(fit_weights));
      Output out(fit_out);
      weil::write_fit_csv(out.stream(), result);
      out.close();
      if (out.is_file()) {
        Output cond_out(fit_out + ".cond.csv");
        weil::write_condition_csv(cond_out.stream(), result.condition);
        cond_out.close();
      }
      std::cerr << "cond_D=" << weil::csv::format_double(result.condition.cond_D)
                << " cond_A=" << weil::csv::format_double(result.condition.cond_A) << '\n';
    } else if (*cond) {
      return run_study(cond_flags, false);
    } else if (*conv) {
      return run_study(conv_flags, true);
    } else if (*equidist) {
      std::vector<std::vector<weil::Interval>> boxes;
      for (const auto& b : eq_boxes) boxes.push_back(weil::parse_box(b, eq_d));
      if (boxes.empty()) boxes = weil::default_boxes(eq_d);
      Output out(eq_out);
      weil::cmd_equidist(eq_m, eq_d, boxes, &out.stream());
      out.close();
    } else if (*check) {
      Output out(cb_out);
      const bool ok = weil::cmd_check_bounds(out.stream(), std::cerr, cb_seed);
      out.close();
      std::cerr << (ok ? "all checks passed\n" : "some checks failed; see the report above\n");
    }
  } catch (const weil::SingularSystemError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const weil::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const weil::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const weil::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const weil::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const weil::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
