#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "weil/csv.hpp"
#include "weil/errors.hpp"
#include "weil/primes.hpp"
#include "weil/study.hpp"

using weil::StudyConfig;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

std::string study_csv(const StudyConfig& cfg, bool conv) {
  const auto cells = conv ? weil::run_conv_study(cfg) : weil::run_cond_study(cfg);
  std::ostringstream os;
  weil::write_study_csv(os, conv ? "conv-study" : "cond-study", cfg, cells, conv ? "l2_error" : "cond_A");
  return os.str();
}

StudyConfig parse_config(const std::string& text) {
  StudyConfig cfg;
  std::istringstream is(text);
  weil::apply_config_text(cfg, is);
  return cfg;
}

}  // namespace

TEST(Targets, Formulas) {
  const std::vector<double> y = {0.3, -0.5};
  const std::vector<double> c = {0.8, 0.6};
  const double s = 0.8 * 0.3 - 0.6 * 0.5;
  EXPECT_DOUBLE_EQ(weil::make_target(weil::TargetKind::ExpSum, c)(y), std::exp(-s));
  EXPECT_DOUBLE_EQ(weil::make_target(weil::TargetKind::CosSum, c)(y), std::cos(s));
  EXPECT_DOUBLE_EQ(weil::make_target(weil::TargetKind::AbsCube, c)(y), std::abs(s * s * s));
  EXPECT_THROW(weil::make_target(weil::TargetKind::ExpSum, c)(std::vector<double>{0.1}), weil::InvalidArgument);
}

TEST(Targets, Coefficients) {
  EXPECT_EQ(weil::published_coefficients(2), (std::vector<double>{0.8, 0.6}));
  EXPECT_EQ(weil::published_coefficients(10).size(), 10u);
  EXPECT_EQ(weil::published_coefficients(10)[8], 0.8);
  const auto a = weil::random_coefficients(4, 9);
  EXPECT_EQ(a, weil::random_coefficients(4, 9));
  for (double v : a) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Config, ParsesKeyValueText) {
  auto cfg = parse_config(
      "# comment\n\nspace = TP\nd=3\nq_range=2..5\nscaling=linear\nc=12\nfamily=legendre\nweights=density_ratio\n"
      "grid=mc_uniform\nrepetitions=4\nseed=77\ntarget=cossum\ntarget_coeffs=0.1,0.2,0.3\nn_test=500\nthreads=2\n");
  cfg.resolve();
  EXPECT_EQ(cfg.space, weil::IndexSetKind::TensorProduct);
  EXPECT_EQ(cfg.d, 3);
  EXPECT_EQ(cfg.q_min, 2);
  EXPECT_EQ(cfg.q_max, 5);
  EXPECT_EQ(cfg.scaling, weil::ScalingRule::Linear);
  EXPECT_EQ(cfg.c, 12.0);
  EXPECT_EQ(cfg.basis.family(), weil::Family::Legendre);
  EXPECT_EQ(weil::to_string(cfg.weights), "density_ratio:uniform");
  EXPECT_EQ(cfg.grid, weil::Provenance::McUniform);
  EXPECT_EQ(cfg.repetitions, 4);
  EXPECT_EQ(cfg.seed, 77u);
  EXPECT_EQ(cfg.target, weil::TargetKind::CosSum);
  EXPECT_EQ(cfg.target_coeffs, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(cfg.n_test, 500u);
  EXPECT_EQ(cfg.threads, 2);
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse_config("d=2\nbogus=1\n");
    FAIL();
  } catch (const weil::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_config("d=two\n"), weil::ParseError);
  EXPECT_THROW(parse_config("no equals sign\n"), weil::ParseError);
  EXPECT_THROW(parse_config("normalization=unnormalized\nfamily=legendre\nnormalization=unnormalized\n"), weil::ParseError);
}

TEST(Config, ResolveValidatesAndForcesSingleWeilRepetition) {
  StudyConfig cfg;
  cfg.repetitions = 20;
  cfg.resolve();
  EXPECT_EQ(cfg.repetitions, 1);
  EXPECT_EQ(cfg.target_coeffs, (std::vector<double>{0.8, 0.6}));

  StudyConfig bad;
  bad.c = -1;
  EXPECT_THROW(bad.resolve(), weil::InvalidArgument);
  StudyConfig bad_q;
  bad_q.q_min = 5;
  bad_q.q_max = 2;
  EXPECT_THROW(bad_q.resolve(), weil::InvalidArgument);
  StudyConfig bad_coeffs;
  bad_coeffs.target_coeffs = {1, 2, 3};
  EXPECT_THROW(bad_coeffs.resolve(), weil::InvalidArgument);

  StudyConfig seeded;
  seeded.target_coeff_seed = 5;
  seeded.resolve();
  EXPECT_EQ(seeded.target_coeffs, weil::random_coefficients(2, 5));
}

TEST(Config, EchoRoundTrips) {
  StudyConfig cfg;
  cfg.d = 3;
  cfg.scaling = weil::ScalingRule::Linear;
  cfg.c = 2.5;
  cfg.grid = weil::Provenance::McChebyshev;
  cfg.repetitions = 3;
  cfg.resolve();
  std::string text;
  for (const auto& l : cfg.echo()) text += l + "\n";
  auto back = parse_config(text);
  back.resolve();
  EXPECT_EQ(back.echo(), cfg.echo());
}

TEST(PlanCell, PrimeRuleBookkeeping) {
  StudyConfig cfg;
  cfg.resolve();
  const auto p = weil::plan_cell(cfg, 3);  // N = 10, m = 50, 2m - 1 = 99
  EXPECT_EQ(p.N, 10u);
  EXPECT_EQ(p.m_target, 50u);
  EXPECT_EQ(p.M, 101u);  // 97 and 101 are equidistant; ties go up
  EXPECT_EQ(p.m, 51u);

  cfg.scaling = weil::ScalingRule::Linear;
  cfg.c = 12;
  for (int q = 1; q <= 20; ++q) {
    const auto c = weil::plan_cell(cfg, q);
    EXPECT_TRUE(weil::is_prime(c.M));
    EXPECT_EQ(c.m, c.M / 2 + 1);
    EXPECT_EQ(c.m_target, static_cast<std::size_t>(std::llround(12.0 * static_cast<double>(c.N))));
    EXPECT_EQ(c.M, weil::nearest_prime(2 * c.m_target - 1));
  }
}

TEST(CondStudy, CsvLayoutAndEcho) {
  StudyConfig cfg;
  cfg.q_max = 4;
  cfg.resolve();
  const auto lines = lines_of(study_csv(cfg, false));
  EXPECT_EQ(lines[0], "# command=cond-study");
  std::size_t header = 0;
  while (lines[header][0] == '#') ++header;
  EXPECT_EQ(lines[header], "q,N,m,M,cond_A");
  ASSERT_EQ(lines.size(), header + 1 + 4);
  EXPECT_EQ(lines[header + 3].rfind("3,10,51,101,", 0), 0u);
  for (const auto& e : cfg.echo()) EXPECT_NE(std::find(lines.begin(), lines.end(), "# " + e), lines.end()) << e;
}

TEST(CondStudy, WeilOutputIndependentOfThreads) {
  StudyConfig a;
  a.q_max = 8;
  a.resolve();
  StudyConfig b = a;
  b.threads = 4;
  EXPECT_EQ(study_csv(a, false), study_csv(b, false));
  EXPECT_EQ(study_csv(a, true), study_csv(b, true));
  EXPECT_EQ(study_csv(a, false), study_csv(a, false));
}

TEST(CondStudy, MonteCarloDeterministicAndAveraged) {
  StudyConfig cfg;
  cfg.grid = weil::Provenance::McUniform;
  cfg.repetitions = 5;
  cfg.q_max = 4;
  cfg.scaling = weil::ScalingRule::Linear;
  cfg.c = 3;
  cfg.basis = weil::BasisSpec(weil::Family::Legendre, weil::Normalization::Orthonormal);
  cfg.resolve();
  StudyConfig threaded = cfg;
  threaded.threads = 3;
  const auto cells = weil::run_cond_study(cfg);
  const auto again = weil::run_cond_study(threaded);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(cells[i].rep_values, again[i].rep_values);
    double mean = 0;
    for (double v : cells[i].rep_values) mean += v;
    EXPECT_DOUBLE_EQ(cells[i].value, mean / 5);
    EXPECT_EQ(cells[i].rep_seeds[2], weil::cell_seed(cfg, cells[i].plan.q, 2));
  }
  std::ostringstream os;
  weil::write_repetitions_csv(os, cells, "cond_A");
  const auto lines = lines_of(os.str());
  EXPECT_EQ(lines[0], "q,rep,seed,cond_A");
  EXPECT_EQ(lines.size(), 1 + 4 * 5u);
}

TEST(CondStudy, UnderSampledCellsAreInfinite) {
  StudyConfig cfg;
  cfg.scaling = weil::ScalingRule::Linear;
  cfg.c = 0.1;
  cfg.q_min = 2;
  cfg.q_max = 2;
  cfg.resolve();
  EXPECT_TRUE(std::isinf(weil::run_cond_study(cfg)[0].value));
  EXPECT_TRUE(std::isinf(weil::run_conv_study(cfg)[0].value));
  EXPECT_NE(study_csv(cfg, false).find(",inf\n"), std::string::npos);
}

TEST(ConvStudy, CellMatchesDirectEvaluation) {
  StudyConfig cfg;
  cfg.q_min = 4;
  cfg.q_max = 4;
  cfg.resolve();
  const auto cells = weil::run_conv_study(cfg);
  const auto plan = weil::plan_cell(cfg, 4);
  const auto fit = weil::conv_cell_fit(cfg, plan, weil::cell_samples(cfg, plan, 0));
  const auto f = weil::make_target(cfg.target, cfg.target_coeffs);
  const auto test = weil::mc_sample(weil::McMeasure::Uniform, cfg.n_test, 2, weil::test_set_seed(cfg));
  const auto approx = weil::evaluate_fit(fit, test.points);
  double s = 0;
  for (Eigen::Index i = 0; i < test.points.rows(); ++i) {
    const double e = f(std::vector<double>{test.points(i, 0), test.points(i, 1)}) - approx(i);
    s += e * e;
  }
  EXPECT_NEAR(cells[0].value, std::sqrt(s / static_cast<double>(cfg.n_test)), 1e-15);
}

TEST(CmdPoints, Examples) {
  std::ostringstream os;
  EXPECT_EQ(weil::cmd_points(997, 2, os), 997u);
  auto lines = lines_of(os.str());
  ASSERT_EQ(lines.size(), 500u);
  EXPECT_EQ(lines[1], "0,1.0,1.0");

  std::ostringstream small;
  EXPECT_EQ(weil::cmd_points(7, 3, small), 7u);
  lines = lines_of(small.str());
  ASSERT_EQ(lines.size(), 5u);
  const auto row = weil::csv::split(lines[4]);
  EXPECT_EQ(row[0], "3");
  EXPECT_NEAR(std::stod(row[1]), std::cos(2 * std::numbers::pi * 3 / 7), 1e-16);
  EXPECT_NEAR(std::stod(row[2]), std::cos(2 * std::numbers::pi * 2 / 7), 1e-16);
  EXPECT_NEAR(std::stod(row[3]), std::cos(2 * std::numbers::pi * 6 / 7), 1e-16);

  std::ostringstream two;
  EXPECT_EQ(weil::cmd_points(2, 1, two), 2u);
  EXPECT_EQ(lines_of(two.str()).size(), 3u);
  EXPECT_EQ(weil::cmd_points(100, 1, two), 101u);
  EXPECT_THROW(weil::cmd_points(1, 1, two), weil::InvalidArgument);
}

TEST(Boxes, ParseAndFormat) {
  const auto b = weil::parse_box("0:0.5x-1:1", 2);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1].lo, -1.0);
  EXPECT_EQ(weil::format_box(b), "0:0.5x-1:1");
  EXPECT_THROW(weil::parse_box("0:0.5", 2), weil::InvalidArgument);
  EXPECT_THROW(weil::parse_box("0.5:0x0:1", 2), weil::InvalidArgument);
  EXPECT_THROW(weil::parse_box("0:2x0:1", 2), weil::InvalidArgument);
  EXPECT_THROW(weil::parse_box("a:bx0:1", 2), weil::InvalidArgument);
}

TEST(CmdEquidist, FullCubeAndDefaults) {
  std::ostringstream os;
  const auto rows = weil::cmd_equidist(10007, 2, {weil::parse_box("-1:1x-1:1", 2)}, &os);
  EXPECT_EQ(rows[0].deviation, 0.0);
  EXPECT_NE(os.str().find("box,observed_fraction,arcsine_measure,abs_deviation\n"), std::string::npos);
  const auto defaults = weil::cmd_equidist(10007, 2, weil::default_boxes(2), nullptr);
  ASSERT_EQ(defaults.size(), 3u);
  EXPECT_NEAR(defaults[0].arcsine, 1.0 / 36, 1e-15);
  for (const auto& r : defaults) EXPECT_LE(r.deviation, 0.01) << r.box;
}

TEST(CmdFit, ReproducesStudyFit) {
  StudyConfig cfg;
  cfg.resolve();
  const auto plan = weil::plan_cell(cfg, 6);
  const auto pts = weil::cell_samples(cfg, plan, 0);
  std::ostringstream pcsv, vcsv;
  weil::write_points_csv(pcsv, pts);
  vcsv << "f\n";
  const auto f = weil::make_target(cfg.target, cfg.target_coeffs);
  for (Eigen::Index i = 0; i < pts.points.rows(); ++i) {
    vcsv << weil::csv::format_double(f(std::vector<double>{pts.points(i, 0), pts.points(i, 1)})) << '\n';
  }
  std::istringstream pin(pcsv.str()), vin(vcsv.str());
  const auto fit = weil::cmd_fit(pin, vin, cfg.space, 6, cfg.basis, cfg.weights);
  const auto ref = weil::conv_cell_fit(cfg, plan, pts);
  EXPECT_EQ(fit.coefficients, ref.coefficients);
}

TEST(CmdFit, BasisElementRecovered) {
  std::ostringstream pcsv;
  weil::cmd_points(101, 2, pcsv);
  const auto pts = weil::weil_grid(101, 2).points();
  std::ostringstream vcsv;
  vcsv << "j,value\n";
  for (Eigen::Index i = 0; i < pts.rows(); ++i) vcsv << i << ',' << weil::csv::format_double(pts(i, 0)) << '\n';
  std::istringstream pin(pcsv.str()), vin(vcsv.str());
  const weil::BasisSpec cosine(weil::Family::Chebyshev, weil::Normalization::Unnormalized);
  const auto fit = weil::cmd_fit(pin, vin, weil::IndexSetKind::TotalDegree, 2, cosine, weil::WeightScheme::unit());
  for (std::size_t j = 0; j < fit.index_set.size(); ++j) {
    const double expect = fit.index_set[j] == weil::MultiIndex{1, 0} ? 1.0 : 0.0;
    EXPECT_NEAR(fit.coefficients(static_cast<Eigen::Index>(j)), expect, 1e-10);
  }
}

TEST(CmdFit, InputErrors) {
  const weil::BasisSpec cheb(weil::Family::Chebyshev, weil::Normalization::Orthonormal);
  auto run = [&](const std::string& p, const std::string& v, int q = 1) {
    std::istringstream pin(p), vin(v);
    return weil::cmd_fit(pin, vin, weil::IndexSetKind::TotalDegree, q, cheb, weil::WeightScheme::unit());
  };
  try {
    run("y1\n0.1\n0.2\n0.3\n", "f\n1\n2\n");
    FAIL();
  } catch (const weil::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("3 points"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("2 values"), std::string::npos);
  }
  try {
    run("y1\n0.1\nabc\n", "f\n1\n2\n");
    FAIL();
  } catch (const weil::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(run("y1\n0.1\n1.5\n", "f\n1\n2\n"), weil::ParseError);
  EXPECT_THROW(run("y1\n0.1\n0.2\n", "f\n1\n2\n", 3), weil::InvalidArgument);
}
