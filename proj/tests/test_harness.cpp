#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperavg/direct_solver.hpp"
#include "hyperavg/harness.hpp"
#include "hyperavg/spectrum.hpp"

using namespace hyperavg;
using namespace hyperavg::harness;
using cplx = std::complex<double>;

namespace {

RunConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("term lists parse amplitudes, waveforms and frequencies") {
  TermList basic = parse_term_list("cos:1, sin:2");
  REQUIRE(basic.terms.size() == 2);
  CHECK(basic.terms[0].amplitude == 1.0);
  CHECK_FALSE(basic.terms[0].is_sin);
  CHECK(basic.terms[0].frequency == 1);
  CHECK(basic.terms[1].is_sin);
  CHECK(basic.terms[1].frequency == 2);
  CHECK(basic(0.7) == doctest::Approx(std::cos(0.7) + std::sin(1.4)).epsilon(1e-15));

  TermList scaled = parse_term_list("5*sin:2");
  REQUIRE(scaled.terms.size() == 1);
  CHECK(scaled.terms[0].amplitude == 5.0);
  CHECK(scaled.terms[0].is_sin);
  CHECK(scaled.terms[0].frequency == 2);

  TermList fractional = parse_term_list(" 1.5 * cos : 3 "); // whitespace tolerated
  REQUIRE(fractional.terms.size() == 1);
  CHECK(fractional.terms[0].amplitude == 1.5);
  CHECK(fractional.terms[0].frequency == 3);

  TermList constant = parse_term_list("2.5*cos:0");
  CHECK(constant(1.234) == 2.5);

  CHECK(parse_term_list("").zero());
  CHECK(parse_term_list("0").zero());
  CHECK(parse_term_list("  0  ").zero());
  CHECK(parse_term_list("").operator()(0.3) == 0.0);
}

TEST_CASE("malformed term lists are rejected") {
  CHECK_THROWS_AS(parse_term_list("tan:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("cos:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("cos:-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("cos"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("2*"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("q*cos:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("cos:1,,sin:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_term_list("cos:1.5"), std::invalid_argument);
}

TEST_CASE("a term list and its spectrum agree") {
  TermList list = parse_term_list("1.5*cos:3, 0.5*sin:1, 0.25*cos:0");
  Spectrum spec = term_list_spectrum(list);
  CHECK(spec.conjugate_symmetric());
  CHECK(spec.amplitude_at(3.0) == cplx(0.75, 0.0));
  CHECK(spec.amplitude_at(-3.0) == cplx(0.75, 0.0));
  CHECK(spec.amplitude_at(1.0) == cplx(0.0, -0.25));
  CHECK(spec.amplitude_at(-1.0) == cplx(0.0, 0.25));
  CHECK(spec.amplitude_at(0.0) == cplx(0.25, 0.0));
  for (double x : {0.0, 0.3, 1.7, 4.4}) {
    CHECK(spec.evaluate(x) == doctest::Approx(list(x)).epsilon(1e-14));
  }
  CHECK(term_list_spectrum(parse_term_list("0")).modes().empty());
  // a zero-frequency sine contributes nothing
  CHECK(term_list_spectrum(parse_term_list("3*sin:0")).modes().empty());
}

TEST_CASE("configs parse every key") {
  RunConfig cfg = config_from(
      "# experiment description\n"
      "[run]\n"
      "model = simplified_sw\n"
      "epsilon = 0.1, 0.05, 0.01\n"
      "M = 64            # grid\n"
      "dt_direct = 0.002\n"
      "dt_averaged = 0.004\n"
      "t_end = 2.5\n"
      "[profiles]\n"
      "Z0 = cos:1\n"
      "U0 = 0.5*sin:3\n"
      "h = 5*sin:2\n"
      "[outputs]\n"
      "outputs = csv\n"
      "k_max = 12\n"
      "regularized = true\n"
      "levels = 5\n"
      "tau_end = 0.128\n");
  CHECK(cfg.model == direct::ModelKind::simplified_sw);
  REQUIRE(cfg.epsilons.size() == 3);
  CHECK(cfg.epsilons[0] == 0.1);
  CHECK(cfg.epsilons[1] == 0.05);
  CHECK(cfg.epsilons[2] == 0.01);
  CHECK(cfg.m == 64);
  CHECK(cfg.dt_direct == 0.002);
  CHECK(cfg.dt_averaged == 0.004);
  CHECK_FALSE(cfg.t_end_is_one_over_eps);
  CHECK(cfg.t_end == 2.5);
  CHECK(cfg.z0(0.9) == doctest::Approx(std::cos(0.9)).epsilon(1e-15));
  CHECK(cfg.u0(0.9) == doctest::Approx(0.5 * std::sin(2.7)).epsilon(1e-15));
  CHECK(cfg.h(0.9) == doctest::Approx(5.0 * std::sin(1.8)).epsilon(1e-15));
  CHECK(cfg.write_csv);
  CHECK_FALSE(cfg.write_summary);
  CHECK(cfg.k_max == 12);
  CHECK(cfg.regularized);
  CHECK(cfg.levels == 5);
  CHECK(cfg.tau_end == 0.128);
}

TEST_CASE("config defaults survive an empty file") {
  RunConfig cfg = config_from("");
  CHECK(cfg.model == direct::ModelKind::linear_regularized);
  REQUIRE(cfg.epsilons.size() == 1);
  CHECK(cfg.epsilons[0] == 0.1);
  CHECK(cfg.m == 256);
  CHECK(cfg.dt_direct == 1e-3);
  CHECK(cfg.dt_averaged == 1e-3);
  CHECK(cfg.t_end_is_one_over_eps);
  CHECK(cfg.z0.zero());
  CHECK(cfg.u0.zero());
  CHECK(cfg.h.zero());
  CHECK(cfg.write_csv);
  CHECK(cfg.write_summary);
  CHECK(cfg.k_max == 10);
  CHECK_FALSE(cfg.regularized);
  CHECK(cfg.levels == 4);
  CHECK(cfg.tau_end == 0.5);
}

TEST_CASE("the stock experiment preset expands to its published data") {
  RunConfig cfg = config_from("preset = paper32\n");
  REQUIRE(cfg.z0.terms.size() == 2);
  CHECK(cfg.u0.zero());
  REQUIRE(cfg.h.terms.size() == 1);
  for (double x : {0.1, 2.2}) {
    CHECK(cfg.z0(x) == doctest::Approx(std::cos(x) + std::sin(2 * x)).epsilon(1e-15));
    CHECK(cfg.h(x) == doctest::Approx(5.0 * std::sin(2 * x)).epsilon(1e-15));
  }
  CHECK(cfg.t_end_is_one_over_eps); // untouched by the preset
}

TEST_CASE("one_over_eps horizons set the sweep flag") {
  RunConfig cfg = config_from("t_end = 3.0\nt_end = one_over_eps\n");
  CHECK(cfg.t_end_is_one_over_eps);
  CHECK(cfg.t_end == 0.0);
}

TEST_CASE("config errors carry the line number") {
  try {
    config_from("model = linear_dispersion\nM = 64\nfrobnicate = 1\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("unknown key") != std::string::npos);
  }

  CHECK_THROWS_AS(config_from("epsilon = 0"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("epsilon = 1.0"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("epsilon = -0.1"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("M = 65"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("M = 6"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("dt_direct = 0"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("dt_averaged = -1"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("t_end = -2"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("levels = 0"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("levels = 13"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("tau_end = 0"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("regularized = maybe"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("outputs = csv, pdf"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("preset = paper33"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("model = deep_water"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("model"), std::invalid_argument);
  CHECK_THROWS_AS(config_from("[run\nM = 64"), std::invalid_argument);
}

TEST_CASE("config files prepend their path to errors") {
  CHECK_THROWS_AS(parse_config_file("no_such_file.cfg"), std::runtime_error);

  const std::string path = "harness_test_bad.cfg";
  {
    std::ofstream f(path);
    f << "bogus = 1\n";
  }
  try {
    parse_config_file(path);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("doubles format to round-trip-exact text") {
  for (double v : {0.1, 1.0 / 3.0, 1.478802700028677, 1e-17, 6.283185307179586,
                   -2.5e300, 0.0}) {
    std::string text = format_double(v);
    CHECK(std::stod(text) == v);
  }
}

TEST_CASE("each model keeps exactly its slow-time term groups") {
  auto lin = toggles_for(direct::ModelKind::linear_dispersion);
  CHECK(lin.dispersion);
  CHECK_FALSE(lin.quadratic);
  CHECK(lin.coupling);
  auto reg = toggles_for(direct::ModelKind::linear_regularized);
  CHECK(reg.dispersion);
  CHECK_FALSE(reg.quadratic);
  CHECK(reg.coupling);
  auto nl = toggles_for(direct::ModelKind::nonlinear_nondispersive);
  CHECK_FALSE(nl.dispersion);
  CHECK(nl.quadratic);
  CHECK(nl.coupling);
  for (auto kind : {direct::ModelKind::simplified_sw, direct::ModelKind::full_sw_regularized}) {
    auto t = toggles_for(kind);
    CHECK(t.dispersion);
    CHECK(t.quadratic);
    CHECK(t.coupling);
  }
}

TEST_CASE("the dispersion table marks the first unstable mode") {
  RunConfig cfg = config_from("epsilon = 0.1\nk_max = 10\noutputs = summary\n");
  std::ostringstream log;
  CHECK(cmd_dispersion(cfg, "", log) == 0);
  std::string text = log.str();
  CHECK(text.find("first unstable k = 6") != std::string::npos);
  CHECK(text.find("k,omega_squared,stable,growth_rate") != std::string::npos);

  // csv variant writes the table to a file instead
  TempDir dir("harness_dispersion_out");
  RunConfig csv_cfg = config_from("epsilon = 0.1\nk_max = 7\noutputs = csv\n");
  std::ostringstream log2;
  CHECK(cmd_dispersion(csv_cfg, dir.path.string(), log2) == 0);
  std::string table = slurp((dir.path / "dispersion.csv").string());
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "k,omega_squared,stable,growth_rate");
  std::vector<int> stable_flags;
  int k_col = 0;
  while (std::getline(lines, line)) {
    std::istringstream row(line);
    std::string tok;
    std::getline(row, tok, ',');
    k_col = std::stoi(tok);
    std::getline(row, tok, ','); // omega_squared
    std::getline(row, tok, ',');
    stable_flags.push_back(std::stoi(tok));
  }
  CHECK(k_col == 7);
  REQUIRE(stable_flags.size() == 7);
  CHECK(stable_flags == std::vector<int>{1, 1, 1, 1, 1, 0, 0});

  RunConfig reg_cfg = config_from("epsilon = 0.1\nk_max = 1000\nregularized = true\noutputs = summary\n");
  std::ostringstream log3;
  CHECK(cmd_dispersion(reg_cfg, "", log3) == 0);
  CHECK(log3.str().find("first unstable k = none") != std::string::npos);
}

TEST_CASE("the resonance command exits 2 on a matched bottom and 0 otherwise") {
  RunConfig hit = config_from("preset = paper32\n");
  std::ostringstream out;
  CHECK(cmd_resonance(hit, out) == 2);
  CHECK(out.str().find("resonant") != std::string::npos);
  CHECK(out.str().find("mu = 2") != std::string::npos);
  CHECK(out.str().find("nu = 1") != std::string::npos);

  RunConfig miss = config_from("Z0 = cos:1\nh = sin:3\n");
  std::ostringstream out2;
  CHECK(cmd_resonance(miss, out2) == 0);
  CHECK(out2.str().find("non-resonant") != std::string::npos);

  RunConfig flat = config_from("Z0 = cos:1, sin:2\nh = 0\n");
  std::ostringstream out3;
  CHECK(cmd_resonance(flat, out3) == 0);
}

TEST_CASE("the refinement study observes the scheme's second order") {
  RunConfig cfg = config_from(
      "model = simplified_sw\n"
      "Z0 = cos:1\n"
      "h = sin:3\n"
      "M = 32\n"
      "dt_averaged = 0.004\n"
      "tau_end = 0.256\n"
      "levels = 4\n");
  std::ostringstream log;
  ConvergenceResult res = cmd_convergence(cfg, log);
  REQUIRE(res.levels.size() == 4);
  CHECK(res.levels[0].m == 32);
  CHECK(res.levels[3].m == 256);
  CHECK(res.levels[3].dt == 0.0005);
  CHECK(res.levels[3].error_to_next == -1.0);
  REQUIRE(res.observed_orders.size() == 2);
  for (double order : res.observed_orders) {
    CHECK(order > 1.7);
    CHECK(order < 2.3);
  }
  CHECK(res.order_defined);
  CHECK(res.order_text != "n/a");
  CHECK(log.str().find("observed order") != std::string::npos);
}

TEST_CASE("the refinement study reports n/a for constant data") {
  RunConfig cfg = config_from(
      "model = simplified_sw\n"
      "Z0 = cos:0\n"
      "M = 16\n"
      "dt_averaged = 0.01\n"
      "tau_end = 0.05\n"
      "levels = 3\n");
  std::ostringstream log;
  ConvergenceResult res = cmd_convergence(cfg, log);
  CHECK_FALSE(res.order_defined);
  CHECK(res.order_text == "n/a");
  CHECK(res.observed_orders.empty());
  for (const ConvergenceLevel& row : res.levels) {
    if (row.error_to_next >= 0.0) CHECK(row.error_to_next <= 1e-13);
  }

  RunConfig shallow = config_from("levels = 2\n");
  std::ostringstream log2;
  // the guard wants at least 3 levels even though the key admits 2
  CHECK_THROWS_AS(cmd_convergence(shallow, log2), std::invalid_argument);
}

TEST_CASE("a zero-horizon comparison has zero error") {
  RunConfig cfg = config_from(
      "model = linear_regularized\n"
      "preset = paper32\n"
      "epsilon = 0.1, 0.05\n"
      "M = 64\n"
      "t_end = 0\n"
      "outputs =\n");
  std::ostringstream log;
  CompareResult res = cmd_compare(cfg, "", log);
  REQUIRE(res.reports.size() == 2);
  CHECK(res.csv_paths.empty());
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    const ErrorReport& rep = res.reports[i];
    CHECK(rep.epsilon == cfg.epsilons[i]);
    CHECK(rep.t == 0.0);
    CHECK(rep.sup_error_z <= 1e-14); // both sides reproduce the initial data
    CHECK(rep.sup_error_u <= 1e-14);
    CHECK(rep.l2_error_z <= 1e-14);
    CHECK(rep.l2_error_u <= 1e-14);
    CHECK(rep.runtime_direct_seconds >= 0.0);
    CHECK(rep.runtime_averaged_seconds >= 0.0);
    CHECK(rep.m == 64);
    CHECK(rep.period == doctest::Approx(two_pi).epsilon(1e-15));
  }
}

TEST_CASE("comparison CSV output is byte-deterministic") {
  const std::string cfg_text =
      "model = nonlinear_nondispersive\n"
      "preset = paper32\n"
      "epsilon = 0.1\n"
      "M = 64\n"
      "dt_direct = 0.01\n"
      "dt_averaged = 0.001\n"
      "t_end = 1.0\n"
      "outputs = csv\n";
  TempDir dir_a("harness_compare_a");
  TempDir dir_b("harness_compare_b");
  std::ostringstream log_a, log_b;
  CompareResult a = cmd_compare(config_from(cfg_text), dir_a.path.string(), log_a);
  CompareResult b = cmd_compare(config_from(cfg_text), dir_b.path.string(), log_b);
  REQUIRE(a.csv_paths.size() == 1);
  REQUIRE(b.csv_paths.size() == 1);
  std::string bytes_a = slurp(a.csv_paths[0]);
  std::string bytes_b = slurp(b.csv_paths[0]);
  CHECK(bytes_a == bytes_b);
  CHECK(bytes_a.rfind("x,Z_direct,U_direct,Z_asym,U_asym\n", 0) == 0);
  // one header plus one row per node, LF line endings throughout
  CHECK(std::count(bytes_a.begin(), bytes_a.end(), '\n') == 65);
  CHECK(bytes_a.find('\r') == std::string::npos);
  CHECK(a.csv_paths[0].find("compare_nonlinear_nondispersive_eps0.1.csv") !=
        std::string::npos);
}

TEST_CASE("single-solver commands write their profiles") {
  TempDir dir("harness_solo_out");
  RunConfig cfg = config_from(
      "model = simplified_sw\n"
      "preset = paper32\n"
      "epsilon = 0.1\n"
      "M = 64\n"
      "dt_averaged = 0.001\n"
      "t_end = 2.0\n"
      "outputs = csv\n");
  std::ostringstream log;
  CHECK(cmd_solve_averaged(cfg, dir.path.string(), log) == 0);
  std::string avg_text = slurp((dir.path / "averaged_simplified_sw.csv").string());
  CHECK(avg_text.rfind("y,V_plus,V_minus\n", 0) == 0);
  CHECK(std::count(avg_text.begin(), avg_text.end(), '\n') == 65);
  CHECK(log.str().find("wrote") != std::string::npos);

  RunConfig dcfg = config_from(
      "model = linear_regularized\n"
      "preset = paper32\n"
      "epsilon = 0.1\n"
      "M = 64\n"
      "dt_direct = 0.001\n"
      "t_end = 1.0\n"
      "outputs = csv\n");
  std::ostringstream log2;
  CHECK(cmd_solve_direct(dcfg, dir.path.string(), log2) == 0);
  std::string direct_text =
      slurp((dir.path / "direct_linear_regularized_eps0.1.csv").string());
  CHECK(direct_text.rfind("x,Z,U\n", 0) == 0);
  CHECK(std::count(direct_text.begin(), direct_text.end(), '\n') == 65);
}
