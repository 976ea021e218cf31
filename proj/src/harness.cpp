#include "hyperavg/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hyperavg/fft.hpp"
#include "hyperavg/field_ops.hpp"
#include "hyperavg/resonance.hpp"

namespace hyperavg::harness {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number for " + what + ": '" + text + "'");
  }
  if (trim(text.substr(pos)) != "")
    throw std::invalid_argument("trailing characters in " + what + ": '" + text + "'");
  if (!std::isfinite(v))
    throw std::invalid_argument(what + " must be finite: '" + text + "'");
  return v;
}

long parse_int(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed integer for " + what + ": '" + text + "'");
  }
  if (trim(text.substr(pos)) != "")
    throw std::invalid_argument("trailing characters in " + what + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("malformed boolean for " + what + ": '" + text + "'");
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::ofstream open_output(const std::string& out_dir, const std::string& name,
                          std::string* path_out) {
  std::string path = name;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    path = out_dir + "/" + name;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  if (path_out != nullptr) *path_out = path;
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Field sample_list(const PeriodicGrid& grid, const TermList& list) {
  return sample(grid, [&list](double x) { return list(x); });
}

FieldPair initial_pair(const Field& z0, const Field& u0) {
  return FieldPair(scale(add(z0, u0), 0.5), scale(sub(z0, u0), 0.5), 0.0);
}

} // namespace

double TermList::operator()(double x) const {
  double v = 0.0;
  for (const Term& t : terms)
    v += t.amplitude * (t.is_sin ? std::sin(t.frequency * x) : std::cos(t.frequency * x));
  return v;
}

TermList parse_term_list(const std::string& text) {
  TermList list;
  std::string body = trim(text);
  if (body.empty() || body == "0") return list;
  for (const std::string& raw : split(body, ',')) {
    std::string tok = trim(raw);
    if (tok.empty())
      throw std::invalid_argument("empty term in profile list: '" + text + "'");
    Term term;
    std::size_t star = tok.find('*');
    std::string func = tok;
    if (star != std::string::npos) {
      term.amplitude = parse_double(trim(tok.substr(0, star)), "term amplitude");
      func = trim(tok.substr(star + 1));
    }
    std::size_t colon = func.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("term '" + tok + "' is not of the form [amp*]cos:k");
    std::string name = trim(func.substr(0, colon));
    long freq = parse_int(trim(func.substr(colon + 1)), "term frequency");
    if (freq < 0) throw std::invalid_argument("term frequency must be >= 0: '" + tok + "'");
    if (name == "cos")
      term.is_sin = false;
    else if (name == "sin")
      term.is_sin = true;
    else
      throw std::invalid_argument("unknown waveform '" + name + "' in term '" + tok + "'");
    term.frequency = static_cast<int>(freq);
    list.terms.push_back(term);
  }
  return list;
}

Spectrum term_list_spectrum(const TermList& list) {
  SpectrumBuilder b;
  for (const Term& t : list.terms) {
    double k = t.frequency;
    double a = t.amplitude;
    if (!t.is_sin) {
      if (t.frequency == 0) {
        b.add(0.0, a);
      } else {
        b.add(k, a / 2.0);
        b.add(-k, a / 2.0);
      }
    } else if (t.frequency != 0) {
      b.add(k, cplx(0.0, -a / 2.0));
      b.add(-k, cplx(0.0, a / 2.0));
    }
  }
  return b.build();
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail("unterminated section header");
      continue; // sections organize the file; keys are globally unique
    }
    std::size_t eq = body.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    try {
      if (key == "model") {
        cfg.model = direct::model_kind_from_string(value);
      } else if (key == "epsilon") {
        cfg.epsilons.clear();
        for (const std::string& tok : split(value, ',')) {
          double e = parse_double(trim(tok), "epsilon");
          if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument("epsilon must lie in (0, 1): " + trim(tok));
          cfg.epsilons.push_back(e);
        }
        if (cfg.epsilons.empty()) throw std::invalid_argument("epsilon list is empty");
      } else if (key == "M" || key == "m") {
        long m = parse_int(value, "M");
        if (m < 8 || m % 2 != 0)
          throw std::invalid_argument("M must be even and >= 8: " + value);
        cfg.m = static_cast<int>(m);
      } else if (key == "dt_direct") {
        cfg.dt_direct = parse_double(value, "dt_direct");
        if (!(cfg.dt_direct > 0.0)) throw std::invalid_argument("dt_direct must be > 0");
      } else if (key == "dt_averaged") {
        cfg.dt_averaged = parse_double(value, "dt_averaged");
        if (!(cfg.dt_averaged > 0.0)) throw std::invalid_argument("dt_averaged must be > 0");
      } else if (key == "t_end") {
        if (value == "one_over_eps") {
          cfg.t_end_is_one_over_eps = true;
          cfg.t_end = 0.0;
        } else {
          cfg.t_end = parse_double(value, "t_end");
          if (cfg.t_end < 0.0) throw std::invalid_argument("t_end must be >= 0");
          cfg.t_end_is_one_over_eps = false;
        }
      } else if (key == "preset") {
        if (value != "paper32") throw std::invalid_argument("unknown preset: " + value);
        cfg.z0 = parse_term_list("cos:1, sin:2");
        cfg.u0 = parse_term_list("");
        cfg.h = parse_term_list("5*sin:2");
      } else if (key == "Z0" || key == "z0") {
        cfg.z0 = parse_term_list(value);
      } else if (key == "U0" || key == "u0") {
        cfg.u0 = parse_term_list(value);
      } else if (key == "h") {
        cfg.h = parse_term_list(value);
      } else if (key == "outputs") {
        cfg.write_csv = false;
        cfg.write_summary = false;
        for (const std::string& tok : split(value, ',')) {
          std::string t = trim(tok);
          if (t == "csv")
            cfg.write_csv = true;
          else if (t == "summary")
            cfg.write_summary = true;
          else if (!t.empty())
            throw std::invalid_argument("unknown output kind: " + t);
        }
      } else if (key == "k_max") {
        long k = parse_int(value, "k_max");
        if (k < 0) throw std::invalid_argument("k_max must be >= 0");
        cfg.k_max = static_cast<int>(k);
      } else if (key == "regularized") {
        cfg.regularized = parse_bool(value, "regularized");
      } else if (key == "levels") {
        long l = parse_int(value, "levels");
        if (l < 1 || l > 12) throw std::invalid_argument("levels must be in [1, 12]");
        cfg.levels = static_cast<int>(l);
      } else if (key == "tau_end") {
        cfg.tau_end = parse_double(value, "tau_end");
        if (!(cfg.tau_end > 0.0)) throw std::invalid_argument("tau_end must be > 0");
      } else {
        throw std::invalid_argument("unknown key: " + key);
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  try {
    return parse_config(f);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

solver::TermToggles toggles_for(direct::ModelKind kind) {
  solver::TermToggles t;
  switch (kind) {
    case direct::ModelKind::linear_dispersion:
    case direct::ModelKind::linear_regularized:
      t.quadratic = false;
      break;
    case direct::ModelKind::nonlinear_nondispersive:
      t.dispersion = false;
      break;
    case direct::ModelKind::simplified_sw:
    case direct::ModelKind::full_sw_regularized:
      break;
  }
  return t;
}

CompareResult cmd_compare(const RunConfig& cfg, const std::string& out_dir,
                          std::ostream& log) {
  PeriodicGrid grid(cfg.m);
  Field z0 = sample_list(grid, cfg.z0);
  Field u0 = sample_list(grid, cfg.u0);
  Field h = sample_list(grid, cfg.h);

  std::vector<double> times;
  double tau_need = 0.0;
  for (double eps : cfg.epsilons) {
    double t = cfg.t_end_is_one_over_eps ? 1.0 / eps : cfg.t_end;
    times.push_back(t);
    tau_need = std::max(tau_need, eps * t);
  }

  solver::SchemeParams sp;
  sp.dt = cfg.dt_averaged;
  sp.tau_end = tau_need;
  sp.terms = toggles_for(cfg.model);
  auto a0 = std::chrono::steady_clock::now();
  solver::AveragedRun avg = solver::run(initial_pair(z0, u0), h, sp);
  double rt_avg = seconds_since(a0);
  log << "averaged system integrated once to tau = " << format_g(tau_need) << " ("
      << format_g(rt_avg) << " s), reused for " << cfg.epsilons.size()
      << " epsilon value(s)\n";

  CompareResult result;
  std::ostringstream summary;
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    double eps = cfg.epsilons[i];
    double t = times[i];
    direct::DirectOptions dopts;
    dopts.dt = cfg.dt_direct;
    auto d0 = std::chrono::steady_clock::now();
    std::vector<direct::DirectState> snaps = direct::solve_direct(
        cfg.model, direct::DirectState(z0, u0, 0.0, eps), h, t, dopts);
    double rt_dir = seconds_since(d0);
    const direct::DirectState& fin = snaps.back();
    direct::DirectState asym = direct::evaluate_asymptotic(avg, eps, t, grid);

    ErrorReport rep;
    rep.epsilon = eps;
    rep.t = t;
    rep.sup_error_z = sup_norm(fin.z, asym.z);
    rep.sup_error_u = sup_norm(fin.u, asym.u);
    rep.l2_error_z = l2_norm(fin.z, asym.z);
    rep.l2_error_u = l2_norm(fin.u, asym.u);
    rep.runtime_direct_seconds = rt_dir;
    rep.runtime_averaged_seconds = rt_avg;
    rep.m = cfg.m;
    rep.period = grid.period();
    result.reports.push_back(rep);

    std::ostringstream line;
    line << "epsilon = " << format_g(eps) << ": t = " << format_g(t)
         << ", sup_error_Z = " << format_g(rep.sup_error_z)
         << ", sup_error_U = " << format_g(rep.sup_error_u)
         << ", l2_error_Z = " << format_g(rep.l2_error_z)
         << ", l2_error_U = " << format_g(rep.l2_error_u)
         << ", runtime_direct = " << format_g(rt_dir) << " s";
    log << line.str() << "\n";
    summary << line.str() << "\n";

    if (cfg.write_csv) {
      std::string name = std::string("compare_") + direct::to_string(cfg.model) +
                         "_eps" + format_g(eps) + ".csv";
      std::string path;
      std::ofstream f = open_output(out_dir, name, &path);
      f << "x,Z_direct,U_direct,Z_asym,U_asym\n";
      for (int j = 0; j < cfg.m; ++j) {
        f << format_double(grid.node(j)) << ',' << format_double(fin.z[j]) << ','
          << format_double(fin.u[j]) << ',' << format_double(asym.z[j]) << ','
          << format_double(asym.u[j]) << '\n';
      }
      result.csv_paths.push_back(path);
      log << "wrote " << path << "\n";
    }
  }

  if (cfg.write_summary) {
    std::string name = std::string("compare_") + direct::to_string(cfg.model) +
                       "_summary.txt";
    std::string path;
    std::ofstream f = open_output(out_dir, name, &path);
    f << "model = " << direct::to_string(cfg.model) << ", M = " << cfg.m
      << ", dt_direct = " << format_g(cfg.dt_direct)
      << ", dt_averaged = " << format_g(cfg.dt_averaged)
      << ", runtime_averaged = " << format_g(rt_avg) << " s\n";
    f << summary.str();
    log << "wrote " << path << "\n";
  }
  return result;
}

int cmd_resonance(const RunConfig& cfg, std::ostream& out) {
  Spectrum h_modes = term_list_spectrum(cfg.h);
  SpectrumBuilder waves;
  for (const Spectrum& s : {term_list_spectrum(cfg.z0), term_list_spectrum(cfg.u0)})
    for (const Mode& m : s.modes()) waves.add(m.frequency, m.amplitude);
  Spectrum wave_modes = waves.build();

  resonance::ResonanceVerdict verdict =
      resonance::check_shallow_water_resonance(h_modes, wave_modes);
  if (verdict.resonant) {
    out << "resonant: a bottom frequency matches twice a wave frequency; the averaged "
           "equations stay coupled\n";
    for (const resonance::Witness& w : verdict.witnesses) {
      out << "  mu = " << format_g(w.frequencies.at(0))
          << ", nu = " << format_g(w.frequencies.at(1))
          << ", divisor = " << format_g(w.divisor) << "\n";
    }
    return 2;
  }
  out << "non-resonant: no bottom frequency matches +-2 times a wave frequency; the "
         "averaged system decouples into independent equations\n";
  return 0;
}

void write_dispersion_csv(const direct::DispersionReport& report, std::ostream& out) {
  out << "k,omega_squared,stable,growth_rate\n";
  for (const direct::DispersionMode& m : report.modes) {
    out << m.k << ',' << format_double(m.omega_squared) << ',' << (m.stable ? 1 : 0)
        << ',' << format_double(m.growth_rate) << '\n';
  }
}

int cmd_dispersion(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  direct::DispersionReport report =
      direct::dispersion_report(cfg.epsilons.front(), cfg.k_max, cfg.regularized);
  int first_unstable = 0;
  for (const direct::DispersionMode& m : report.modes) {
    if (!m.stable) {
      first_unstable = m.k;
      break;
    }
  }
  log << "dispersion table: eps = " << format_g(report.eps)
      << ", k_max = " << cfg.k_max << ", regularized = " << (report.regularized ? 1 : 0)
      << ", first unstable k = "
      << (first_unstable > 0 ? std::to_string(first_unstable) : std::string("none"))
      << "\n";
  if (cfg.write_csv) {
    std::string path;
    std::ofstream f = open_output(out_dir, "dispersion.csv", &path);
    write_dispersion_csv(report, f);
    log << "wrote " << path << "\n";
  } else {
    write_dispersion_csv(report, log);
  }
  return 0;
}

ConvergenceResult cmd_convergence(const RunConfig& cfg, std::ostream& log) {
  if (cfg.levels < 3)
    throw std::invalid_argument(
        "convergence study needs at least 3 refinement levels for one observed order");

  struct LevelSolution {
    FieldPair final;
    int m;
    double dt;
  };
  std::vector<LevelSolution> sols;
  for (int l = 0; l < cfg.levels; ++l) {
    int m_l = cfg.m << l;
    double dt_l = cfg.dt_averaged / static_cast<double>(1 << l);
    PeriodicGrid grid(m_l);
    Field z0 = sample_list(grid, cfg.z0);
    Field u0 = sample_list(grid, cfg.u0);
    Field h = sample_list(grid, cfg.h);
    solver::SchemeParams sp;
    sp.dt = dt_l;
    sp.tau_end = cfg.tau_end;
    sp.terms = toggles_for(cfg.model);
    sp.snapshot_taus = {cfg.tau_end};
    solver::AveragedRun run = solver::run(initial_pair(z0, u0), h, sp);
    sols.push_back({run.snapshots.back(), m_l, dt_l});
  }

  ConvergenceResult result;
  for (int l = 0; l < cfg.levels; ++l) {
    ConvergenceLevel row;
    row.m = sols[l].m;
    row.dt = sols[l].dt;
    if (l + 1 < cfg.levels) {
      const FieldPair& coarse = sols[l].final;
      const FieldPair& fine = sols[l + 1].final;
      double e = 0.0;
      for (int j = 0; j < sols[l].m; ++j) {
        e = std::max(e, std::abs(fine.vplus[2 * j] - coarse.vplus[j]));
        e = std::max(e, std::abs(fine.vminus[2 * j] - coarse.vminus[j]));
      }
      row.error_to_next = e;
    }
    result.levels.push_back(row);
  }
  for (int l = 0; l + 2 < cfg.levels; ++l) {
    double e0 = result.levels[l].error_to_next;
    double e1 = result.levels[l + 1].error_to_next;
    if (e0 > 1e-13 && e1 > 1e-13)
      result.observed_orders.push_back(std::log2(e0 / e1));
  }
  result.order_defined = !result.observed_orders.empty();
  result.order_text =
      result.order_defined ? format_g(result.observed_orders.back()) : "n/a";

  log << "level,M,dt,error_to_next\n";
  for (std::size_t l = 0; l < result.levels.size(); ++l) {
    const ConvergenceLevel& row = result.levels[l];
    log << l << ',' << row.m << ',' << format_g(row.dt) << ','
        << (row.error_to_next >= 0.0 ? format_double(row.error_to_next)
                                     : std::string("n/a"))
        << "\n";
  }
  log << "observed order: " << result.order_text << "\n";
  return result;
}

int cmd_solve_averaged(const RunConfig& cfg, const std::string& out_dir,
                       std::ostream& log) {
  PeriodicGrid grid(cfg.m);
  Field z0 = sample_list(grid, cfg.z0);
  Field u0 = sample_list(grid, cfg.u0);
  Field h = sample_list(grid, cfg.h);
  double tau_end =
      cfg.t_end_is_one_over_eps ? 1.0 : cfg.epsilons.front() * cfg.t_end;
  solver::SchemeParams sp;
  sp.dt = cfg.dt_averaged;
  sp.tau_end = tau_end;
  sp.terms = toggles_for(cfg.model);
  sp.snapshot_taus = {tau_end};
  solver::AveragedRun run = solver::run(initial_pair(z0, u0), h, sp);
  const FieldPair& fin = run.snapshots.back();
  log << "averaged run to tau = " << format_g(fin.tau) << ", "
      << run.diagnostics.size() << " steps, final means V+ = "
      << format_g(mean(fin.vplus)) << ", V- = " << format_g(mean(fin.vminus)) << "\n";
  if (cfg.write_csv) {
    std::string name = std::string("averaged_") + direct::to_string(cfg.model) + ".csv";
    std::string path;
    std::ofstream f = open_output(out_dir, name, &path);
    f << "y,V_plus,V_minus\n";
    for (int j = 0; j < cfg.m; ++j)
      f << format_double(grid.node(j)) << ',' << format_double(fin.vplus[j]) << ','
        << format_double(fin.vminus[j]) << '\n';
    log << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_solve_direct(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  PeriodicGrid grid(cfg.m);
  Field z0 = sample_list(grid, cfg.z0);
  Field u0 = sample_list(grid, cfg.u0);
  Field h = sample_list(grid, cfg.h);
  double eps = cfg.epsilons.front();
  double t = cfg.t_end_is_one_over_eps ? 1.0 / eps : cfg.t_end;
  direct::DirectOptions dopts;
  dopts.dt = cfg.dt_direct;
  std::vector<direct::DirectState> snaps = direct::solve_direct(
      cfg.model, direct::DirectState(z0, u0, 0.0, eps), h, t, dopts);
  const direct::DirectState& fin = snaps.back();
  log << "direct run: model = " << direct::to_string(cfg.model)
      << ", eps = " << format_g(eps) << ", t = " << format_g(fin.t)
      << ", sup Z = " << format_g(sup_norm(fin.z))
      << ", sup U = " << format_g(sup_norm(fin.u)) << "\n";
  if (cfg.write_csv) {
    std::string name = std::string("direct_") + direct::to_string(cfg.model) + "_eps" +
                       format_g(eps) + ".csv";
    std::string path;
    std::ofstream f = open_output(out_dir, name, &path);
    f << "x,Z,U\n";
    for (int j = 0; j < cfg.m; ++j)
      f << format_double(grid.node(j)) << ',' << format_double(fin.z[j]) << ','
        << format_double(fin.u[j]) << '\n';
    log << "wrote " << path << "\n";
  }
  return 0;
}

} // namespace hyperavg::harness
