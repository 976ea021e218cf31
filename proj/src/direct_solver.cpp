#include "hyperavg/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hyperavg/fft.hpp"

namespace hyperavg::direct {

namespace {

// Term groups of the right-hand side beyond the shared d'Alembert part.
struct KindTraits {
  bool zu = false;          // -eps (Z U)_x in the Z equation
  bool uu = false;          // -eps U U_x in the U equation
  bool full = false;        // variable-depth dispersive terms of the full system
  bool dispersive = false;  // -(eps/3) U_xxx
  bool regularized = false; // -(eps^2/20) U_xxxxx
};

KindTraits traits_for(ModelKind kind) {
  KindTraits t;
  switch (kind) {
    case ModelKind::linear_dispersion:
      t.dispersive = true;
      return t;
    case ModelKind::linear_regularized:
      t.dispersive = true;
      t.regularized = true;
      return t;
    case ModelKind::nonlinear_nondispersive:
      t.zu = true;
      t.uu = true;
      return t;
    case ModelKind::simplified_sw:
      t.zu = true;
      t.uu = true;
      t.dispersive = true;
      return t;
    case ModelKind::full_sw_regularized:
      t.zu = true;
      t.uu = true;
      t.full = true;
      t.dispersive = true;
      t.regularized = true;
      return t;
  }
  throw std::logic_error("unknown ModelKind");
}

// Exact propagator of the constant-coefficient block over one mode,
//   d/dt (Zk, Uk) = [[0, -i kappa a], [-i kappa, 0]] (Zk, Uk),
// whose square is -kappa^2 a I: trigonometric for kappa^2 a > 0 (frequency
// omega = sqrt(kappa^2 a)), hyperbolic for kappa^2 a < 0 (the ill-posed
// branch), linear in t when kappa = 0 or a = 0.
struct Prop {
  double c = 1.0;
  cplx e12{0.0, 0.0};
  cplx e21{0.0, 0.0};
};

Prop make_prop(double kappa, double a, double dt) {
  double q = kappa * kappa * a;
  double c;
  double s;
  if (q > 0.0) {
    double w = std::sqrt(q);
    c = std::cos(w * dt);
    s = std::sin(w * dt) / w;
  } else if (q < 0.0) {
    double g = std::sqrt(-q);
    c = std::cosh(g * dt);
    s = std::sinh(g * dt) / g;
  } else {
    c = 1.0;
    s = dt;
  }
  Prop p;
  p.c = c;
  p.e12 = cplx(0.0, -kappa * a * s);
  p.e21 = cplx(0.0, -kappa * s);
  return p;
}

std::vector<double> real_parts(const std::vector<cplx>& spec) {
  std::vector<cplx> w = ifft(spec);
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = w[j].real();
  return out;
}

std::vector<cplx> to_spectrum(const std::vector<double>& v) {
  std::vector<cplx> w(v.begin(), v.end());
  return fft(std::move(w));
}

// All state and scratch spectra are unnormalized DFT bins; bin b carries the
// signed integer frequency b <= M/2 ? b : b - M.
class Engine {
 public:
  Engine(ModelKind kind, const PeriodicGrid& grid, const Field& h_profile, double eps,
         double dt)
      : tr_(traits_for(kind)), m_(grid.num_points()), eps_(eps), dt_(dt) {
    kappa_.resize(m_);
    keep_.assign(m_, 0);
    int kd = m_ / 3; // 2/3-rule band limit
    double base = two_pi / grid.period();
    for (int b = 0; b < m_; ++b) {
      int f = b <= m_ / 2 ? b : b - m_;
      kappa_[b] = base * f;
      keep_[b] = std::abs(f) <= kd ? 1 : 0;
    }
    e1_.resize(m_);
    e2_.resize(m_);
    for (int b = 0; b < m_; ++b) {
      double k2 = kappa_[b] * kappa_[b];
      double a = 1.0;
      if (tr_.dispersive) a -= eps_ * k2 / 3.0;
      if (tr_.regularized) a += eps_ * eps_ * k2 * k2 / 20.0;
      e1_[b] = make_prop(kappa_[b], a, dt_);
      e2_[b] = make_prop(kappa_[b], a, dt_ / 2.0);
    }

    double hmax = 0.0;
    for (double v : h_profile.values()) hmax = std::max(hmax, std::abs(v));
    h_zero_ = hmax == 0.0;
    if (!h_zero_) {
      std::vector<cplx> hhat = to_spectrum(h_profile.values());
      mask(hhat);
      h_ = real_parts(hhat);
      if (tr_.full) {
        std::vector<cplx> hx_hat(m_);
        for (int b = 0; b < m_; ++b) hx_hat[b] = cplx(0.0, kappa_[b]) * hhat[b];
        std::vector<double> hx = real_parts(hx_hat);
        h3m1_.resize(m_);
        hhx_.resize(m_);
        for (int j = 0; j < m_; ++j) {
          double x = eps_ * h_[j]; // H = 1 + x
          h3m1_[j] = x * (3.0 + x * (3.0 + x));
          hhx_[j] = (1.0 + x) * eps_ * hx[j];
        }
      }
    }
  }

  bool trivially_linear() const {
    return eps_ == 0.0 || (h_zero_ && !tr_.zu && !tr_.uu && !tr_.full);
  }

  void mask(std::vector<cplx>& spec) const {
    for (int b = 0; b < m_; ++b)
      if (!keep_[b]) spec[b] = cplx(0.0, 0.0);
  }

  // Terms not handled by the propagator, as spectra (N_Z, N_U). Every
  // product is formed pointwise on the grid and its spectrum truncated to
  // the 2/3 band before differentiation.
  void nonlinear(const std::vector<cplx>& zh, const std::vector<cplx>& uh,
                 std::vector<cplx>& nz, std::vector<cplx>& nu) const {
    nz.assign(m_, cplx(0.0, 0.0));
    nu.assign(m_, cplx(0.0, 0.0));
    if (trivially_linear()) return;

    std::vector<double> up = real_parts(uh);
    auto add_deriv = [&](std::vector<cplx>& acc, const std::vector<cplx>& prod,
                         double coef, int order) {
      for (int b = 0; b < m_; ++b) {
        if (!keep_[b]) continue;
        cplx d = order == 0   ? cplx(1.0, 0.0)
                 : order == 1 ? cplx(0.0, kappa_[b])
                               : cplx(0.0, -kappa_[b] * kappa_[b] * kappa_[b]);
        acc[b] += coef * d * prod[b];
      }
    };

    std::vector<cplx> hu_hat;
    if (!h_zero_) {
      std::vector<double> hu(m_);
      for (int j = 0; j < m_; ++j) hu[j] = h_[j] * up[j];
      hu_hat = to_spectrum(hu);
      mask(hu_hat);
      add_deriv(nz, hu_hat, -eps_, 1); // (HU)_x - U_x = eps (hU)_x
      if (tr_.full) add_deriv(nz, hu_hat, -eps_ * eps_ / 2.0, 3); // -(eps/2)((HU)_xxx - U_xxx)
    }
    if (tr_.zu) {
      std::vector<double> zp = real_parts(zh);
      std::vector<double> zu(m_);
      for (int j = 0; j < m_; ++j) zu[j] = zp[j] * up[j];
      std::vector<cplx> zu_hat = to_spectrum(zu);
      mask(zu_hat);
      add_deriv(nz, zu_hat, -eps_, 1);
    }
    if (tr_.uu) {
      std::vector<double> uu(m_);
      for (int j = 0; j < m_; ++j) uu[j] = up[j] * up[j];
      std::vector<cplx> uu_hat = to_spectrum(uu);
      mask(uu_hat);
      add_deriv(nu, uu_hat, -eps_ / 2.0, 1); // U U_x = (U^2)_x / 2
    }
    if (tr_.full && !h_zero_) {
      // (1/6)((H^3 - 1) U_xx)_x
      std::vector<cplx> uxx_hat(m_, cplx(0.0, 0.0));
      for (int b = 0; b < m_; ++b)
        if (keep_[b]) uxx_hat[b] = -kappa_[b] * kappa_[b] * uh[b];
      std::vector<double> uxx = real_parts(uxx_hat);
      std::vector<double> t1(m_);
      for (int j = 0; j < m_; ++j) t1[j] = h3m1_[j] * uxx[j];
      std::vector<cplx> t1_hat = to_spectrum(t1);
      mask(t1_hat);
      add_deriv(nz, t1_hat, eps_ / 6.0, 1);
      // -H H_x (HU)_xx, the one term that is not an exact x-derivative
      std::vector<cplx> huxx_hat(m_, cplx(0.0, 0.0));
      for (int b = 0; b < m_; ++b)
        if (keep_[b])
          huxx_hat[b] = -kappa_[b] * kappa_[b] * (uh[b] + eps_ * hu_hat[b]);
      std::vector<double> huxx = real_parts(huxx_hat);
      std::vector<double> t2(m_);
      for (int j = 0; j < m_; ++j) t2[j] = hhx_[j] * huxx[j];
      std::vector<cplx> t2_hat = to_spectrum(t2);
      mask(t2_hat);
      add_deriv(nz, t2_hat, -eps_, 0);
    }
  }

  // Classical RK4 in the integrating-factor variable w = E(-t) y:
  //   y_{n+1} = E y_n + dt/6 (E N1 + 2 E2 (N2 + N3) + N4),
  // stages a = E2 (y + dt/2 N1), b = E2 y + dt/2 N2, c = E y + dt E2 N3.
  void step(std::vector<cplx>& zh, std::vector<cplx>& uh) const {
    std::vector<cplx> n1z, n1u, n2z, n2u, n3z, n3u, n4z, n4u;
    nonlinear(zh, uh, n1z, n1u);

    std::vector<cplx> az(m_), au(m_);
    for (int b = 0; b < m_; ++b) {
      cplx z = zh[b] + 0.5 * dt_ * n1z[b];
      cplx u = uh[b] + 0.5 * dt_ * n1u[b];
      az[b] = e2_[b].c * z + e2_[b].e12 * u;
      au[b] = e2_[b].e21 * z + e2_[b].c * u;
    }
    nonlinear(az, au, n2z, n2u);

    std::vector<cplx> e2z(m_), e2u(m_);
    for (int b = 0; b < m_; ++b) {
      e2z[b] = e2_[b].c * zh[b] + e2_[b].e12 * uh[b];
      e2u[b] = e2_[b].e21 * zh[b] + e2_[b].c * uh[b];
    }
    std::vector<cplx> bz(m_), bu(m_);
    for (int b = 0; b < m_; ++b) {
      bz[b] = e2z[b] + 0.5 * dt_ * n2z[b];
      bu[b] = e2u[b] + 0.5 * dt_ * n2u[b];
    }
    nonlinear(bz, bu, n3z, n3u);

    std::vector<cplx> e1z(m_), e1u(m_);
    for (int b = 0; b < m_; ++b) {
      e1z[b] = e1_[b].c * zh[b] + e1_[b].e12 * uh[b];
      e1u[b] = e1_[b].e21 * zh[b] + e1_[b].c * uh[b];
    }
    std::vector<cplx> cz(m_), cu(m_);
    for (int b = 0; b < m_; ++b) {
      cplx z = dt_ * n3z[b];
      cplx u = dt_ * n3u[b];
      cz[b] = e1z[b] + e2_[b].c * z + e2_[b].e12 * u;
      cu[b] = e1u[b] + e2_[b].e21 * z + e2_[b].c * u;
    }
    nonlinear(cz, cu, n4z, n4u);

    for (int b = 0; b < m_; ++b) {
      cplx s23z = n2z[b] + n3z[b];
      cplx s23u = n2u[b] + n3u[b];
      cplx ez = e1_[b].c * n1z[b] + e1_[b].e12 * n1u[b];
      cplx eu = e1_[b].e21 * n1z[b] + e1_[b].c * n1u[b];
      cplx fz = e2_[b].c * s23z + e2_[b].e12 * s23u;
      cplx fu = e2_[b].e21 * s23z + e2_[b].c * s23u;
      zh[b] = e1z[b] + dt_ / 6.0 * (ez + 2.0 * fz + n4z[b]);
      uh[b] = e1u[b] + dt_ / 6.0 * (eu + 2.0 * fu + n4u[b]);
    }
  }

  int dominant_mode(const std::vector<cplx>& zh, const std::vector<cplx>& uh) const {
    int best = 0;
    double best_score = -1.0;
    for (int b = 1; b < m_; ++b) {
      double score = std::abs(zh[b]) + std::abs(uh[b]);
      if (!std::isfinite(score)) score = std::numeric_limits<double>::infinity();
      if (score > best_score) {
        best_score = score;
        best = b;
      }
    }
    return std::min(best, m_ - best);
  }

 private:
  KindTraits tr_;
  int m_;
  double eps_;
  double dt_;
  std::vector<double> kappa_;
  std::vector<char> keep_;
  std::vector<Prop> e1_, e2_;
  bool h_zero_ = true;
  std::vector<double> h_, h3m1_, hhx_;
};

std::vector<DirectState> integrate(ModelKind kind, const DirectState& initial,
                                   const Field& h_profile, double t_end,
                                   const DirectOptions& opts, double dt) {
  const PeriodicGrid& grid = initial.z.grid();
  const double eps = initial.epsilon;
  long n_steps = t_end > 0.0 ? std::max<long>(1, std::lround(t_end / dt)) : 0;
  double dt_eff = n_steps > 0 ? t_end / n_steps : dt;
  Engine eng(kind, grid, h_profile, eps, dt_eff);

  std::set<long> snap_steps;
  if (opts.snapshot_times.empty()) {
    snap_steps.insert(n_steps);
  } else {
    for (double t_req : opts.snapshot_times) {
      if (!std::isfinite(t_req) || t_req < -1e-9 || t_req > t_end + 1e-9)
        throw std::invalid_argument("solve_direct: snapshot time outside [0, t_end]");
      long s = std::lround(t_req / dt_eff);
      snap_steps.insert(std::clamp<long>(s, 0, n_steps));
    }
    snap_steps.insert(n_steps);
  }

  std::vector<cplx> zh = to_spectrum(initial.z.values());
  std::vector<cplx> uh = to_spectrum(initial.u.values());

  std::vector<DirectState> out;
  if (snap_steps.count(0) != 0 && n_steps > 0)
    out.emplace_back(initial.z, initial.u, 0.0, eps);
  if (n_steps == 0) {
    out.emplace_back(initial.z, initial.u, 0.0, eps);
    return out;
  }

  for (long s = 1; s <= n_steps; ++s) {
    eng.step(zh, uh);
    double t = s == n_steps ? t_end : dt_eff * static_cast<double>(s);
    std::vector<double> zp = real_parts(zh);
    std::vector<double> up = real_parts(uh);
    double sup = 0.0;
    for (int j = 0; j < grid.num_points(); ++j)
      sup = std::max(sup, std::max(std::abs(zp[j]), std::abs(up[j])));
    if (!std::isfinite(sup) || sup > opts.blowup_threshold) {
      int mode = eng.dominant_mode(zh, uh);
      std::ostringstream msg;
      msg << to_string(kind) << ": blow-up at t = " << t << " (sup-norm " << sup
          << " exceeds " << opts.blowup_threshold << "), dominant mode k = " << mode;
      throw BlowUpError(msg.str(), mode, t);
    }
    if (snap_steps.count(s) != 0)
      out.emplace_back(Field(grid, std::move(zp)), Field(grid, std::move(up)), t, eps);
  }
  return out;
}

double periodic_lerp(const Field& f, double y) {
  const PeriodicGrid& g = f.grid();
  double s = y / g.spacing();
  double m = static_cast<double>(g.num_points());
  s = std::fmod(s, m);
  if (s < 0.0) s += m;
  double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-9) return f[static_cast<int>(nearest)];
  int j0 = static_cast<int>(std::floor(s));
  double fr = s - std::floor(s);
  return (1.0 - fr) * f[j0] + fr * f[j0 + 1];
}

} // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear_dispersion: return "linear_dispersion";
    case ModelKind::linear_regularized: return "linear_regularized";
    case ModelKind::nonlinear_nondispersive: return "nonlinear_nondispersive";
    case ModelKind::simplified_sw: return "simplified_sw";
    case ModelKind::full_sw_regularized: return "full_sw_regularized";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "linear_dispersion") return ModelKind::linear_dispersion;
  if (name == "linear_regularized") return ModelKind::linear_regularized;
  if (name == "nonlinear_nondispersive") return ModelKind::nonlinear_nondispersive;
  if (name == "simplified_sw") return ModelKind::simplified_sw;
  if (name == "full_sw_regularized") return ModelKind::full_sw_regularized;
  throw std::invalid_argument("unknown model kind: " + name);
}

DirectState::DirectState(Field z_, Field u_, double t_, double epsilon_)
    : z(std::move(z_)), u(std::move(u_)), t(t_), epsilon(epsilon_) {
  if (!(z.grid() == u.grid()))
    throw std::invalid_argument("DirectState: Z and U must share one grid");
  if (!std::isfinite(t) || !std::isfinite(epsilon))
    throw std::invalid_argument("DirectState: non-finite time or epsilon");
  if (epsilon < 0.0) throw std::invalid_argument("DirectState: epsilon must be >= 0");
}

DispersionMode dispersion_relation(int k, double eps, bool regularized) {
  if (!(eps > 0.0))
    throw std::invalid_argument("dispersion_relation: eps must be positive");
  double k2 = static_cast<double>(k) * k;
  double w2 = k2 - eps * k2 * k2 / 3.0;
  if (regularized) w2 += eps * eps * k2 * k2 * k2 / 20.0;
  DispersionMode mode;
  mode.k = k;
  mode.omega_squared = w2;
  mode.stable = w2 >= 0.0;
  mode.growth_rate = mode.stable ? 0.0 : std::sqrt(-w2);
  return mode;
}

DispersionReport dispersion_report(double eps, int k_max, bool regularized) {
  if (k_max < 0) throw std::invalid_argument("dispersion_report: k_max must be >= 0");
  DispersionReport report;
  report.eps = eps;
  report.regularized = regularized;
  report.modes.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k)
    report.modes.push_back(dispersion_relation(k, eps, regularized));
  return report;
}

std::vector<DirectState> solve_direct(ModelKind kind, const DirectState& initial,
                                      const Field& h_profile, double t_end,
                                      const DirectOptions& opts) {
  if (!(initial.z.grid() == h_profile.grid()))
    throw std::invalid_argument("solve_direct: state and depth profile grids differ");
  if (!std::isfinite(t_end) || t_end < 0.0)
    throw std::invalid_argument("solve_direct: t_end must be finite and >= 0");
  if (!(opts.dt > 0.0) || !std::isfinite(opts.dt))
    throw std::invalid_argument("solve_direct: dt must be positive");
  if (!(opts.c0 > 0.0)) throw std::invalid_argument("solve_direct: c0 must be positive");
  if (!(opts.blowup_threshold > 0.0))
    throw std::invalid_argument("solve_direct: blow-up threshold must be positive");
  if (initial.epsilon > 0.0 && t_end > opts.c0 / initial.epsilon * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "solve_direct: t_end = " << t_end << " exceeds the classical-solution window "
        << "c0/eps = " << opts.c0 / initial.epsilon;
    throw std::invalid_argument(msg.str());
  }

  try {
    return integrate(kind, initial, h_profile, t_end, opts, opts.dt);
  } catch (const BlowUpError&) {
    // Blow-up of linear_dispersion is physical (ill-posed modes); everything
    // else gets one chance at a smaller step before the error stands.
    if (!opts.allow_dt_retry || kind == ModelKind::linear_dispersion) throw;
    return integrate(kind, initial, h_profile, t_end, opts, opts.dt / 2.0);
  }
}

FieldPair riemann_split(const DirectState& state) {
  const PeriodicGrid& grid = state.z.grid();
  std::vector<double> vp(grid.num_points()), vm(grid.num_points());
  for (int j = 0; j < grid.num_points(); ++j) {
    vp[j] = 0.5 * (state.z[j] + state.u[j]);
    vm[j] = 0.5 * (state.z[j] - state.u[j]);
  }
  return FieldPair(Field(grid, std::move(vp)), Field(grid, std::move(vm)),
                   state.epsilon * state.t);
}

std::pair<Field, Field> riemann_join(const FieldPair& pair) {
  return {add(pair.vplus, pair.vminus), sub(pair.vplus, pair.vminus)};
}

DirectState evaluate_asymptotic(const solver::AveragedRun& avg, double eps, double t,
                                const PeriodicGrid& grid) {
  if (!(eps > 0.0))
    throw std::invalid_argument(
        "evaluate_asymptotic: eps must be positive (the slow-time grid is degenerate "
        "otherwise)");
  if (!std::isfinite(t)) throw std::invalid_argument("evaluate_asymptotic: non-finite t");
  if (avg.snapshots.empty())
    throw std::invalid_argument("evaluate_asymptotic: averaged run holds no snapshots");
  double tau = eps * t;
  if (tau < -1e-12 || tau > avg.tau_end() + 1e-9)
    throw std::out_of_range("evaluate_asymptotic: eps*t outside the averaged run's range");

  const auto& snaps = avg.snapshots;
  std::size_t hi = 0;
  while (hi + 1 < snaps.size() && snaps[hi].tau < tau) ++hi;
  std::size_t lo = hi > 0 ? hi - 1 : 0;
  double theta = 0.0;
  if (hi > lo && snaps[hi].tau > snaps[lo].tau) {
    theta = (tau - snaps[lo].tau) / (snaps[hi].tau - snaps[lo].tau);
    theta = std::clamp(theta, 0.0, 1.0);
  }
  const PeriodicGrid& ag = snaps[lo].vplus.grid();
  std::vector<double> vp(ag.num_points()), vm(ag.num_points());
  for (int j = 0; j < ag.num_points(); ++j) {
    vp[j] = (1.0 - theta) * snaps[lo].vplus[j] + theta * snaps[hi].vplus[j];
    vm[j] = (1.0 - theta) * snaps[lo].vminus[j] + theta * snaps[hi].vminus[j];
  }
  Field vpf(ag, std::move(vp));
  Field vmf(ag, std::move(vm));

  std::vector<double> zv(grid.num_points()), uv(grid.num_points());
  for (int i = 0; i < grid.num_points(); ++i) {
    double x = grid.node(i);
    double a = periodic_lerp(vpf, x - t);
    double b = periodic_lerp(vmf, x + t);
    zv[i] = a + b;
    uv[i] = a - b;
  }
  return DirectState(Field(grid, std::move(zv)), Field(grid, std::move(uv)), t, eps);
}

} // namespace hyperavg::direct
