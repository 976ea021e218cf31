#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hyperavg/averaged_solver.hpp"
#include "hyperavg/averaging.hpp"
#include "hyperavg/field_ops.hpp"
#include "hyperavg/grid.hpp"

using namespace hyperavg;
using namespace hyperavg::solver;

namespace {

Field reflect(const Field& f) {
  std::vector<double> v(static_cast<std::size_t>(f.size()), 0.0);
  for (int j = 0; j < f.size(); ++j) v[std::size_t(j)] = f[-j];
  return Field(f.grid(), std::move(v));
}

// independent explicit RK4 sweep of the semi-discrete system, using the
// solver's own right-hand side evaluated with coincident time levels
FieldPair rk4_semi_discrete(const FieldPair& s, const Field& h_profile,
                            const TermToggles& terms, double dt) {
  auto f = [&](const Field& v, const Field& w) {
    return fds1_rhs(v, v, w, w, h_profile, terms);
  };
  auto [k1v, k1w] = f(s.vplus, s.vminus);
  auto [k2v, k2w] = f(axpy(0.5 * dt, k1v, s.vplus), axpy(0.5 * dt, k1w, s.vminus));
  auto [k3v, k3w] = f(axpy(0.5 * dt, k2v, s.vplus), axpy(0.5 * dt, k2w, s.vminus));
  auto [k4v, k4w] = f(axpy(dt, k3v, s.vplus), axpy(dt, k3w, s.vminus));
  Field v = s.vplus, w = s.vminus;
  v = axpy(dt / 6.0, k1v, v);
  v = axpy(dt / 3.0, k2v, v);
  v = axpy(dt / 3.0, k3v, v);
  v = axpy(dt / 6.0, k4v, v);
  w = axpy(dt / 6.0, k1w, w);
  w = axpy(dt / 3.0, k2w, w);
  w = axpy(dt / 3.0, k3w, w);
  w = axpy(dt / 6.0, k4w, w);
  return FieldPair(std::move(v), std::move(w), s.tau + dt);
}

} // namespace

TEST_CASE("the zero state is a fixed point of the step") {
  PeriodicGrid g(64);
  Field zero = make_zero_field(g);
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  SchemeParams p;
  StepDiagnostics d;
  FieldPair out = step(FieldPair(zero, zero), h, p, &d);
  CHECK(sup_norm(out.vplus) == 0.0);
  CHECK(sup_norm(out.vminus) == 0.0);
  CHECK(d.residual <= p.fp_tol);
  CHECK(out.tau == doctest::Approx(p.dt));
}

TEST_CASE("one implicit step tracks an explicit RK4 sweep of the same stencils") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return std::cos(y); });
  Field w0 = make_zero_field(g);
  Field h0 = make_zero_field(g);
  SchemeParams p;
  p.dt = 1e-4;
  FieldPair got = step(FieldPair(v0, w0), h0, p);
  FieldPair want = rk4_semi_discrete(FieldPair(v0, w0), h0, p.terms, p.dt);
  CHECK(sup_norm(got.vplus, want.vplus) < 1e-8);
  CHECK(sup_norm(got.vminus, want.vminus) < 1e-8);
}

TEST_CASE("a full right-hand side matches the averaged equations on known data") {
  // V = W = cos y, h = 5 sin 2y:
  //   dV/dtau = -(1/6) sin y + (3/4) sin 2y + 1.25 cos y   (and dW = -dV)
  PeriodicGrid g(256);
  Field v = sample(g, [](double y) { return std::cos(y); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  auto [rv, rw] = fds1_rhs(v, v, v, v, h, TermToggles{});
  Field want = sample(g, [](double y) {
    return -std::sin(y) / 6.0 + 0.75 * std::sin(2.0 * y) + 1.25 * std::cos(y);
  });
  CHECK(sup_norm(rv, want) < 2e-3);
  CHECK(sup_norm(rw, scale(want, -1.0)) < 2e-3);
}

TEST_CASE("the step conserves the discrete means") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return std::cos(y) + 0.3 * std::sin(2.0 * y); });
  Field w0 = sample(g, [](double y) { return 0.5 * std::cos(y); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  SchemeParams p;
  StepDiagnostics d;
  FieldPair out = step(FieldPair(v0, w0), h, p, &d);
  CHECK(std::abs(mean(out.vplus) - mean(v0)) <= 10.0 * p.fp_tol);
  CHECK(std::abs(mean(out.vminus) - mean(w0)) <= 10.0 * p.fp_tol);
  CHECK(d.mass_vplus == doctest::Approx(mean(out.vplus)).epsilon(1e-15));
  CHECK(d.mass_vminus == doctest::Approx(mean(out.vminus)).epsilon(1e-15));
}

TEST_CASE("swap-and-reflect symmetry maps solutions to solutions") {
  // if (V, W) solves the system for bottom h, then (W(-y), V(-y)) solves it
  // for bottom h(-y); the two equations trade places under y -> -y
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.4 * std::cos(y) + 0.2 * std::sin(2.0 * y); });
  Field w0 = sample(g, [](double y) { return 0.3 * std::sin(y); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y) + std::cos(y); });
  SchemeParams p;
  FieldPair fwd = step(FieldPair(v0, w0), h, p);
  FieldPair mir = step(FieldPair(reflect(w0), reflect(v0)), reflect(h), p);
  CHECK(sup_norm(mir.vplus, reflect(fwd.vminus)) < 1e-10);
  CHECK(sup_norm(mir.vminus, reflect(fwd.vplus)) < 1e-10);
}

TEST_CASE("resonant bottom: mode 1 follows the closed-form amplitude rotation") {
  // Small data kill the quadratic term; h = 5 sin 2y couples only mode +-1.
  // Writing V = 2 Re(p e^{iy}), W = 2 Re(q e^{iy}) the system reduces to
  //   p' = (i/6) p + 1.25 conj(q),  q' = -(i/6) q - 1.25 conj(p)
  // whose solution from p(0) = q(0) = a/4 gives at tau
  //   V = (a/2)(cos 1.25 tau + sin 1.25 tau) cos(y + tau/6)
  //   W = (a/2)(cos 1.25 tau - sin 1.25 tau) cos(y - tau/6)
  const double a = 0.01;
  PeriodicGrid g(64);
  Field v0 = sample(g, [&](double y) { return 0.5 * a * std::cos(y); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  SchemeParams p;
  p.dt = 1e-3;
  p.tau_end = 1.0;
  p.snapshot_taus = {1.0};
  AveragedRun r = run(FieldPair(v0, v0), h, p);
  REQUIRE(r.snapshots.back().tau == doctest::Approx(1.0));

  const double cs = std::cos(1.25), sn = std::sin(1.25);
  Field want_v = sample(g, [&](double y) { return 0.5 * a * (cs + sn) * std::cos(y + 1.0 / 6.0); });
  Field want_w = sample(g, [&](double y) { return 0.5 * a * (cs - sn) * std::cos(y - 1.0 / 6.0); });
  // discretization floor at M = 64 is ~3e-5; the coupling being off or
  // carrying the wrong sign would show up at the 1e-3 level
  CHECK(sup_norm(r.snapshots.back().vplus, want_v) < 1e-4);
  CHECK(sup_norm(r.snapshots.back().vminus, want_w) < 1e-4);
}

TEST_CASE("zero horizon keeps only the initial snapshot") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return std::cos(y); });
  Field h = make_zero_field(g);
  SchemeParams p;
  p.tau_end = 0.0;
  AveragedRun r = run(FieldPair(v0, v0), h, p);
  REQUIRE(r.snapshots.size() == 1);
  CHECK(r.snapshots.front().tau == 0.0);
  CHECK(r.tau_end() == 0.0);
  CHECK(sup_norm(r.snapshots.front().vplus, v0) == 0.0);
}

TEST_CASE("snapshots land on requested times and stay strictly increasing") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.1 * std::cos(y); });
  Field h = make_zero_field(g);
  SchemeParams p;
  p.dt = 1e-3;
  p.tau_end = 0.1;
  p.snapshot_taus = {0.05};
  AveragedRun r = run(FieldPair(v0, v0), h, p);
  REQUIRE(r.snapshots.size() == 3);
  CHECK(r.snapshots[0].tau == 0.0);
  CHECK(r.snapshots[1].tau == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(r.snapshots[2].tau == doctest::Approx(0.1).epsilon(1e-12));
  for (std::size_t i = 1; i < r.snapshots.size(); ++i)
    CHECK(r.snapshots[i].tau > r.snapshots[i - 1].tau);
  CHECK(r.diagnostics.size() == 100);
}

TEST_CASE("empty snapshot list keeps every step") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.1 * std::cos(y); });
  Field h = make_zero_field(g);
  SchemeParams p;
  p.dt = 1e-3;
  p.tau_end = 0.01;
  AveragedRun r = run(FieldPair(v0, v0), h, p);
  CHECK(r.snapshots.size() == 11);
}

TEST_CASE("a non-resonant bottom leaves the waves decoupled") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.5 * std::cos(y); });
  Field h = sample(g, [](double y) { return std::sin(3.0 * y); });
  SchemeParams p;
  p.dt = 1e-3;
  p.tau_end = 0.2;
  AveragedRun coupled = run(FieldPair(v0, v0), h, p);
  SchemeParams poff = p;
  poff.terms.coupling = false;
  AveragedRun off = run(FieldPair(v0, v0), h, poff);
  CHECK(sup_norm(coupled.snapshots.back().vplus, off.snapshots.back().vplus) < 1e-10);
  CHECK(sup_norm(coupled.snapshots.back().vminus, off.snapshots.back().vminus) < 1e-10);
}

TEST_CASE("resonant data transfer energy between the waves") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.5 * (std::cos(y) + std::sin(2.0 * y)); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  SchemeParams p;
  p.dt = 1e-3;
  p.tau_end = 1.0;
  p.snapshot_taus = {1.0};
  AveragedRun coupled = run(FieldPair(v0, v0), h, p);
  SchemeParams poff = p;
  poff.terms.coupling = false;
  AveragedRun off = run(FieldPair(v0, v0), h, poff);
  CHECK(sup_norm(coupled.snapshots.back().vplus, off.snapshots.back().vplus) > 1e-3);
  CHECK(sup_norm(coupled.snapshots.back().vminus, off.snapshots.back().vminus) > 1e-3);
}

TEST_CASE("the reference step is the full step with the coupling removed") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.4 * std::cos(y); });
  Field w0 = sample(g, [](double y) { return 0.2 * std::sin(y); });
  Field h0 = make_zero_field(g);
  SchemeParams p;
  FieldPair a = step(FieldPair(v0, w0), h0, p);
  FieldPair b = kdv_reference_step(FieldPair(v0, w0), p);
  CHECK(sup_norm(a.vplus, b.vplus) == 0.0);
  CHECK(sup_norm(a.vminus, b.vminus) == 0.0);
}

TEST_CASE("a travelling hump keeps its mass through a thousand reference steps") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) {
    const double c = std::cosh(2.0 * (y - 3.0));
    return 0.8 / (c * c);
  });
  SchemeParams p;
  p.dt = 1e-3;
  FieldPair s(v0, v0);
  const double m0v = mean(s.vplus), m0w = mean(s.vminus);
  for (int n = 0; n < 1000; ++n) s = kdv_reference_step(s, p);
  CHECK(std::abs(mean(s.vplus) - m0v) <= 10.0 * p.fp_tol);
  CHECK(std::abs(mean(s.vminus) - m0w) <= 10.0 * p.fp_tol);
  // the wave actually moved
  CHECK(sup_norm(s.vplus, v0) > 0.1);
}

TEST_CASE("both fixed-point modes land on the same implicit solution") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.1 * std::cos(y); });
  Field w0 = sample(g, [](double y) { return 0.1 * std::sin(y); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  SchemeParams semi;
  semi.dt = 1e-4; // small enough that plain lagging contracts too
  SchemeParams pic = semi;
  pic.fp_mode = FixedPointMode::picard;
  FieldPair a = step(FieldPair(v0, w0), h, semi);
  FieldPair b = step(FieldPair(v0, w0), h, pic);
  CHECK(sup_norm(a.vplus, b.vplus) < 1e-10);
  CHECK(sup_norm(a.vminus, b.vminus) < 1e-10);
}

TEST_CASE("identical runs are bit-identical") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.5 * (std::cos(y) + std::sin(2.0 * y)); });
  Field h = sample(g, [](double y) { return 5.0 * std::sin(2.0 * y); });
  SchemeParams p;
  p.dt = 1e-3;
  p.tau_end = 0.05;
  AveragedRun r1 = run(FieldPair(v0, v0), h, p);
  AveragedRun r2 = run(FieldPair(v0, v0), h, p);
  REQUIRE(r1.snapshots.size() == r2.snapshots.size());
  for (std::size_t s = 0; s < r1.snapshots.size(); ++s) {
    CHECK(sup_norm(r1.snapshots[s].vplus, r2.snapshots[s].vplus) == 0.0);
    CHECK(sup_norm(r1.snapshots[s].vminus, r2.snapshots[s].vminus) == 0.0);
  }
  REQUIRE(r1.diagnostics.size() == r2.diagnostics.size());
  for (std::size_t s = 0; s < r1.diagnostics.size(); ++s)
    CHECK(r1.diagnostics[s].iterations == r2.diagnostics[s].iterations);
}

TEST_CASE("an oversized step is reported, not silently mangled") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return std::cos(y); });
  Field h0 = make_zero_field(g);
  SchemeParams p;
  p.fp_mode = FixedPointMode::picard; // plain lagging: contraction needs tiny dt
  p.dt = 0.05;
  p.fp_max_iter = 30;
  CHECK_THROWS_AS(step(FieldPair(v0, v0), h0, p), std::runtime_error);
}

TEST_CASE("parameter validation") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return std::cos(y); });
  Field h0 = make_zero_field(g);
  SchemeParams bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(step(FieldPair(v0, v0), h0, bad), std::invalid_argument);
  SchemeParams neg;
  neg.tau_end = -1.0;
  CHECK_THROWS_AS(run(FieldPair(v0, v0), h0, neg), std::invalid_argument);
  PeriodicGrid g2(128);
  Field h2 = make_zero_field(g2);
  SchemeParams p;
  CHECK_THROWS_AS(step(FieldPair(v0, v0), h2, p), std::invalid_argument);
}

TEST_CASE("the run counter counts runs") {
  PeriodicGrid g(64);
  Field v0 = sample(g, [](double y) { return 0.1 * std::cos(y); });
  Field h0 = make_zero_field(g);
  SchemeParams p;
  p.tau_end = 0.002;
  reset_run_invocation_count();
  CHECK(run_invocation_count() == 0);
  run(FieldPair(v0, v0), h0, p);
  CHECK(run_invocation_count() == 1);
  run(FieldPair(v0, v0), h0, p);
  CHECK(run_invocation_count() == 2);
  reset_run_invocation_count();
  CHECK(run_invocation_count() == 0);
}
