#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "strong_form.hpp"
#include "vmfem/verification.hpp"

using namespace vmfem;
using namespace vmfem::test;

namespace {

StrongFields mms_jets(const MmsParameters& p, double t, double x, double y) {
  const Jet2 T = Jet2::variable(t, 0), X = Jet2::variable(x, 1), Y = Jet2::variable(y, 2);
  const Jet2 s = sin(X) * sin(Y);
  const Jet2 decay = exp((-2.0 * p.nu) * T);
  StrongFields f;
  f.rho = s * decay;
  f.T = 0.5 * (s * exp((-2.0 * p.kappa / p.cv) * T));
  f.u = sin(X) * cos(Y) * decay;
  f.v = (-1.0) * (cos(X) * sin(Y) * decay);
  return f;
}

StrongConstants mms_constants(const MmsParameters& p) {
  StrongConstants c;
  c.cv = p.cv;
  c.R = p.gas_constant;
  c.gamma = p.gamma;
  c.kappa = p.kappa;
  c.nu = p.nu;
  return c;
}

} // namespace

TEST_CASE("manufactured solution values") {
  const MmsParameters p;
  const double h = std::numbers::pi / 2;
  const MmsFields f = mms_exact(p, 0.0, h, h);
  CHECK(f.rho == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.T == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(f.u) < 1e-15);
  CHECK(std::abs(f.v) < 1e-15);
  const MmsFields late = mms_exact(p, 50.0, 0.7, 0.4);
  CHECK(std::abs(late.rho) + std::abs(late.T) + std::abs(late.u) + std::abs(late.v) < 1e-8);

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> xy(0.0, 1.25), tt(0.0, 0.25);
  for (int i = 0; i < 200; ++i) {
    const StrongFields j = mms_jets(p, tt(rng), xy(rng), xy(rng));
    CHECK(std::abs(j.u.g[1] + j.v.g[2]) < 1e-14);
  }
}

TEST_CASE("re-derived forcings satisfy the strong equations") {
  const MmsParameters p;
  const StrongConstants c = mms_constants(p);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> xy(0.0, 1.25), tt(0.0, 0.25);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = tt(rng), x = xy(rng), y = xy(rng);
    const StrongResidual r = strong_lhs(mms_jets(p, t, x, y), c);
    const MmsForcing s = mms_forcing(p, t, x, y);
    worst = std::max({worst, std::abs(r.mass - s.s_rho), std::abs(r.mom_x - s.s_u), std::abs(r.mom_y - s.s_v),
                      std::abs(r.temp - s.s_T)});
    const MmsFields f = mms_exact(p, t, x, y);
    const StrongFields j = mms_jets(p, t, x, y);
    CHECK(f.rho == doctest::Approx(j.rho.v).epsilon(1e-14));
    CHECK(f.T == doctest::Approx(j.T.v).epsilon(1e-14));
  }
  CHECK(worst <= 1e-8);

  SUBCASE("other parameters") {
    MmsParameters q;
    q.nu = 0.4;
    q.kappa = 1.3;
    q.cv = 2.5;
    q.gas_constant = 1.0;
    q.gamma = 1.4;
    const StrongConstants cq = mms_constants(q);
    for (int i = 0; i < 100; ++i) {
      const double t = tt(rng), x = xy(rng), y = xy(rng);
      const StrongResidual r = strong_lhs(mms_jets(q, t, x, y), cq);
      const MmsForcing s = mms_forcing(q, t, x, y);
      CHECK(std::abs(r.temp - s.s_T) <= 1e-8);
      CHECK(std::abs(r.mom_x - s.s_u) <= 1e-8);
    }
  }
}

TEST_CASE("printed mass forcing and momentum forcing on the walls") {
  const MmsParameters p;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> xy(0.0, 1.25), tt(0.0, 0.25);
  for (int i = 0; i < 100; ++i) {
    const double t = tt(rng), x = xy(rng), y = xy(rng);
    const double printed = -2.0 * p.nu * std::sin(x) * std::sin(y) * std::exp(-2.0 * p.nu * t);
    CHECK(mms_forcing(p, t, x, y).s_rho == doctest::Approx(printed).epsilon(1e-13));
    CHECK(mms_forcing_printed(p, t, x, y).s_rho == doctest::Approx(printed).epsilon(1e-13));
    // on x = 0 only -d_x(mu) tau_xx = -nu sin y * 2 cos y e^{-4 nu t} survives in S_u
    const double wall = -2.0 * p.nu * std::sin(y) * std::cos(y) * std::exp(-4.0 * p.nu * t);
    CHECK(mms_forcing(p, t, 0.0, y).s_u == doctest::Approx(wall).epsilon(1e-12));
    CHECK(std::abs(mms_forcing(p, t, 0.0, 0.0).s_u) < 1e-14);
  }
}

TEST_CASE("forcing discrepancy report") {
  const auto rows = forcing_discrepancy_report(MmsParameters{}, 100, 12345u);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].field == "S_rho");
  CHECK(rows[0].max_abs_difference < 1e-12);
  for (const auto& r : rows) {
    CHECK(!r.explanation.empty());
    CHECK(std::isfinite(r.max_abs_difference));
  }
  bool any = false;
  for (std::size_t i = 1; i < rows.size(); ++i) any = any || rows[i].max_relative_difference > 1e-6;
  CHECK(any);
  // deterministic for a fixed seed
  const auto again = forcing_discrepancy_report(MmsParameters{}, 100, 12345u);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].max_abs_difference == rows[i].max_abs_difference);

  std::ostringstream csv;
  write_discrepancy_report(csv, rows);
  const std::string text = csv.str();
  CHECK(text.rfind("field,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("MMS parameter validation") {
  MmsParameters p;
  CHECK_NOTHROW(p.validate());
  p.nu = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = MmsParameters{};
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  MmsRunOptions o;
  o.params.dt = 0.3;
  CHECK_THROWS_AS(run_mms_level(2, o), InvalidArgument);
}

TEST_CASE("convergence report orders") {
  std::vector<MmsLevelResult> lv(3);
  for (int i = 0; i < 3; ++i) {
    lv[i].n = 4 << i;
    lv[i].h = 0.4 / (1 << i);
    lv[i].dofs = 100 * (i + 1);
    lv[i].err_u = std::pow(lv[i].h, 3);
    lv[i].err_rho = std::pow(lv[i].h, 2);
    lv[i].err_T = 2.0 * std::pow(lv[i].h, 2);
  }
  const ConvergenceReport rep = make_report(1, lv);
  REQUIRE(rep.rows.size() == 3);
  CHECK(std::isnan(rep.rows[0].ord_u));
  for (int i = 1; i < 3; ++i) {
    CHECK(rep.rows[i].h < rep.rows[i - 1].h);
    CHECK(rep.rows[i].ord_u == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.rows[i].ord_rho == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.rows[i].ord_T == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("short MMS run") {
  MmsRunOptions o;
  o.params.t_final = 0.02;
  o.params.dt = 1e-3;
  const MmsLevelResult a = run_mms_level(4, o);
  CHECK(a.dofs == 212);
  CHECK(a.steps == 20);
  CHECK(a.h == doctest::Approx(0.44194).epsilon(1e-4));
  CHECK(a.err_u > 0.0);
  CHECK(a.err_u < 1e-2);
  CHECK(a.err_rho < 1e-2);
  CHECK(a.err_T < 1e-2);
  CHECK(a.max_newton_iterations <= 10);

  SUBCASE("temporal error is subdominant") {
    MmsRunOptions h = o;
    h.params.dt = 5e-4;
    const MmsLevelResult b = run_mms_level(4, h);
    CHECK(std::abs(b.err_u - a.err_u) < 0.01 * a.err_u);
    CHECK(std::abs(b.err_rho - a.err_rho) < 0.01 * a.err_rho);
    CHECK(std::abs(b.err_T - a.err_T) < 0.01 * a.err_T);
  }
  SUBCASE("exact history matches the ramp") {
    MmsRunOptions e = o;
    e.exact_history = true;
    const MmsLevelResult b = run_mms_level(4, e);
    CHECK(b.err_u == doctest::Approx(a.err_u).epsilon(1e-2));
  }
}

TEST_CASE("asymptotic-preservation setup") {
  ApParameters p;
  CHECK_NOTHROW(p.validate());
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    // analytic divergence of (sin^2(pi x) sin(2 pi y), -sin^2(pi y) sin(2 pi x))
    const double pi = std::numbers::pi;
    const double div = 2 * pi * std::sin(pi * x) * std::cos(pi * x) * std::sin(2 * pi * y) -
                       2 * pi * std::sin(pi * y) * std::cos(pi * y) * std::sin(2 * pi * x);
    CHECK(std::abs(div) < 1e-12);
    const double fd = (ap_initial_velocity(x + h, y).x() - ap_initial_velocity(x - h, y).x() +
                       ap_initial_velocity(x, y + h).y() - ap_initial_velocity(x, y - h).y()) /
                      (2 * h);
    CHECK(std::abs(fd) < 1e-7);
  }
  CHECK(ap_initial_velocity(0.0, 0.3).norm() < 1e-15);
  CHECK(ap_initial_velocity(0.25, 0.0).norm() < 1e-15);

  CHECK(ap_initial_density(p, 0.1, 0.5) == 1.0);
  CHECK(ap_initial_density(p, 0.0, 0.9) == 1.0);
  CHECK(ap_initial_density(p, 0.1, 1.0) == doctest::Approx(1.0 - 0.005 * std::tanh(0.5)).epsilon(1e-15));
  for (double mach : {0.1, 0.05}) {
    const double rho = ap_initial_density(p, mach, 0.2);
    const double T = ap_initial_temperature(p, mach, rho);
    CHECK(rho * p.gas_constant * T == doctest::Approx(std::pow(rho, p.gamma) / (mach * mach)).epsilon(1e-13));
  }
  p.mach = {};
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("short asymptotic-preservation run") {
  ApParameters p;
  p.n = 4;
  p.k = 1;
  p.mach = {0.2, 0.1};
  p.dt = 1e-4;
  p.t_final = 1e-3;
  const ApReport rep = run_ap(p);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.incompressible_steps == 10);
  for (const auto& r : rep.rows) {
    CHECK(r.steps == 10);
    CHECK(r.max_mass_change <= 10 * p.newton.rtol);
  }
  CHECK(rep.rows[1].diff_p < rep.rows[0].diff_p);
  CHECK(rep.rows[1].diff_rho < rep.rows[0].diff_rho);
}
