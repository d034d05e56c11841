#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cornu/dormand_prince.hpp"
#include "cornu/evolution.hpp"

using namespace cornu;
using namespace cornu::evo;

namespace {

std::vector<double> spaced(double lo, double hi, double step) {
  std::vector<double> pts;
  for (int k = 1; lo + k * step < hi - 1e-9; ++k) pts.push_back(lo + k * step);
  return pts;
}

double dot(const SO3State& p, const std::array<double, 3>& v) { return p.x * v[0] + p.y * v[1] + p.z * v[2]; }

}  // namespace

TEST_CASE("rhs_so3 examples and properties") {
  for (double R : {1.0, 2.5}) {
    const auto params = SpiralParams::make(2.0, R);
    const auto d = rhs_so3(0.0, SO3State{}, params);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(1.0 / R));
    CHECK(d[2] == 0.0);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto params = SpiralParams::make(1.7, 0.8);
  for (int k = 0; k < 10000; ++k) {
    const SO3State p{u(rng), u(rng), u(rng)};
    const double s = 20.0 * u(rng);
    const auto d = rhs_so3(s, p, params);
    const double n2 = p.x * p.x + p.y * p.y + p.z * p.z;
    CHECK(std::abs(dot(p, d)) <= 1e-15 * n2);
    CHECK(std::hypot(d[0], d[1], d[2]) <= std::sqrt(2.0) / params.R * std::sqrt(n2) * (1 + 1e-15));
  }
}

TEST_CASE("rhs_spinor examples and properties") {
  const auto params = SpiralParams::make(2.0, 1.0);
  const auto d = rhs_spinor(0.0, SpinorState{}, params);
  CHECK(std::abs(d[0]) == 0.0);
  CHECK(std::abs(d[1] - complex(0.0, 0.5)) <= 1e-16);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const SpinorState st{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const double s = 30.0 * u(rng);
    const auto r = rhs_spinor(s, st, params);
    CHECK(std::abs((std::conj(st.a) * r[0] + std::conj(st.b) * r[1]).real()) <= 1e-15);
    const auto h = spinor_hamiltonian(s, params);
    CHECK(h[0] == std::conj(h[0]));
    CHECK(h[3] == std::conj(h[3]));
    CHECK(std::abs(h[1] - std::conj(h[2])) <= 1e-16);
    // rhs = -i H psi.
    const complex i(0.0, 1.0);
    CHECK(std::abs(r[0] + i * (h[0] * st.a + h[1] * st.b)) <= 1e-15);
    CHECK(std::abs(r[1] + i * (h[2] * st.a + h[3] * st.b)) <= 1e-15);
  }
}

TEST_CASE("hopf_map examples") {
  const auto north = hopf_map(SpinorState{{1.0, 0.0}, {0.0, 0.0}});
  CHECK(north.x == 0.0);
  CHECK(north.y == 0.0);
  CHECK(north.z == 1.0);
  const auto south = hopf_map(SpinorState{{0.0, 0.0}, {1.0, 0.0}});
  CHECK(south.z == -1.0);
  // a b* = (1+i)^2 / 4 = i/2, so x = 2 Re(a b*) = 0 and y = -2 Im(a b*) = -1.
  const auto eq = hopf_map(SpinorState{{0.5, 0.5}, {0.5, -0.5}});
  CHECK(std::abs(eq.x) <= 1e-16);
  CHECK(eq.y == doctest::Approx(-1.0));
  CHECK(std::abs(eq.z) <= 1e-16);
  CHECK(eq.norm() == doctest::Approx(1.0));
}

TEST_CASE("zero coupling leaves the state fixed") {
  const auto params = SpiralParams::from_lambda(0.0);
  OdeConfig cfg;
  const SO3State p0{0.6, 0.0, 0.8};
  const auto t = integrate_so3(p0, params, cfg);
  CHECK(t.final_state.x == p0.x);
  CHECK(t.final_state.z == p0.z);
  const SpinorState s0{{0.6, 0.0}, {0.0, 0.8}};
  const auto ts = integrate_spinor(s0, params, cfg, spaced(cfg.s_start, cfg.s_end, 0.5));
  CHECK(ts.final_state.a == s0.a);
  CHECK(ts.final_state.b == s0.b);
  const auto z = z_infinity(params, cfg);
  CHECK(z.value == 1.0);
  CHECK(z.uncertainty == 0.0);
  CHECK(a_infinity_magnitude(params, cfg).value == 1.0);
}

TEST_CASE("SO(3) route reaches z(inf) after window averaging") {
  // Columns of the rotation propagator from s_start give the north-pole
  // trajectory for every start point in the leading window, so start and
  // end phases can both be averaged, uniformly in u = s^2.
  const auto params = SpiralParams::from_lambda(1.0);
  OdeConfig cfg;
  const double u_edge = cfg.s_end * cfg.s_end;
  const double du = cfg.tail_window * 4.0 * kPi / params.a;
  constexpr int kPoints = 129;
  std::vector<double> lead, tail, pts;
  for (int k = 0; k < kPoints; ++k) {
    const double u = u_edge - du * k / (kPoints - 1);
    lead.push_back(-std::sqrt(u));
    tail.push_back(std::sqrt(u));
  }
  std::sort(tail.begin(), tail.end());
  pts.insert(pts.end(), lead.begin() + 1, lead.end());
  pts.insert(pts.end(), tail.begin(), tail.end() - 1);
  std::array<Trajectory<SO3State>, 3> cols{integrate_so3(SO3State{1, 0, 0}, params, cfg, pts),
                                           integrate_so3(SO3State{0, 1, 0}, params, cfg, pts),
                                           integrate_so3(SO3State{0, 0, 1}, params, cfg, pts)};
  const std::size_t n = cols[0].samples.size();
  auto row_z = [&](std::size_t idx) {
    return std::array<double, 3>{cols[0].samples[idx].second.z, cols[1].samples[idx].second.z,
                                 cols[2].samples[idx].second.z};
  };
  double sum = 0.0, weight = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const auto z0 = row_z(static_cast<std::size_t>(i));
    for (int j = 0; j < kPoints; ++j) {
      const auto z1 = row_z(n - 1 - static_cast<std::size_t>(j));
      const double w = (i == 0 || i == kPoints - 1 ? 0.5 : 1.0) * (j == 0 || j == kPoints - 1 ? 0.5 : 1.0);
      sum += w * (z1[0] * z0[0] + z1[1] * z0[1] + z1[2] * z0[2]);
      weight += w;
    }
  }
  CHECK(std::abs(sum / weight - closed_form_z_infinity(1.0)) <= 2e-3);
}

TEST_CASE("spinor and SO(3) routes agree sample by sample") {
  const auto params = SpiralParams::from_lambda(1.0);
  OdeConfig cfg;
  const auto pts = spaced(cfg.s_start, cfg.s_end, 0.25);
  const auto so3 = integrate_so3(SO3State{}, params, cfg, pts);
  const auto spin = integrate_spinor(SpinorState{}, params, cfg, pts);
  REQUIRE(so3.samples.size() == spin.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < so3.samples.size(); ++i) {
    REQUIRE(so3.samples[i].first == spin.samples[i].first);
    const double z_spin = 2.0 * std::norm(spin.samples[i].second.a) - 1.0;
    worst = std::max(worst, std::abs(z_spin - so3.samples[i].second.z));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("z_infinity examples") {
  OdeConfig cfg;
  for (double lambda : {1.0, 0.5}) {
    const auto z = z_infinity(SpiralParams::from_lambda(lambda), cfg);
    const double ref = closed_form_z_infinity(lambda);
    CAPTURE(lambda);
    CHECK(std::abs(z.value - ref) <= 2e-3);
    CHECK(std::abs(z.value - ref) <= z.uncertainty);
  }
  CHECK(closed_form_z_infinity(0.5) == doctest::Approx(0.3502).epsilon(1e-3));
}

TEST_CASE("a_infinity_magnitude and consistency with z") {
  OdeConfig cfg;
  const auto params = SpiralParams::from_lambda(1.0);
  const auto lim = asymptotic_limits(params, cfg);
  const double ref = std::exp(-kPi / 8.0);
  CHECK(ref == doctest::Approx(0.6752).epsilon(1e-4));
  CHECK(std::abs(lim.a_magnitude.value - ref) <= lim.a_magnitude.uncertainty);
  const double z_from_a = 2.0 * lim.a_magnitude.value * lim.a_magnitude.value - 1.0;
  CHECK(std::abs(z_from_a - lim.z.value) <=
        lim.z.uncertainty + 4.0 * lim.a_magnitude.value * lim.a_magnitude.uncertainty);
  CHECK(a_infinity_magnitude(params, cfg).value == lim.a_magnitude.value);
}

TEST_CASE("superadiabatic projection") {
  OdeConfig cfg;
  cfg.s_start = -100;
  cfg.s_end = 100;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.projection = Projection::superadiabatic;
  for (double lambda : {0.1, 0.6}) {
    const auto z = z_infinity(SpiralParams::from_lambda(lambda), cfg);
    CAPTURE(lambda);
    CHECK(std::abs(z.value - closed_form_z_infinity(lambda)) <= 1e-9);
    CHECK(std::abs(z.value - closed_form_z_infinity(lambda)) <= z.uncertainty);
  }
}

TEST_CASE("asymptotic_limits window preconditions") {
  const auto params = SpiralParams::from_lambda(1.0);
  OdeConfig cfg;
  cfg.s_start = 1.0;
  CHECK_THROWS_AS(asymptotic_limits(params, cfg), std::invalid_argument);
  cfg = OdeConfig{};
  cfg.s_end = -1.0;
  cfg.s_start = -5.0;
  CHECK_THROWS_AS(asymptotic_limits(params, cfg), std::invalid_argument);
  cfg = OdeConfig{};
  cfg.s_start = -3.0;
  cfg.s_end = 3.0;
  cfg.tail_window = 8;  // 8 periods need s^2 > 16 pi
  CHECK_THROWS_AS(asymptotic_limits(params, cfg), std::invalid_argument);
}

TEST_CASE("block structure examples") {
  const auto params = SpiralParams::make(2.0, 1.3);
  const auto m = generator_matrix(0.7, params);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) CHECK(m[i][j] == 0.0);
  }
  CHECK(m[2][2] == 0.0);
  CHECK(m[0][2] == -m[2][0]);
  CHECK(m[1][2] == -m[2][1]);
  const std::vector<double> pair{0.3, -1.9};
  const auto r = block_structure_check(pair, params);
  CHECK(r.max_deviation() <= 1e-14);
  CHECK(r.products == 2);
  CHECK(r.pairs == 1);
  const std::vector<double> one{0.3};
  CHECK_THROWS_AS(block_structure_check(one, params), std::invalid_argument);

  // chi identity on 1000 random pairs.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::vector<double> s{u(rng), u(rng)};
    worst = std::max(worst, block_structure_check(s, params).chi_identity);
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("randomised block-structure suite") {
  const auto r = block_structure_suite(1000, 1000, 6, 10.0, SpiralParams::from_lambda(1.0), 20240607);
  CHECK(r.products == 1000);
  CHECK(r.pairs >= 1000);
  CHECK(r.max_deviation() <= 1e-13);
}

TEST_CASE("norm conservation along trajectories") {
  const auto params = SpiralParams::from_lambda(2.0);
  OdeConfig cfg;
  const auto so3 = integrate_so3(SO3State{}, params, cfg);
  const auto spin = integrate_spinor(SpinorState{}, params, cfg);
  CHECK(so3.tolerance_met);
  CHECK(spin.tolerance_met);
  for (const auto& [s, st] : so3.samples) {
    REQUIRE(std::abs(st.norm() - 1.0) <= 10 * cfg.rel_tol * (s - cfg.s_start) + 1e-15);
  }
  for (const auto& [s, st] : spin.samples) {
    REQUIRE(std::abs(st.norm() - 1.0) <= 10 * cfg.rel_tol * (s - cfg.s_start) + 1e-15);
  }
  for (std::size_t i = 1; i < spin.samples.size(); ++i) {
    REQUIRE(spin.samples[i].first > spin.samples[i - 1].first);
  }
}

TEST_CASE("Hopf intertwining from a random spinor") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpinorState s0{{u(rng), u(rng)}, {u(rng), u(rng)}};
  const double n = s0.norm();
  s0.a /= n;
  s0.b /= n;
  OdeConfig cfg;
  cfg.s_start = -50;
  cfg.s_end = 50;
  const auto pts = spaced(cfg.s_start, cfg.s_end, 0.05);
  CHECK(hopf_consistency(s0, SpiralParams::from_lambda(1.0), cfg, pts) <= 1e-8);
  CHECK(hopf_consistency(SpinorState{}, SpiralParams::from_lambda(0.3), cfg, pts) <= 1e-8);
}

TEST_CASE("forward then backward integration returns the start") {
  OdeConfig cfg;
  const auto params = SpiralParams::from_lambda(1.0);
  const SO3State p0{0.0, 0.6, 0.8};
  const auto p1 = propagate_so3(p0, -20.0, 20.0, params, cfg);
  const auto back = propagate_so3(p1, 20.0, -20.0, params, cfg);
  CHECK(std::abs(back.x - p0.x) <= 100 * cfg.rel_tol);
  CHECK(std::abs(back.y - p0.y) <= 100 * cfg.rel_tol);
  CHECK(std::abs(back.z - p0.z) <= 100 * cfg.rel_tol);
}

TEST_CASE("tail window convergence in S") {
  OdeConfig near;
  OdeConfig far;
  far.s_start = -400;
  far.s_end = 400;
  for (double lambda : {0.25, 0.5, 1.0}) {
    const auto params = SpiralParams::from_lambda(lambda);
    const auto z200 = z_infinity(params, near);
    const auto z400 = z_infinity(params, far);
    CAPTURE(lambda);
    CHECK(std::abs(z400.value - z200.value) <= z200.uncertainty);
  }
}

TEST_CASE("integrator reports underflow with its location") {
  StepControl ctl;
  std::array<double, 1> y{1.0};
  double where = 0.0;
  try {
    integrate_dp54([](double, const std::array<double, 1>& v, std::array<double, 1>& out) { out[0] = v[0] * v[0]; },
                   0.0, y, 2.0, {}, ctl, [](double, const auto&, bool) {});
  } catch (const IntegrationError& e) {
    where = e.location();
  }
  CHECK(where == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("integrator honours the step budget") {
  OdeConfig cfg;
  cfg.max_steps = 50;
  CHECK_THROWS_AS(integrate_so3(SO3State{}, SpiralParams::from_lambda(1.0), cfg), IntegrationError);
}

TEST_CASE("integrator lands on stops in both directions") {
  StepControl ctl;
  const std::vector<double> stops{-0.5, -1.25, -2.0};
  std::array<double, 1> y{1.0};
  std::vector<double> hit;
  integrate_dp54([](double, const std::array<double, 1>& v, std::array<double, 1>& out) { out[0] = v[0]; }, 0.0, y,
                 -3.0, stops, ctl, [&](double s, const auto&, bool at) { if (at) hit.push_back(s); });
  CHECK(hit == std::vector<double>{-0.5, -1.25, -2.0, -3.0});
  CHECK(y[0] == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
}

TEST_CASE("trajectory CSV layout") {
  OdeConfig cfg;
  cfg.s_start = -5;
  cfg.s_end = 5;
  const std::vector<double> pts{-1.0, 0.0, 1.0};
  const auto params = SpiralParams::from_lambda(1.0);
  std::ostringstream a, b;
  write_csv(a, integrate_so3(SO3State{}, params, cfg, pts));
  write_csv(b, integrate_spinor(SpinorState{}, params, cfg, pts));
  std::string line;
  std::istringstream ia(a.str()), ib(b.str());
  std::getline(ia, line);
  CHECK(line == "s,x,y,z,norm_drift");
  int rows = 0;
  while (std::getline(ia, line)) ++rows;
  CHECK(rows == 5);
  std::getline(ib, line);
  CHECK(line == "s,a_re,a_im,b_re,b_im,norm_drift");
}

TEST_CASE("OdeConfig validation") {
  OdeConfig ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = ok;
  bad.s_end = bad.s_start;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.rel_tol = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.max_step_coeff = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.tail_window = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  const auto ctl = ok.step_control(SpiralParams::make(2.0, 1.0));
  CHECK(ctl.max_step(10.0) == doctest::Approx(0.5 / 21.0));
}
