#include "fsfm/integrators.hpp"

#include <doctest.h>

#include <cmath>

using namespace fsfm;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("vdp_rhs: direct substitution") {
  CHECK(vdp_rhs(vec2(0, 1)) == vec2(1, 1));
  CHECK(vdp_rhs(vec2(1, 5)) == vec2(5, -1));
  CHECK(vdp_rhs(vec2(0, 0)) == vec2(0, 0));
}

TEST_CASE("pendulum_rhs: direct substitution") {
  for (double v : {-2.0, 0.0, 1.3}) {
    const Vec d = pendulum_rhs(vec2(0, v));
    CHECK(d[0] == v);
    CHECK(d[1] == 0.0);
  }
  const Vec d = pendulum_rhs(vec2(M_PI / 2, 0));
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(-9.80665).epsilon(1e-15));
}

TEST_CASE("pendulum: energy is conserved to 1e-8 over T=10 at reference tolerances") {
  const auto sys = pendulum_system();
  const Vec y0 = vec2(1.2, 0.3);
  const auto traj = integrate(sys, y0, 10.0, 0.01);
  const double e0 = pendulum_energy(traj.states.front());
  double drift = 0;
  for (const Vec& s : traj.states) drift = std::max(drift, std::abs(pendulum_energy(s) - e0));
  CHECK(drift < 1e-8);
}

TEST_CASE("dae_circuit: rest state and direct substitution") {
  const Vec at_zero = dae_circuit_rhs(vec2(0, 0));
  CHECK(at_zero == vec2(0, 0));
  CHECK(dae_circuit_algebraic(vec2(0, 0)) == vec2(0, 0));

  // u = (0, 1): v1 = 0, v2 = -1, du1/dt = v2/C = -1e9, du2/dt = 0
  const Vec v = dae_circuit_algebraic(vec2(0, 1));
  CHECK(v[0] == 0.0);
  CHECK(v[1] == -1.0);
  const Vec du = dae_circuit_rhs(vec2(0, 1));
  CHECK(du[0] == doctest::Approx(-1e9).epsilon(1e-15));
  CHECK(du[1] == 0.0);
}

TEST_CASE("dae_circuit: v1 is odd in u1") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.0, 2.0);
    const double v_pos = dae_circuit_algebraic(vec2(a, 0))[0];
    const double v_neg = dae_circuit_algebraic(vec2(-a, 0))[0];
    CHECK(v_neg == doctest::Approx(-v_pos).epsilon(1e-14));
  }
}

TEST_CASE("dae_circuit: algebraic constraint v2 + u2 + v1 = 0 along a trajectory") {
  const auto sys = dae_circuit_system();
  const auto traj = integrate(sys, vec2(1.0, 0.1), 1e-6, 5e-8);
  for (const Vec& u : traj.states) {
    const Vec v = dae_circuit_algebraic(u);
    CHECK(std::abs(v[1] + u[1] + v[0]) <= 1e-15 * std::max(1.0, std::abs(u[1])));
  }
}

TEST_CASE("lorenz_rhs: direct substitution") {
  // expected values written with the same arithmetic as the definition
  CHECK(lorenz_rhs(vec3(1, 1, 1)) == vec3(0, 26, 1.0 - (8.0 / 3.0) * 1.0));
  CHECK(lorenz_rhs(vec3(0, 0, 0)) == vec3(0, 0, 0));
  // the prediction-demo state (10, 10, 20)
  CHECK(lorenz_rhs(vec3(10, 10, 20)) == vec3(0, 70, 100.0 - (8.0 / 3.0) * 20.0));
}

TEST_CASE("integrate: exponential decay hits the closed form") {
  const OdeSystem decay{"decay", 1, [](const Vec& x, Vec& dx) { dx = -x; }};
  Vec one(1);
  one << 1.0;
  const auto traj = integrate(decay, one, 1.0, 0.25);
  CHECK(traj.states.size() == 5);
  CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("integrate: RK4 error ratio under halving sits in the 4th-order band") {
  const auto sys = vdp_system();
  const Vec x0 = vec2(1.1, 0.5);
  IntegratorConfig ref;
  ref.abs_tol = 1e-13;
  ref.rel_tol = 1e-13;
  const Vec exact = integrate(sys, x0, 1.0, 1.0, ref).states.back();

  auto rk4_error = [&](double h) {
    IntegratorConfig cfg;
    cfg.method = Method::Rk4;
    cfg.fixed_step = h;
    return (integrate(sys, x0, 1.0, 1.0, cfg).states.back() - exact).norm();
  };
  const double ratio = rk4_error(0.025) / rk4_error(0.0125);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("integrate: adaptive and fixed-step methods agree on Lorenz") {
  const auto sys = lorenz_system();
  const Vec x0 = vec3(1, 1, 1);
  const Vec adaptive = integrate(sys, x0, 1.0, 1.0).states.back();
  IntegratorConfig cfg;
  cfg.method = Method::Rk4;
  cfg.fixed_step = 1e-4;
  const Vec fixed = integrate(sys, x0, 1.0, 1.0, cfg).states.back();
  CHECK((adaptive - fixed).norm() < 1e-6);
}

TEST_CASE("integrate: output step must divide the horizon") {
  const auto sys = vdp_system();
  CHECK_THROWS_AS(integrate(sys, vec2(1, 0), 1.0, 0.3), ShapeError);
}

TEST_CASE("integrate: RK4 substep must divide the output interval") {
  const auto sys = vdp_system();
  IntegratorConfig cfg;
  cfg.method = Method::Rk4;
  cfg.fixed_step = 0.4;
  CHECK_THROWS_AS(integrate(sys, vec2(1, 0), 1.0, 1.0, cfg), ShapeError);
}

TEST_CASE("integrate: deterministic") {
  const auto sys = lorenz_system();
  const Vec x0 = vec3(2, -1, 25);
  const auto a = integrate(sys, x0, 2.0, 0.1);
  const auto b = integrate(sys, x0, 2.0, 0.1);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k] == b.states[k]);
}
