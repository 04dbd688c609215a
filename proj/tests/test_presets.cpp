// Table-driven check that every preset constant matches the experiment table
// in docs/presets.md. Values here are written out literally on purpose.
#include "fsfm/presets.hpp"

#include <doctest.h>

using namespace fsfm;

TEST_CASE("presets: the experiment table") {
  {
    const auto& p = preset("vdp");
    CHECK(p.dim == 2);
    CHECK(p.obs_dt == 2.0);
    CHECK(p.total_time == 20.0);
    CHECK(p.num_sequences == 10000);
    CHECK(p.inner_steps == 10);
    CHECK(p.fine_dt() == 0.2);
    CHECK(p.outer_steps == 1);
    CHECK(p.hidden == std::vector<int>{20, 20, 20});
    CHECK(p.learning_rate == 1e-3);
    CHECK(p.epochs == 10000);
    CHECK(p.batch_size == 50);
    CHECK(p.domain == std::vector<std::array<double, 2>>{{-2.0, 2.0}, {-1.5, 1.5}});
    CHECK(p.predict_time == 200.0);
  }
  {
    const auto& p = preset("pendulum");
    CHECK(p.obs_dt == 1.0);
    CHECK(p.total_time == 10.0);
    CHECK(p.num_sequences == 10000);
    CHECK(p.inner_steps == 10);
    CHECK(p.fine_dt() == 0.1);
    CHECK(p.outer_steps == 1);
    CHECK(p.hidden == std::vector<int>{20, 20, 20});
    CHECK(p.domain[0] == std::array<double, 2>{-M_PI / 2, M_PI / 2});
    CHECK(p.domain[1] == std::array<double, 2>{-M_PI, M_PI});
    CHECK(kPendulumBeta == 9.80665);
  }
  {
    const auto& p = preset("dae");
    CHECK(p.obs_dt == 5e-8);
    CHECK(p.fine_dt() == doctest::Approx(5e-9).epsilon(1e-15));
    CHECK(p.total_time == 1e-6);
    CHECK(p.num_sequences == 10000);
    CHECK(p.inner_steps == 10);
    CHECK(p.outer_steps == 1);
    CHECK(p.domain == std::vector<std::array<double, 2>>{{-2.0, 2.0}, {-0.2, 0.2}});
    const DaeCircuitParams dae;
    CHECK(dae.capacitance == 1e-9);
    CHECK(dae.inductance == 1e-6);
    CHECK(dae.voltage_scale == 1.0);
    CHECK(dae.g0 == -0.1);
    CHECK(dae.g_inf == 0.25);
  }
  {
    const auto& p = preset("lorenz");
    CHECK(p.dim == 3);
    CHECK(p.obs_dt == 0.1);
    CHECK(p.total_time == 10000.0);
    CHECK(p.num_sequences == 10000);
    CHECK(p.inner_steps == 10);
    CHECK(p.fine_dt() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(p.outer_steps == 1);
    CHECK(p.predict_time == 100.0);
    Vec demo = demo_initial_condition(p);
    CHECK(demo[0] == 10.0);
    CHECK(demo[1] == 10.0);
    CHECK(demo[2] == 20.0);
  }
  {
    const auto& p = preset("fhn");
    CHECK(p.grid1d.nodes == 50);
    CHECK(p.grid1d.x0 == 0.0);
    CHECK(p.grid1d.x1 == 5.0);
    CHECK(p.components == 2);
    CHECK(p.dim == 100);
    CHECK(p.obs_dt == 0.25);
    CHECK(p.total_time == 50.0);
    CHECK(p.num_sequences == 10000);
    CHECK(p.inner_steps == 5);
    CHECK(p.fine_dt() == 0.05);
    CHECK(p.outer_steps == 3);
    CHECK(p.pde_channels == 5);
    CHECK(p.pde_channel_hidden == 100);
    CHECK(p.pde_assembly_hidden == 5);
    const FhnSystem fhn;
    CHECK(fhn.diffusion == 0.01);
    CHECK(fhn.eps == 0.08);
    CHECK(fhn.b == 0.7);
    CHECK(fhn.c == 0.8);
  }
  {
    const auto& p = preset("advdiff2d");
    CHECK(p.grid2d.nx == 16);
    CHECK(p.grid2d.ny == 16);
    CHECK(p.grid2d.x0 == -1.0);
    CHECK(p.grid2d.x1 == 1.0);
    CHECK(p.dim == 256);
    CHECK(p.obs_dt == 0.01);
    CHECK(p.total_time == 0.1);
    CHECK(p.num_sequences == 100000);
    CHECK(p.inner_steps == 5);
    CHECK(p.fine_dt() == 0.002);
    CHECK(p.outer_steps == 1);
    CHECK(p.pde_channels == 3);
    CHECK(p.pde_channel_hidden == 256);
    CHECK(p.pde_assembly_hidden == 3);
    CHECK(p.predict_time == 4.0);
    const AdvDiff2dSystem advdiff;
    CHECK(advdiff.kappa == 5e-3);
  }
}

TEST_CASE("presets: fine step times inner count reproduces the observation gap") {
  for (const auto& name : preset_names()) {
    const auto& p = preset(name);
    CHECK(p.fine_dt() * p.inner_steps == doctest::Approx(p.obs_dt).epsilon(1e-15));
    CHECK(p.learning_rate == 1e-3);
    CHECK(p.epochs == 10000);
    CHECK(p.batch_size == 50);
  }
}

TEST_CASE("presets: model factories build the documented shapes") {
  const auto vdp_model = make_ode_model(preset("vdp"), 1);
  CHECK(vdp_model.layer_sizes == std::vector<int>{2, 20, 20, 20, 2});
  const auto fhn_model = make_pde_model(preset("fhn"), 1);
  CHECK(fhn_model.num_channels() == 5);
  CHECK(fhn_model.channels[0].layer_sizes == std::vector<int>{100, 100, 100});
  CHECK(fhn_model.assembly.layer_sizes == std::vector<int>{5, 5, 1});
  const auto adv_model = make_pde_model(preset("advdiff2d"), 1);
  CHECK(adv_model.num_channels() == 3);
  CHECK(adv_model.channels[0].layer_sizes == std::vector<int>{256, 256, 256});
  CHECK(adv_model.assembly.layer_sizes == std::vector<int>{3, 3, 1});
}

TEST_CASE("presets: unknown names are rejected, scaling only touches M and epochs") {
  CHECK_THROWS_AS(preset("nope"), ShapeError);
  const auto& p = preset("vdp");
  const auto s = scaled(p, 0.1);
  CHECK(s.num_sequences == 1000);
  CHECK(s.epochs == 1000);
  CHECK(s.obs_dt == p.obs_dt);
  CHECK(s.inner_steps == p.inner_steps);
  CHECK(s.hidden == p.hidden);
  CHECK_THROWS_AS(scaled(p, 0.0), ShapeError);
  CHECK_THROWS_AS(scaled(p, 1.5), ShapeError);
}

TEST_CASE("presets: demo initial conditions have the right shape") {
  CHECK(demo_initial_condition(preset("fhn")).size() == 100);
  CHECK(demo_initial_condition(preset("advdiff2d")).size() == 256);
  CHECK(demo_initial_condition(preset("vdp")).size() == 2);
}
