#include "fsfm/rollout.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "fsfm/report.hpp"

using namespace fsfm;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("rollout: zero model holds the state constant") {
  const auto model = Mlp<double>::zeros({2, 4, 2});
  const auto traj = rollout(model, vec2(0.3, -0.8), 5);
  REQUIRE(traj.size() == 6);
  for (const Vec& s : traj) CHECK(s == vec2(0.3, -0.8));
}

TEST_CASE("rollout: zero steps returns only the initial state") {
  const auto model = Mlp<double>::glorot({2, 6, 2}, 5);
  const auto traj = rollout(model, vec2(1, 0), 0);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0] == vec2(1, 0));
}

TEST_CASE("rollout: longer rollouts extend shorter ones") {
  const auto model = Mlp<double>::glorot({2, 6, 2}, 6);
  const auto short_run = rollout(model, vec2(0.2, 0.1), 4);
  const auto long_run = rollout(model, vec2(0.2, 0.1), 8);
  for (std::size_t k = 0; k < short_run.size(); ++k) CHECK(long_run[k] == short_run[k]);
}

TEST_CASE("rollout: divergence reports the failing step") {
  auto model = Mlp<double>::zeros({1, 1});
  model.biases[0][0] = 1e308;  // first step stays finite, second overflows
  Vec x(1);
  x << 0.0;
  CHECK_THROWS_WITH_AS(rollout(model, x, 5), doctest::Contains("step 2"), NumericError);
}

TEST_CASE("pointwise_error: zero for identical trajectories, norm otherwise") {
  const std::vector<Vec> a{vec2(0, 0), vec2(1, 1)};
  CHECK(pointwise_error(a, a).maxCoeff() == 0.0);
  const std::vector<Vec> b{vec2(0, 0), vec2(1, 4)};
  const Vec err = pointwise_error(a, b);
  CHECK(err[0] == 0.0);
  CHECK(err[1] == 3.0);
  CHECK_THROWS_AS(pointwise_error(a, std::vector<Vec>{vec2(0, 0)}), ShapeError);
}

TEST_CASE("mean_error: hand-computed two-trajectory case") {
  Vec e1(3), e2(3);
  e1 << 0.0, 1.0, 4.0;
  e2 << 2.0, 3.0, 0.0;
  const Vec mean = mean_error({e1, e2});
  CHECK(mean[0] == 1.0);
  CHECK(mean[1] == 2.0);
  CHECK(mean[2] == 2.0);
  CHECK(mean_error({e1}) == e1);  // single trajectory is its own mean
}

TEST_CASE("histogram: density sums to one over a covering range") {
  Rng rng(12);
  Vec series(4000);
  for (Eigen::Index i = 0; i < series.size(); ++i) series[i] = rng.uniform(-2.0, 3.0);
  const Histogram h = histogram(series, 50);
  CHECK(h.density.sum() * h.bin_width() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(histogram_intersection(h, h) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("histogram: out-of-range mass lowers the overlap") {
  Vec inside(100), shifted(100);
  for (int i = 0; i < 100; ++i) {
    inside[i] = i / 100.0;
    shifted[i] = i / 100.0 + 5.0;  // entirely outside [0, 1)
  }
  const Histogram href = histogram(inside, 10);
  const Histogram hpred = histogram(shifted, 10, href.lo, href.hi);
  CHECK(hpred.density.sum() == 0.0);
  CHECK(histogram_intersection(href, hpred) == 0.0);
}

TEST_CASE("autocorrelation: lag zero is one, cosine peaks at its period") {
  // n >> period so the full-series denominator shrinks r(period) by < 1%
  const int n = 50000;
  const double period = 200.0;  // samples
  Vec series(n);
  for (int t = 0; t < n; ++t) series[t] = std::cos(2.0 * M_PI * t / period);
  const Vec r = autocorrelation(series, 300);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r[200] > 0.99);
  CHECK(r[100] < -0.99);
  for (int lag = 0; lag <= 300; ++lag) {
    CHECK(r[lag] <= 1.0 + 1e-12);
    CHECK(r[lag] >= -1.0 - 1e-12);
  }
}

TEST_CASE("autocorrelation: degenerate series is rejected") {
  CHECK_THROWS_AS(autocorrelation(Vec(Vec::Ones(100)), 5), NumericError);
  CHECK_THROWS_AS(autocorrelation(Vec(Vec::Ones(4)), 9), ShapeError);
}

TEST_CASE("two_seed_divergence_report: identical seeds give zero distance") {
  ExperimentPreset p = preset("pendulum");
  p.num_sequences = 30;
  p.epochs = 8;
  p.batch_size = 10;
  const TwoSeedReport report =
      two_seed_divergence_report(p, {5, 5}, 77, vec2(M_PI / 4, 0.0), 3.0);
  CHECK(report.max_distance == 0.0);
  CHECK(report.loss_history_a == report.loss_history_b);
  REQUIRE(report.distance.size() == 31);  // 3.0 / 0.1 fine steps + initial state

  const std::string dir = (std::filesystem::temp_directory_path() / "fsfm_tsr").string();
  write_two_seed_report(dir, report);
  CHECK(std::filesystem::exists(dir + "/loss_a.csv"));
  CHECK(std::filesystem::exists(dir + "/loss_b.csv"));
  CHECK(std::filesystem::exists(dir + "/distance.csv"));
  CHECK(std::filesystem::exists(dir + "/report.txt"));
  std::filesystem::remove_all(dir);
}
