#include "fsfm/pde_net.hpp"

#include <doctest.h>

#include "fsfm/loss.hpp"
#include "test_helpers.hpp"

using namespace fsfm;

namespace {

PdeFlowMap<double> toy_model(int state_len, int channels, std::uint64_t seed) {
  return PdeFlowMap<double>::glorot(state_len, channels, 6, 4, seed);
}

Mat random_states(int rows, int cols, Rng& rng) {
  Mat x(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) x(i, j) = rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace

TEST_CASE("pde flow step: zero channels and zero assembly give the identity") {
  const auto model = PdeFlowMap<double>::zeros(12, 3, 6, 4);
  Rng rng(1);
  const Mat w = random_states(12, 5, rng);
  CHECK(flow_step(model, w) == w);
}

TEST_CASE("pde flow step: identity channel with pass-through assembly doubles the state") {
  // F1 = affine identity (W = I, b = 0), A(z) = z
  PdeFlowMap<double> model;
  auto identity = Mlp<double>::zeros({8, 8});
  identity.weights[0].setIdentity();
  model.channels.push_back(identity);
  model.assembly = Mlp<double>::zeros({1, 1});
  model.assembly.weights[0](0, 0) = 1.0;

  Rng rng(2);
  const Mat w = random_states(8, 3, rng);
  CHECK(flow_step(model, w) == Mat(2.0 * w));
}

TEST_CASE("pde assembly: commutes with node permutations") {
  const auto model = toy_model(10, 3, 9);
  Rng rng(3);
  std::vector<Mat> outputs;
  for (int j = 0; j < 3; ++j) outputs.push_back(random_states(10, 2, rng));
  const Mat base = pde_assemble(model.assembly, outputs);

  // a fixed permutation of the node axis
  std::vector<int> perm{7, 2, 9, 0, 4, 1, 8, 3, 6, 5};
  std::vector<Mat> permuted;
  for (const Mat& y : outputs) {
    Mat p(y.rows(), y.cols());
    for (int i = 0; i < 10; ++i) p.row(i) = y.row(perm[i]);
    permuted.push_back(p);
  }
  const Mat assembled_permuted = pde_assemble(model.assembly, permuted);
  for (int i = 0; i < 10; ++i) CHECK(assembled_permuted.row(i) == base.row(perm[i]));
}

TEST_CASE("pde assembly: node i sees only channel values at node i") {
  const auto model = toy_model(6, 2, 21);
  Rng rng(4);
  std::vector<Mat> a{random_states(6, 1, rng), random_states(6, 1, rng)};
  std::vector<Mat> b = a;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 6; ++i)
      if (i != 3) b[j](i, 0) += rng.uniform(0.5, 1.0);  // disturb every node but 3
  CHECK(pde_assemble(model.assembly, a)(3, 0) == pde_assemble(model.assembly, b)(3, 0));
}

TEST_CASE("pde flow step: residual structure") {
  const auto model = toy_model(9, 2, 31);
  Rng rng(5);
  const Mat w = random_states(9, 4, rng);
  std::vector<Mat> outputs;
  for (const auto& ch : model.channels) outputs.push_back(mlp_forward(ch, w));
  CHECK(flow_step(model, w) == Mat(w + pde_assemble(model.assembly, outputs)));
}

TEST_CASE("pde compose: zero applications return the input") {
  const auto model = toy_model(8, 2, 41);
  Rng rng(6);
  const Mat w = random_states(8, 1, rng);
  CHECK(compose(model, w, 0) == w);
}

TEST_CASE("pde backward: agrees with central finite differences on a toy grid") {
  // 2 components on 8 nodes, J = 2 channels, 3 compositions
  const int state_len = 16;
  const auto model = toy_model(state_len, 2, 51);
  Rng rng(7);
  Batch batch;
  batch.x0 = random_states(state_len, 2, rng);
  batch.targets = {random_states(state_len, 2, rng)};

  auto analytic = zeros_like(model);
  loss_gradient(model, batch, 3, analytic);
  const auto fd = testing::finite_difference_gradient(
      model, [&](const PdeFlowMap<double>& m) { return recurrent_loss(m, batch, 3); });
  CHECK(testing::max_relative_gradient_error(analytic, fd) < 1e-6);
}

TEST_CASE("pde model: self-generated data scores (numerically) zero loss") {
  const auto model = toy_model(10, 2, 61);
  Rng rng(8);
  Batch batch;
  batch.x0 = random_states(10, 3, rng);
  const int inner = 4;
  Mat x = batch.x0;
  for (int r = 0; r < 2; ++r) {
    x = compose(model, x, inner);
    batch.targets.push_back(x);
  }
  CHECK(recurrent_loss(model, batch, inner) < 1e-20);
  auto grads = zeros_like(model);
  loss_gradient(model, batch, inner, grads);
  CHECK(param_norm(grads) < 1e-9);
}

TEST_CASE("pde flow step: shape violations are rejected") {
  const auto model = toy_model(8, 2, 71);
  Rng rng(9);
  CHECK_THROWS_AS(flow_step(model, Mat(random_states(7, 1, rng))), ShapeError);
  PdeFlowMap<double> broken = model;
  broken.assembly = Mlp<double>::zeros({3, 1});  // channel count mismatch
  CHECK_THROWS_AS(flow_step(broken, Mat(random_states(8, 1, rng))), ShapeError);
}
