// Residual stepping and composition with exact reverse-mode gradients.
//
// Any model providing the flow_step/flow_step_cached/flow_step_backward free
// functions can be composed, taped and differentiated by the machinery here;
// Mlp acts as the plain ResNet step x + N(x), pde_net.hpp adds the nodal PDE
// variant.
#pragma once

#include "fsfm/mlp.hpp"

#include <concepts>

namespace fsfm {

template <class Model>
struct FlowTraits;

template <class S>
struct FlowTraits<Mlp<S>> {
  using Scalar = S;
  using StepCache = MlpCache<S>;
};

// --- Mlp as a residual one-step map -----------------------------------------

namespace detail {

template <class S>
void check_square(const Mlp<S>& net) {
  if (net.input_dim() != net.output_dim())
    throw ShapeError("residual step needs matching input/output dims, got " +
                     std::to_string(net.input_dim()) + " -> " +
                     std::to_string(net.output_dim()));
}

}  // namespace detail

template <class S>
int flow_dim(const Mlp<S>& net) {
  return net.input_dim();
}

template <class S>
Matrix<S> flow_step(const Mlp<S>& net, const Matrix<S>& x) {
  detail::check_square(net);
  return x + mlp_forward(net, x);
}

template <class S>
Matrix<S> flow_step_cached(const Mlp<S>& net, const Matrix<S>& x, MlpCache<S>& cache) {
  detail::check_square(net);
  return x + mlp_forward_cached(net, x, cache);
}

template <class S>
Matrix<S> flow_step_backward(const Mlp<S>& net, const MlpCache<S>& cache, const Matrix<S>& g_out,
                             Mlp<S>& grads) {
  // d(x + N(x)) pulls g_out back through N and through the skip connection.
  Matrix<S> g_in = mlp_backward(net, cache, g_out, grads);
  g_in += g_out;
  return g_in;
}

// One residual step on a single state.
template <class S>
Vector<S> resnet_step(const Mlp<S>& net, const Vector<S>& x) {
  return flow_step(net, Matrix<S>(x)).col(0);
}

// --- generic composition -----------------------------------------------------

template <class M>
concept FlowModel = requires(const M& m, M& grads, const Matrix<typename M::Scalar>& x,
                             typename FlowTraits<M>::StepCache& cache) {
  { flow_dim(m) } -> std::convertible_to<int>;
  { flow_step(m, x) } -> std::same_as<Matrix<typename M::Scalar>>;
  { flow_step_cached(m, x, cache) } -> std::same_as<Matrix<typename M::Scalar>>;
  { flow_step_backward(m, cache, x, grads) } -> std::same_as<Matrix<typename M::Scalar>>;
  { zeros_like(m) } -> std::same_as<M>;
};

// Per-step caches of one composed forward pass. Valid only for the exact
// parameters it was recorded with; mutating the model stales the tape
// (not detected).
template <FlowModel Model>
struct CompositionTape {
  std::vector<typename FlowTraits<Model>::StepCache> steps;
  int depth() const { return static_cast<int>(steps.size()); }
};

namespace detail {

inline void check_compose_count(int k) {
  if (k < 0) throw ShapeError("compose: negative composition count");
}

}  // namespace detail

// k-fold residual composition; k = 0 returns x unchanged.
template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
Matrix<S> compose(const Model& model, Matrix<S> x, int k) {
  detail::check_compose_count(k);
  for (int i = 0; i < k; ++i) x = flow_step(model, x);
  return x;
}

template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
Vector<S> compose(const Model& model, const Vector<S>& x, int k) {
  return compose(model, Matrix<S>(x), k).col(0);
}

template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
Matrix<S> compose_with_tape(const Model& model, Matrix<S> x, int k, CompositionTape<Model>& tape) {
  detail::check_compose_count(k);
  tape.steps.clear();
  tape.steps.resize(k);
  for (int i = 0; i < k; ++i) x = flow_step_cached(model, x, tape.steps[i]);
  return x;
}

template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
std::pair<Vector<S>, CompositionTape<Model>> compose_with_tape(const Model& model,
                                                               const Vector<S>& x, int k) {
  CompositionTape<Model> tape;
  Matrix<S> y = compose_with_tape(model, Matrix<S>(x), k, tape);
  return {Vector<S>(y.col(0)), std::move(tape)};
}

// Recomputes the taped forward pass from its recorded input.
template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
Matrix<S> replay(const Model& model, const CompositionTape<Model>& tape, const Matrix<S>& input) {
  Matrix<S> x = input;
  for (int i = 0; i < tape.depth(); ++i) x = flow_step(model, x);
  return x;
}

// Gradient of sum(g_out .* output) with respect to the model parameters,
// accumulated in reverse through every step of the tape.
template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
Model backward(const Model& model, const CompositionTape<Model>& tape, Matrix<S> g_out) {
  Model grads = zeros_like(model);
  for (int i = tape.depth() - 1; i >= 0; --i)
    g_out = flow_step_backward(model, tape.steps[i], g_out, grads);
  return grads;
}

template <FlowModel Model, class S = typename FlowTraits<Model>::Scalar>
Model backward(const Model& model, const CompositionTape<Model>& tape, const Vector<S>& g_out) {
  return backward(model, tape, Matrix<S>(g_out));
}

// --- parameter-space helpers (shared by the optimizer and tests) -------------

template <FlowModel Model>
double param_squared_norm(const Model& m) {
  double total = 0;
  for (const auto& block : m.param_blocks()) total += block.squaredNorm();
  return total;
}

template <FlowModel Model>
double param_norm(const Model& m) {
  return std::sqrt(param_squared_norm(m));
}

template <FlowModel Model>
void param_axpy(double alpha, const Model& x, Model& y) {
  auto xb = x.param_blocks();
  auto yb = y.param_blocks();
  for (std::size_t i = 0; i < xb.size(); ++i) yb[i] += alpha * xb[i];
}

template <FlowModel Model>
void param_scale(Model& m, double alpha) {
  for (auto& block : m.param_blocks()) block *= alpha;
}

}  // namespace fsfm
