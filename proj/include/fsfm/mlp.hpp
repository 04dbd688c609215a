// Dense feed-forward network on column batches: nonlinear hidden layers,
// affine output layer, exact reverse-mode gradients.
#pragma once

#include "fsfm/core.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

namespace fsfm {

enum class Activation : std::uint32_t { Tanh = 0 };

namespace detail {

// tanh(x) = 1 - 2/(exp(2x) + 1). Routed through exp so Eigen vectorizes it
// for double; saturates correctly for large |x|. Absolute error ~1 ulp.
template <class Derived>
auto tanh_expr(const Eigen::ArrayBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return S(1) - S(2) / ((S(2) * x).exp() + S(1));
}

}  // namespace detail

// Parameters of a fully connected network. Also serves as the gradient
// container: gradients have one block per weight/bias with the same shapes.
template <class S>
struct Mlp {
  using Scalar = S;

  std::vector<int> layer_sizes;          // input, hidden..., output widths
  std::vector<Matrix<S>> weights;        // weights[l]: layer_sizes[l+1] x layer_sizes[l]
  std::vector<Vector<S>> biases;         // biases[l]: layer_sizes[l+1]
  Activation activation = Activation::Tanh;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }

  static Mlp zeros(std::vector<int> sizes) {
    check_sizes(sizes);
    Mlp net;
    net.layer_sizes = std::move(sizes);
    for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
      net.weights.push_back(Matrix<S>::Zero(net.layer_sizes[l + 1], net.layer_sizes[l]));
      net.biases.push_back(Vector<S>::Zero(net.layer_sizes[l + 1]));
    }
    return net;
  }

  // Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases.
  static Mlp glorot(std::vector<int> sizes, Rng& rng) {
    Mlp net = zeros(std::move(sizes));
    for (int l = 0; l < net.num_layers(); ++l) {
      const double fan_in = net.layer_sizes[l];
      const double fan_out = net.layer_sizes[l + 1];
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      for (Eigen::Index j = 0; j < net.weights[l].cols(); ++j)
        for (Eigen::Index i = 0; i < net.weights[l].rows(); ++i)
          net.weights[l](i, j) = static_cast<S>(rng.uniform(-limit, limit));
    }
    return net;
  }

  static Mlp glorot(std::vector<int> sizes, std::uint64_t seed) {
    Rng rng(seed);
    return glorot(std::move(sizes), rng);
  }

  // Flat views over every parameter block, weight then bias per layer.
  std::vector<Eigen::Map<Vector<S>>> param_blocks() {
    std::vector<Eigen::Map<Vector<S>>> blocks;
    for (int l = 0; l < num_layers(); ++l) {
      blocks.emplace_back(weights[l].data(), weights[l].size());
      blocks.emplace_back(biases[l].data(), biases[l].size());
    }
    return blocks;
  }
  std::vector<Eigen::Map<const Vector<S>>> param_blocks() const {
    std::vector<Eigen::Map<const Vector<S>>> blocks;
    for (int l = 0; l < num_layers(); ++l) {
      blocks.emplace_back(weights[l].data(), weights[l].size());
      blocks.emplace_back(biases[l].data(), biases[l].size());
    }
    return blocks;
  }

 private:
  static void check_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw ShapeError("Mlp: need at least input and output layer sizes");
    for (int s : sizes)
      if (s <= 0) throw ShapeError("Mlp: layer sizes must be positive");
  }
};

template <class S>
Mlp<S> zeros_like(const Mlp<S>& net) {
  Mlp<S> z = Mlp<S>::zeros(net.layer_sizes);
  z.activation = net.activation;
  return z;
}

// Cached intermediates of one forward evaluation on a column batch.
// acts[0] is the input; preacts[l]/acts[l+1] belong to layer l.
template <class S>
struct MlpCache {
  std::vector<Matrix<S>> preacts;
  std::vector<Matrix<S>> acts;
};

namespace detail {

template <class S>
void check_input(const Mlp<S>& net, const Matrix<S>& x) {
  if (x.rows() != net.input_dim())
    throw ShapeError("mlp_forward: input has " + std::to_string(x.rows()) +
                     " rows, network expects " + std::to_string(net.input_dim()));
}

}  // namespace detail

// Forward pass on a column batch (each column one state).
template <class S>
Matrix<S> mlp_forward(const Mlp<S>& net, const Matrix<S>& x) {
  detail::check_input(net, x);
  Matrix<S> a = x;
  const int L = net.num_layers();
  for (int l = 0; l < L; ++l) {
    Matrix<S> z = (net.weights[l] * a).colwise() + net.biases[l];
    if (l + 1 < L)
      a = detail::tanh_expr(z.array());
    else
      a = std::move(z);
  }
  return a;
}

template <class S>
Matrix<S> mlp_forward_cached(const Mlp<S>& net, const Matrix<S>& x, MlpCache<S>& cache) {
  detail::check_input(net, x);
  const int L = net.num_layers();
  cache.preacts.resize(L);
  cache.acts.resize(L + 1);
  cache.acts[0] = x;
  for (int l = 0; l < L; ++l) {
    cache.preacts[l] = (net.weights[l] * cache.acts[l]).colwise() + net.biases[l];
    if (l + 1 < L)
      cache.acts[l + 1] = detail::tanh_expr(cache.preacts[l].array());
    else
      cache.acts[l + 1] = cache.preacts[l];
  }
  return cache.acts[L];
}

// Accumulates d(sum g_out .* output)/d(params) into grads and returns the
// corresponding input cotangent. grads must be shaped like net.
template <class S>
Matrix<S> mlp_backward(const Mlp<S>& net, const MlpCache<S>& cache, const Matrix<S>& g_out,
                       Mlp<S>& grads) {
  const int L = net.num_layers();
  Matrix<S> delta = g_out;  // output layer is affine
  for (int l = L - 1; l >= 0; --l) {
    grads.weights[l].noalias() += delta * cache.acts[l].transpose();
    grads.biases[l] += delta.rowwise().sum();
    if (l == 0) return net.weights[0].transpose() * delta;
    delta = (net.weights[l].transpose() * delta).array() *
            (S(1) - cache.acts[l].array().square());
  }
  return delta;  // unreachable for L >= 1
}

}  // namespace fsfm
