// Nodal-space PDE flow map: J disassembly channels (dense maps on the full
// nodal state) combined per node by a weight-shared assembly network, used
// as one residual step. Plugs into the same composition machinery as Mlp.
#pragma once

#include "fsfm/resnet.hpp"

namespace fsfm {

template <class S>
struct PdeFlowMap {
  using Scalar = S;

  std::vector<Mlp<S>> channels;  // each maps R^N -> R^N, N = components * nodes
  Mlp<S> assembly;               // maps R^J -> R, applied identically at every node

  int state_len() const { return channels.empty() ? 0 : channels.front().input_dim(); }
  int num_channels() const { return static_cast<int>(channels.size()); }

  static PdeFlowMap zeros(int state_len, int num_channels, int channel_hidden,
                          int assembly_hidden) {
    PdeFlowMap m;
    for (int j = 0; j < num_channels; ++j)
      m.channels.push_back(Mlp<S>::zeros({state_len, channel_hidden, state_len}));
    m.assembly = Mlp<S>::zeros({num_channels, assembly_hidden, 1});
    return m;
  }

  static PdeFlowMap glorot(int state_len, int num_channels, int channel_hidden,
                           int assembly_hidden, std::uint64_t seed) {
    Rng rng(seed);
    PdeFlowMap m;
    for (int j = 0; j < num_channels; ++j)
      m.channels.push_back(Mlp<S>::glorot({state_len, channel_hidden, state_len}, rng));
    m.assembly = Mlp<S>::glorot({num_channels, assembly_hidden, 1}, rng);
    return m;
  }

  std::vector<Eigen::Map<Vector<S>>> param_blocks() {
    std::vector<Eigen::Map<Vector<S>>> blocks;
    for (auto& ch : channels)
      for (auto& b : ch.param_blocks()) blocks.push_back(b);
    for (auto& b : assembly.param_blocks()) blocks.push_back(b);
    return blocks;
  }
  std::vector<Eigen::Map<const Vector<S>>> param_blocks() const {
    std::vector<Eigen::Map<const Vector<S>>> blocks;
    for (const auto& ch : channels)
      for (auto& b : ch.param_blocks()) blocks.push_back(b);
    for (auto& b : assembly.param_blocks()) blocks.push_back(b);
    return blocks;
  }

  void validate() const {
    if (channels.empty()) throw ShapeError("PdeFlowMap: no disassembly channels");
    const int n = channels.front().input_dim();
    for (const auto& ch : channels)
      if (ch.input_dim() != n || ch.output_dim() != n)
        throw ShapeError("PdeFlowMap: all channels must map the full nodal state to itself");
    if (assembly.input_dim() != num_channels() || assembly.output_dim() != 1)
      throw ShapeError("PdeFlowMap: assembly must map channel count to one value per node");
  }
};

template <class S>
PdeFlowMap<S> zeros_like(const PdeFlowMap<S>& m) {
  PdeFlowMap<S> z;
  for (const auto& ch : m.channels) z.channels.push_back(zeros_like(ch));
  z.assembly = zeros_like(m.assembly);
  return z;
}

template <class S>
struct PdeStepCache {
  std::vector<MlpCache<S>> channels;
  MlpCache<S> assembly;  // batch axis runs over (node, sample) pairs, node fastest
  Eigen::Index batch = 0;
};

template <class S>
struct FlowTraits<PdeFlowMap<S>> {
  using Scalar = S;
  using StepCache = PdeStepCache<S>;
};

// Assembly stage alone: per (node, sample) combines the channel values into
// one increment. channel_outputs[j] is N x B; result is N x B.
template <class S>
Matrix<S> pde_assemble(const Mlp<S>& assembly, const std::vector<Matrix<S>>& channel_outputs) {
  const Eigen::Index n = channel_outputs.front().rows();
  const Eigen::Index b = channel_outputs.front().cols();
  const Eigen::Index j_count = static_cast<Eigen::Index>(channel_outputs.size());
  Matrix<S> z(j_count, n * b);
  for (Eigen::Index j = 0; j < j_count; ++j)
    z.row(j) = Eigen::Map<const Vector<S>>(channel_outputs[j].data(), n * b);
  Matrix<S> out = mlp_forward(assembly, z);  // 1 x (n*b)
  return Eigen::Map<const Matrix<S>>(out.data(), n, b);
}

template <class S>
int flow_dim(const PdeFlowMap<S>& m) {
  return m.state_len();
}

template <class S>
Matrix<S> flow_step(const PdeFlowMap<S>& m, const Matrix<S>& w) {
  m.validate();
  if (w.rows() != m.state_len())
    throw ShapeError("pde flow step: state has " + std::to_string(w.rows()) +
                     " rows, model expects " + std::to_string(m.state_len()));
  std::vector<Matrix<S>> outputs;
  outputs.reserve(m.channels.size());
  for (const auto& ch : m.channels) outputs.push_back(mlp_forward(ch, w));
  return w + pde_assemble(m.assembly, outputs);
}

template <class S>
Matrix<S> flow_step_cached(const PdeFlowMap<S>& m, const Matrix<S>& w, PdeStepCache<S>& cache) {
  m.validate();
  const Eigen::Index n = m.state_len();
  const Eigen::Index b = w.cols();
  if (w.rows() != n)
    throw ShapeError("pde flow step: state has " + std::to_string(w.rows()) +
                     " rows, model expects " + std::to_string(n));
  cache.batch = b;
  cache.channels.resize(m.channels.size());
  Matrix<S> z(m.num_channels(), n * b);
  for (int j = 0; j < m.num_channels(); ++j) {
    Matrix<S> yj = mlp_forward_cached(m.channels[j], w, cache.channels[j]);
    z.row(j) = Eigen::Map<const Vector<S>>(yj.data(), n * b);
  }
  Matrix<S> a_out = mlp_forward_cached(m.assembly, z, cache.assembly);
  return w + Eigen::Map<const Matrix<S>>(a_out.data(), n, b);
}

template <class S>
Matrix<S> flow_step_backward(const PdeFlowMap<S>& m, const PdeStepCache<S>& cache,
                             const Matrix<S>& g_out, PdeFlowMap<S>& grads) {
  const Eigen::Index n = m.state_len();
  const Eigen::Index b = cache.batch;
  // assembly sees one column per (node, sample) pair
  Matrix<S> g_assembly = Eigen::Map<const Matrix<S>>(g_out.data(), 1, n * b);
  Matrix<S> g_z = mlp_backward(m.assembly, cache.assembly, g_assembly, grads.assembly);
  Matrix<S> g_in = g_out;  // skip connection
  for (int j = 0; j < m.num_channels(); ++j) {
    Matrix<S> row = g_z.row(j);
    Eigen::Map<const Matrix<S>> g_yj(row.data(), n, b);
    g_in += mlp_backward(m.channels[j], cache.channels[j], Matrix<S>(g_yj), grads.channels[j]);
  }
  return g_in;
}

}  // namespace fsfm
