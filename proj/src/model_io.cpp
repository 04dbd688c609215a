#include "fsfm/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; byte swapping is not implemented");

namespace fsfm {

namespace {

constexpr char kMagic[5] = {'F', 'S', 'F', 'M', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError("checkpoint: truncated header");
  return v;
}
void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string read_string(std::istream& is) {
  const std::uint32_t len = read_u32(is);
  if (len > (1u << 20)) throw IoError("checkpoint: unreasonable string length");
  std::string s(len, '\0');
  if (!is.read(s.data(), len)) throw IoError("checkpoint: truncated header");
  return s;
}

void write_mlp_header(std::ostream& os, const Mlp<double>& net) {
  write_u32(os, static_cast<std::uint32_t>(net.layer_sizes.size()));
  for (int s : net.layer_sizes) write_u32(os, static_cast<std::uint32_t>(s));
  write_u32(os, static_cast<std::uint32_t>(net.activation));
}

Mlp<double> read_mlp_header(std::istream& is) {
  const std::uint32_t n = read_u32(is);
  if (n < 2 || n > 1024) throw IoError("checkpoint: corrupt layer count");
  std::vector<int> sizes(n);
  for (auto& s : sizes) {
    s = static_cast<int>(read_u32(is));
    if (s <= 0 || s > (1 << 24)) throw IoError("checkpoint: corrupt layer size");
  }
  const std::uint32_t act = read_u32(is);
  if (act != static_cast<std::uint32_t>(Activation::Tanh))
    throw IoError("checkpoint: unknown activation id " + std::to_string(act));
  Mlp<double> net = Mlp<double>::zeros(std::move(sizes));
  net.activation = static_cast<Activation>(act);
  return net;
}

// weight blobs are row-major in the file, storage is column-major
void write_mlp_blobs(std::ostream& os, const Mlp<double>& net) {
  for (int l = 0; l < net.num_layers(); ++l) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w =
        net.weights[l];
    os.write(reinterpret_cast<const char*>(w.data()),
             static_cast<std::streamsize>(sizeof(double) * w.size()));
    os.write(reinterpret_cast<const char*>(net.biases[l].data()),
             static_cast<std::streamsize>(sizeof(double) * net.biases[l].size()));
  }
}

void read_mlp_blobs(std::istream& is, Mlp<double>& net) {
  for (int l = 0; l < net.num_layers(); ++l) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(
        net.weights[l].rows(), net.weights[l].cols());
    if (!is.read(reinterpret_cast<char*>(w.data()),
                 static_cast<std::streamsize>(sizeof(double) * w.size())))
      throw IoError("checkpoint: truncated weight blob");
    net.weights[l] = w;
    if (!is.read(reinterpret_cast<char*>(net.biases[l].data()),
                 static_cast<std::streamsize>(sizeof(double) * net.biases[l].size())))
      throw IoError("checkpoint: truncated bias blob");
  }
}

std::ifstream open_and_check_magic(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("checkpoint: cannot open '" + path + "'");
  char magic[5];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError("checkpoint: bad magic, not an FSFM1 file");
  return is;
}

void check_eof(std::istream& is, const std::string& path) {
  if (is.peek() != std::char_traits<char>::eof())
    throw IoError("checkpoint: trailing bytes after payload in '" + path + "'");
}

}  // namespace

void save_checkpoint(const std::string& path, const Mlp<double>& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("checkpoint: cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof kMagic);
  write_u32(os, kCheckpointKindOde);
  write_mlp_header(os, model);
  write_mlp_blobs(os, model);
  if (!os) throw IoError("checkpoint: write failed for '" + path + "'");
}

void save_checkpoint(const std::string& path, const PdeFlowMap<double>& model,
                     const PdeModelMeta& meta) {
  model.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("checkpoint: cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof kMagic);
  write_u32(os, kCheckpointKindPde);
  write_u32(os, static_cast<std::uint32_t>(model.num_channels()));
  write_u32(os, static_cast<std::uint32_t>(model.state_len()));
  write_u32(os, static_cast<std::uint32_t>(meta.components));
  write_string(os, meta.grid);
  for (const auto& ch : model.channels) write_mlp_header(os, ch);
  write_mlp_header(os, model.assembly);
  for (const auto& ch : model.channels) write_mlp_blobs(os, ch);
  write_mlp_blobs(os, model.assembly);
  if (!os) throw IoError("checkpoint: write failed for '" + path + "'");
}

std::uint32_t checkpoint_kind(const std::string& path) {
  std::ifstream is = open_and_check_magic(path);
  const std::uint32_t kind = read_u32(is);
  if (kind != kCheckpointKindOde && kind != kCheckpointKindPde)
    throw IoError("checkpoint: unknown model kind " + std::to_string(kind));
  return kind;
}

Mlp<double> load_ode_checkpoint(const std::string& path) {
  std::ifstream is = open_and_check_magic(path);
  if (read_u32(is) != kCheckpointKindOde)
    throw IoError("checkpoint: '" + path + "' does not hold a plain residual model");
  Mlp<double> net = read_mlp_header(is);
  read_mlp_blobs(is, net);
  check_eof(is, path);
  return net;
}

PdeFlowMap<double> load_pde_checkpoint(const std::string& path, PdeModelMeta* meta) {
  std::ifstream is = open_and_check_magic(path);
  if (read_u32(is) != kCheckpointKindPde)
    throw IoError("checkpoint: '" + path + "' does not hold a PDE flow map");
  const std::uint32_t j_count = read_u32(is);
  if (j_count < 1 || j_count > 4096) throw IoError("checkpoint: corrupt channel count");
  const std::uint32_t state_len = read_u32(is);
  PdeModelMeta local;
  local.components = static_cast<int>(read_u32(is));
  local.grid = read_string(is);

  PdeFlowMap<double> model;
  for (std::uint32_t j = 0; j < j_count; ++j) model.channels.push_back(read_mlp_header(is));
  model.assembly = read_mlp_header(is);
  for (auto& ch : model.channels) read_mlp_blobs(is, ch);
  read_mlp_blobs(is, model.assembly);
  check_eof(is, path);

  model.validate();
  if (model.state_len() != static_cast<int>(state_len))
    throw IoError("checkpoint: channel sizes disagree with stored state length");
  if (meta) *meta = local;
  return model;
}

}  // namespace fsfm
