#include "fsfm/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "dataset format is little-endian; byte swapping is not implemented");

namespace fsfm {

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("dataset: truncated header");
  return v;
}
std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("dataset: truncated header");
  return v;
}
double read_f64(std::istream& is) {
  double v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("dataset: truncated header");
  return v;
}
std::string read_string(std::istream& is) {
  const std::uint32_t len = read_u32(is);
  if (len > (1u << 20)) throw IoError("dataset: unreasonable string length in header");
  std::string s(len, '\0');
  if (!is.read(s.data(), len)) throw IoError("dataset: truncated header");
  return s;
}

constexpr char kMagic[5] = {'F', 'S', 'D', 'S', '1'};

// offset of the kept window, drawn after the sampler finished with rng
long long draw_offset(Rng& rng, long long offset_max) {
  const auto off = static_cast<long long>(rng.uniform01() * static_cast<double>(offset_max + 1));
  return std::min(off, offset_max);
}

long long window_bound(double total_time, double obs_dt, int outer_steps,
                       const char* what) {
  const long long n_obs = std::llround(total_time / obs_dt);
  if (std::abs(static_cast<double>(n_obs) * obs_dt - total_time) >
      1e-9 * std::max(1.0, std::abs(total_time)))
    throw ShapeError(std::string(what) + ": obs_dt does not divide total_time");
  if (n_obs < outer_steps)
    throw ShapeError(std::string(what) + ": total_time too short for the requested window");
  return n_obs - outer_steps;  // largest aligned window start
}

struct ErasedPdeSystem {
  std::function<void(const Vec&, Vec&)> rhs_fn;
  double substep;
  int len;
  int state_len() const { return len; }
  void rhs(const Vec& u, Vec& out) const { rhs_fn(u, out); }
  double stable_substep() const { return substep; }
};

}  // namespace

void ObservationDataset::validate() const {
  if (dim <= 0) throw ShapeError("dataset: dim must be positive");
  if (outer_steps < 1) throw ShapeError("dataset: outer_steps must be >= 1");
  if (!(obs_dt > 0)) throw ShapeError("dataset: obs_dt must be positive");
  if (data.rows() != dim) throw ShapeError("dataset: data rows != dim");
  if (data.cols() % snaps() != 0)
    throw ShapeError("dataset: column count is not a multiple of the sequence length");
}

Batch make_batch(const ObservationDataset& ds, const std::vector<std::size_t>& indices) {
  Batch batch;
  batch.x0.resize(ds.dim, static_cast<Eigen::Index>(indices.size()));
  batch.targets.assign(ds.outer_steps, Mat(ds.dim, indices.size()));
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const Eigen::Index base = static_cast<Eigen::Index>(indices[b]) * ds.snaps();
    batch.x0.col(b) = ds.data.col(base);
    for (int r = 1; r <= ds.outer_steps; ++r) batch.targets[r - 1].col(b) = ds.data.col(base + r);
  }
  return batch;
}

ObservationDataset generate_ode_dataset(const OdeSystem& sys,
                                        const std::function<Vec(Rng&)>& ic_sampler,
                                        std::size_t num_sequences, double obs_dt,
                                        double total_time, int outer_steps, std::uint64_t seed,
                                        const IntegratorConfig& cfg, int workers,
                                        const std::string& descriptor) {
  if (num_sequences < 1) throw ShapeError("generate_ode_dataset: need at least one sequence");
  const long long offset_max = window_bound(total_time, obs_dt, outer_steps, "generate_ode_dataset");

  ObservationDataset ds;
  ds.system = sys.name;
  ds.dim = sys.dim;
  ds.outer_steps = outer_steps;
  ds.obs_dt = obs_dt;
  ds.seed = seed;
  ds.descriptor = descriptor;
  ds.data.resize(sys.dim, static_cast<Eigen::Index>(num_sequences) * ds.snaps());

  parallel_for(num_sequences, workers, [&](std::size_t m) {
    Rng rng(derive_seed(seed, m));
    const Vec x0 = ic_sampler(rng);
    const long long offset = draw_offset(rng, offset_max);
    const double t_end = (static_cast<double>(offset) + outer_steps) * obs_dt;
    Trajectory traj;
    try {
      traj = integrate(sys, x0, t_end, obs_dt, cfg);
    } catch (const NumericError& err) {
      throw NumericError("generate_ode_dataset: sequence " + std::to_string(m) + ": " +
                         err.what());
    }
    const Eigen::Index base = static_cast<Eigen::Index>(m) * ds.snaps();
    for (int r = 0; r <= outer_steps; ++r)
      ds.data.col(base + r) = traj.states[static_cast<std::size_t>(offset) + r];
  });
  return ds;
}

ObservationDataset generate_lorenz_chunks(double obs_dt, double total_time,
                                          std::size_t num_sequences, int outer_steps,
                                          std::uint64_t seed, const IntegratorConfig& cfg) {
  if (num_sequences < 1) throw ShapeError("generate_lorenz_chunks: need at least one sequence");
  const long long offset_max =
      window_bound(total_time, obs_dt, outer_steps, "generate_lorenz_chunks");

  const OdeSystem sys = lorenz_system();
  Vec x0(3);
  x0 << 1.0, 1.0, 1.0;
  const Trajectory traj = integrate(sys, x0, total_time, obs_dt, cfg);

  ObservationDataset ds;
  ds.system = "lorenz";
  ds.dim = 3;
  ds.outer_steps = outer_steps;
  ds.obs_dt = obs_dt;
  ds.seed = seed;
  ds.descriptor = "chunks of one trajectory from (1,1,1), T=" + std::to_string(total_time);
  ds.data.resize(3, static_cast<Eigen::Index>(num_sequences) * ds.snaps());

  Rng rng(seed);
  for (std::size_t m = 0; m < num_sequences; ++m) {
    const long long offset = draw_offset(rng, offset_max);
    const Eigen::Index base = static_cast<Eigen::Index>(m) * ds.snaps();
    for (int r = 0; r <= outer_steps; ++r)
      ds.data.col(base + r) = traj.states[static_cast<std::size_t>(offset) + r];
  }
  return ds;
}

ObservationDataset generate_pde_dataset(const std::function<void(const Vec&, Vec&)>& rhs,
                                        double stable_substep,
                                        const std::function<Vec(Rng&)>& ic_sampler,
                                        int state_len, std::size_t num_sequences, double obs_dt,
                                        double total_time, int outer_steps, std::uint64_t seed,
                                        int workers, const std::string& name,
                                        const std::string& descriptor) {
  if (num_sequences < 1) throw ShapeError("generate_pde_dataset: need at least one sequence");
  const long long offset_max = window_bound(total_time, obs_dt, outer_steps, "generate_pde_dataset");

  ObservationDataset ds;
  ds.system = name;
  ds.dim = state_len;
  ds.outer_steps = outer_steps;
  ds.obs_dt = obs_dt;
  ds.seed = seed;
  ds.descriptor = descriptor;
  ds.data.resize(state_len, static_cast<Eigen::Index>(num_sequences) * ds.snaps());

  const ErasedPdeSystem sys{rhs, stable_substep, state_len};
  parallel_for(num_sequences, workers, [&](std::size_t m) {
    Rng rng(derive_seed(seed, m));
    const Vec ic = ic_sampler(rng);
    const long long offset = draw_offset(rng, offset_max);
    const double t_end = (static_cast<double>(offset) + outer_steps) * obs_dt;
    std::vector<Vec> snaps;
    try {
      snaps = integrate_pde(sys, ic, t_end, obs_dt);
    } catch (const NumericError& err) {
      throw NumericError("generate_pde_dataset: sequence " + std::to_string(m) + ": " +
                         err.what());
    }
    const Eigen::Index base = static_cast<Eigen::Index>(m) * ds.snaps();
    for (int r = 0; r <= outer_steps; ++r)
      ds.data.col(base + r) = snaps[static_cast<std::size_t>(offset) + r];
  });
  return ds;
}

void save_dataset(const std::string& path, const ObservationDataset& ds) {
  ds.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_dataset: cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof kMagic);
  write_string(os, ds.system);
  write_u32(os, static_cast<std::uint32_t>(ds.dim));
  write_u64(os, ds.num_sequences());
  write_u32(os, static_cast<std::uint32_t>(ds.outer_steps));
  write_f64(os, ds.obs_dt);
  write_u64(os, ds.seed);
  write_string(os, ds.descriptor);
  os.write(reinterpret_cast<const char*>(ds.data.data()),
           static_cast<std::streamsize>(sizeof(double) * ds.data.size()));
  if (!os) throw IoError("save_dataset: write failed for '" + path + "'");
}

ObservationDataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_dataset: cannot open '" + path + "'");
  char magic[5];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError("load_dataset: bad magic, not an FSDS1 file");

  ObservationDataset ds;
  ds.system = read_string(is);
  ds.dim = static_cast<int>(read_u32(is));
  const std::uint64_t m = read_u64(is);
  ds.outer_steps = static_cast<int>(read_u32(is));
  ds.obs_dt = read_f64(is);
  ds.seed = read_u64(is);
  ds.descriptor = read_string(is);
  if (ds.dim <= 0 || ds.outer_steps < 1 || m < 1)
    throw IoError("load_dataset: corrupt header fields");

  const Eigen::Index cols = static_cast<Eigen::Index>(m) * ds.snaps();
  ds.data.resize(ds.dim, cols);
  const std::streamsize payload = static_cast<std::streamsize>(sizeof(double) * ds.data.size());
  if (!is.read(reinterpret_cast<char*>(ds.data.data()), payload))
    throw IoError("load_dataset: truncated payload in '" + path + "'");
  if (is.peek() != std::char_traits<char>::eof())
    throw IoError("load_dataset: trailing bytes after payload in '" + path + "'");
  return ds;
}

void export_dataset_csv(const std::string& path, const ObservationDataset& ds) {
  std::ofstream os(path);
  if (!os) throw IoError("export_dataset_csv: cannot open '" + path + "'");
  os << "m,r,t";
  for (int i = 1; i <= ds.dim; ++i) os << ",x" << i;
  os << "\n";
  os.precision(17);
  for (std::size_t m = 0; m < ds.num_sequences(); ++m) {
    for (int r = 0; r <= ds.outer_steps; ++r) {
      os << m << ',' << r << ',' << r * ds.obs_dt;
      const Vec snap = ds.snapshot(m, r);
      for (int i = 0; i < ds.dim; ++i) os << ',' << snap[i];
      os << "\n";
    }
  }
}

}  // namespace fsfm
