// Shared scalar/matrix aliases, seeding utilities, error types.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fsfm {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = Matrix<double>;
using Vec = Vector<double>;

// Shape or contract violations in inputs (dimension mismatch, bad config).
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failures at runtime (divergence, stiffness, instability).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File format violations (bad magic, truncation, version mismatch).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64 mix; derives independent per-item seeds from one base seed so
// that work split across items is reproducible for any worker count.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled draw helpers. std::uniform_*_distribution is
// implementation-defined, these produce the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0, 1), 53 random bits
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform index in [0, n)
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
};

// Worker count for embarrassingly parallel stages; FSFM_WORKERS overrides.
inline int default_workers() {
  if (const char* env = std::getenv("FSFM_WORKERS")) {
    int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

// Runs fn(i) for i in [0, n). Each index is processed exactly once; outputs
// written to per-index slots are identical for any worker count. The first
// exception raised by any worker is rethrown after all workers finish.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t per = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * per;
    const std::size_t hi = std::min(n, lo + per);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn, &failure, &failure_mutex] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fsfm
