#include "fsfm/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fsfm {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights, applied to the stage slopes
constexpr double kE1 = kB1 - 5179.0 / 57600, kE3 = kB3 - 7571.0 / 16695,
                 kE4 = kB4 - 393.0 / 640, kE5 = kB5 + 92097.0 / 339200,
                 kE6 = kB6 - 187.0 / 2100, kE7 = -1.0 / 40;

// Adaptive DP45 with step-size memory and first-same-as-last stage reuse
// across output boundaries.
class Dp45 {
 public:
  Dp45(const OdeSystem& sys, const IntegratorConfig& cfg) : sys_(sys), cfg_(cfg) {
    const int d = sys.dim;
    k1_.resize(d), k2_.resize(d), k3_.resize(d), k4_.resize(d), k5_.resize(d), k6_.resize(d),
        k7_.resize(d);
    stage_.resize(d);
  }

  // advance y in place from absolute time t0 to t1
  void advance(Vec& y, double t0, double t1) {
    double t = t0;
    const double span = t1 - t0;
    if (!have_k1_) {
      sys_.rhs(y, k1_);
      have_k1_ = true;
    }
    if (h_ <= 0) h_ = initial_step(y, span);
    while (t1 - t > 1e-14 * std::max(1.0, std::abs(t1))) {
      const bool clamped = h_ > t1 - t;
      double h = clamped ? t1 - t : h_;
      if (h < 1e-14 * std::max(std::abs(t), span) || !(h > 0))
        throw NumericError("integrate: step size underflow (stiffness) in system '" + sys_.name +
                           "' at t = " + std::to_string(t));

      stage_ = y + h * kA21 * k1_;
      sys_.rhs(stage_, k2_);
      stage_ = y + h * (kA31 * k1_ + kA32 * k2_);
      sys_.rhs(stage_, k3_);
      stage_ = y + h * (kA41 * k1_ + kA42 * k2_ + kA43 * k3_);
      sys_.rhs(stage_, k4_);
      stage_ = y + h * (kA51 * k1_ + kA52 * k2_ + kA53 * k3_ + kA54 * k4_);
      sys_.rhs(stage_, k5_);
      stage_ = y + h * (kA61 * k1_ + kA62 * k2_ + kA63 * k3_ + kA64 * k4_ + kA65 * k5_);
      sys_.rhs(stage_, k6_);
      Vec y_new = y + h * (kB1 * k1_ + kB3 * k3_ + kB4 * k4_ + kB5 * k5_ + kB6 * k6_);
      sys_.rhs(y_new, k7_);
      Vec err_vec =
          h * (kE1 * k1_ + kE3 * k3_ + kE4 * k4_ + kE5 * k5_ + kE6 * k6_ + kE7 * k7_);

      double err = 0;
      for (int i = 0; i < sys_.dim; ++i) {
        const double scale =
            cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double r = err_vec[i] / scale;
        err += r * r;
      }
      err = std::sqrt(err / sys_.dim);
      if (!std::isfinite(err)) {
        h_ = h * 0.2;
        continue;
      }

      const double factor =
          (err == 0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t += h;
        y.swap(y_new);
        k1_.swap(k7_);  // FSAL
        if (!clamped) h_ = h * factor;  // keep step memory across boundary-clamped steps
      } else {
        h_ = h * factor;
      }
    }
  }

  void invalidate() { have_k1_ = false; }

 private:
  double initial_step(const Vec& y, double span) const {
    double d0 = 0, d1 = 0;
    for (int i = 0; i < sys_.dim; ++i) {
      const double scale = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
      d0 += std::pow(y[i] / scale, 2);
      d1 += std::pow(k1_[i] / scale, 2);
    }
    d0 = std::sqrt(d0 / sys_.dim);
    d1 = std::sqrt(d1 / sys_.dim);
    double h0 = (d1 > 1e-30) ? 0.01 * d0 / d1 : 1e-6 * span;
    if (!(h0 > 0)) h0 = 1e-6 * span;
    return std::min(h0, span);
  }

  const OdeSystem& sys_;
  IntegratorConfig cfg_;
  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, stage_;
  double h_ = 0;
  bool have_k1_ = false;
};

int substeps_for(double output_dt, double fixed_step) {
  if (fixed_step <= 0) return 1;
  const double ratio = output_dt / fixed_step;
  const int n = static_cast<int>(std::llround(ratio));
  if (n < 1 || std::abs(n * fixed_step - output_dt) > 1e-12 * output_dt)
    throw ShapeError("integrate: RK4 substep must divide the output interval exactly");
  return n;
}

}  // namespace

Vec rk4_step(const OdeSystem& sys, const Vec& x, double h) {
  Vec k1(sys.dim), k2(sys.dim), k3(sys.dim), k4(sys.dim);
  sys.rhs(x, k1);
  sys.rhs(Vec(x + 0.5 * h * k1), k2);
  sys.rhs(Vec(x + 0.5 * h * k2), k3);
  sys.rhs(Vec(x + h * k3), k4);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const OdeSystem& sys, const Vec& x0, double t_end, double output_dt,
                     const IntegratorConfig& cfg) {
  if (x0.size() != sys.dim) throw ShapeError("integrate: initial state dim mismatch");
  if (!(output_dt > 0)) throw ShapeError("integrate: output_dt must be positive");
  const long long n_out = std::llround(t_end / output_dt);
  if (n_out < 0 || std::abs(static_cast<double>(n_out) * output_dt - t_end) >
                       1e-12 * std::max(1.0, std::abs(t_end)))
    throw ShapeError("integrate: output_dt does not divide t_end");

  Trajectory traj;
  traj.dt = output_dt;
  traj.states.reserve(static_cast<std::size_t>(n_out) + 1);
  traj.states.push_back(x0);

  if (cfg.method == Method::Rk4) {
    const int n_sub = substeps_for(output_dt, cfg.fixed_step);
    const double h = output_dt / n_sub;
    Vec y = x0;
    for (long long k = 0; k < n_out; ++k) {
      for (int s = 0; s < n_sub; ++s) y = rk4_step(sys, y, h);
      if (!y.allFinite())
        throw NumericError("integrate: non-finite state in system '" + sys.name + "' at t = " +
                           std::to_string(traj.time(static_cast<std::size_t>(k) + 1)));
      traj.states.push_back(y);
    }
  } else {
    Dp45 stepper(sys, cfg);
    Vec y = x0;
    for (long long k = 0; k < n_out; ++k) {
      stepper.advance(y, traj.time(static_cast<std::size_t>(k)),
                      traj.time(static_cast<std::size_t>(k) + 1));
      traj.states.push_back(y);
    }
  }
  return traj;
}

Vec flow_oracle(const OdeSystem& sys, const Vec& x, double dt, const IntegratorConfig& cfg) {
  return integrate(sys, x, dt, dt, cfg).states.back();
}

void export_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw IoError("export_trajectory_csv: cannot open '" + path + "'");
  os.precision(17);
  os << "t";
  const Eigen::Index dim = traj.states.empty() ? 0 : traj.states.front().size();
  for (Eigen::Index i = 1; i <= dim; ++i) os << ",x" << i;
  os << "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    os << traj.time(k);
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << traj.states[k][i];
    os << "\n";
  }
}

}  // namespace fsfm
