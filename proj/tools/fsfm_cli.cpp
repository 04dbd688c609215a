// fsfm command line: data generation, training, prediction and evaluation
// for the built-in experiment presets.

#include <CLI11.hpp>

#include "fsfm/csv.hpp"
#include "fsfm/presets.hpp"
#include "fsfm/report.hpp"
#include "fsfm/rollout.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

namespace {

using namespace fsfm;

Vec parse_ic(const std::string& spec, const ExperimentPreset& p) {
  if (spec.empty() || spec == "demo") return demo_initial_condition(p);
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    values.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(values.size()) != p.dim)
    throw ShapeError("--ic needs " + std::to_string(p.dim) + " values for preset " + p.name);
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

struct PresetArgs {
  std::string preset_name;
  double scale = 1.0;
  std::optional<int> inner_steps;
  std::optional<int> outer_steps;
  std::optional<long long> epochs;
  std::optional<double> learning_rate;
  std::optional<int> batch_size;

  ExperimentPreset resolve() const {
    ExperimentPreset p = scaled(preset(preset_name), scale);
    if (inner_steps) p.inner_steps = *inner_steps;
    if (outer_steps) p.outer_steps = *outer_steps;
    if (epochs) p.epochs = *epochs;
    if (learning_rate) p.learning_rate = *learning_rate;
    if (batch_size) p.batch_size = *batch_size;
    if (p.inner_steps < 1) throw ShapeError("inner step count must be >= 1");
    if (p.outer_steps < 1) throw ShapeError("outer step count must be >= 1");
    return p;
  }
};

void add_preset_options(CLI::App* cmd, PresetArgs& args, bool with_train_fields) {
  cmd->add_option("--preset", args.preset_name, "experiment preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--scale", args.scale,
                  "scales sequence count and epochs, in (0,1]; default 1.0");
  cmd->add_option("--inner-steps", args.inner_steps,
                  "model compositions per observation gap (overrides preset)");
  cmd->add_option("--outer-steps", args.outer_steps,
                  "observed steps per training sequence (overrides preset)");
  if (with_train_fields) {
    cmd->add_option("--epochs", args.epochs, "training epochs (overrides preset and scale)");
    cmd->add_option("--lr", args.learning_rate, "constant learning rate");
    cmd->add_option("--batch-size", args.batch_size, "minibatch size");
  }
}

void write_loss_csv(const std::string& path, const std::vector<double>& history) {
  CsvWriter csv(path, {"epoch", "mean_loss"});
  for (std::size_t e = 0; e < history.size(); ++e)
    csv.row({static_cast<double>(e), history[e]});
}

// model rollout + oracle reference + error columns
void write_trajectory_csv(const std::string& path, const RolloutResult& rr) {
  const int dim = static_cast<int>(rr.predicted.front().size());
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= dim; ++i) cols.push_back("pred_x" + std::to_string(i));
  for (int i = 1; i <= dim; ++i) cols.push_back("ref_x" + std::to_string(i));
  cols.push_back("err");
  CsvWriter csv(path, cols);
  for (std::size_t k = 0; k < rr.predicted.size(); ++k) {
    std::vector<double> row{rr.time(k)};
    for (int i = 0; i < dim; ++i) row.push_back(rr.predicted[k][i]);
    for (int i = 0; i < dim; ++i) row.push_back(rr.reference[k][i]);
    row.push_back(rr.errors[static_cast<Eigen::Index>(k)]);
    csv.row(row);
  }
}

int run_generate(const PresetArgs& args, std::uint64_t seed, int workers,
                 const std::string& out, const std::string& csv_out) {
  const ExperimentPreset p = args.resolve();
  const ObservationDataset ds = generate_preset_dataset(p, seed, workers);
  save_dataset(out, ds);
  if (!csv_out.empty()) export_dataset_csv(csv_out, ds);
  std::cout << "wrote " << out << ": system=" << ds.system << " dim=" << ds.dim
            << " sequences=" << ds.num_sequences() << " outer_steps=" << ds.outer_steps
            << " obs_dt=" << ds.obs_dt << " seed=" << ds.seed << "\n";
  return 0;
}

int run_train(const PresetArgs& args, std::uint64_t seed, const std::string& data_path,
              const std::string& out, const std::string& loss_csv, long long checkpoint_every) {
  ExperimentPreset p = args.resolve();
  const ObservationDataset ds = load_dataset(data_path);
  p.outer_steps = ds.outer_steps;  // the data defines the loss window
  TrainConfig cfg = p.train_config(seed);
  cfg.checkpoint_every = checkpoint_every;
  if (static_cast<std::size_t>(cfg.batch_size) > ds.num_sequences()) {
    cfg.batch_size = static_cast<int>(ds.num_sequences());
    std::cout << "note: batch size clamped to " << cfg.batch_size << "\n";
  }

  std::vector<double> history;
  const auto echo = [&](long long epoch, double loss) {
    if (epoch == 0 || (epoch + 1) % 100 == 0 || epoch + 1 == cfg.epochs)
      std::cout << "epoch " << (epoch + 1) << "/" << cfg.epochs << " loss " << loss << "\n";
  };

  try {
    if (p.is_pde()) {
      PdeFlowMap<double> model = make_pde_model(p, seed);
      TrainCallbacks cb;
      cb.on_epoch = echo;
      cb.on_checkpoint = [&](long long epoch) {
        save_checkpoint(out + ".epoch" + std::to_string(epoch + 1), model, pde_meta(p));
      };
      history = train(model, ds, cfg, cb);
      save_checkpoint(out, model, pde_meta(p));
    } else {
      Mlp<double> model = make_ode_model(p, seed);
      TrainCallbacks cb;
      cb.on_epoch = echo;
      cb.on_checkpoint = [&](long long epoch) {
        save_checkpoint(out + ".epoch" + std::to_string(epoch + 1), model);
      };
      history = train(model, ds, cfg, cb);
      save_checkpoint(out, model);
    }
  } catch (const TrainingDiverged& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  if (!loss_csv.empty()) write_loss_csv(loss_csv, history);
  std::cout << "wrote " << out << " (final loss "
            << (history.empty() ? 0.0 : history.back()) << ")\n";
  return 0;
}

RolloutResult preset_rollout(const ExperimentPreset& p, const std::string& ckpt, const Vec& x0,
                             int n_steps) {
  const double fine_dt = p.fine_dt();
  const auto ref = [&](const Vec& ic, int n) { return oracle_reference(p, ic, n, fine_dt); };
  if (p.is_pde()) {
    const PdeFlowMap<double> model = load_pde_checkpoint(ckpt);
    return rollout_with_reference(model, x0, n_steps, fine_dt, ref);
  }
  const Mlp<double> model = load_ode_checkpoint(ckpt);
  return rollout_with_reference(model, x0, n_steps, fine_dt, ref);
}

int run_predict(const PresetArgs& args, const std::string& ckpt, const std::string& ic_spec,
                std::optional<int> steps, const std::string& out) {
  const ExperimentPreset p = args.resolve();
  const Vec x0 = parse_ic(ic_spec, p);
  const int n_steps =
      steps ? *steps : static_cast<int>(std::llround(p.predict_time / p.fine_dt()));
  const RolloutResult rr = preset_rollout(p, ckpt, x0, n_steps);
  write_trajectory_csv(out, rr);
  std::cout << "wrote " << out << " (" << n_steps << " steps of " << p.fine_dt()
            << ", final err " << rr.errors[rr.errors.size() - 1] << ")\n";
  return 0;
}

std::vector<Vec> evaluation_ics(const ExperimentPreset& p, int n_test, std::uint64_t seed) {
  std::vector<Vec> ics(n_test);
  if (p.kind == PresetKind::LorenzChunks) {
    // fresh states on the attractor: sample a reference run from the demo IC
    const auto traj =
        integrate(make_ode_system(p), demo_initial_condition(p), 50.0, 0.05);
    Rng rng(seed);
    for (int i = 0; i < n_test; ++i) ics[i] = traj.states[rng.index(traj.states.size())];
    return ics;
  }
  const auto sampler = make_ic_sampler(p);
  for (int i = 0; i < n_test; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    ics[i] = sampler(rng);
  }
  return ics;
}

int run_evaluate(const PresetArgs& args, const std::string& ckpt, int n_test,
                 std::uint64_t seed, int workers, const std::string& out_dir) {
  const ExperimentPreset p = args.resolve();
  std::filesystem::create_directories(out_dir);
  const double fine_dt = p.fine_dt();
  const int n_steps = static_cast<int>(std::llround(p.predict_time / fine_dt));

  const std::vector<Vec> ics = evaluation_ics(p, n_test, seed);
  std::vector<Vec> errors(ics.size());
  parallel_for(ics.size(), workers, [&](std::size_t i) {
    errors[i] = preset_rollout(p, ckpt, ics[i], n_steps).errors;
  });
  const Vec mean = mean_error(errors);
  {
    CsvWriter csv(out_dir + "/mean_error.csv", {"t", "mean_err"});
    for (Eigen::Index k = 0; k < mean.size(); ++k)
      csv.row({fine_dt * static_cast<double>(k), mean[k]});
  }

  // qualitative diagnostics from the demo trajectory
  const RolloutResult demo = preset_rollout(p, ckpt, demo_initial_condition(p), n_steps);
  const int dim = p.dim;
  if (dim <= 8) {
    for (int c = 0; c < dim; ++c) {
      Vec pred(demo.predicted.size()), ref(demo.reference.size());
      for (std::size_t k = 0; k < demo.predicted.size(); ++k) {
        pred[static_cast<Eigen::Index>(k)] = demo.predicted[k][c];
        ref[static_cast<Eigen::Index>(k)] = demo.reference[k][c];
      }
      const Histogram href = histogram(ref, 50);
      const Histogram hpred = histogram(pred, 50, href.lo, href.hi);
      CsvWriter hcsv(out_dir + "/histogram_x" + std::to_string(c + 1) + ".csv",
                     {"bin_center", "density_pred", "density_ref"});
      for (Eigen::Index b = 0; b < href.centers.size(); ++b)
        hcsv.row({href.centers[b], hpred.density[b], href.density[b]});

      const int max_lag = static_cast<int>(pred.size() / 4);
      const Vec apred = autocorrelation(pred, max_lag);
      const Vec aref = autocorrelation(ref, max_lag);
      CsvWriter acsv(out_dir + "/autocorr_x" + std::to_string(c + 1) + ".csv",
                     {"lag_t", "r_pred", "r_ref"});
      for (int lag = 0; lag <= max_lag; ++lag)
        acsv.row({fine_dt * lag, apred[lag], aref[lag]});
    }
  }
  if (dim == 2 || dim == 3) {
    std::vector<std::string> cols;
    for (const char* who : {"pred", "ref"})
      for (int c = 0; c < dim; ++c)
        cols.push_back(std::string(who) + "_x" + std::to_string(c + 1));
    CsvWriter pcsv(out_dir + "/phase.csv", cols);
    for (std::size_t k = 0; k < demo.predicted.size(); ++k) {
      std::vector<double> row;
      for (int c = 0; c < dim; ++c) row.push_back(demo.predicted[k][c]);
      for (int c = 0; c < dim; ++c) row.push_back(demo.reference[k][c]);
      pcsv.row(row);
    }
  }

  std::ofstream summary(out_dir + "/summary.txt");
  summary.precision(12);
  summary << "preset " << p.name << "\nn_test " << n_test << "\nhorizon " << p.predict_time
          << "\nfine_dt " << fine_dt << "\nmean error at horizon "
          << mean[mean.size() - 1] << "\nmax mean error " << mean.maxCoeff() << "\n";
  std::cout << "wrote " << out_dir << " (mean error at horizon " << mean[mean.size() - 1]
            << ")\n";
  return 0;
}

int run_demo_nonunique(double scale, std::uint64_t seed_a, std::uint64_t seed_b,
                       std::uint64_t data_seed, int workers, const std::string& out_dir) {
  const ExperimentPreset p = scaled(preset("pendulum"), scale);
  Vec test_ic(2);
  test_ic << M_PI / 4, 0.0;
  const TwoSeedReport report = two_seed_divergence_report(p, {seed_a, seed_b}, data_seed,
                                                          test_ic, p.predict_time, workers);
  write_two_seed_report(out_dir, report);
  std::cout << "wrote " << out_dir << " (final losses " << report.final_loss_a << ", "
            << report.final_loss_b << "; max fine-scale distance " << report.max_distance
            << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fine-scale flow map learning from coarse observations"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value config file; command line flags win");

  PresetArgs gen_args, train_args, pred_args, eval_args;
  std::uint64_t gen_seed = 0, train_seed = 0, eval_seed = 1;
  int workers = fsfm::default_workers();
  std::string out, data_path, csv_out, ic_spec = "demo", loss_csv;
  long long checkpoint_every = 0;
  std::optional<int> steps;
  int n_test = 100;
  double demo_scale = 1.0;
  std::uint64_t demo_seed_a = 1, demo_seed_b = 2, demo_data_seed = 9;

  auto* gen = app.add_subcommand("generate", "synthesize an observation dataset");
  add_preset_options(gen, gen_args, false);
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--workers", workers, "parallel workers (env FSFM_WORKERS)");
  gen->add_option("--out", out, "output dataset file")->required();
  gen->add_option("--export-csv", csv_out, "also dump the dataset as CSV");

  auto* train = app.add_subcommand("train", "train a flow map on a dataset");
  add_preset_options(train, train_args, true);
  train->add_option("--data", data_path, "dataset file from 'generate'")->required();
  train->add_option("--seed", train_seed, "controls init and batching");
  train->add_option("--out", out, "output checkpoint file")->required();
  train->add_option("--loss-csv", loss_csv, "write per-epoch mean loss");
  train->add_option("--checkpoint-every", checkpoint_every, "epochs between extra checkpoints");

  auto* pred = app.add_subcommand("predict", "fine-scale rollout against the oracle");
  add_preset_options(pred, pred_args, false);
  pred->add_option("--ckpt", data_path, "model checkpoint")->required();
  pred->add_option("--ic", ic_spec, "comma-separated state or 'demo'");
  pred->add_option("--steps", steps, "fine steps to march (default: preset horizon)");
  pred->add_option("--out", out, "trajectory CSV")->required();

  auto* eval = app.add_subcommand("evaluate", "ensemble error and diagnostics CSVs");
  add_preset_options(eval, eval_args, false);
  eval->add_option("--ckpt", data_path, "model checkpoint")->required();
  eval->add_option("--n-test", n_test, "fresh test initial conditions");
  eval->add_option("--seed", eval_seed, "test IC seed");
  eval->add_option("--workers", workers, "parallel workers (env FSFM_WORKERS)");
  eval->add_option("--out", out, "output directory")->required();

  auto* demo = app.add_subcommand("demo-nonunique",
                                  "train two seeds on the pendulum preset and compare");
  demo->add_option("--scale", demo_scale, "scales sequence count and epochs");
  demo->add_option("--seed-a", demo_seed_a, "first training seed");
  demo->add_option("--seed-b", demo_seed_b, "second training seed");
  demo->add_option("--data-seed", demo_data_seed, "dataset seed shared by both runs");
  demo->add_option("--workers", workers, "parallel workers (env FSFM_WORKERS)");
  demo->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_generate(gen_args, gen_seed, workers, out, csv_out);
    if (train->parsed())
      return run_train(train_args, train_seed, data_path, out, loss_csv, checkpoint_every);
    if (pred->parsed()) return run_predict(pred_args, data_path, ic_spec, steps, out);
    if (eval->parsed())
      return run_evaluate(eval_args, data_path, n_test, eval_seed, workers, out);
    if (demo->parsed())
      return run_demo_nonunique(demo_scale, demo_seed_a, demo_seed_b, demo_data_seed, workers,
                                out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
