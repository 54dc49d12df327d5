#include "fracsource/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fracsource/greenfn.hpp"
#include "fracsource/spectral.hpp"

namespace fracsource::pipeline {

namespace {

constexpr double kPi = std::numbers::pi;

// Substream labels under the master seed; campaign c owns label c so a
// single-campaign run reproduces the mask-1 block exactly.
constexpr std::uint64_t kMaskLabel = 101;
constexpr std::uint64_t kNoiseLabel = 102;

bool is_builtin(const std::string& name) {
  return name == "example1" || name == "example2";
}

std::vector<double> parse_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("source file not readable: " + path.string());
  }
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  return values;
}

void write_manifest(const ReconstructionReport& report,
                    const std::filesystem::path& path) {
  const auto& c = report.config;
  nlohmann::ordered_json j;
  j["config"] = {
      {"alpha", c.alpha},
      {"n_x", c.n_x},
      {"n_t", c.n_t},
      {"t_final", resolve_t_final(c)},
      {"paths", c.paths},
      {"master_seed", c.master_seed},
      {"noise_level", c.noise_level},
      {"source", c.source},
      {"lambda", c.lambda},
      {"tol", c.tol},
      {"max_iter", c.max_iter},
      {"exact_b", c.exact_b},
      {"workers", c.workers},
  };
  j["result"] = {
      {"converged", report.converged},
      {"iterations", report.iterations},
      {"final_residual", report.final_residual},
      {"rank_one_ratio", report.rank_one_ratio},
      {"rel_l2_error", std::isnan(report.rel_l2_error)
                           ? nlohmann::ordered_json(nullptr)
                           : nlohmann::ordered_json(report.rel_l2_error)},
  };
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_reconstruction_csv(const ReconstructionReport& report,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "n,t,F_true_abs,F_rec_abs\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.f_rec_abs.size(); ++i) {
    out << (i + 1) << ',' << report.t[i] << ',' << report.f_true_abs[i] << ','
        << report.f_rec_abs[i] << '\n';
  }
}

}  // namespace

double source_value(const std::string& name, double t) {
  if (name == "example1") return std::sin(t) * std::exp(-t / 6.0);
  if (name == "example2") return std::sin(2.0 * t) * std::cos(3.0 * t);
  throw std::invalid_argument("unknown builtin source: " + name);
}

forward::SourceSignal builtin_source(const std::string& name, int n_t,
                                     double t_final) {
  if (!is_builtin(name)) {
    throw std::invalid_argument("unknown builtin source: " + name);
  }
  if (n_t < 2) throw std::domain_error("builtin_source: N_t must be >= 2");
  if (!(t_final > 0.0)) {
    throw std::domain_error("builtin_source: T must be positive");
  }
  forward::SourceSignal source;
  source.label = name;
  source.values.resize(static_cast<std::size_t>(n_t));
  const double h_t = t_final / n_t;
  for (int n = 1; n <= n_t; ++n) {
    source.values[static_cast<std::size_t>(n - 1)] = source_value(name, n * h_t);
  }
  return source;
}

double resolve_t_final(const ExperimentConfig& config) {
  if (config.t_final > 0.0) return config.t_final;
  if (config.source == "example1") return 4.0 * kPi;
  if (config.source == "example2") return kPi;
  throw std::invalid_argument(
      "t_final must be given explicitly for file sources");
}

forward::SourceSignal load_source(const ExperimentConfig& config) {
  if (is_builtin(config.source)) {
    return builtin_source(config.source, config.n_t, resolve_t_final(config));
  }
  forward::SourceSignal source;
  source.label = config.source;
  source.values = parse_samples(config.source);
  if (static_cast<int>(source.values.size()) != config.n_t) {
    std::ostringstream msg;
    msg << "source file holds " << source.values.size()
        << " samples, expected N_t = " << config.n_t;
    throw std::invalid_argument(msg.str());
  }
  return source;
}

AssembledMeasurements assemble_measurements(
    const ExperimentConfig& config, const forward::SourceSignal& source) {
  if (static_cast<int>(source.values.size()) != config.n_t) {
    throw std::invalid_argument("assemble_measurements: source length != N_t");
  }
  const double t_final = resolve_t_final(config);
  const forward::FracGrid grid(fraccalc::FracOrder(config.alpha), config.n_x,
                               config.n_t, t_final);

  AssembledMeasurements out;
  out.masks = phaselift::make_masks(
      config.n_t, forward::substream(config.master_seed, kMaskLabel));

  const int n = config.n_t;
  Eigen::VectorXd b(2 * n);
  for (std::size_t mask_idx = 0; mask_idx < out.masks.masks.size(); ++mask_idx) {
    const auto& mask = out.masks.masks[mask_idx];
    forward::SourceSignal masked;
    masked.label = source.label;
    masked.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      masked.values[static_cast<std::size_t>(i)] =
          mask[i] * source.values[static_cast<std::size_t>(i)];
    }
    // Each illumination is an independent experiment with its own noise
    // stream.
    const auto ensemble = forward::run_ensemble(
        grid, masked, config.paths,
        forward::substream(config.master_seed, mask_idx), config.workers);

    Eigen::MatrixXcd spectra(ensemble.traces.rows(), n);
    for (Eigen::Index r = 0; r < ensemble.traces.rows(); ++r) {
      spectra.row(r) =
          spectral::dft_real(ensemble.traces.row(r).transpose()).transpose();
    }
    const Eigen::VectorXd variance = spectral::ensemble_variance(spectra);
    out.variance_blocks.push_back(variance);

    const auto estimate = spectral::recover_modulus(variance, grid);
    for (int m = 0; m < n; ++m) {
      // b carries the squared modulus, variance / energy.
      b[static_cast<Eigen::Index>(mask_idx) * n + m] =
          estimate.modulus[m] * estimate.modulus[m];
    }
  }
  out.b_clean = b;

  if (config.noise_level != 0.0) {
    const std::uint64_t noise_seed =
        forward::substream(config.master_seed, kNoiseLabel);
    for (Eigen::Index m = 0; m < b.size(); ++m) {
      const double u =
          static_cast<double>(forward::stream_u64(
                                  noise_seed, static_cast<std::uint64_t>(m)) >>
                              11) *
          0x1.0p-53;
      b[m] *= 1.0 + config.noise_level * (2.0 * u - 1.0);
    }
  }

  const double lambda =
      config.lambda >= 0.0
          ? config.lambda
          : 1e-3 * b.cwiseAbs().sum() / static_cast<double>(b.size());
  out.problem = phaselift::make_problem(out.masks, b, lambda);
  return out;
}

ReconstructionReport run_experiment(const ExperimentConfig& config) {
  // Validate everything up front; configuration errors must precede any
  // computation.
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (config.n_x < 2 || config.n_t < 2) {
    throw std::invalid_argument("grid sizes must be >= 2");
  }
  if (config.paths < 2) throw std::invalid_argument("paths must be >= 2");
  if (config.noise_level < 0.0) {
    throw std::invalid_argument("noise level must be nonnegative");
  }
  if (!(config.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (config.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  const double t_final = resolve_t_final(config);
  const forward::SourceSignal source = load_source(config);

  phaselift::MaskSet masks;
  phaselift::LiftProblem problem;
  if (config.exact_b) {
    masks = phaselift::make_masks(
        config.n_t, forward::substream(config.master_seed, kMaskLabel));
    const auto sensing = phaselift::make_sensing(masks, config.n_t);
    Eigen::VectorXcd f(config.n_t);
    for (int i = 0; i < config.n_t; ++i) {
      f[i] = source.values[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd b = phaselift::exact_measurements(sensing, f);
    const double lambda =
        config.lambda >= 0.0
            ? config.lambda
            : 1e-3 * b.cwiseAbs().sum() / static_cast<double>(b.size());
    problem = phaselift::make_problem(masks, b, lambda);
  } else {
    auto assembled = assemble_measurements(config, source);
    masks = std::move(assembled.masks);
    problem = std::move(assembled.problem);
  }

  const auto result = phaselift::solve(problem, config.tol, config.max_iter);

  ReconstructionReport report;
  report.config = config;
  report.converged = result.converged;
  report.iterations = result.iterations;
  report.final_residual = result.final_residual;
  report.rank_one_ratio = result.rank_one_ratio;
  report.residual_history = result.history;

  const double h_t = t_final / config.n_t;
  report.t.resize(static_cast<std::size_t>(config.n_t));
  report.f_rec_abs.resize(static_cast<std::size_t>(config.n_t));
  for (int n = 1; n <= config.n_t; ++n) {
    report.t[static_cast<std::size_t>(n - 1)] = n * h_t;
    report.f_rec_abs[static_cast<std::size_t>(n - 1)] = std::abs(result.f[n - 1]);
  }
  // The truth is available whenever the source samples are known, which is
  // every run of this tool; the report keeps it for plotting and scoring.
  report.f_true_abs.resize(source.values.size());
  double err2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t i = 0; i < source.values.size(); ++i) {
    report.f_true_abs[i] = std::abs(source.values[i]);
    const double d = report.f_rec_abs[i] - report.f_true_abs[i];
    err2 += d * d;
    ref2 += report.f_true_abs[i] * report.f_true_abs[i];
  }
  if (ref2 > 0.0) report.rel_l2_error = std::sqrt(err2 / ref2);

  std::filesystem::create_directories(config.out_dir);
  write_manifest(report, config.out_dir / "manifest.json");
  write_reconstruction_csv(report, config.out_dir / "reconstruction.csv");
  phaselift::write_residual_csv(config.out_dir / "residuals.csv",
                                report.residual_history);
  return report;
}

int exit_status(const ReconstructionReport& report) {
  return report.converged ? 0 : 2;
}

}  // namespace fracsource::pipeline
