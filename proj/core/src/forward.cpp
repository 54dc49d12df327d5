#include "fracsource/forward.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace fracsource::forward {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr char kEnsembleMagic[8] = {'F', 'R', 'S', 'E', 'N', 'S', '0', '1'};
}  // namespace

FracGrid::FracGrid(fraccalc::FracOrder alpha_, int n_x_, int n_t_,
                   double t_final_)
    : alpha(alpha_), n_x(n_x_), n_t(n_t_), t_final(t_final_) {
  if (n_x < 2) throw std::domain_error("FracGrid: N_x must be >= 2");
  if (n_t < 2) throw std::domain_error("FracGrid: N_t must be >= 2");
  if (!(t_final > 0.0)) throw std::domain_error("FracGrid: T must be positive");
}

double FracGrid::sigma_scheme() const {
  return h_x() * h_x() /
         (fraccalc::gamma_fn(2.0 - alpha.value()) *
          std::pow(h_t(), alpha.value()));
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_u64(std::uint64_t seed, std::uint64_t k) noexcept {
  return mix64(seed + (k + 1) * kGolden);
}

double stream_normal(std::uint64_t seed, std::uint64_t draw_index) noexcept {
  // Box-Muller on two consecutive stream values; u1 in (0,1], u2 in [0,1).
  const double u1 =
      static_cast<double>((stream_u64(seed, 2 * draw_index) >> 11) + 1) *
      0x1.0p-53;
  const double u2 =
      static_cast<double>(stream_u64(seed, 2 * draw_index + 1) >> 11) *
      0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_path_seed(std::uint64_t master_seed,
                               std::uint64_t path_index) noexcept {
  return mix64(master_seed + (path_index + 1) * kGolden);
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t label) noexcept {
  return mix64(seed ^ mix64(label + 1));
}

NoiseIncrements sample_increments(int n_x, std::uint64_t path_seed) {
  if (n_x < 1) throw std::domain_error("sample_increments: N_x must be >= 1");
  NoiseIncrements noise;
  noise.dw.resize(static_cast<std::size_t>(n_x));
  const double root_hx = std::sqrt(1.0 / n_x);
  for (int i = 0; i < n_x; ++i) {
    noise.dw[static_cast<std::size_t>(i)] =
        root_hx * stream_normal(path_seed, static_cast<std::uint64_t>(i));
  }
  return noise;
}

TridiagonalSystem make_operator(int n_x, double sigma) {
  if (n_x < 2) throw std::domain_error("make_operator: N_x must be >= 2");
  if (!(sigma > 0.0)) throw std::domain_error("make_operator: sigma must be > 0");
  TridiagonalSystem sys;
  sys.diag.assign(static_cast<std::size_t>(n_x), sigma + 2.0);
  sys.lower.assign(static_cast<std::size_t>(n_x - 1), -1.0);
  sys.upper.assign(static_cast<std::size_t>(n_x - 1), -1.0);
  sys.upper[0] = -2.0;  // Neumann mirror u_{-1} = u_1 folded into row 0
  return sys;
}

TridiagonalSystem assemble_system(const FracGrid& grid) {
  return make_operator(grid.n_x, grid.sigma_scheme());
}

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys,
                                      std::span<const double> rhs) {
  const int n = sys.size();
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  }
  std::vector<double> c(static_cast<std::size_t>(n - 1));
  std::vector<double> d(static_cast<std::size_t>(n));
  double pivot = sys.diag[0];
  if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c[0] = sys.upper[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (int i = 1; i < n; ++i) {
    pivot = sys.diag[static_cast<std::size_t>(i)] -
            sys.lower[static_cast<std::size_t>(i - 1)] *
                c[static_cast<std::size_t>(i - 1)];
    if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    if (i < n - 1) c[static_cast<std::size_t>(i)] = sys.upper[static_cast<std::size_t>(i)] / pivot;
    d[static_cast<std::size_t>(i)] =
        (rhs[static_cast<std::size_t>(i)] -
         sys.lower[static_cast<std::size_t>(i - 1)] *
             d[static_cast<std::size_t>(i - 1)]) /
        pivot;
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  x[static_cast<std::size_t>(n - 1)] = d[static_cast<std::size_t>(n - 1)];
  for (int i = n - 2; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] =
        d[static_cast<std::size_t>(i)] -
        c[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + 1)];
  }
  return x;
}

std::vector<double> step(const std::vector<std::vector<double>>& history,
                         const FracGrid& grid, double f_n,
                         const NoiseIncrements& noise) {
  const int n = static_cast<int>(history.size());
  if (n < 1) throw std::invalid_argument("step: history must contain u^0");
  if (static_cast<int>(noise.dw.size()) != grid.n_x) {
    throw std::invalid_argument("step: noise size mismatch");
  }
  const double sigma = grid.sigma_scheme();
  const double hx = grid.h_x();

  // G_i^n = h_x F(t_n) dW_i - sigma * sum_{j=1}^{n-1} u_i^j w_{n-j};
  // the u^0 term vanishes with the zero initial data.
  std::vector<double> rhs(static_cast<std::size_t>(grid.n_x));
  for (int i = 0; i < grid.n_x; ++i) {
    rhs[static_cast<std::size_t>(i)] =
        hx * f_n * noise.dw[static_cast<std::size_t>(i)];
  }
  if (n >= 2) {
    const auto weights = fraccalc::l1_weights(n, grid.alpha);
    for (int j = 1; j <= n - 1; ++j) {
      const double w = weights.coeffs[static_cast<std::size_t>(j - 1)];
      const auto& row = history[static_cast<std::size_t>(j)];
      for (int i = 0; i < grid.n_x; ++i) {
        rhs[static_cast<std::size_t>(i)] -=
            sigma * w * row[static_cast<std::size_t>(i)];
      }
    }
  }
  const TridiagonalSystem sys = assemble_system(grid);
  return solve_tridiagonal(sys, rhs);
}

std::vector<double> run_path(const FracGrid& grid, const SourceSignal& source,
                             std::uint64_t path_seed) {
  if (static_cast<int>(source.values.size()) != grid.n_t) {
    throw std::invalid_argument("run_path: source length must equal N_t");
  }
  const NoiseIncrements noise = sample_increments(grid.n_x, path_seed);
  std::vector<std::vector<double>> history;
  history.reserve(static_cast<std::size_t>(grid.n_t) + 1);
  history.emplace_back(static_cast<std::size_t>(grid.n_x), 0.0);

  std::vector<double> trace(static_cast<std::size_t>(grid.n_t));
  for (int n = 1; n <= grid.n_t; ++n) {
    auto u =
        step(history, grid, source.values[static_cast<std::size_t>(n - 1)],
             noise);
    trace[static_cast<std::size_t>(n - 1)] = u[0];
    history.push_back(std::move(u));
  }
  return trace;
}

BoundaryEnsemble run_ensemble(const FracGrid& grid, const SourceSignal& source,
                              int m_paths, std::uint64_t master_seed,
                              int workers) {
  if (m_paths < 2) throw std::domain_error("run_ensemble: need M >= 2 paths");
  if (workers < 1) throw std::domain_error("run_ensemble: workers must be >= 1");

  BoundaryEnsemble ensemble{Eigen::MatrixXd(m_paths, grid.n_t), master_seed,
                            grid};
  auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const auto trace = run_path(
          grid, source, derive_path_seed(master_seed, static_cast<std::uint64_t>(i)));
      for (int n = 0; n < grid.n_t; ++n) {
        ensemble.traces(i, n) = trace[static_cast<std::size_t>(n)];
      }
    }
  };

  if (workers == 1) {
    run_range(0, m_paths);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (m_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = std::min(w * chunk, m_paths);
      const int end = std::min(begin + chunk, m_paths);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return ensemble;
}

void write_ensemble(const std::filesystem::path& path,
                    const BoundaryEnsemble& ensemble) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_ensemble: cannot open " + path.string());
  const auto put_u64 = [&](std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  const auto put_f64 = [&](double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  out.write(kEnsembleMagic, sizeof(kEnsembleMagic));
  put_f64(ensemble.grid.alpha.value());
  put_u64(static_cast<std::uint64_t>(ensemble.grid.n_x));
  put_u64(static_cast<std::uint64_t>(ensemble.grid.n_t));
  put_f64(ensemble.grid.t_final);
  put_u64(static_cast<std::uint64_t>(ensemble.traces.rows()));
  put_u64(ensemble.master_seed);
  for (Eigen::Index i = 0; i < ensemble.traces.rows(); ++i) {
    for (Eigen::Index n = 0; n < ensemble.traces.cols(); ++n) {
      put_f64(ensemble.traces(i, n));
    }
  }
  if (!out) throw std::runtime_error("write_ensemble: write failed");
}

BoundaryEnsemble read_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_ensemble: cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kEnsembleMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("read_ensemble: bad magic");
  }
  const auto get_u64 = [&] {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
  };
  const auto get_f64 = [&] {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
  };
  const double alpha = get_f64();
  const auto n_x = static_cast<int>(get_u64());
  const auto n_t = static_cast<int>(get_u64());
  const double t_final = get_f64();
  const auto m = static_cast<Eigen::Index>(get_u64());
  const std::uint64_t master_seed = get_u64();
  if (!in) throw std::runtime_error("read_ensemble: truncated header");

  BoundaryEnsemble ensemble{Eigen::MatrixXd(m, n_t), master_seed,
                            FracGrid(fraccalc::FracOrder(alpha), n_x, n_t, t_final)};
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int n = 0; n < n_t; ++n) ensemble.traces(i, n) = get_f64();
  }
  if (!in) throw std::runtime_error("read_ensemble: truncated body");
  return ensemble;
}

}  // namespace fracsource::forward
