#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fracsource/fraccalc.hpp"

namespace fracsource::forward {

/// Space-time discretization of the unit-interval problem on (0,1) x (0,T).
/// Spatial cells N_x (h_x = 1/N_x), time steps N_t (h_t = T/N_t), and the
/// implicit-scheme coefficient sigma = h_x^2 / (Gamma(2-alpha) h_t^alpha).
struct FracGrid {
  FracGrid(fraccalc::FracOrder alpha_, int n_x_, int n_t_, double t_final_);

  fraccalc::FracOrder alpha;
  int n_x;
  int n_t;
  double t_final;

  double h_x() const noexcept { return 1.0 / n_x; }
  double h_t() const noexcept { return t_final / n_t; }
  double sigma_scheme() const;
};

/// Deterministic source samples F(t_n), n = 1..N_t. F(0) = 0 is implicit and
/// never stored.
struct SourceSignal {
  std::vector<double> values;
  std::string label;
};

/// Brownian increments W(x_{i+1}) - W(x_i), i = 0..N_x-1, each N(0, h_x).
struct NoiseIncrements {
  std::vector<double> dw;
};

// Counter-based randomness. mix64 is the splitmix64 finalizer; a stream is
// the pure function k -> mix64(seed + (k+1)*golden). Normal draws use
// Box-Muller on two consecutive stream values, so draw i depends only on
// (seed, i) and any parallel schedule reproduces the same numbers.
std::uint64_t mix64(std::uint64_t z) noexcept;
std::uint64_t stream_u64(std::uint64_t seed, std::uint64_t k) noexcept;
double stream_normal(std::uint64_t seed, std::uint64_t draw_index) noexcept;
std::uint64_t derive_path_seed(std::uint64_t master_seed,
                               std::uint64_t path_index) noexcept;
std::uint64_t substream(std::uint64_t seed, std::uint64_t label) noexcept;

/// Draw the N_x spatial noise increments for one path. h_x is taken as 1/N_x.
NoiseIncrements sample_increments(int n_x, std::uint64_t path_seed);

/// Tridiagonal operator rows for the implicit step. Diagonal sigma+2,
/// off-diagonals -1, except the first-row super-diagonal -2 which folds the
/// Neumann mirror u_{-1} = u_1 into the matrix. Unknowns are u_0..u_{N_x-1};
/// u_{N_x} = 0 is the Dirichlet closure.
struct TridiagonalSystem {
  std::vector<double> lower;  // size n-1
  std::vector<double> diag;   // size n
  std::vector<double> upper;  // size n-1
  int size() const noexcept { return static_cast<int>(diag.size()); }
};
TridiagonalSystem make_operator(int n_x, double sigma);
TridiagonalSystem assemble_system(const FracGrid& grid);

/// Thomas elimination. Throws on a vanishing pivot (cannot happen for the
/// scheme operator with sigma > 0).
std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys,
                                      std::span<const double> rhs);

/// One implicit time step. history[j] holds the interior values u^j for
/// j = 0..n-1 (history[0] is the zero initial row); returns u^n.
std::vector<double> step(const std::vector<std::vector<double>>& history,
                         const FracGrid& grid, double f_n,
                         const NoiseIncrements& noise);

/// One Monte Carlo path: draws a single spatial noise vector, steps the
/// implicit scheme over all N_t steps, and returns the boundary trace
/// u(0, t_n), n = 1..N_t. Keeps the full history (O(N_x * N_t) memory).
std::vector<double> run_path(const FracGrid& grid, const SourceSignal& source,
                             std::uint64_t path_seed);

/// Matrix of boundary traces, one row per path.
struct BoundaryEnsemble {
  Eigen::MatrixXd traces;  // M x N_t
  std::uint64_t master_seed = 0;
  FracGrid grid;
};

/// Run M independent paths. Path i uses derive_path_seed(master_seed, i), so
/// the result is bit-identical for any worker count or schedule.
BoundaryEnsemble run_ensemble(const FracGrid& grid, const SourceSignal& source,
                              int m_paths, std::uint64_t master_seed,
                              int workers = 1);

/// Columnar binary dump (fixed-layout header, then row-major f64 traces,
/// little-endian).
void write_ensemble(const std::filesystem::path& path,
                    const BoundaryEnsemble& ensemble);
BoundaryEnsemble read_ensemble(const std::filesystem::path& path);

}  // namespace fracsource::forward
