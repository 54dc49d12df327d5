#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace fracsource::phaselift {

/// Diagonal 0/1 masks. Mask 0 is always the identity; further masks are
/// random binary patterns with at least ceil(N/4) ones.
struct MaskSet {
  std::vector<Eigen::VectorXd> masks;
};

/// Identity mask plus one seeded random binary mask of length n. Patterns
/// with fewer than ceil(n/4) ones are rejected and redrawn.
MaskSet make_masks(int n, std::uint64_t seed);

/// Sensing vectors a^(m): for each mask w and each DFT index m,
/// a_n = conj-DFT-column entry times w_n, so |<a^(m), x>|^2 = |DFT(w.*x)_m|^2.
/// K = (#masks) * n vectors, mask-major order.
std::vector<Eigen::VectorXcd> make_sensing(const MaskSet& masks, int n);

/// Lifted phase-retrieval problem: measurements b_m ~ |<a^(m), f>|^2 and the
/// trace-regularization weight lambda of the smooth objective
///   g(X) = 0.5 * ||b - A(X)||^2 + lambda * tr(X).
struct LiftProblem {
  std::vector<Eigen::VectorXcd> sensing;
  Eigen::VectorXd b;
  double lambda = 0.0;
  int signal_size = 0;
};

/// Assemble a LiftProblem from masks and a measurement vector. Negative
/// measurement entries (possible after noise) are clipped to zero: b models
/// squared moduli.
LiftProblem make_problem(const MaskSet& masks, const Eigen::VectorXd& b,
                         double lambda);

/// Exact measurements A(f f*) of a known signal, for synthetic data paths.
Eigen::VectorXd exact_measurements(const std::vector<Eigen::VectorXcd>& sensing,
                                   const Eigen::VectorXcd& f);

/// Lifting operator: z_m = a^(m)* X a^(m) (= tr(A^(m) X)). The imaginary
/// parts are provably zero for Hermitian X; they are discarded after a
/// 1e-10 * ||X||_F sanity bound.
Eigen::VectorXd apply_A(const Eigen::MatrixXcd& X, const LiftProblem& problem);

/// Adjoint of the lifting operator: sum_m y_m a^(m) a^(m)*. Hermitian by
/// construction.
Eigen::MatrixXcd adjoint_A(const Eigen::VectorXd& y,
                           const LiftProblem& problem);

/// Smooth part of the objective and its gradient
///   grad g = A*(A(X) - b) + lambda * I.
double objective(const Eigen::MatrixXcd& X, const LiftProblem& problem);
Eigen::MatrixXcd grad_g(const Eigen::MatrixXcd& X, const LiftProblem& problem);

/// Frobenius-nearest Hermitian positive semidefinite matrix: symmetrize,
/// eigendecompose, clip negative eigenvalues.
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& X);

/// Rank-one extraction f = sqrt(lambda_1) v_1 from the leading eigenpair,
/// with the captured-energy ratio lambda_1 / tr(X) (1 for the zero matrix).
struct RankOne {
  Eigen::VectorXcd f;
  double ratio = 1.0;
};
RankOne extract_rank_one(const Eigen::MatrixXcd& X);

/// Accelerated-iteration state: main iterate X, auxiliary iterate X_bar,
/// momentum parameter theta (theta_0 = 1, strictly decreasing), and the
/// current backtracked Lipschitz estimate.
struct LiftState {
  Eigen::MatrixXcd X;
  Eigen::MatrixXcd X_bar;
  double theta = 1.0;
  double L_est = 1.0;
  std::vector<double> residual_history;
};

/// Scale-matched PSD start X_0 = beta * I, beta = mean(b) / mean_m ||a^(m)||^2.
LiftState make_initial_state(const LiftProblem& problem);

/// One accelerated step with generalized (PSD) projection:
///   Y       = (1-theta) X + theta X_bar
///   X_bar+  = proj_psd(X_bar - grad g(Y) / (theta L))
///   X+      = (1-theta) X + theta X_bar+
///   theta+  = 2 / (1 + sqrt(1 + 4/theta^2))
/// L backtracks (doubles) until the quadratic upper bound
///   g(X+) <= g(Y) + <grad g(Y), X+ - Y> + L/2 ||X+ - Y||_F^2
/// holds; more than 60 doublings raises a divergence error. L decays by 0.9
/// at the start of each step so overestimates self-correct.
LiftState at_iterate(LiftState state, const LiftProblem& problem);

struct IterationRecord {
  int iter = 0;
  double residual = 0.0;
  double objective = 0.0;
  double rank_one_ratio = 0.0;
};

struct SolveResult {
  Eigen::MatrixXcd X;
  Eigen::VectorXcd f;
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations = 0;
  double final_residual = 0.0;
  double rank_one_ratio = 0.0;
};

/// Run the accelerated iteration until the rank-one residual passes the
/// stopping rule ||A(f f*) - b||_2 <= tol ||b||_2 or max_iter is reached.
/// Non-convergence returns the best-residual iterate with converged = false,
/// never throws. Momentum restarts when the smooth objective increases.
SolveResult solve(const LiftProblem& problem, double tol = 1e-6,
                  int max_iter = 5000);

/// CSV export of the per-iteration records:
/// header iter,residual,objective,rank_one_ratio.
void write_residual_csv(const std::filesystem::path& path,
                        const std::vector<IterationRecord>& history);

}  // namespace fracsource::phaselift
