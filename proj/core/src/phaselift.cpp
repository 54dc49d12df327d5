#include "fracsource/phaselift.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fracsource/forward.hpp"

namespace fracsource::phaselift {

namespace {

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& X) {
  return 0.5 * (X + X.adjoint());
}

double residual_of(const Eigen::VectorXcd& f, const LiftProblem& problem) {
  // ||A(f f*) - b||_2 evaluated through the sensing inner products.
  double acc = 0.0;
  for (std::size_t m = 0; m < problem.sensing.size(); ++m) {
    const std::complex<double> y = problem.sensing[m].dot(f);
    const double r = std::norm(y) - problem.b[static_cast<Eigen::Index>(m)];
    acc += r * r;
  }
  return std::sqrt(acc);
}

struct PolishOutcome {
  Eigen::VectorXcd f;
  double residual = 0.0;
  int iterations = 0;
};

// Rank-one polish: Levenberg-Marquardt on the measurement objective in the
// signal variable,
//   q(f) = 0.5 ||b - A(f f*)||^2 + lambda ||f||^2.
// The lifted iteration converges to the optimal face of the semidefinite
// relaxation but has no mechanism to pick its rank-one point; descending in f
// itself is what pins the extraction to an exact measurement fit.
PolishOutcome polish_rank_one(const Eigen::VectorXcd& f0,
                              const LiftProblem& problem, double target,
                              int max_iter = 200) {
  const int n = problem.signal_size;
  const auto K = static_cast<Eigen::Index>(problem.sensing.size());
  const double lambda = problem.lambda;

  const auto residual_vec = [&](const Eigen::VectorXcd& f) {
    Eigen::VectorXd r(K);
    for (Eigen::Index m = 0; m < K; ++m) {
      r[m] = std::norm(problem.sensing[static_cast<std::size_t>(m)].dot(f)) -
             problem.b[m];
    }
    return r;
  };
  const auto cost_of = [&](const Eigen::VectorXcd& f, const Eigen::VectorXd& r) {
    return 0.5 * r.squaredNorm() + lambda * f.squaredNorm();
  };

  PolishOutcome out;
  out.f = f0;
  Eigen::VectorXd r = residual_vec(out.f);
  double cost = cost_of(out.f, r);
  out.residual = r.norm();
  double mu = 1e-8;

  Eigen::MatrixXd jac(K, 2 * n);
  for (int it = 0; it < max_iter && out.residual > target; ++it) {
    for (Eigen::Index m = 0; m < K; ++m) {
      const auto& a = problem.sensing[static_cast<std::size_t>(m)];
      const std::complex<double> y = a.dot(out.f);
      for (int i = 0; i < n; ++i) {
        // d|a^H f|^2 = 2 Re(conj(a^H f) conj(a_i) df_i)
        const std::complex<double> c = std::conj(y) * std::conj(a[i]);
        jac(m, i) = 2.0 * c.real();
        jac(m, n + i) = -2.0 * c.imag();
      }
    }
    Eigen::VectorXd ref(2 * n);
    ref.head(n) = out.f.real();
    ref.tail(n) = out.f.imag();
    const Eigen::VectorXd grad = jac.transpose() * r + 2.0 * lambda * ref;
    Eigen::MatrixXd h = jac.transpose() * jac;
    h.diagonal().array() += 2.0 * lambda;
    const double diag_scale = std::max(h.diagonal().maxCoeff(), 1e-300);

    bool accepted = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::MatrixXd damped = h;
      damped.diagonal().array() += mu * diag_scale;
      const Eigen::VectorXd delta = damped.ldlt().solve(grad);
      Eigen::VectorXcd f_next(n);
      for (int i = 0; i < n; ++i) {
        f_next[i] = std::complex<double>(ref[i] - delta[i],
                                         ref[n + i] - delta[n + i]);
      }
      const Eigen::VectorXd r_next = residual_vec(f_next);
      const double cost_next = cost_of(f_next, r_next);
      if (cost_next < cost) {
        const double gain = cost - cost_next;
        out.f = std::move(f_next);
        r = r_next;
        cost = cost_next;
        out.residual = r.norm();
        out.iterations = it + 1;
        mu = std::max(mu * 0.3, 1e-14);
        accepted = true;
        if (gain <= 1e-16 * std::max(cost, 1.0)) it = max_iter;  // stalled
        break;
      }
      mu *= 10.0;
      if (mu > 1e14) break;
    }
    if (!accepted) break;
  }
  return out;
}

}  // namespace

MaskSet make_masks(int n, std::uint64_t seed) {
  if (n < 2) throw std::domain_error("make_masks: need n >= 2");
  MaskSet set;
  set.masks.push_back(Eigen::VectorXd::Ones(n));
  const int min_ones = (n + 3) / 4;
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Eigen::VectorXd mask(n);
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      const bool bit =
          (forward::stream_u64(seed, attempt * static_cast<std::uint64_t>(n) +
                                         static_cast<std::uint64_t>(i)) &
           1ULL) != 0;
      mask[i] = bit ? 1.0 : 0.0;
      ones += bit ? 1 : 0;
    }
    if (ones >= min_ones) {
      set.masks.push_back(std::move(mask));
      return set;
    }
  }
  throw std::runtime_error("make_masks: could not draw a dense enough mask");
}

std::vector<Eigen::VectorXcd> make_sensing(const MaskSet& masks, int n) {
  if (n < 2) throw std::domain_error("make_sensing: need n >= 2");
  std::vector<Eigen::VectorXcd> sensing;
  sensing.reserve(masks.masks.size() * static_cast<std::size_t>(n));
  for (const auto& w : masks.masks) {
    if (w.size() != n) throw std::invalid_argument("make_sensing: mask length mismatch");
    for (int m = 0; m < n; ++m) {
      Eigen::VectorXcd a(n);
      for (int k = 0; k < n; ++k) {
        a[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) *
                                   static_cast<double>(k) /
                                   static_cast<double>(n)) *
               w[k];
      }
      sensing.push_back(std::move(a));
    }
  }
  return sensing;
}

LiftProblem make_problem(const MaskSet& masks, const Eigen::VectorXd& b,
                         double lambda) {
  const int n = static_cast<int>(masks.masks.at(0).size());
  LiftProblem problem;
  problem.sensing = make_sensing(masks, n);
  if (b.size() != static_cast<Eigen::Index>(problem.sensing.size())) {
    throw std::invalid_argument("make_problem: measurement length mismatch");
  }
  problem.b = b.cwiseMax(0.0);  // measurements model squared moduli
  problem.lambda = lambda;
  problem.signal_size = n;
  return problem;
}

Eigen::VectorXd exact_measurements(const std::vector<Eigen::VectorXcd>& sensing,
                                   const Eigen::VectorXcd& f) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(sensing.size()));
  for (std::size_t m = 0; m < sensing.size(); ++m) {
    b[static_cast<Eigen::Index>(m)] = std::norm(sensing[m].dot(f));
  }
  return b;
}

Eigen::VectorXd apply_A(const Eigen::MatrixXcd& X, const LiftProblem& problem) {
  if (X.rows() != problem.signal_size || X.cols() != problem.signal_size) {
    throw std::invalid_argument("apply_A: dimension mismatch");
  }
  const double imag_budget = 1e-10 * std::max(X.norm(), 1e-300);
  Eigen::VectorXd z(static_cast<Eigen::Index>(problem.sensing.size()));
  for (std::size_t m = 0; m < problem.sensing.size(); ++m) {
    const auto& a = problem.sensing[m];
    const std::complex<double> v = a.dot(X * a);  // a^* X a
    if (std::abs(v.imag()) > imag_budget) {
      throw std::runtime_error("apply_A: non-Hermitian input");
    }
    z[static_cast<Eigen::Index>(m)] = v.real();
  }
  return z;
}

Eigen::MatrixXcd adjoint_A(const Eigen::VectorXd& y,
                           const LiftProblem& problem) {
  if (y.size() != static_cast<Eigen::Index>(problem.sensing.size())) {
    throw std::invalid_argument("adjoint_A: dimension mismatch");
  }
  const int n = problem.signal_size;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t m = 0; m < problem.sensing.size(); ++m) {
    out.noalias() += y[static_cast<Eigen::Index>(m)] * problem.sensing[m] *
                     problem.sensing[m].adjoint();
  }
  return out;
}

double objective(const Eigen::MatrixXcd& X, const LiftProblem& problem) {
  const Eigen::VectorXd z = apply_A(X, problem);
  return 0.5 * (problem.b - z).squaredNorm() +
         problem.lambda * X.trace().real();
}

Eigen::MatrixXcd grad_g(const Eigen::MatrixXcd& X, const LiftProblem& problem) {
  const Eigen::VectorXd z = apply_A(X, problem);
  Eigen::MatrixXcd g = adjoint_A(z - problem.b, problem);
  g += problem.lambda *
       Eigen::MatrixXcd::Identity(problem.signal_size, problem.signal_size);
  return g;
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& X) {
  const Eigen::MatrixXcd H = hermitize(X);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("project_psd: eigendecomposition failed");
  }
  const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.asDiagonal() *
         eig.eigenvectors().adjoint();
}

RankOne extract_rank_one(const Eigen::MatrixXcd& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hermitize(X));
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("extract_rank_one: eigendecomposition failed");
  }
  const Eigen::Index top = X.rows() - 1;  // eigenvalues sorted ascending
  const double lead = eig.eigenvalues()[top];
  const double trace = eig.eigenvalues().sum();
  RankOne result;
  if (lead <= 0.0 || trace <= 0.0) {
    result.f = Eigen::VectorXcd::Zero(X.rows());
    result.ratio = 1.0;
    return result;
  }
  result.f = std::sqrt(lead) * eig.eigenvectors().col(top);
  result.ratio = lead / trace;
  return result;
}

LiftState make_initial_state(const LiftProblem& problem) {
  const int n = problem.signal_size;
  double norm_acc = 0.0;
  for (const auto& a : problem.sensing) norm_acc += a.squaredNorm();
  const double mean_norm = norm_acc / static_cast<double>(problem.sensing.size());
  const double beta = problem.b.mean() / mean_norm;

  LiftState state;
  state.X = beta * Eigen::MatrixXcd::Identity(n, n);
  state.X_bar = state.X;
  state.theta = 1.0;
  double l0 = 0.0;
  for (const auto& a : problem.sensing) {
    const double s = a.squaredNorm();
    l0 += s * s;
  }
  state.L_est = std::max(l0 / static_cast<double>(problem.sensing.size()), 1e-12);
  return state;
}

LiftState at_iterate(LiftState state, const LiftProblem& problem) {
  const double theta = state.theta;
  const Eigen::MatrixXcd Y = (1.0 - theta) * state.X + theta * state.X_bar;
  const Eigen::MatrixXcd G = grad_g(Y, problem);
  const double g_y = objective(Y, problem);

  double L = std::max(state.L_est * 0.9, 1e-12);
  Eigen::MatrixXcd X_bar_next;
  Eigen::MatrixXcd X_next;
  bool accepted = false;
  for (int attempt = 0; attempt <= 60; ++attempt) {
    X_bar_next = project_psd(state.X_bar - G / (theta * L));
    X_next = hermitize((1.0 - theta) * state.X + theta * X_bar_next);
    const Eigen::MatrixXcd d = X_next - Y;
    const double lin = G.conjugate().cwiseProduct(d).sum().real();
    const double bound = g_y + lin + 0.5 * L * d.squaredNorm();
    const double g_next = objective(X_next, problem);
    if (g_next <= bound + 1e-12 * std::max(1.0, std::abs(bound))) {
      accepted = true;
      break;
    }
    L *= 2.0;
  }
  if (!accepted) {
    throw std::runtime_error("at_iterate: backtracking exceeded 60 doublings");
  }

  state.X = std::move(X_next);
  state.X_bar = std::move(X_bar_next);
  state.L_est = L;
  state.theta = 2.0 / (1.0 + std::sqrt(1.0 + 4.0 / (theta * theta)));
  return state;
}

SolveResult solve(const LiftProblem& problem, double tol, int max_iter) {
  if (problem.sensing.size() < static_cast<std::size_t>(problem.signal_size)) {
    throw std::invalid_argument("solve: need at least N measurements");
  }
  const double b_norm = problem.b.norm();
  const double target = tol * b_norm;

  LiftState state = make_initial_state(problem);
  SolveResult result;
  double best_residual = std::numeric_limits<double>::infinity();
  double prev_objective = objective(state.X, problem);

  // Stall bookkeeping for the lifted phase: once the extraction residual
  // stops moving the semidefinite iterate has reached its optimal face and
  // further sweeps cannot improve the rank-one fit.
  constexpr int kStallWindow = 60;
  constexpr int kMinLiftIters = 240;
  double window_mark = std::numeric_limits<double>::infinity();
  int last_iter = 0;

  for (int k = 1; k <= max_iter; ++k) {
    state = at_iterate(std::move(state), problem);
    last_iter = k;

    const RankOne lead = extract_rank_one(state.X);
    const double res = residual_of(lead.f, problem);
    const double obj = objective(state.X, problem);
    state.residual_history.push_back(res);
    result.history.push_back({k, res, obj, lead.ratio});

    if (res < best_residual) {
      best_residual = res;
      result.X = state.X;
      result.f = lead.f;
      result.rank_one_ratio = lead.ratio;
      result.final_residual = res;
      result.iterations = k;
    }
    if (res <= target) {
      result.converged = true;
      result.X = state.X;
      result.f = lead.f;
      result.rank_one_ratio = lead.ratio;
      result.final_residual = res;
      result.iterations = k;
      break;
    }
    if (k >= kMinLiftIters && k % kStallWindow == 0) {
      if (best_residual > 0.995 * window_mark) break;
      window_mark = best_residual;
    }
    // Momentum restart when the smooth objective rises; plain accelerated
    // steps are not monotone and restarts recover the fast local rate.
    if (obj > prev_objective * (1.0 + 1e-12)) {
      state.X_bar = state.X;
      state.theta = 1.0;
    }
    prev_objective = obj;
  }
  if (result.history.empty()) {
    const RankOne lead = extract_rank_one(state.X);
    result.X = state.X;
    result.f = lead.f;
    result.rank_one_ratio = lead.ratio;
    result.final_residual = residual_of(lead.f, problem);
  }

  // Rank-one polish in the signal variable. The lifted iterate identifies the
  // optimal face; the measurement objective is then driven to its floor at a
  // genuinely rank-one point, which is what the stopping rule measures. A few
  // deterministically perturbed restarts guard against bad local basins.
  if (!result.converged && b_norm > 0.0 && result.f.size() > 0 &&
      result.f.squaredNorm() > 0.0) {
    PolishOutcome polished = polish_rank_one(result.f, problem, target);
    const double f_scale = std::sqrt(result.f.squaredNorm() /
                                     static_cast<double>(result.f.size()));
    for (std::uint64_t attempt = 1; attempt <= 2 && polished.residual > target;
         ++attempt) {
      Eigen::VectorXcd start = result.f;
      for (Eigen::Index i = 0; i < start.size(); ++i) {
        const auto u = [&](std::uint64_t k) {
          return static_cast<double>(
                     forward::stream_u64(
                         attempt, 2 * static_cast<std::uint64_t>(i) + k) >>
                     11) *
                 0x1.0p-53;
        };
        start[i] += 0.2 * f_scale *
                    std::complex<double>(2.0 * u(0) - 1.0, 2.0 * u(1) - 1.0);
      }
      const PolishOutcome retry = polish_rank_one(start, problem, target);
      if (retry.residual < polished.residual) polished = retry;
    }
    if (polished.iterations > 0 && polished.residual < result.final_residual) {
      result.f = polished.f;
      result.X = polished.f * polished.f.adjoint();
      result.rank_one_ratio = 1.0;
      result.final_residual = polished.residual;
      result.iterations = last_iter + polished.iterations;
      result.history.push_back({result.iterations, polished.residual,
                                objective(result.X, problem), 1.0});
      if (polished.residual <= target) result.converged = true;
    }
  }
  return result;
}

void write_residual_csv(const std::filesystem::path& path,
                        const std::vector<IterationRecord>& history) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_residual_csv: cannot open " + path.string());
  }
  out << "iter,residual,objective,rank_one_ratio\n";
  out.precision(17);
  for (const auto& rec : history) {
    out << rec.iter << ',' << rec.residual << ',' << rec.objective << ','
        << rec.rank_one_ratio << '\n';
  }
}

}  // namespace fracsource::phaselift
