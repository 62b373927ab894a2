#include "l1seg/multivar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace l1seg {
namespace {

using Eigen::MatrixXd;

std::vector<MatrixXd> outer_products(const TimeSeries& y) {
  const std::size_t n = y.size();
  const std::size_t d = y.dim();
  std::vector<MatrixXd> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::Map<const Eigen::VectorXd> v(y.sample(t).data(),
                                        static_cast<Eigen::Index>(d));
    out.push_back(v * v.transpose());
  }
  return out;
}

double frob(const MatrixXd& a) { return a.norm(); }

// prox of alpha * ||. - Y||_F: shrink V toward Y by alpha in Frobenius
// distance (block soft threshold of the difference).
MatrixXd data_prox(const MatrixXd& v, const MatrixXd& y_outer, double alpha) {
  const MatrixXd d = v - y_outer;
  const double norm = frob(d);
  if (norm <= alpha) return y_outer;
  return y_outer + (1.0 - alpha / norm) * d;
}

// Group fused proximal map on the matrix chain:
//   argmin_X 1/2 sum ||X_t - V_t||_F^2 + w sum ||X_{t+1} - X_t||_F
// via projected dual ascent on the edge variables W_k (Frobenius balls
// of radius w), step 1/4, warm-started across outer iterations. Stops
// on the projected-gradient fixed-point residual.
void group_tv_prox(const std::vector<MatrixXd>& v, double w,
                   std::vector<MatrixXd>& dual, std::vector<MatrixXd>& x,
                   double tol, int max_iter) {
  const std::size_t n = v.size();
  x = v;
  if (n < 2 || w == 0.0) return;
  constexpr double kStep = 0.25;

  for (int it = 0; it < max_iter; ++it) {
    // x = v - D^T dual
    x[0] = v[0] + dual[0];
    for (std::size_t t = 1; t + 1 < n; ++t) x[t] = v[t] - dual[t - 1] + dual[t];
    x[n - 1] = v[n - 1] - dual[n - 2];

    double residual = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      MatrixXd next = dual[k] + kStep * (x[k + 1] - x[k]);
      const double norm = frob(next);
      if (norm > w) next *= w / norm;
      residual = std::max(residual, frob(next - dual[k]));
      dual[k] = std::move(next);
    }
    if (residual <= tol * kStep) break;
  }
  x[0] = v[0] + dual[0];
  for (std::size_t t = 1; t + 1 < n; ++t) x[t] = v[t] - dual[t - 1] + dual[t];
  x[n - 1] = v[n - 1] - dual[n - 2];
}

}  // namespace

void CovSequence::validate() const {
  for (const MatrixXd& s : matrices) {
    if (s.rows() != s.cols() || static_cast<std::size_t>(s.rows()) != dim()) {
      throw InputError("CovSequence: inconsistent matrix shapes");
    }
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InputError("CovSequence: matrix not symmetric to 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(s, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw InputError("CovSequence: matrix has eigenvalue below -1e-10");
    }
  }
}

MatrixXd psd_project(const MatrixXd& s, double eps) {
  if (s.rows() != s.cols()) {
    throw InputError("psd_project: matrix must be square");
  }
  if (!(eps >= 0.0)) {
    throw std::domain_error("psd_project: eps must be >= 0");
  }
  const MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(eps);
  MatrixXd out =
      eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double cov_eigen_floor(const TimeSeries& y) {
  double max_sq = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    Eigen::Map<const Eigen::VectorXd> v(
        y.sample(t).data(), static_cast<Eigen::Index>(y.dim()));
    max_sq = std::max(max_sq, v.squaredNorm());
  }
  return 1e-10 * (1.0 + max_sq);
}

double cov_fit_objective(const TimeSeries& y, const CovSequence& s,
                         double lambda2) {
  const std::vector<MatrixXd> outer = outer_products(y);
  if (s.size() != outer.size()) {
    throw InputError("cov_fit_objective: length mismatch");
  }
  double obj = 0.0;
  for (std::size_t t = 0; t < outer.size(); ++t) {
    obj += frob(outer[t] - s.matrices[t]);
  }
  for (std::size_t t = 0; t + 1 < outer.size(); ++t) {
    obj += lambda2 * frob(s.matrices[t + 1] - s.matrices[t]);
  }
  return obj;
}

std::pair<CovSequence, SolverReport> solve_cov_fit(const TimeSeries& y,
                                                   double lambda2,
                                                   const SolverOptions& opts) {
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) {
    throw std::domain_error("solve_cov_fit: lambda2 must be finite and >= 0");
  }
  opts.validate();
  const std::size_t n = y.size();
  if (n < 2) {
    throw InputError("solve_cov_fit: need at least two samples");
  }
  const std::vector<MatrixXd> outer = outer_products(y);
  const double eps = cov_eigen_floor(y);

  SolverReport report;
  report.solver_name = "cov_consensus_admm";

  CovSequence best;
  if (lambda2 == 0.0) {
    // Exact fit: every outer product is already symmetric PSD.
    best.matrices = outer;
    report.objective = 0.0;
    report.converged = true;
    report.iterations = 0;
    return {std::move(best), report};
  }

  const double rho = opts.penalty_parameter;

  // Consensus start: the average outer product on every sample.
  MatrixXd mean_outer = MatrixXd::Zero(outer[0].rows(), outer[0].cols());
  for (const MatrixXd& o : outer) mean_outer += o;
  mean_outer /= static_cast<double>(n);

  std::vector<MatrixXd> z(n, mean_outer);
  std::vector<MatrixXd> x1 = z, x2 = z, x3 = z;
  const MatrixXd zero = MatrixXd::Zero(outer[0].rows(), outer[0].cols());
  std::vector<MatrixXd> u1(n, zero), u2(n, zero), u3(n, zero);
  std::vector<MatrixXd> tv_dual(n > 1 ? n - 1 : 0, zero);
  std::vector<MatrixXd> v2(n);

  best.matrices = z;
  for (MatrixXd& s : best.matrices) s = psd_project(s, eps);
  double best_obj = cov_fit_objective(y, best, lambda2);

  double scale = 1.0;
  for (const MatrixXd& o : outer) scale = std::max(scale, frob(o));

  double pri = std::numeric_limits<double>::infinity();
  double dual_res = std::numeric_limits<double>::infinity();
  std::int64_t it = 0;
  for (; it < opts.max_iterations; ++it) {
    for (std::size_t t = 0; t < n; ++t) {
      x1[t] = data_prox(z[t] - u1[t], outer[t], 1.0 / rho);
      v2[t] = z[t] - u2[t];
      x3[t] = psd_project(z[t] - u3[t], eps);
    }
    group_tv_prox(v2, lambda2 / rho, tv_dual, x2, 1e-9 * scale, 5000);

    pri = 0.0;
    dual_res = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const MatrixXd z_new = (x1[t] + u1[t] + x2[t] + u2[t] + x3[t] + u3[t]) / 3.0;
      dual_res += (z_new - z[t]).squaredNorm();
      z[t] = z_new;
      u1[t] += x1[t] - z[t];
      u2[t] += x2[t] - z[t];
      u3[t] += x3[t] - z[t];
      pri += (x1[t] - z[t]).squaredNorm() + (x2[t] - z[t]).squaredNorm() +
             (x3[t] - z[t]).squaredNorm();
    }
    pri = std::sqrt(pri);
    dual_res = rho * std::sqrt(3.0 * dual_res);

    // Track the best PSD-feasible candidate; the consensus point itself
    // may be slightly indefinite mid-run.
    CovSequence candidate;
    candidate.matrices.reserve(n);
    for (const MatrixXd& m : z) candidate.matrices.push_back(psd_project(m, eps));
    const double obj = cov_fit_objective(y, candidate, lambda2);
    if (obj < best_obj) {
      best_obj = obj;
      best.matrices.swap(candidate.matrices);
    }

    const double target =
        opts.tolerance * scale * std::sqrt(3.0 * static_cast<double>(n));
    if (pri <= target && dual_res <= target) {
      ++it;
      break;
    }
  }

  report.iterations = it;
  report.objective = best_obj;
  report.kkt_residual = std::max(pri, dual_res);
  report.converged =
      report.kkt_residual <=
      opts.tolerance * scale * std::sqrt(3.0 * static_cast<double>(n));
  return {std::move(best), report};
}

}  // namespace l1seg
