#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "l1seg/core.hpp"

namespace l1seg {

/// Sequence of symmetric PSD matrices, one per sample.
struct CovSequence {
  std::vector<Eigen::MatrixXd> matrices;

  std::size_t size() const { return matrices.size(); }
  std::size_t dim() const {
    return matrices.empty() ? 0 : static_cast<std::size_t>(matrices[0].rows());
  }

  /// Symmetry to 1e-12 and minimum eigenvalue >= -1e-10.
  void validate() const;
};

/// Nearest-PSD surrogate for the strict positivity constraint:
/// symmetrize, eigendecompose, clip eigenvalues at eps, reconstruct.
/// Idempotent.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& S, double eps);

/// Robust covariance-path fit over vector samples y_t:
///   minimize sum_t ||y_t y_t' - S_t||_F + lambda2 sum_t ||S_{t+1} - S_t||_F
///   subject to S_t PSD (eigenvalue floor).
/// Note the data term is an unsquared Frobenius norm: this is a robust
/// fit, not the squared loss of the scalar variance path. Solved by
/// three-block consensus ADMM: per-sample matrix shrinkage toward
/// y_t y_t', a group fused proximal map on the chain (inner dual
/// ascent), and PSD projection.
std::pair<CovSequence, SolverReport> solve_cov_fit(
    const TimeSeries& y, double lambda2,
    const SolverOptions& opts = SolverOptions{});

double cov_fit_objective(const TimeSeries& y, const CovSequence& s,
                         double lambda2);

/// Eigenvalue floor used by solve_cov_fit:
/// 1e-10 * (1 + max_t ||y_t||^2).
double cov_eigen_floor(const TimeSeries& y);

}  // namespace l1seg
