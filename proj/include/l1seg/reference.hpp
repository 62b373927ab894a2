#pragma once

#include <vector>

#include "l1seg/core.hpp"

namespace l1seg {

// Slow-but-sure oracles. These certify the fast solvers in tests and
// back the CLI's `--solver oracle` mode; they share no code with the
// direct solvers they check.

/// Solves the 1-D total-variation problem through its dual: a
/// box-constrained quadratic in the edge variables u, ascended by
/// projected gradient steps of size 1/4 (spectral bound of the chain
/// difference Gram) with Nesterov momentum and adaptive restart. Primal
/// recovery m = y - D^T u. Stops once the duality gap certifies
/// ||m - m*||_2 <= tol; throws NonConvergenceError if the iteration
/// budget runs out first.
PiecewiseConstantSignal oracle_tv1d_dual(const TimeSeries& y, double lambda1,
                                         double tol,
                                         std::int64_t max_iterations = 500000);

/// Best-effort minimizer of the robust fused fit
///   sum_t |z_t - x_t| + lambda2 * sum_t |x_{t+1} - x_t|
/// by proximal-subgradient descent with diminishing steps, keeping the
/// best objective seen across 10 perturbed restarts. Guarded to small
/// problems (n <= 64); used as a comparison bound, not an exact solver.
std::vector<double> oracle_l1_tv(const std::vector<double>& z, double lambda2,
                                 double tol = 1e-4);

/// Objective of the robust fused fit above at x.
double l1_tv_objective(const std::vector<double>& z,
                       const std::vector<double>& x, double lambda2);

}  // namespace l1seg
