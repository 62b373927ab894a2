#pragma once

#include <span>
#include <utility>
#include <vector>

#include "l1seg/core.hpp"

namespace l1seg {

/// Result of the coupled mean+variance solve in canonical coordinates,
/// with the derived moment sequences attached.
struct JointEstimate {
  PiecewiseConstantSignal mu;    // kind CanonicalMu
  PiecewiseConstantSignal eta;   // kind CanonicalEta, levels < 0
  std::vector<double> m;         // m_t = mu_t * sigma2_t
  std::vector<double> sigma2;    // sigma2_t = -1 / (2 eta_t)
};

/// Gaussian negative log-likelihood in canonical coordinates, summed
/// over samples (additive constant dropped):
///   sum_t [ -ln(-eta_t)/2 - mu_t^2/(4 eta_t) - eta_t y_t^2 - mu_t y_t ].
/// Strictly convex on eta < 0. Throws on any eta_t >= 0.
double neg_log_likelihood(std::span<const double> mu,
                          std::span<const double> eta, const TimeSeries& y);

/// Analytic gradient of neg_log_likelihood:
///   d/dmu_t  = -mu_t/(2 eta_t) - y_t
///   d/deta_t = -1/(2 eta_t) + mu_t^2/(4 eta_t^2) - y_t^2
void neg_log_likelihood_gradient(std::span<const double> mu,
                                 std::span<const double> eta,
                                 const TimeSeries& y, std::span<double> gmu,
                                 std::span<double> geta);

/// Full objective: neg_log_likelihood plus both TV penalties.
double joint_objective(std::span<const double> mu, std::span<const double> eta,
                       const TimeSeries& y, const Hyperparams& params);

/// Solves
///   minimize NLL(mu, eta) + lambda1 TV(mu) + lambda2 TV(eta),
///   eta_t < 0
/// by ADMM: the consensus split duplicates (mu, eta); the smooth block
/// is N independent strictly convex 2-D problems solved by Newton with
/// domain backtracking, the TV block is two exact 1-D TV proximal maps.
/// Requires lambda1 > 0 and lambda2 > 0 unless opts.eta_min supplies an
/// explicit lower bound (otherwise an unpenalized sample makes the
/// likelihood unbounded as its variance collapses).
std::pair<JointEstimate, SolverReport> solve_joint(
    const TimeSeries& y, const Hyperparams& params,
    const SolverOptions& opts = SolverOptions{});

enum class JointChain { Mu, Eta };

/// Numerical constancy threshold for one chain of the joint problem,
/// holding the other chain's penalty fixed: geometric bisection for the
/// smallest lambda whose solution chain is constant. There is no closed
/// form here; this helper is search-based and labeled as such.
double find_constancy_threshold(const TimeSeries& y, JointChain which,
                                double lambda_other,
                                const SolverOptions& opts = SolverOptions{});

/// Ceiling applied to eta (eta_t <= -eta_epsilon(y)), compactifying the
/// domain against the single-sample ML degeneracy. Equals
/// 1 / (2 * 1e6 * max(1, max y_t^2)).
double eta_epsilon(const TimeSeries& y);

}  // namespace l1seg
