#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace l1seg {

/// Thrown when input data violates a precondition (non-finite values,
/// length mismatches, malformed series).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a requested solve is ill-posed (e.g. an unpenalized
/// canonical fit whose per-sample likelihood is unbounded).
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown by iterative solvers that exhaust their iteration budget
/// without meeting the requested tolerance. Never a silent wrong answer.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered observations y_1..y_N. Scalar by default; vector-valued
/// samples are stored row-major with a fixed dimension.
class TimeSeries {
 public:
  TimeSeries() = default;

  /// Validates finiteness and shape. dim must divide values.size().
  explicit TimeSeries(std::vector<double> values, std::size_t dim = 1);

  std::size_t size() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  /// Scalar sample access (dim == 1 contexts).
  double operator[](std::size_t t) const { return values_[t]; }

  std::span<const double> values() const { return values_; }

  /// The t-th vector sample, length dim().
  std::span<const double> sample(std::size_t t) const {
    return std::span<const double>(values_.data() + t * dim_, dim_);
  }

 private:
  std::vector<double> values_;
  std::size_t dim_ = 1;
};

enum class SignalKind { Mean, Variance, CanonicalMu, CanonicalEta };

const char* to_string(SignalKind kind);

/// Per-sample estimated level sequence. Variance levels must be
/// positive, canonical eta levels strictly negative.
struct PiecewiseConstantSignal {
  std::vector<double> levels;
  SignalKind kind = SignalKind::Mean;

  std::size_t size() const { return levels.size(); }

  /// Throws InputError if the kind's sign constraint is violated.
  void validate() const;
};

/// Regularization weights; both nonnegative.
struct Hyperparams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  void validate() const;
};

/// Explicit segmentation derived from a level sequence.
/// Changepoint k (1-based, 1 <= k < n) means the level changes between
/// sample k and sample k+1. Bounds are 1-based inclusive [start, end].
struct Segmentation {
  std::size_t n = 0;
  std::vector<std::size_t> changepoints;
  std::vector<double> segment_levels;
  std::vector<std::pair<std::size_t, std::size_t>> segment_bounds;

  std::size_t segment_count() const { return segment_levels.size(); }

  /// Structural invariants: segments partition 1..n, strictly
  /// increasing changepoints, one level per segment.
  void validate() const;
};

struct SolverOptions {
  /// Target on the KKT residual, relative to data scale.
  double tolerance = 1e-8;
  std::int64_t max_iterations = 10000;
  /// Relative variance floor; the effective floor is
  /// variance_floor * max(1, max_t y_t^2).
  double variance_floor = 1e-12;
  /// ADMM penalty parameter rho.
  double penalty_parameter = 1.0;
  /// Enable residual-balancing adaptation of rho.
  bool adapt_penalty = false;
  /// Explicit lower bound on canonical eta (most negative value
  /// allowed). Supplying it permits unpenalized joint solves that
  /// would otherwise be rejected as degenerate.
  std::optional<double> eta_min;

  void validate() const;
};

struct SolverReport {
  double objective = 0.0;
  std::int64_t iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
  std::string solver_name;
  /// Samples clamped by the variance floor (0 when the floor never
  /// triggered).
  std::int64_t floor_hits = 0;
};

struct Canonical {
  double mu;
  double eta;
};

struct Moments {
  double mean;
  double variance;
};

/// Moment -> canonical parametrization: mu = m / sigma2,
/// eta = -1 / (2 sigma2). Requires sigma2 > 0.
Canonical to_canonical(double m, double sigma2);

/// Canonical -> moment parametrization: sigma2 = -1 / (2 eta),
/// m = mu * sigma2. Requires eta < 0.
Moments from_canonical(double mu, double eta);

/// 1 + max_t |y_t|; the relative-tolerance scale used throughout.
double data_scale(std::span<const double> y);

}  // namespace l1seg
