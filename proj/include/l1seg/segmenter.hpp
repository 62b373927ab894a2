#pragma once

#include <optional>

#include "l1seg/core.hpp"

namespace l1seg {

enum class RefitMode { Mean, Variance };

/// Turns a per-sample level sequence into an explicit segmentation: a
/// changepoint at k (1-based) whenever |level_{k+1} - level_k| > delta.
/// Each segment's level is the arithmetic mean of its member levels.
/// When delta is not given it defaults to
///   1e-6 * (max level - min level + eps_scale),
/// which separates genuine jumps from the float dust between
/// numerically equal plateaus.
Segmentation extract_changepoints(const PiecewiseConstantSignal& levels,
                                  std::optional<double> delta = std::nullopt);

/// Replaces each segment level with the empirical statistic of the raw
/// data over that segment: the mean of y (RefitMode::Mean) or the mean
/// of y^2 floored at the variance floor (RefitMode::Variance). Removes
/// the shrinkage pull of the penalty from the reported levels.
Segmentation refit_segments(const TimeSeries& y, const Segmentation& seg,
                            RefitMode mode,
                            const SolverOptions& opts = SolverOptions{});

}  // namespace l1seg
