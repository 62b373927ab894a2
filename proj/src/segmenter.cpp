#include "l1seg/segmenter.hpp"

#include <cmath>
#include <limits>

#include "l1seg/kernels.hpp"
#include "l1seg/variance.hpp"

namespace l1seg {

Segmentation extract_changepoints(const PiecewiseConstantSignal& levels,
                                  std::optional<double> delta) {
  const auto& x = levels.levels;
  const std::size_t n = x.size();
  if (n == 0) {
    throw InputError("extract_changepoints: empty signal");
  }
  double threshold;
  if (delta) {
    if (!(*delta >= 0.0)) {
      throw std::domain_error("extract_changepoints: delta must be >= 0");
    }
    threshold = *delta;
  } else {
    double lo, hi;
    kernels::min_max(x.data(), n, &lo, &hi);
    const double eps_scale =
        std::numeric_limits<double>::epsilon() * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
    threshold = 1e-6 * (hi - lo + eps_scale);
  }

  Segmentation seg;
  seg.n = n;
  std::size_t start = 1;  // 1-based
  double acc = x[0];
  std::size_t count = 1;
  for (std::size_t t = 1; t < n; ++t) {
    if (std::fabs(x[t] - x[t - 1]) > threshold) {
      seg.changepoints.push_back(t);  // change between samples t and t+1
      seg.segment_bounds.emplace_back(start, t);
      seg.segment_levels.push_back(acc / static_cast<double>(count));
      start = t + 1;
      acc = 0.0;
      count = 0;
    }
    acc += x[t];
    ++count;
  }
  seg.segment_bounds.emplace_back(start, n);
  seg.segment_levels.push_back(acc / static_cast<double>(count));
  return seg;
}

Segmentation refit_segments(const TimeSeries& y, const Segmentation& seg,
                            RefitMode mode, const SolverOptions& opts) {
  const auto yv = y.values();
  if (seg.n != yv.size()) {
    throw InputError("refit_segments: segmentation length mismatch");
  }
  seg.validate();
  const double floor =
      mode == RefitMode::Variance ? effective_variance_floor(y, opts) : 0.0;

  Segmentation out = seg;
  for (std::size_t s = 0; s < seg.segment_count(); ++s) {
    const auto [start, end] = seg.segment_bounds[s];
    const double* chunk = yv.data() + (start - 1);
    const std::size_t len = end - start + 1;
    double level;
    if (mode == RefitMode::Mean) {
      level = kernels::sum(chunk, len) / static_cast<double>(len);
    } else {
      level = kernels::dot(chunk, chunk, len) / static_cast<double>(len);
      level = std::max(level, floor);
    }
    out.segment_levels[s] = level;
  }
  return out;
}

}  // namespace l1seg
