// l1seg command-line front end: CSV in, JSON result documents out.
// Exit codes: 0 success, 2 unusable input or arguments, 3 solver
// non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "l1seg/core.hpp"
#include "l1seg/io.hpp"
#include "l1seg/joint.hpp"
#include "l1seg/kernels.hpp"
#include "l1seg/multivar.hpp"
#include "l1seg/reference.hpp"
#include "l1seg/segmenter.hpp"
#include "l1seg/synth.hpp"
#include "l1seg/tvdenoise.hpp"
#include "l1seg/variance.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace l1seg;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path == "-" || path.front() == '/') return path;
  const char* dir = std::getenv("L1SEG_OUTPUT_DIR");
  if (!dir || !*dir) return path;
  std::string full(dir);
  if (full.back() != '/') full += '/';
  return full + path;
}

void write_text(const std::string& path, const std::string& text) {
  const std::string resolved = resolve_output_path(path);
  if (resolved.empty() || resolved == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(resolved);
  if (!out) {
    throw InputError(resolved + ": cannot open for writing");
  }
  out << text;
}

json segments_json(const Segmentation& seg, const Segmentation& refit) {
  json arr = json::array();
  for (std::size_t s = 0; s < seg.segment_count(); ++s) {
    arr.push_back(json{{"start", seg.segment_bounds[s].first},
                       {"end", seg.segment_bounds[s].second},
                       {"level", seg.segment_levels[s]},
                       {"refit_level", refit.segment_levels[s]}});
  }
  return arr;
}

json result_document(std::size_t n, double lambda,
                     std::optional<double> lambda_max,
                     const std::vector<double>& levels,
                     const Segmentation& seg, const Segmentation& refit,
                     const SolverReport& report,
                     std::optional<std::uint64_t> seed) {
  json doc;
  doc["n"] = n;
  doc["lambda"] = lambda;
  if (lambda_max) {
    doc["lambda_max"] = *lambda_max;
  } else {
    doc["lambda_max"] = nullptr;
  }
  doc["levels"] = levels;
  doc["changepoints"] = seg.changepoints;
  doc["segments"] = segments_json(seg, refit);
  doc["objective"] = report.objective;
  doc["iterations"] = report.iterations;
  doc["kkt_residual"] = report.kkt_residual;
  doc["solver_name"] = report.solver_name;
  doc["converged"] = report.converged;
  doc["floor_hits"] = report.floor_hits;
  if (seed) doc["seed"] = *seed;
  return doc;
}

void emit_plot(const std::string& path, std::span<const double> y,
               std::span<const double> levels) {
  std::ostringstream out;
  out << "t,y,level\n";
  for (std::size_t t = 0; t < y.size(); ++t) {
    out << (t + 1) << ',' << io::format_double(y[t]) << ','
        << io::format_double(levels[t]) << '\n';
  }
  write_text(path, out.str());
}

Segmentation seg_from_changepoints(const std::vector<std::size_t>& cps,
                                   std::span<const double> levels) {
  Segmentation seg;
  seg.n = levels.size();
  seg.changepoints = cps;
  std::size_t start = 1;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    const std::size_t end = i < cps.size() ? cps[i] : seg.n;
    double acc = 0.0;
    for (std::size_t t = start; t <= end; ++t) acc += levels[t - 1];
    seg.segment_bounds.emplace_back(start, end);
    seg.segment_levels.push_back(acc / static_cast<double>(end - start + 1));
    start = end + 1;
  }
  return seg;
}

// ---- shared option blocks -------------------------------------------------

struct CommonOut {
  std::string output = "-";
  std::string plot;
};

struct LambdaChoice {
  std::optional<double> absolute;
  std::optional<double> relative;

  double resolve(double lambda_max) const {
    if (absolute) return *absolute;
    if (relative) return *relative * lambda_max;
    throw InputError("one of --lambda / --lambda-rel is required");
  }
};

void add_lambda_flags(CLI::App* cmd, LambdaChoice* lc) {
  auto* abs = cmd->add_option("--lambda", lc->absolute,
                              "absolute penalty weight (overrides --lambda-rel)");
  cmd->add_option("--lambda-rel", lc->relative,
                  "penalty as a fraction of lambda_max for this input")
      ->excludes(abs);
}

void add_out_flags(CLI::App* cmd, CommonOut* o) {
  cmd->add_option("-o,--output", o->output,
                  "result file ('-' = stdout; relative paths honor "
                  "L1SEG_OUTPUT_DIR)");
  cmd->add_option("--emit-plot", o->plot, "write a t,y,level table here");
}

// ---- subcommand runners ---------------------------------------------------

int run_mean(const std::string& input, const LambdaChoice& lc,
             const std::string& solver, std::optional<double> delta,
             const CommonOut& out) {
  const io::CsvData data = io::parse_csv_file(input);
  const TimeSeries& y = data.series;
  if (y.dim() != 1) throw InputError("mean: expects a 1-column series");

  std::optional<double> lmax;
  if (y.size() >= 2) lmax = lambda_max_mean(y);
  const double lambda = lc.absolute ? *lc.absolute : lc.resolve(lmax ? *lmax : 0.0);
  if (lc.relative && !lmax) {
    throw InputError("mean: --lambda-rel needs at least two samples");
  }

  PiecewiseConstantSignal levels;
  SolverReport report;
  if (solver == "oracle") {
    levels = oracle_tv1d_dual(y, lambda, 1e-7 * data_scale(y.values()));
    report.solver_name = "tv1d_dual_oracle";
    const auto kkt = kkt_residual_mean(y, levels, lambda);
    report.kkt_residual =
        std::max(kkt.max_interior_violation, kkt.total_sum_violation);
    report.objective =
        0.5 * kernels::dist2(y.values().data(), levels.levels.data(), y.size()) +
        lambda * kernels::tv_seminorm(levels.levels.data(), y.size());
    report.converged = true;
  } else {
    std::tie(levels, report) = solve_mean(y, lambda);
  }

  const Segmentation seg = extract_changepoints(levels, delta);
  const Segmentation refit = refit_segments(y, seg, RefitMode::Mean);
  json doc = result_document(y.size(), lambda, lmax, levels.levels, seg, refit,
                             report, data.seed);
  write_text(out.output, doc.dump(2) + "\n");
  if (!out.plot.empty()) emit_plot(out.plot, y.values(), levels.levels);
  return report.converged ? kExitOk : kExitNoConvergence;
}

TimeSeries winsorize(const TimeSeries& y, double q) {
  std::vector<double> mags(y.values().begin(), y.values().end());
  for (double& v : mags) v = std::fabs(v);
  std::sort(mags.begin(), mags.end());
  const std::size_t idx = std::min<std::size_t>(
      mags.size() - 1,
      static_cast<std::size_t>(std::ceil(q * static_cast<double>(mags.size()))) -
          (q > 0.0 ? 1 : 0));
  const double cap = mags[idx];
  std::vector<double> clipped(y.values().begin(), y.values().end());
  for (double& v : clipped) v = std::min(std::max(v, -cap), cap);
  return TimeSeries(std::move(clipped));
}

int run_var(const std::string& input, const LambdaChoice& lc,
            const std::string& solver, const std::string& center,
            std::optional<double> center_lambda, double center_lambda_rel,
            std::optional<double> winsor_q, std::optional<double> delta,
            const CommonOut& out) {
  const io::CsvData data = io::parse_csv_file(input);
  TimeSeries y = data.series;
  if (y.dim() != 1) throw InputError("var: expects a 1-column series");

  // Optional preprocessing, CLI-only: the library solves the zero-mean
  // problem as stated.
  if (winsor_q) {
    if (!(*winsor_q > 0.0 && *winsor_q <= 1.0)) {
      throw InputError("var: --winsorize quantile must be in (0, 1]");
    }
    y = winsorize(y, *winsor_q);
  }
  if (center == "mean") {
    const double m = empirical_mean(y);
    std::vector<double> c(y.values().begin(), y.values().end());
    for (double& v : c) v -= m;
    y = TimeSeries(std::move(c));
  } else if (center == "tv") {
    const double lam = center_lambda
                           ? *center_lambda
                           : center_lambda_rel * lambda_max_mean(y);
    const auto [m, mrep] = solve_mean(y, lam);
    std::vector<double> c(y.values().begin(), y.values().end());
    for (std::size_t t = 0; t < c.size(); ++t) c[t] -= m.levels[t];
    y = TimeSeries(std::move(c));
  } else if (center != "none") {
    throw InputError("var: --center must be none, mean or tv");
  }

  std::optional<double> lmax;
  if (y.size() >= 2) lmax = lambda_max_variance(y);
  if (lc.relative && !lmax) {
    throw InputError("var: --lambda-rel needs at least two samples");
  }
  const double lambda = lc.absolute ? *lc.absolute : lc.resolve(lmax ? *lmax : 0.0);

  PiecewiseConstantSignal levels;
  SolverReport report;
  SolverOptions opts;
  if (solver == "oracle") {
    std::vector<double> z(y.size());
    kernels::square(y.values().data(), z.data(), y.size());
    const TimeSeries zs(z);
    auto sol = oracle_tv1d_dual(zs, lambda, 1e-7 * data_scale(z));
    levels = PiecewiseConstantSignal{std::move(sol.levels), SignalKind::Variance};
    const double floor = effective_variance_floor(y, opts);
    report.solver_name = "tv1d_dual_oracle_squared";
    report.objective = 0.5 * kernels::dist2(z.data(), levels.levels.data(), z.size());
    for (double& v : levels.levels) {
      if (v < floor) {
        v = floor;
        ++report.floor_hits;
      }
    }
    report.objective =
        0.5 * kernels::dist2(z.data(), levels.levels.data(), z.size()) +
        lambda * kernels::tv_seminorm(levels.levels.data(), z.size());
    report.converged = true;
  } else {
    std::tie(levels, report) = solve_variance(y, lambda, opts);
  }

  const Segmentation seg = extract_changepoints(levels, delta);
  const Segmentation refit = refit_segments(y, seg, RefitMode::Variance, opts);
  json doc = result_document(y.size(), lambda, lmax, levels.levels, seg, refit,
                             report, data.seed);
  doc["centering"] = center;
  if (winsor_q) doc["winsorize"] = *winsor_q;
  write_text(out.output, doc.dump(2) + "\n");
  if (!out.plot.empty()) emit_plot(out.plot, y.values(), levels.levels);
  return report.converged ? kExitOk : kExitNoConvergence;
}

int run_joint(const std::string& input, double lambda1, double lambda2,
              double rho, double tol, std::int64_t max_iter,
              bool find_lambda_max, std::optional<double> delta,
              const CommonOut& out) {
  const io::CsvData data = io::parse_csv_file(input);
  const TimeSeries& y = data.series;
  if (y.dim() != 1) throw InputError("joint: expects a 1-column series");

  SolverOptions opts;
  opts.penalty_parameter = rho;
  opts.tolerance = tol;
  opts.max_iterations = max_iter;

  json doc;
  if (find_lambda_max) {
    // Search-based constancy thresholds; no closed form is available
    // for the coupled problem.
    const double t2 = find_constancy_threshold(y, JointChain::Eta, lambda1, opts);
    const double t1 = find_constancy_threshold(y, JointChain::Mu, lambda2, opts);
    doc["lambda_max_numeric"] = json{{"lambda1", t1}, {"lambda2", t2}};
  }

  const Hyperparams params{lambda1, lambda2};
  const auto [est, report] = solve_joint(y, params, opts);

  const Segmentation seg_m = extract_changepoints(
      PiecewiseConstantSignal{est.m, SignalKind::Mean}, delta);
  const Segmentation seg_v = extract_changepoints(
      PiecewiseConstantSignal{est.sigma2, SignalKind::Variance}, delta);
  std::vector<std::size_t> cps;
  std::merge(seg_m.changepoints.begin(), seg_m.changepoints.end(),
             seg_v.changepoints.begin(), seg_v.changepoints.end(),
             std::back_inserter(cps));
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());

  const Segmentation seg = seg_from_changepoints(cps, est.m);
  const Segmentation refit = refit_segments(y, seg, RefitMode::Mean);

  json base = result_document(y.size(), lambda1, std::nullopt, est.m, seg,
                              refit, report, data.seed);
  for (auto& [key, value] : base.items()) doc[key] = value;
  doc["lambda2"] = lambda2;
  doc["mu"] = est.mu.levels;
  doc["eta"] = est.eta.levels;
  doc["sigma2"] = est.sigma2;
  doc["changepoints_mean"] = seg_m.changepoints;
  doc["changepoints_variance"] = seg_v.changepoints;
  // Per-segment variance refit about the estimated mean path.
  {
    json segs = json::array();
    const Segmentation seg_s2 = seg_from_changepoints(cps, est.sigma2);
    for (std::size_t s = 0; s < seg_s2.segment_count(); ++s) {
      const auto [start, end] = seg_s2.segment_bounds[s];
      double acc = 0.0;
      for (std::size_t t = start; t <= end; ++t) {
        const double r = y[t - 1] - est.m[t - 1];
        acc += r * r;
      }
      segs.push_back(json{{"start", start},
                          {"end", end},
                          {"level", seg_s2.segment_levels[s]},
                          {"refit_level", acc / static_cast<double>(end - start + 1)}});
    }
    doc["segments_sigma2"] = segs;
  }
  write_text(out.output, doc.dump(2) + "\n");
  if (!out.plot.empty()) emit_plot(out.plot, y.values(), est.m);
  return report.converged ? kExitOk : kExitNoConvergence;
}

int run_cov(const std::string& input, double lambda, double tol,
            std::int64_t max_iter, const CommonOut& out) {
  const io::CsvData data = io::parse_csv_file(input);
  const TimeSeries& y = data.series;

  SolverOptions opts;
  opts.tolerance = tol;
  opts.max_iterations = max_iter;
  const auto [fit, report] = solve_cov_fit(y, lambda, opts);

  const std::size_t n = y.size();
  std::vector<double> frob_levels(n);
  for (std::size_t t = 0; t < n; ++t) frob_levels[t] = fit.matrices[t].norm();

  // Changepoints from the Frobenius norm of consecutive differences.
  std::vector<double> diffs(n > 1 ? n - 1 : 0);
  double dmax = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    diffs[k] = (fit.matrices[k + 1] - fit.matrices[k]).norm();
    dmax = std::max(dmax, diffs[k]);
  }
  const double threshold = 1e-6 * (dmax + 1e-300);
  std::vector<std::size_t> cps;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (diffs[k] > threshold) cps.push_back(k + 1);
  }

  Segmentation seg = seg_from_changepoints(cps, frob_levels);
  Segmentation refit = seg;
  for (std::size_t s = 0; s < seg.segment_count(); ++s) {
    const auto [start, end] = seg.segment_bounds[s];
    Eigen::MatrixXd mean_fit = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(y.dim()), static_cast<Eigen::Index>(y.dim()));
    Eigen::MatrixXd mean_raw = mean_fit;
    for (std::size_t t = start; t <= end; ++t) {
      mean_fit += fit.matrices[t - 1];
      Eigen::Map<const Eigen::VectorXd> v(y.sample(t - 1).data(),
                                          static_cast<Eigen::Index>(y.dim()));
      mean_raw += v * v.transpose();
    }
    const double len = static_cast<double>(end - start + 1);
    seg.segment_levels[s] = (mean_fit / len).norm();
    refit.segment_levels[s] = (mean_raw / len).norm();
  }

  json doc = result_document(n, lambda, std::nullopt, frob_levels, seg, refit,
                             report, data.seed);
  doc["dim"] = y.dim();
  json mats = json::array();
  for (const auto& m : fit.matrices) {
    json flat = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
    }
    mats.push_back(flat);
  }
  doc["matrices"] = mats;
  write_text(out.output, doc.dump(2) + "\n");
  return report.converged ? kExitOk : kExitNoConvergence;
}

int run_synth(const std::string& scenario, std::uint64_t seed,
              const std::string& output) {
  if (!is_known_scenario(scenario)) {
    throw InputError("synth: unknown scenario '" + scenario + "'");
  }
  const TimeSeries y = generate_scenario(scenario, seed);
  std::ostringstream out;
  out << "# scenario=" << scenario << " seed=" << seed << " n=" << y.size()
      << "\n";
  io::emit_csv(out, y);
  write_text(output, out.str());
  return kExitOk;
}

int run_lambda_path(const std::string& input, const std::string& problem,
                    int points, double rel_min, double rel_max,
                    const std::string& grid_spec, bool absolute,
                    const CommonOut& out) {
  const io::CsvData data = io::parse_csv_file(input);
  const TimeSeries& y = data.series;
  if (y.dim() != 1) throw InputError("lambda-path: expects a 1-column series");
  if (problem != "mean" && problem != "var") {
    throw InputError("lambda-path: --problem must be mean or var");
  }
  const double lmax =
      problem == "mean" ? lambda_max_mean(y) : lambda_max_variance(y);

  std::vector<double> lambdas;
  if (!grid_spec.empty()) {
    std::string_view rest(grid_spec);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string field(rest.substr(0, comma));
      try {
        const double v = std::stod(field);
        lambdas.push_back(absolute ? v : v * lmax);
        if (!absolute && !(v > 0.0 && v <= 1.0)) {
          throw InputError("lambda-path: relative grid values must be in (0, 1]");
        }
      } catch (const std::invalid_argument&) {
        throw InputError("lambda-path: bad grid value '" + field + "'");
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  } else {
    if (points < 1 || !(rel_min > 0.0) || !(rel_max <= 1.0) ||
        !(rel_min <= rel_max)) {
      throw InputError("lambda-path: need 0 < rel-min <= rel-max <= 1");
    }
    const double lo = std::log(rel_min);
    const double hi = std::log(rel_max);
    for (int i = 0; i < points; ++i) {
      const double f = points == 1 ? 1.0
                                   : static_cast<double>(i) /
                                         static_cast<double>(points - 1);
      lambdas.push_back(std::exp(lo + f * (hi - lo)) * lmax);
    }
  }
  if (lambdas.empty()) {
    throw InputError("lambda-path: empty grid");
  }

  json path = json::array();
  json summary = json::array();
  for (const double lambda : lambdas) {
    PiecewiseConstantSignal levels;
    SolverReport report;
    if (problem == "mean") {
      std::tie(levels, report) = solve_mean(y, lambda);
    } else {
      std::tie(levels, report) = solve_variance(y, lambda);
    }
    const Segmentation seg = extract_changepoints(levels);
    const Segmentation refit = refit_segments(
        y, seg, problem == "mean" ? RefitMode::Mean : RefitMode::Variance);
    path.push_back(result_document(y.size(), lambda, lmax, levels.levels, seg,
                                   refit, report, data.seed));
    summary.push_back(json{{"lambda", lambda},
                           {"changepoints", seg.changepoints.size()},
                           {"objective", report.objective}});
  }

  json doc;
  doc["problem"] = problem;
  doc["n"] = y.size();
  doc["lambda_max"] = lmax;
  doc["summary"] = summary;
  doc["path"] = path;
  write_text(out.output, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1-regularized piecewise-constant mean/variance segmentation"};
  app.require_subcommand(1);
  int rc = kExitOk;

  // mean
  auto* mean_cmd = app.add_subcommand("mean", "fused-lasso mean filtering");
  std::string mean_input = "-";
  LambdaChoice mean_lambda;
  std::string mean_solver = "dp";
  std::optional<double> mean_delta;
  CommonOut mean_out;
  mean_cmd->add_option("input", mean_input, "CSV file or '-' for stdin");
  add_lambda_flags(mean_cmd, &mean_lambda);
  mean_cmd->add_option("--solver", mean_solver, "dp (default) or oracle")
      ->check(CLI::IsMember({"dp", "oracle"}));
  mean_cmd->add_option("--delta", mean_delta, "changepoint detection threshold");
  add_out_flags(mean_cmd, &mean_out);
  mean_cmd->callback([&] {
    rc = run_mean(mean_input, mean_lambda, mean_solver, mean_delta, mean_out);
  });

  // var
  auto* var_cmd = app.add_subcommand("var", "variance segmentation");
  std::string var_input = "-";
  LambdaChoice var_lambda;
  std::string var_solver = "dp";
  std::string var_center = "none";
  std::optional<double> var_center_lambda;
  double var_center_rel = 0.1;
  std::optional<double> var_winsor;
  std::optional<double> var_delta;
  CommonOut var_out;
  var_cmd->add_option("input", var_input, "CSV file or '-' for stdin");
  add_lambda_flags(var_cmd, &var_lambda);
  var_cmd->add_option("--solver", var_solver, "dp (default) or oracle")
      ->check(CLI::IsMember({"dp", "oracle"}));
  var_cmd->add_option("--center", var_center,
                      "none (default), mean, or tv (solve_mean pre-pass)");
  var_cmd->add_option("--center-lambda", var_center_lambda,
                      "absolute lambda for the tv centering pre-pass");
  var_cmd->add_option("--center-lambda-rel", var_center_rel,
                      "relative lambda for the tv pre-pass (default 0.1)");
  var_cmd->add_option("--winsorize", var_winsor,
                      "clip |y| at this quantile before squaring");
  var_cmd->add_option("--delta", var_delta, "changepoint detection threshold");
  add_out_flags(var_cmd, &var_out);
  var_cmd->callback([&] {
    rc = run_var(var_input, var_lambda, var_solver, var_center,
                 var_center_lambda, var_center_rel, var_winsor, var_delta,
                 var_out);
  });

  // joint
  auto* joint_cmd =
      app.add_subcommand("joint", "coupled mean+variance estimation");
  std::string joint_input = "-";
  double joint_l1 = 0.0, joint_l2 = 0.0;
  double joint_rho = 1.0, joint_tol = 1e-8;
  std::int64_t joint_max_iter = 10000;
  bool joint_find_max = false;
  std::optional<double> joint_delta;
  CommonOut joint_out;
  joint_cmd->add_option("input", joint_input, "CSV file or '-' for stdin");
  joint_cmd->add_option("--lambda1", joint_l1, "mean-chain penalty")->required();
  joint_cmd->add_option("--lambda2", joint_l2, "variance-chain penalty")
      ->required();
  joint_cmd->add_option("--rho", joint_rho, "ADMM penalty parameter");
  joint_cmd->add_option("--tol", joint_tol, "relative KKT tolerance");
  joint_cmd->add_option("--max-iter", joint_max_iter, "ADMM iteration cap");
  joint_cmd->add_flag("--find-lambda-max", joint_find_max,
                      "bisect for numeric constancy thresholds (no closed "
                      "form exists)");
  joint_cmd->add_option("--delta", joint_delta, "changepoint threshold");
  add_out_flags(joint_cmd, &joint_out);
  joint_cmd->callback([&] {
    rc = run_joint(joint_input, joint_l1, joint_l2, joint_rho, joint_tol,
                   joint_max_iter, joint_find_max, joint_delta, joint_out);
  });

  // cov
  auto* cov_cmd =
      app.add_subcommand("cov", "covariance-path fitting (n-column CSV)");
  std::string cov_input = "-";
  double cov_lambda = 0.0, cov_tol = 1e-8;
  std::int64_t cov_max_iter = 10000;
  CommonOut cov_out;
  cov_cmd->add_option("input", cov_input, "CSV file or '-' for stdin");
  cov_cmd->add_option("--lambda", cov_lambda, "TV penalty weight")->required();
  cov_cmd->add_option("--tol", cov_tol, "relative residual tolerance");
  cov_cmd->add_option("--max-iter", cov_max_iter, "ADMM iteration cap");
  cov_cmd->add_option("-o,--output", cov_out.output, "result file");
  cov_cmd->callback([&] {
    rc = run_cov(cov_input, cov_lambda, cov_tol, cov_max_iter, cov_out);
  });

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic data");
  std::string synth_scenario;
  std::uint64_t synth_seed = 0;
  std::string synth_output = "-";
  synth_cmd
      ->add_option("--scenario", synth_scenario,
                   "paper4, mean-steps, or joint-steps")
      ->required();
  synth_cmd->add_option("--seed", synth_seed, "64-bit generator seed");
  synth_cmd->add_option("-o,--output", synth_output, "data file or '-'");
  synth_cmd->callback(
      [&] { rc = run_synth(synth_scenario, synth_seed, synth_output); });

  // lambda-path
  auto* path_cmd =
      app.add_subcommand("lambda-path", "sweep a grid of penalties");
  std::string path_input = "-";
  std::string path_problem = "var";
  int path_points = 20;
  double path_rel_min = 0.01, path_rel_max = 1.0;
  std::string path_grid;
  bool path_absolute = false;
  CommonOut path_out;
  path_cmd->add_option("input", path_input, "CSV file or '-' for stdin");
  path_cmd->add_option("--problem", path_problem, "mean or var");
  path_cmd->add_option("--points", path_points, "grid size (default 20)");
  path_cmd->add_option("--rel-min", path_rel_min, "smallest relative lambda");
  path_cmd->add_option("--rel-max", path_rel_max, "largest relative lambda");
  path_cmd->add_option("--grid", path_grid, "explicit comma-separated grid");
  path_cmd->add_flag("--absolute", path_absolute,
                     "treat --grid values as absolute penalties");
  path_cmd->add_option("-o,--output", path_out.output, "result file");
  path_cmd->callback([&] {
    rc = run_lambda_path(path_input, path_problem, path_points, path_rel_min,
                         path_rel_max, path_grid, path_absolute, path_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return rc;
}
