#include "isde/diagnostics.hpp"

#include "isde/errors.hpp"
#include "isde/parallel.hpp"
#include "isde/partition_solver.hpp"
#include "isde/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isde {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxDiagnosticDimension = 10;

std::vector<double>
project(std::span<const double> x, const std::vector<int>& idx)
{
  std::vector<double> out(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    out[j] = x[static_cast<std::size_t>(idx[j])];
  return out;
}

double
finite_mean_or_neg_inf(const std::vector<double>& values)
{
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v))
      return kNegInf;
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

} // namespace

MonteCarloEstimate
mean_with_error(std::span<const double> values)
{
  MonteCarloEstimate out;
  out.used = values.size();
  if (values.empty())
    return out;
  double sum = 0.0;
  for (double v : values)
    sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  out.estimate = mean;
  if (values.size() > 1)
    out.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                              static_cast<double>(values.size()));
  return out;
}

MonteCarloEstimate
monte_carlo_kl(const Sampler& sample_truth,
               const LogDensity& log_truth,
               const LogDensity& log_estimate,
               std::size_t n_mc,
               std::uint64_t seed)
{
  if (n_mc < 100)
    throw ParameterError("Monte Carlo KL needs at least 100 draws");
  const DataMatrix draws = sample_truth(n_mc, seed);
  std::vector<double> log_ratio(draws.rows());
  const auto n = static_cast<std::ptrdiff_t>(draws.rows());
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto x = draws.row(static_cast<std::size_t>(i));
    log_ratio[static_cast<std::size_t>(i)] = log_truth(x) - log_estimate(x);
  }
  std::vector<double> finite;
  finite.reserve(log_ratio.size());
  for (double v : log_ratio)
    if (std::isfinite(v))
      finite.push_back(v);
  auto out = mean_with_error(finite);
  out.infinite_count = log_ratio.size() - finite.size();
  out.flagged = out.infinite_count > 0;
  return out;
}

MonteCarloEstimate
monte_carlo_kl(const Truth& truth,
               const LogDensity& log_estimate,
               std::size_t n_mc,
               std::uint64_t seed)
{
  return monte_carlo_kl(
    [&](std::size_t n, std::uint64_t s) { return truth.sample(n, s); },
    [&](std::span<const double> x) { return truth.log_density(x); },
    log_estimate, n_mc, seed);
}

RiskReport
risk_decomposition_report(const Truth& truth,
                          const IsdeConfig& config,
                          std::size_t n_data,
                          std::size_t n_mc,
                          std::uint64_t seed)
{
  config.validate();
  const int d = truth.dimension();
  if (d > kMaxDiagnosticDimension)
    throw ParameterError("risk decomposition searches Part_d^k exhaustively; "
                         "d must be at most 10");
  if (config.k > d)
    throw ParameterError("k exceeds the truth's dimension");
  if (n_mc < 100)
    throw ParameterError("risk decomposition needs at least 100 Monte Carlo draws");

  const DataMatrix data = truth.sample(n_data, seed);
  const DataSplit split = split_dataset(data, config);
  const Kernel kernel = Kernel::from_name(config.kernel);
  const ScoredModels scored = build_score_table(
    split.train, split.holdout, config.k, config.bandwidth_rule(), kernel);
  const ScoreTable& table = scored.table;
  const auto hat = solve_dp(table);

  // Expectations under f over fresh draws, from an independent stream.
  const DataMatrix draws = truth.sample(n_mc, seed ^ 0x9e3779b97f4a7c15ULL);
  const auto& entries = table.entries();
  const std::size_t n_subsets = entries.size();
  std::vector<std::vector<double>> log_fhat(n_subsets, std::vector<double>(n_mc));
  std::vector<std::vector<double>> log_f(n_subsets, std::vector<double>(n_mc));
  std::vector<double> log_joint(n_mc);

  const auto subset_count = static_cast<std::ptrdiff_t>(n_subsets);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (std::ptrdiff_t j = 0; j < subset_count; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const auto& subset = entries[sj].subset;
    const auto idx = subset.indices();
    for (std::size_t i = 0; i < n_mc; ++i) {
      const auto x = project(draws.row(i), idx);
      log_fhat[sj][i] = scored.models[sj].log_evaluate(x);
      log_f[sj][i] = truth.log_marginal_density(subset, x);
    }
  }
  for (std::size_t i = 0; i < n_mc; ++i)
    log_joint[i] = truth.log_density(draws.row(i));

  auto index_of = [&](const FeatureSubset& s) {
    const auto it = std::lower_bound(
      entries.begin(), entries.end(), s.mask(),
      [](const ScoreTable::Entry& e, Mask m) { return e.subset.mask() < m; });
    return static_cast<std::size_t>(it - entries.begin());
  };

  // P~ maximizes P[log fhat_P].
  std::vector<ScoreTable::Entry> expected_fhat;
  std::vector<ScoreTable::Entry> expected_f;
  for (std::size_t j = 0; j < n_subsets; ++j) {
    expected_fhat.push_back({ entries[j].subset, finite_mean_or_neg_inf(log_fhat[j]) });
    expected_f.push_back({ entries[j].subset, finite_mean_or_neg_inf(log_f[j]) });
  }
  const ScoreTable fhat_table(d, config.k, n_mc, table.train_count(), expected_fhat);
  const auto tilde = solve_exhaustive(fhat_table);

  // P* minimizes KL(f || f_P).
  RiskReport report{ hat.partition, tilde.partition, hat.partition };
  const auto all = enumerate_partitions(d, config.k);
  if (truth.projection_kl(all.front())) {
    report.bias_exact = true;
    double best = -*truth.projection_kl(all.front());
    report.partition_star = all.front();
    for (std::size_t i = 1; i < all.size(); ++i) {
      const double s = -*truth.projection_kl(all[i]);
      if (partition_preferred(s, all[i], best, report.partition_star)) {
        best = s;
        report.partition_star = all[i];
      }
    }
    report.bias = std::max(0.0, -best);
  } else {
    const ScoreTable f_table(d, config.k, n_mc, table.train_count(), expected_f);
    report.partition_star = solve_exhaustive(f_table).partition;
  }

  auto block_sum = [&](const FeaturePartition& p,
                       const std::vector<std::vector<double>>& values,
                       std::size_t i) {
    double s = 0.0;
    for (const auto& b : p.blocks())
      s += values[index_of(b)][i];
    return s;
  };

  double holdout_part = 0.0;
  for (const auto& b : report.partition_tilde.blocks())
    holdout_part += table.score(b);
  for (const auto& b : report.partition_hat.blocks())
    holdout_part -= table.score(b);

  std::vector<double> risk, approx, select, bias, gap;
  for (std::size_t i = 0; i < n_mc; ++i) {
    const double fhat_hat = block_sum(report.partition_hat, log_fhat, i);
    const double fhat_tilde = block_sum(report.partition_tilde, log_fhat, i);
    const double fhat_star = block_sum(report.partition_star, log_fhat, i);
    const double f_star = block_sum(report.partition_star, log_f, i);
    const double values[] = { log_joint[i], fhat_hat, fhat_tilde, fhat_star, f_star };
    if (!std::all_of(std::begin(values), std::end(values),
                     [](double v) { return std::isfinite(v); })) {
      ++report.excluded_draws;
      continue;
    }
    risk.push_back(log_joint[i] - fhat_hat);
    approx.push_back(f_star - fhat_star);
    select.push_back(fhat_tilde - fhat_hat);
    bias.push_back(log_joint[i] - f_star);
    double g = risk.back() - approx.back() - select.back();
    if (!report.bias_exact)
      g -= bias.back();
    gap.push_back(g);
  }

  report.n_mc = n_mc;
  report.train_count = split.train.rows();
  report.holdout_count = split.holdout.rows();
  if (gap.size() < 2)
    throw ParameterError("too few Monte Carlo draws with finite log densities");

  report.risk = mean_with_error(risk);
  report.approximation = mean_with_error(approx);
  report.selection = mean_with_error(select);
  report.selection.estimate -= holdout_part;
  if (!report.bias_exact)
    report.bias = mean_with_error(bias).estimate;
  report.combined_std_error = mean_with_error(gap).std_error;
  for (auto* e : { &report.risk, &report.approximation, &report.selection }) {
    e->infinite_count = report.excluded_draws;
    e->flagged = report.excluded_draws > 0;
  }
  report.slack = report.bias + report.approximation.estimate +
                 report.selection.estimate - report.risk.estimate;
  report.inequality_holds = report.slack >= -3.0 * report.combined_std_error;
  if (report.excluded_draws > 0)
    report.warnings.push_back(std::to_string(report.excluded_draws) +
                              " Monte Carlo draws had an infinite log density "
                              "and were excluded");
  return report;
}

double
estimate_bounding_constant(const std::vector<MirrorKdeModel>& models,
                           int points_per_axis)
{
  if (points_per_axis < 1)
    throw ParameterError("grid needs at least one point per axis");
  double a = 0.0;
  for (const auto& model : models) {
    const int p = model.dimension();
    // Keep the grid below ~1e5 points.
    int per_axis = points_per_axis;
    while (per_axis > 2 && std::pow(per_axis, p) > 1e5)
      --per_axis;
    std::vector<int> digit(static_cast<std::size_t>(p), 0);
    std::vector<double> x(static_cast<std::size_t>(p));
    while (true) {
      for (int k = 0; k < p; ++k)
        x[k] = (digit[k] + 0.5) / per_axis;
      const double v = model.log_evaluate(x);
      if (!std::isfinite(v))
        return std::numeric_limits<double>::infinity();
      a = std::max(a, std::fabs(v) / p);
      int k = p;
      while (k > 0 && ++digit[k - 1] == per_axis) {
        digit[k - 1] = 0;
        --k;
      }
      if (k == 0)
        break;
    }
  }
  return a;
}

} // namespace isde
