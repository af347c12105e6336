#include "isde/isde.hpp"

#include "isde/errors.hpp"
#include "isde/partition_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace isde {

namespace {

std::vector<double>
project(std::span<const double> x, const FeatureSubset& subset)
{
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(subset.size()));
  for (int i : subset.indices())
    out.push_back(x[static_cast<std::size_t>(i)]);
  return out;
}

void
check_point(const IsdeResult& result, std::span<const double> x)
{
  if (static_cast<int>(x.size()) != result.partition.dimension())
    throw StructuralError("point has " + std::to_string(x.size()) +
                          " coordinates, model expects " +
                          std::to_string(result.partition.dimension()));
}

} // namespace

void
IsdeConfig::validate() const
{
  if (k < 1 || k > kMaxPartitionDimension)
    throw ParameterError("k must lie in [1, 20]");
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw ParameterError("split fraction must lie in (0, 1)");
  bandwidth_rule().validate();
  Kernel::from_name(kernel);
}

DataSplit
split_dataset(const DataMatrix& data, const IsdeConfig& config)
{
  config.validate();
  const std::size_t n = data.rows();
  if (n < 4)
    throw ParameterError("ISDE needs at least 4 observations");
  const auto m = static_cast<std::size_t>(
    std::floor(config.split_fraction * static_cast<double>(n)));
  if (m < 2 || m >= n)
    throw ParameterError("split leaves fewer than 2 training or 1 hold-out rows");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  if (config.shuffle) {
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  DataSplit split{ DataMatrix(m, data.cols()), DataMatrix(n - m, data.cols()) };
  for (std::size_t i = 0; i < n; ++i) {
    auto target = i < m ? split.train.row(i) : split.holdout.row(i - m);
    const auto source = data.row(order[i]);
    std::copy(source.begin(), source.end(), target.begin());
  }
  return split;
}

IsdeResult
run_on_split(const DataMatrix& train,
             const DataMatrix& holdout,
             const IsdeConfig& config)
{
  config.validate();
  const int d = static_cast<int>(train.cols());
  if (d < 1 || d > kMaxPartitionDimension)
    throw ParameterError("ISDE supports 1 <= d <= 20");
  if (config.k > d)
    throw ParameterError("k=" + std::to_string(config.k) + " exceeds d=" +
                         std::to_string(d));
  const Kernel kernel = Kernel::from_name(config.kernel);
  auto scored = build_score_table(train, holdout, config.k,
                                  config.bandwidth_rule(), kernel);

  const auto solution = config.solver == SolverKind::branch_and_bound
                          ? solve_branch_and_bound(scored.table)
                          : solve_dp(scored.table);

  std::vector<MirrorKdeModel> models;
  const auto& entries = scored.table.entries();
  for (const auto& block : solution.partition.blocks()) {
    const auto it = std::lower_bound(
      entries.begin(), entries.end(), block.mask(),
      [](const ScoreTable::Entry& e, Mask m) { return e.subset.mask() < m; });
    models.push_back(scored.models[static_cast<std::size_t>(it - entries.begin())]);
  }

  IsdeResult result{ solution.partition, solution.score, std::move(models),
                     std::move(scored.table), config, {} };
  if (solution.score == -std::numeric_limits<double>::infinity())
    result.warnings.push_back(
      "selected partition has a -infinity hold-out score: the estimator "
      "vanishes at some hold-out point");
  return result;
}

IsdeResult
run(const DataMatrix& data, const IsdeConfig& config)
{
  config.validate();
  if (data.cols() < 1 || data.cols() > static_cast<std::size_t>(kMaxPartitionDimension))
    throw ParameterError("ISDE supports 1 <= d <= 20");
  require_unit_cube(data);
  const auto split = split_dataset(data, config);
  return run_on_split(split.train, split.holdout, config);
}

double
evaluate_joint(const IsdeResult& result, std::span<const double> x)
{
  check_point(result, x);
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0))
      return 0.0;
  double value = 1.0;
  for (std::size_t b = 0; b < result.models.size(); ++b)
    value *= result.models[b].evaluate(project(x, result.partition.blocks()[b]));
  return value;
}

double
log_evaluate_joint(const IsdeResult& result, std::span<const double> x)
{
  check_point(result, x);
  double total = 0.0;
  for (std::size_t b = 0; b < result.models.size(); ++b)
    total += result.models[b].log_evaluate(project(x, result.partition.blocks()[b]));
  return total;
}

} // namespace isde
