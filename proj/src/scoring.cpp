#include "isde/scoring.hpp"

#include "isde/errors.hpp"
#include "isde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isde {

namespace {

void
check_splits(const DataMatrix& train, const DataMatrix& holdout, int k)
{
  if (train.empty() || holdout.empty())
    throw ParameterError("both the training and hold-out splits must be nonempty");
  if (train.cols() != holdout.cols())
    throw StructuralError("training and hold-out splits differ in dimension");
  const int d = static_cast<int>(train.cols());
  if (d < 1 || d > kMaxSubsetDimension)
    throw ParameterError("dimension outside [1, 24]");
  if (k < 1 || k > d)
    throw ParameterError("block size cap k outside [1, d]");
  require_unit_cube(train);
  require_unit_cube(holdout);
}

template<class Evaluate>
double
mean_log_density(const MirrorKdeModel& model,
                 const DataMatrix& holdout,
                 Evaluate&& evaluate)
{
  const auto columns = model.subset().indices();
  std::vector<double> point(columns.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < holdout.rows(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      point[j] = holdout(i, static_cast<std::size_t>(columns[j]));
    const double v = evaluate(point);
    if (!(v > 0.0))
      return -std::numeric_limits<double>::infinity();
    sum += std::log(v);
  }
  return sum / static_cast<double>(holdout.rows());
}

void
check_holdout(const MirrorKdeModel& model, const DataMatrix& holdout)
{
  if (holdout.empty())
    throw ParameterError("hold-out split is empty");
  if (holdout.cols() != static_cast<std::size_t>(model.subset().dimension()))
    throw StructuralError("hold-out dimension does not match the model's d");
  require_unit_cube(holdout);
}

ScoredModels
assemble(int d,
         int k,
         const DataMatrix& train,
         const DataMatrix& holdout,
         std::vector<FeatureSubset> subsets,
         std::vector<std::optional<MirrorKdeModel>> models,
         std::vector<double> scores)
{
  std::vector<ScoreTable::Entry> entries;
  std::vector<MirrorKdeModel> fitted;
  entries.reserve(subsets.size());
  fitted.reserve(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    entries.push_back({ subsets[i], scores[i] });
    fitted.push_back(std::move(*models[i]));
  }
  return { ScoreTable(d, k, holdout.rows(), train.rows(), std::move(entries)),
           std::move(fitted) };
}

} // namespace

ScoreTable::ScoreTable(int d,
                       int k,
                       std::size_t holdout_count,
                       std::size_t train_count,
                       std::vector<Entry> entries)
  : d_(d)
  , k_(k)
  , holdout_count_(holdout_count)
  , train_count_(train_count)
  , entries_(std::move(entries))
{
  if (d < 1 || d > kMaxSubsetDimension)
    throw ParameterError("score table dimension outside [1, 24]");
  if (k < 1 || k > d)
    throw ParameterError("score table block cap k outside [1, d]");
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.subset.mask() < b.subset.mask();
  });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.subset.dimension() != d)
      throw StructuralError("score table entry has the wrong dimension");
    if (e.subset.size() > k)
      throw StructuralError("score table entry {" + e.subset.key() +
                            "} exceeds the block cap");
    if (std::isnan(e.score) || e.score == std::numeric_limits<double>::infinity())
      throw StructuralError("score for {" + e.subset.key() +
                            "} must be finite or -infinity");
    if (i > 0 && entries_[i - 1].subset == e.subset)
      throw StructuralError("duplicate score table entry {" + e.subset.key() + "}");
  }
}

std::optional<double>
ScoreTable::find(Mask mask) const
{
  const auto it = std::lower_bound(
    entries_.begin(), entries_.end(), mask,
    [](const Entry& e, Mask m) { return e.subset.mask() < m; });
  if (it == entries_.end() || it->subset.mask() != mask)
    return std::nullopt;
  return it->score;
}

double
ScoreTable::score(Mask mask) const
{
  if (auto s = find(mask))
    return *s;
  throw StructuralError("score table has no entry for mask " + std::to_string(mask));
}

bool
ScoreTable::is_complete() const
{
  return d_ >= 1 && entries_.size() == count_subsets(d_, k_);
}

ScoreTable
ScoreTable::transformed(double factor, double offset) const
{
  auto entries = entries_;
  for (auto& e : entries)
    e.score = e.score * factor + offset;
  return ScoreTable(d_, k_, holdout_count_, train_count_, std::move(entries));
}

double
score_subset(const MirrorKdeModel& model, const DataMatrix& holdout)
{
  check_holdout(model, holdout);
  return mean_log_density(model, holdout, [&](std::span<const double> x) {
    return model.evaluate(x);
  });
}

ScoredModels
build_score_table(const DataMatrix& train,
                  const DataMatrix& holdout,
                  int k,
                  const BandwidthRule& rule,
                  const Kernel& kernel)
{
  check_splits(train, holdout, k);
  rule.validate();
  const int d = static_cast<int>(train.cols());
  auto subsets = enumerate_subsets(d, k);
  const auto count = static_cast<std::ptrdiff_t>(subsets.size());
  std::vector<std::optional<MirrorKdeModel>> models(subsets.size());
  std::vector<double> scores(subsets.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    models[idx].emplace(fit(train, subsets[idx], rule, kernel));
    scores[idx] = mean_log_density(*models[idx], holdout, [&](std::span<const double> x) {
      return models[idx]->evaluate(x);
    });
  }
  return assemble(d, k, train, holdout, std::move(subsets), std::move(models),
                  std::move(scores));
}

ScoredModels
build_score_table_serial(const DataMatrix& train,
                         const DataMatrix& holdout,
                         int k,
                         const BandwidthRule& rule,
                         const Kernel& kernel)
{
  check_splits(train, holdout, k);
  rule.validate();
  const int d = static_cast<int>(train.cols());
  auto subsets = enumerate_subsets(d, k);
  std::vector<std::optional<MirrorKdeModel>> models(subsets.size());
  std::vector<double> scores(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    models[i].emplace(fit(train, subsets[i], rule, kernel));
    scores[i] = mean_log_density(*models[i], holdout, [&](std::span<const double> x) {
      return models[i]->evaluate_reference(x);
    });
  }
  return assemble(d, k, train, holdout, std::move(subsets), std::move(models),
                  std::move(scores));
}

double
partition_score(const ScoreTable& table, const FeaturePartition& partition)
{
  if (partition.dimension() != table.dimension())
    throw StructuralError("partition and score table differ in dimension");
  double total = 0.0;
  for (const auto& block : partition.blocks())
    total += table.score(block);
  return total;
}

} // namespace isde
