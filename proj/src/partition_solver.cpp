#include "isde/partition_solver.hpp"

#include "isde/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace isde {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void
require_complete(const ScoreTable& table, int cap)
{
  const int d = table.dimension();
  if (d < 1 || d > cap)
    throw ParameterError("solver supports 1 <= d <= " + std::to_string(cap) +
                         ", got d=" + std::to_string(d));
  if (!table.is_complete())
    throw StructuralError("score table is missing entries of Set_d^k");
}

// Calls visit(S) for every S with lowest(U) in S, S subset of U, |S| <= k.
template<class Visit>
void
for_each_block(Mask universe, int k, Visit&& visit)
{
  const Mask low = universe & (~universe + 1);
  const Mask rest = universe ^ low;
  if (std::popcount(rest) <= k - 1) {
    // Every submask of rest, including the empty one.
    Mask t = rest;
    while (true) {
      visit(low | t);
      if (t == 0)
        break;
      t = (t - 1) & rest;
    }
    return;
  }
  int elems[32];
  int n = 0;
  for (Mask m = rest; m != 0; m &= m - 1)
    elems[n++] = std::countr_zero(m);
  // Depth-first over combinations of at most k-1 extra features.
  auto extend = [&](auto&& self, int start, int picked, Mask acc) -> void {
    visit(low | acc);
    if (picked == k - 1)
      return;
    for (int i = start; i < n; ++i)
      self(self, i + 1, picked + 1, acc | (Mask{ 1 } << elems[i]));
  };
  extend(extend, 0, 0, 0);
}

std::vector<double>
dense_scores(const ScoreTable& table)
{
  std::vector<double> dense(std::size_t{ 1 } << table.dimension(),
                            std::numeric_limits<double>::quiet_NaN());
  for (const auto& e : table.entries())
    dense[e.subset.mask()] = e.score;
  return dense;
}

// Lexicographic order on canonical block sequences.
bool
blocks_less(const std::vector<Mask>& a, const std::vector<Mask>& b)
{
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i])
      return index_list_less(a[i], b[i]);
  }
  return a.size() < b.size();
}

std::vector<Mask>
masks_of(const FeaturePartition& p)
{
  std::vector<Mask> out;
  out.reserve(p.block_count());
  for (const auto& b : p.blocks())
    out.push_back(b.mask());
  return out;
}

bool
preferred(double score_a,
          const std::vector<Mask>& a,
          double score_b,
          const std::vector<Mask>& b)
{
  if (score_a != score_b)
    return score_a > score_b;
  if (a.size() != b.size())
    return a.size() > b.size();
  return blocks_less(a, b);
}

FeaturePartition
to_partition(const std::vector<Mask>& masks, int d)
{
  std::vector<FeatureSubset> blocks;
  blocks.reserve(masks.size());
  for (Mask m : masks)
    blocks.emplace_back(m, d);
  return FeaturePartition(std::move(blocks), d);
}

class BranchAndBound
{
public:
  explicit BranchAndBound(const ScoreTable& table)
    : table_(table)
    , d_(table.dimension())
    , k_(table.max_block_size())
    , amortized_(static_cast<std::size_t>(d_), kNegInf)
  {
    for (const auto& e : table.entries()) {
      const double share = e.score / e.subset.size();
      for (int i : e.subset.indices())
        amortized_[i] = std::max(amortized_[i], share);
    }
    const auto singles = singleton_partition(d_);
    incumbent_ = masks_of(singles);
    incumbent_score_ = 0.0;
    for (Mask m : incumbent_)
      incumbent_score_ += table_.score(m);
  }

  PartitionSolution solve()
  {
    std::vector<Mask> blocks;
    const Mask full = d_ == 32 ? ~Mask{ 0 } : (Mask{ 1 } << d_) - 1;
    search(full, 0.0, blocks);
    auto partition = to_partition(incumbent_, d_);
    return { partition, partition_score(table_, partition) };
  }

private:
  double bound(Mask uncovered) const
  {
    double b = 0.0;
    for (Mask m = uncovered; m != 0; m &= m - 1)
      b += amortized_[std::countr_zero(m)];
    return b;
  }

  bool pruned(double optimistic) const
  {
    if (std::isinf(incumbent_score_))
      return optimistic < incumbent_score_;
    const double slack = 1e-9 * (1.0 + std::fabs(incumbent_score_));
    return optimistic < incumbent_score_ - slack;
  }

  void search(Mask uncovered, double score, std::vector<Mask>& blocks)
  {
    if (uncovered == 0) {
      if (preferred(score, blocks, incumbent_score_, incumbent_)) {
        incumbent_ = blocks;
        incumbent_score_ = score;
      }
      return;
    }
    if (pruned(score + bound(uncovered)))
      return;

    struct Candidate
    {
      Mask block;
      double score;
      double priority;
    };
    std::vector<Candidate> candidates;
    for_each_block(uncovered, k_, [&](Mask s) {
      const double v = table_.score(s);
      candidates.push_back({ s, v, v + bound(uncovered ^ s) });
    });
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.priority > b.priority;
                     });
    for (const auto& c : candidates) {
      if (pruned(score + c.priority))
        continue;
      blocks.push_back(c.block);
      search(uncovered ^ c.block, score + c.score, blocks);
      blocks.pop_back();
    }
  }

  const ScoreTable& table_;
  int d_;
  int k_;
  std::vector<double> amortized_;
  std::vector<Mask> incumbent_;
  double incumbent_score_;
};

} // namespace

bool
partition_preferred(double score_a,
                    const FeaturePartition& a,
                    double score_b,
                    const FeaturePartition& b)
{
  return preferred(score_a, masks_of(a), score_b, masks_of(b));
}

PartitionSolution
solve_dp(const ScoreTable& table, DpTrace* trace)
{
  require_complete(table, kMaxPartitionDimension);
  const int d = table.dimension();
  const int k = table.max_block_size();
  const auto score = dense_scores(table);
  const std::size_t states = std::size_t{ 1 } << d;

  std::vector<double> best(states, kNegInf);
  std::vector<int> block_count(states, 0);
  std::vector<Mask> first(states, 0);
  best[0] = 0.0;

  for (std::size_t u = 1; u < states; ++u) {
    const auto universe = static_cast<Mask>(u);
    bool have = false;
    for_each_block(universe, k, [&](Mask s) {
      const Mask rest = universe ^ s;
      const double cand = score[s] + best[rest];
      const int blocks = 1 + block_count[rest];
      bool take = !have;
      if (!take) {
        if (cand != best[u])
          take = cand > best[u];
        else if (blocks != block_count[u])
          take = blocks > block_count[u];
        else
          take = index_list_less(s, first[u]);
      }
      if (take) {
        best[u] = cand;
        block_count[u] = blocks;
        first[u] = s;
        have = true;
      }
    });
  }

  std::vector<FeatureSubset> blocks;
  for (Mask u = static_cast<Mask>(states - 1); u != 0; u ^= first[u])
    blocks.emplace_back(first[u], d);
  FeaturePartition partition(std::move(blocks), d);

  if (trace) {
    trace->dimension = d;
    trace->best = std::move(best);
    trace->first_block = std::move(first);
  }
  return { partition, partition_score(table, partition) };
}

PartitionSolution
solve_branch_and_bound(const ScoreTable& table)
{
  require_complete(table, kMaxSubsetDimension);
  return BranchAndBound(table).solve();
}

PartitionSolution
solve_exhaustive(const ScoreTable& table)
{
  require_complete(table, 12);
  const auto all = enumerate_partitions(table.dimension(), table.max_block_size());
  std::size_t best = 0;
  double best_score = partition_score(table, all[0]);
  for (std::size_t i = 1; i < all.size(); ++i) {
    const double s = partition_score(table, all[i]);
    if (partition_preferred(s, all[i], best_score, all[best])) {
      best = i;
      best_score = s;
    }
  }
  return { all[best], best_score };
}

} // namespace isde
