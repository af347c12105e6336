#pragma once

#include "isde/combinatorics.hpp"
#include "isde/scoring.hpp"

#include <vector>

namespace isde {

struct PartitionSolution
{
  FeaturePartition partition;
  //! partition_score(table, partition)
  double score;
};

//! Per-mask DP state, for debugging dumps.
struct DpTrace
{
  int dimension = 0;
  //! best[U]: optimal score over partitions of the feature set U.
  std::vector<double> best;
  //! Block containing the lowest feature of U in that optimum (0 for U = 0).
  std::vector<Mask> first_block;
};

//! Total order used by every solver: higher score first, then more blocks,
//! then the lexicographically smallest canonical form. -infinity ranks below
//! every finite score.
bool partition_preferred(double score_a,
                         const FeaturePartition& a,
                         double score_b,
                         const FeaturePartition& b);

/// Exact maximization of sum_{S in P} table[S] over Part_d^k by dynamic
/// programming over feature masks:
///
///   best[U] = max_{S subset U, lowest(U) in S, |S| <= k} table[S] + best[U\S]
///
/// Requires a complete table and d <= 20.
PartitionSolution solve_dp(const ScoreTable& table, DpTrace* trace = nullptr);

/// Depth-first branch and bound over the same search space, branching on the
/// block that holds the lowest uncovered feature. Requires d <= 24.
///
/// The completion bound for an uncovered set U is sum_{i in U} a_i with
/// a_i = max_{S contains i} table[S] / |S|. It is admissible: any partition Q
/// of U satisfies sum_{S in Q} table[S] = sum_{S in Q} sum_{i in S}
/// table[S]/|S| <= sum_{i in U} a_i, since each i lies in exactly one block.
PartitionSolution solve_branch_and_bound(const ScoreTable& table);

//! Enumerates Part_d^k outright. Requires d <= 12.
PartitionSolution solve_exhaustive(const ScoreTable& table);

} // namespace isde
