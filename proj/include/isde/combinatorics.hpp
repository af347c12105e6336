#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace isde {

using Mask = std::uint32_t;

//! Largest d accepted by subset enumeration and the branch-and-bound solver.
inline constexpr int kMaxSubsetDimension = 24;
//! Largest d accepted by the DP solver and partition counting (2^d tables).
inline constexpr int kMaxPartitionDimension = 20;

//! Nonempty subset of the features {0, ..., d-1}, stored as a bitmask.
//! Externally (JSON, CLI) features are 1-based.
class FeatureSubset
{
public:
  FeatureSubset(Mask mask, int dimension);

  //! From 1-based feature indices.
  static FeatureSubset from_indices(std::span<const int> one_based,
                                    int dimension);

  Mask mask() const { return mask_; }
  int dimension() const { return dimension_; }
  int size() const;
  bool contains(int feature) const { return (mask_ >> feature) & 1u; }
  int lowest() const;
  //! 0-based feature indices in ascending order.
  std::vector<int> indices() const;
  //! 1-based feature indices in ascending order.
  std::vector<int> one_based() const;
  //! "1,3" style key.
  std::string key() const;

  bool operator==(const FeatureSubset&) const = default;
  auto operator<=>(const FeatureSubset& other) const
  {
    return mask_ <=> other.mask_;
  }

private:
  Mask mask_;
  int dimension_;
};

//! True when the ascending index list of `a` precedes that of `b`
//! lexicographically (a proper prefix precedes its extensions).
bool index_list_less(Mask a, Mask b);

//! Disjoint blocks covering {0..d-1}, always held in canonical form: blocks
//! ordered by their lowest feature.
class FeaturePartition
{
public:
  //! Validates disjointness and cover, then canonicalizes.
  //! Throws StructuralError.
  FeaturePartition(std::vector<FeatureSubset> blocks, int dimension);

  //! From 1-based index lists, e.g. {{1,2},{3}}.
  static FeaturePartition from_index_lists(
    const std::vector<std::vector<int>>& lists, int dimension);

  const std::vector<FeatureSubset>& blocks() const { return blocks_; }
  int dimension() const { return dimension_; }
  std::size_t block_count() const { return blocks_.size(); }
  int max_block_size() const;
  std::vector<std::vector<int>> index_lists() const;
  std::string to_string() const;

  bool operator==(const FeaturePartition&) const = default;

private:
  std::vector<FeatureSubset> blocks_;
  int dimension_;
};

//! Canonical form of a raw block list; throws StructuralError on overlap or
//! incomplete cover.
FeaturePartition canonicalize(std::vector<FeatureSubset> blocks, int dimension);
FeaturePartition canonicalize(const FeaturePartition& partition);

//! Whether `blocks` is already disjoint, covering and in canonical order.
bool is_canonical(std::span<const FeatureSubset> blocks, int dimension);

FeaturePartition singleton_partition(int dimension);

//! All nonempty subsets with at most k features, ascending mask order.
//! Requires 1 <= k <= d <= 24.
std::vector<FeatureSubset> enumerate_subsets(int d, int k);

//! S_d^k = sum_{j=1..k} C(d, j). Requires 1 <= k <= d <= 63.
std::uint64_t count_subsets(int d, int k);

//! |Part_d^k| via P(n) = sum_{j=1..min(k,n)} C(n-1, j-1) P(n-j), P(0) = 1.
//! Requires 1 <= k <= d <= 20, or d = k = 0 (the empty partition).
std::uint64_t count_partitions(int d, int k);

//! Every partition of {0..d-1} with blocks of size <= k, generated from
//! restricted-growth strings. Requires 1 <= k <= d <= 12.
std::vector<FeaturePartition> enumerate_partitions(int d, int k);

std::uint64_t binomial(int n, int r);

} // namespace isde
