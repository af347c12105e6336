#include "isde/combinatorics.hpp"

#include "isde/errors.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace isde {

namespace {

void
check_dimension(int d, int cap)
{
  if (d < 1 || d > cap)
    throw ParameterError("dimension d=" + std::to_string(d) +
                         " outside [1, " + std::to_string(cap) + "]");
}

void
check_k(int d, int k)
{
  if (k < 1 || k > d)
    throw ParameterError("block size cap k=" + std::to_string(k) +
                         " outside [1, d=" + std::to_string(d) + "]");
}

} // namespace

FeatureSubset::FeatureSubset(Mask mask, int dimension)
  : mask_(mask)
  , dimension_(dimension)
{
  check_dimension(dimension, 32);
  if (mask == 0)
    throw StructuralError("feature subset must be nonempty");
  if (dimension < 32 && (mask >> dimension) != 0)
    throw StructuralError("feature subset references a feature >= d");
}

FeatureSubset
FeatureSubset::from_indices(std::span<const int> one_based, int dimension)
{
  Mask mask = 0;
  for (int i : one_based) {
    if (i < 1 || i > dimension)
      throw StructuralError("feature index " + std::to_string(i) +
                            " outside [1, " + std::to_string(dimension) + "]");
    if (mask & (Mask{ 1 } << (i - 1)))
      throw StructuralError("feature index repeated within a subset");
    mask |= Mask{ 1 } << (i - 1);
  }
  return FeatureSubset(mask, dimension);
}

int
FeatureSubset::size() const
{
  return std::popcount(mask_);
}

int
FeatureSubset::lowest() const
{
  return std::countr_zero(mask_);
}

std::vector<int>
FeatureSubset::indices() const
{
  std::vector<int> out;
  for (Mask m = mask_; m != 0; m &= m - 1)
    out.push_back(std::countr_zero(m));
  return out;
}

std::vector<int>
FeatureSubset::one_based() const
{
  auto out = indices();
  for (int& i : out)
    ++i;
  return out;
}

std::string
FeatureSubset::key() const
{
  std::string out;
  for (int i : one_based()) {
    if (!out.empty())
      out += ',';
    out += std::to_string(i);
  }
  return out;
}

bool
index_list_less(Mask a, Mask b)
{
  while (a != 0 && b != 0) {
    const int ia = std::countr_zero(a);
    const int ib = std::countr_zero(b);
    if (ia != ib)
      return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

FeaturePartition::FeaturePartition(std::vector<FeatureSubset> blocks,
                                   int dimension)
  : blocks_(std::move(blocks))
  , dimension_(dimension)
{
  check_dimension(dimension, 32);
  Mask seen = 0;
  for (const auto& b : blocks_) {
    if (b.dimension() != dimension)
      throw StructuralError("block dimension differs from partition's");
    if (seen & b.mask())
      throw StructuralError("partition blocks overlap");
    seen |= b.mask();
  }
  const Mask full =
    dimension == 32 ? ~Mask{ 0 } : (Mask{ 1 } << dimension) - 1;
  if (seen != full)
    throw StructuralError("partition blocks do not cover every feature");
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& x, const auto& y) {
    return x.lowest() < y.lowest();
  });
}

FeaturePartition
FeaturePartition::from_index_lists(const std::vector<std::vector<int>>& lists,
                                   int dimension)
{
  std::vector<FeatureSubset> blocks;
  blocks.reserve(lists.size());
  for (const auto& l : lists)
    blocks.push_back(FeatureSubset::from_indices(l, dimension));
  return FeaturePartition(std::move(blocks), dimension);
}

int
FeaturePartition::max_block_size() const
{
  int m = 0;
  for (const auto& b : blocks_)
    m = std::max(m, b.size());
  return m;
}

std::vector<std::vector<int>>
FeaturePartition::index_lists() const
{
  std::vector<std::vector<int>> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_)
    out.push_back(b.one_based());
  return out;
}

std::string
FeaturePartition::to_string() const
{
  std::string out = "[";
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i)
      out += ',';
    out += '[' + blocks_[i].key() + ']';
  }
  return out + ']';
}

FeaturePartition
canonicalize(std::vector<FeatureSubset> blocks, int dimension)
{
  return FeaturePartition(std::move(blocks), dimension);
}

FeaturePartition
canonicalize(const FeaturePartition& partition)
{
  return partition;
}

bool
is_canonical(std::span<const FeatureSubset> blocks, int dimension)
{
  if (dimension < 1 || dimension > 32)
    return false;
  Mask seen = 0;
  int previous_lowest = -1;
  for (const auto& b : blocks) {
    if (b.dimension() != dimension || (seen & b.mask()) ||
        b.lowest() <= previous_lowest)
      return false;
    seen |= b.mask();
    previous_lowest = b.lowest();
  }
  const Mask full =
    dimension == 32 ? ~Mask{ 0 } : (Mask{ 1 } << dimension) - 1;
  return seen == full;
}

FeaturePartition
singleton_partition(int dimension)
{
  check_dimension(dimension, 32);
  std::vector<FeatureSubset> blocks;
  for (int i = 0; i < dimension; ++i)
    blocks.emplace_back(Mask{ 1 } << i, dimension);
  return FeaturePartition(std::move(blocks), dimension);
}

std::vector<FeatureSubset>
enumerate_subsets(int d, int k)
{
  check_dimension(d, kMaxSubsetDimension);
  check_k(d, k);
  std::vector<FeatureSubset> out;
  out.reserve(count_subsets(d, k));
  const Mask end = Mask{ 1 } << d;
  for (Mask m = 1; m < end; ++m)
    if (std::popcount(m) <= k)
      out.emplace_back(m, d);
  return out;
}

std::uint64_t
binomial(int n, int r)
{
  if (r < 0 || r > n)
    return 0;
  r = std::min(r, n - r);
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i)
    c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return c;
}

std::uint64_t
count_subsets(int d, int k)
{
  check_dimension(d, 63);
  check_k(d, k);
  std::uint64_t total = 0;
  for (int j = 1; j <= k; ++j)
    total += binomial(d, j);
  return total;
}

std::uint64_t
count_partitions(int d, int k)
{
  if (d == 0 && k == 0)
    return 1;
  check_dimension(d, kMaxPartitionDimension);
  check_k(d, k);
  std::vector<std::uint64_t> p(static_cast<std::size_t>(d) + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= d; ++n)
    for (int j = 1; j <= std::min(k, n); ++j)
      p[n] += binomial(n - 1, j - 1) * p[n - j];
  return p[d];
}

std::vector<FeaturePartition>
enumerate_partitions(int d, int k)
{
  check_dimension(d, 12);
  check_k(d, k);
  std::vector<FeaturePartition> out;
  std::vector<Mask> blocks;
  blocks.reserve(d);

  // Restricted-growth string: feature i joins an existing block or opens the
  // next one.
  std::function<void(int)> extend = [&](int i) {
    if (i == d) {
      std::vector<FeatureSubset> subsets;
      subsets.reserve(blocks.size());
      for (Mask m : blocks)
        subsets.emplace_back(m, d);
      out.emplace_back(std::move(subsets), d);
      return;
    }
    const Mask bit = Mask{ 1 } << i;
    for (auto& b : blocks) {
      if (std::popcount(b) < k) {
        b |= bit;
        extend(i + 1);
        b &= ~bit;
      }
    }
    blocks.push_back(bit);
    extend(i + 1);
    blocks.pop_back();
  };
  extend(0);
  return out;
}

} // namespace isde
