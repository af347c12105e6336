#include "isde/combinatorics.hpp"
#include "isde/errors.hpp"

#include <doctest.h>

#include <set>

using namespace isde;

TEST_SUITE("combinatorics")
{
  TEST_CASE("subset helpers use 0-based bits and 1-based keys")
  {
    const auto s = FeatureSubset::from_indices(std::vector{ 3, 1 }, 4);
    CHECK(s.mask() == 0b101u);
    CHECK(s.size() == 2);
    CHECK(s.lowest() == 0);
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(1));
    CHECK(s.indices() == std::vector{ 0, 2 });
    CHECK(s.one_based() == std::vector{ 1, 3 });
    CHECK(s.key() == "1,3");
    CHECK_THROWS_AS(FeatureSubset::from_indices(std::vector{ 5 }, 4), StructuralError);
    CHECK_THROWS_AS(FeatureSubset::from_indices(std::vector{ 1, 1 }, 4), StructuralError);
    CHECK_THROWS(FeatureSubset(0u, 4));
    CHECK_THROWS(FeatureSubset(0b10000u, 4));
  }

  TEST_CASE("subset counts match enumeration")
  {
    CHECK(count_subsets(4, 2) == 10);
    CHECK(count_subsets(6, 3) == 41);
    CHECK(count_subsets(30, 1) == 30);
    auto factorial = [](int n) {
      double f = 1.0;
      for (int i = 2; i <= n; ++i)
        f *= i;
      return f;
    };
    for (int d = 1; d <= 12; ++d)
      for (int k = 1; k <= d; ++k) {
        const auto subsets = enumerate_subsets(d, k);
        CHECK(subsets.size() == count_subsets(d, k));
        double expected = 0.0;
        for (int j = 1; j <= k; ++j)
          expected += factorial(d) / (factorial(j) * factorial(d - j));
        CHECK(static_cast<double>(subsets.size()) == expected);
        for (std::size_t i = 1; i < subsets.size(); ++i)
          CHECK(subsets[i - 1].mask() < subsets[i].mask());
        for (const auto& s : subsets)
          CHECK(s.size() <= k);
      }
  }

  TEST_CASE("partition counts: Bell numbers and restricted sizes")
  {
    const std::uint64_t bell[] = { 1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975 };
    for (int d = 0; d <= 10; ++d)
      CHECK(count_partitions(d, d) == bell[d]);
    CHECK(count_partitions(0, 0) == 1);
    CHECK(count_partitions(4, 2) == 10);
    CHECK(count_partitions(5, 1) == 1);
    CHECK(count_partitions(20, 20) == 51724158235372ull);
    for (int d = 1; d <= 8; ++d)
      for (int k = 1; k <= d; ++k) {
        const auto parts = enumerate_partitions(d, k);
        CHECK(parts.size() == count_partitions(d, k));
        std::set<std::string> distinct;
        for (const auto& p : parts) {
          CHECK(p.max_block_size() <= k);
          CHECK(is_canonical(p.blocks(), d));
          distinct.insert(p.to_string());
        }
        CHECK(distinct.size() == parts.size());
      }
  }

  TEST_CASE("partitions are canonicalized and validated")
  {
    const auto p = FeaturePartition::from_index_lists({ { 4 }, { 3, 1 }, { 2 } }, 4);
    CHECK(p.index_lists() == std::vector<std::vector<int>>{ { 1, 3 }, { 2 }, { 4 } });
    CHECK(p.to_string() == "[[1,3],[2],[4]]");
    CHECK(p.block_count() == 3);
    CHECK(p.max_block_size() == 2);
    CHECK(singleton_partition(3).index_lists() ==
          std::vector<std::vector<int>>{ { 1 }, { 2 }, { 3 } });

    CHECK_THROWS_AS(FeaturePartition::from_index_lists({ { 1, 2 }, { 2, 3 } }, 3),
                    StructuralError);
    CHECK_THROWS_AS(FeaturePartition::from_index_lists({ { 1, 2 } }, 3), StructuralError);
    CHECK_THROWS_AS(FeaturePartition::from_index_lists({ { 1 }, { 2 }, { } }, 2),
                    StructuralError);
  }

  TEST_CASE("index list order compares sorted member lists")
  {
    CHECK(index_list_less(0b0011u, 0b0101u)); // [1,2] < [1,3]
    CHECK(index_list_less(0b0001u, 0b0011u)); // [1] < [1,2]
    CHECK_FALSE(index_list_less(0b0110u, 0b0011u));
    CHECK_FALSE(index_list_less(0b0011u, 0b0011u));
  }

  TEST_CASE("binomial coefficients")
  {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(20, 10) == 184756);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(7, 0) == 1);
  }
}
