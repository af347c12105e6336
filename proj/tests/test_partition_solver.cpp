#include "isde/errors.hpp"
#include "isde/partition_solver.hpp"

#include <doctest.h>

#include <random>

using namespace isde;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ScoreTable
random_table(int d, int k, std::mt19937_64& rng, double neg_inf_rate = 0.0,
             bool coarse = false)
{
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> small(-2, 2);
  std::bernoulli_distribution drop(neg_inf_rate);
  std::vector<ScoreTable::Entry> entries;
  for (const auto& s : enumerate_subsets(d, k)) {
    double v = coarse ? small(rng) * 0.5 : normal(rng);
    if (s.size() > 1 && drop(rng))
      v = kNegInf;
    entries.push_back({ s, v });
  }
  return ScoreTable(d, k, 100, 100, entries);
}

void
check_same(const PartitionSolution& a, const PartitionSolution& b)
{
  CHECK(a.partition == b.partition);
  CHECK(a.score == b.score);
}

} // namespace

TEST_SUITE("partition_solver")
{
  TEST_CASE("all solvers agree with exhaustive search")
  {
    std::mt19937_64 rng(2024);
    for (int d = 1; d <= 7; ++d)
      for (int k = 1; k <= d; ++k)
        for (int rep = 0; rep < 3; ++rep) {
          CAPTURE(d);
          CAPTURE(k);
          const auto t = random_table(d, k, rng, rep == 2 ? 0.3 : 0.0, rep == 1);
          const auto ex = solve_exhaustive(t);
          check_same(solve_dp(t), ex);
          check_same(solve_branch_and_bound(t), ex);
          CHECK(ex.score == partition_score(t, ex.partition));
        }
  }

  TEST_CASE("ties prefer more blocks, then the smaller canonical form")
  {
    std::vector<ScoreTable::Entry> zero;
    for (const auto& s : enumerate_subsets(4, 2))
      zero.push_back({ s, 0.0 });
    const ScoreTable flat(4, 2, 1, 1, zero);
    for (const auto& sol : { solve_dp(flat), solve_branch_and_bound(flat), solve_exhaustive(flat) })
      CHECK(sol.partition == singleton_partition(4));

    // [[1,2],[3]] and [[1,3],[2]] both score 1
    const ScoreTable pairs(3, 2, 1, 1,
                           { { FeatureSubset(0b001u, 3), 0.0 },
                             { FeatureSubset(0b010u, 3), 0.0 },
                             { FeatureSubset(0b100u, 3), 0.0 },
                             { FeatureSubset(0b011u, 3), 1.0 },
                             { FeatureSubset(0b101u, 3), 1.0 },
                             { FeatureSubset(0b110u, 3), 0.5 } });
    const auto expected = FeaturePartition::from_index_lists({ { 1, 2 }, { 3 } }, 3);
    CHECK(solve_dp(pairs).partition == expected);
    CHECK(solve_branch_and_bound(pairs).partition == expected);
    CHECK(solve_exhaustive(pairs).partition == expected);
  }

  TEST_CASE("negative infinity blocks are avoided when possible")
  {
    const ScoreTable t(2, 2, 1, 1,
                       { { FeatureSubset(0b01u, 2), kNegInf },
                         { FeatureSubset(0b10u, 2), 0.0 },
                         { FeatureSubset(0b11u, 2), -5.0 } });
    const auto sol = solve_dp(t);
    CHECK(sol.partition.block_count() == 1);
    CHECK(sol.score == -5.0);
    check_same(solve_branch_and_bound(t), sol);

    const ScoreTable hopeless(1, 1, 1, 1, { { FeatureSubset(1u, 1), kNegInf } });
    CHECK(solve_dp(hopeless).score == kNegInf);
    CHECK(solve_branch_and_bound(hopeless).score == kNegInf);
  }

  TEST_CASE("dp trace is a consistent table of sub-problem optima")
  {
    std::mt19937_64 rng(5);
    const auto t = random_table(5, 3, rng);
    DpTrace trace;
    const auto sol = solve_dp(t, &trace);
    REQUIRE(trace.best.size() == 32);
    CHECK(trace.best[0] == 0.0);
    CHECK(trace.best[31] == doctest::Approx(sol.score).epsilon(1e-14));
    for (Mask u = 1; u < 32; ++u) {
      const Mask b = trace.first_block[u];
      CHECK((b & u) == b);
      CHECK((b & (u & (~u + 1))) != 0); // contains the lowest feature of u
      CHECK(trace.best[u] == doctest::Approx(t.score(b) + trace.best[u & ~b]).epsilon(1e-14));
    }
  }

  TEST_CASE("dp and branch and bound agree at d = 12")
  {
    std::mt19937_64 rng(77);
    for (int k : { 2, 3, 4 }) {
      const auto t = random_table(12, k, rng, 0.1);
      check_same(solve_dp(t), solve_branch_and_bound(t));
    }
  }

  TEST_CASE("positive scaling keeps the optimum; repeated solves agree")
  {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 50; ++rep) {
      const int d = 2 + rep % 7;
      const int k = 1 + rep % d;
      const auto t = random_table(d, k, rng, 0.1);
      const auto base = solve_dp(t);
      CHECK(base.partition.max_block_size() <= k);
      for (double lambda : { 0.5, 3.0, 1e3 }) {
        const auto scaled = t.transformed(lambda);
        CHECK(solve_dp(scaled).partition == base.partition);
        CHECK(solve_branch_and_bound(scaled).partition == base.partition);
      }
      check_same(solve_dp(t), base);
      check_same(solve_branch_and_bound(t), solve_branch_and_bound(t));
    }
  }

  TEST_CASE("incomplete tables are rejected")
  {
    const ScoreTable t(2, 2, 1, 1, { { FeatureSubset(0b01u, 2), 0.0 } });
    CHECK_THROWS_AS(solve_dp(t), StructuralError);
    CHECK_THROWS_AS(solve_branch_and_bound(t), StructuralError);
    CHECK_THROWS_AS(solve_exhaustive(t), StructuralError);
  }
}
