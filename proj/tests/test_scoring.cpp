#include "isde/errors.hpp"
#include "isde/scoring.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace isde;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ScoreTable
table_from(int d, int k, std::vector<std::pair<Mask, double>> pairs)
{
  std::vector<ScoreTable::Entry> entries;
  for (auto [mask, score] : pairs)
    entries.push_back({ FeatureSubset(mask, d), score });
  return ScoreTable(d, k, 10, 10, entries);
}

} // namespace

TEST_SUITE("scoring")
{
  TEST_CASE("table lookup, completeness and validation")
  {
    const auto t = table_from(2, 2, { { 0b11, 0.5 }, { 0b01, 0.1 }, { 0b10, -0.2 } });
    CHECK(t.is_complete());
    CHECK(t.score(0b11u) == 0.5);
    CHECK(t.entries().front().subset.mask() == 0b01u);
    CHECK_FALSE(t.find(0b100u).has_value());
    CHECK_THROWS_AS(t.score(0b100u), StructuralError);

    CHECK_FALSE(table_from(2, 2, { { 0b01, 0.0 } }).is_complete());
    CHECK_THROWS_AS(table_from(2, 1, { { 0b11, 0.0 } }), StructuralError);
    CHECK_THROWS_AS(table_from(2, 2, { { 0b01, 0.0 }, { 0b01, 1.0 } }), StructuralError);
    CHECK_THROWS_AS(table_from(2, 2, { { 0b01, std::nan("") } }), StructuralError);
    CHECK_THROWS_AS(table_from(2, 2, { { 0b01, INFINITY } }), StructuralError);
    CHECK_NOTHROW(table_from(2, 2, { { 0b01, kNegInf } }));
  }

  TEST_CASE("partition score is the sum of block scores")
  {
    const auto t = table_from(3, 2,
                              { { 0b001, 0.1 }, { 0b010, 0.2 }, { 0b100, 0.3 },
                                { 0b011, 1.0 }, { 0b101, 2.0 }, { 0b110, kNegInf } });
    CHECK(partition_score(t, singleton_partition(3)) == doctest::Approx(0.6));
    CHECK(partition_score(t, FeaturePartition::from_index_lists({ { 1, 3 }, { 2 } }, 3)) ==
          doctest::Approx(2.2));
    CHECK(partition_score(t, FeaturePartition::from_index_lists({ { 2, 3 }, { 1 } }, 3)) ==
          kNegInf);
    CHECK_THROWS_AS(
      partition_score(t, FeaturePartition::from_index_lists({ { 1, 2, 3 } }, 3)),
      StructuralError);
  }

  TEST_CASE("affine transforms act entrywise")
  {
    const auto t = table_from(2, 2, { { 0b01, 1.0 }, { 0b10, 2.0 }, { 0b11, kNegInf } });
    const auto u = t.transformed(3.0, 1.0);
    CHECK(u.score(0b01u) == 4.0);
    CHECK(u.score(0b10u) == 7.0);
    CHECK(u.score(0b11u) == kNegInf);
    CHECK_THROWS(t.transformed(0.0));
  }

  TEST_CASE("hold-out score is the mean log density")
  {
    const auto train = testing::uniform_matrix(100, 1, 1);
    const auto holdout = testing::uniform_matrix(40, 1, 2);
    const auto model = fit_with_bandwidth(train, FeatureSubset(1u, 1), 0.2, Kernel());
    double expected = 0.0;
    for (std::size_t i = 0; i < holdout.rows(); ++i)
      expected += std::log(model.evaluate(holdout.row(i)));
    CHECK(score_subset(model, holdout) == doctest::Approx(expected / 40.0).epsilon(1e-14));

    DataMatrix far(1, 1, { 0.99 });
    const auto narrow = fit_with_bandwidth(DataMatrix(2, 1, { 0.1, 0.2 }), FeatureSubset(1u, 1),
                                           0.05, Kernel());
    CHECK(score_subset(narrow, far) == kNegInf);
  }

  TEST_CASE("parallel table equals the serial reference exactly")
  {
    const auto train = testing::uniform_matrix(300, 4, 7);
    const auto holdout = testing::uniform_matrix(300, 4, 8);
    for (int k = 1; k <= 3; ++k) {
      const auto par = build_score_table(train, holdout, k, {}, Kernel());
      const auto ser = build_score_table_serial(train, holdout, k, {}, Kernel());
      CHECK(par.table == ser.table);
      CHECK(par.table.is_complete());
      CHECK(par.table.size() == count_subsets(4, k));
      REQUIRE(par.models.size() == par.table.size());
      for (std::size_t i = 0; i < par.models.size(); ++i)
        CHECK(par.models[i].subset() == par.table.entries()[i].subset);
    }
  }

  TEST_CASE("partition scores equal sums of raw hold-out log densities")
  {
    const auto train = testing::uniform_matrix(200, 4, 11);
    const auto holdout = testing::uniform_matrix(150, 4, 12);
    const auto built = build_score_table(train, holdout, 2, {}, Kernel());
    const auto again = build_score_table(train, holdout, 2, {}, Kernel());
    CHECK(built.table == again.table);
    for (const auto& p : enumerate_partitions(4, 2)) {
      double raw = 0.0;
      for (const auto& block : p.blocks()) {
        const auto model = fit(train, block, {}, Kernel());
        const auto cols = holdout.select_columns(block.indices());
        double sum = 0.0;
        for (std::size_t i = 0; i < cols.rows(); ++i)
          sum += std::log(model.evaluate(cols.row(i)));
        raw += sum / static_cast<double>(cols.rows());
      }
      CHECK(partition_score(built.table, p) == doctest::Approx(raw).epsilon(1e-12));
    }
  }

  TEST_CASE("table construction checks shapes")
  {
    const auto a = testing::uniform_matrix(20, 3, 1);
    const auto b = testing::uniform_matrix(20, 2, 2);
    CHECK_THROWS_AS(build_score_table(a, b, 2, {}, Kernel()), StructuralError);
    CHECK_THROWS_AS(build_score_table(a, a, 4, {}, Kernel()), ParameterError);
    CHECK_THROWS_AS(build_score_table(a, a, 0, {}, Kernel()), ParameterError);
  }
}
