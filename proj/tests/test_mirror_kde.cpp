#include "isde/errors.hpp"
#include "isde/mirror_kde.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace isde;

namespace {

MirrorKdeModel
one_dimensional(std::vector<double> xs, double h, KernelKind kind = KernelKind::epanechnikov)
{
  const std::size_t m = xs.size();
  return MirrorKdeModel(FeatureSubset(1u, 1), h, Kernel(kind), DataMatrix(m, 1, std::move(xs)));
}

double
at(const MirrorKdeModel& model, std::initializer_list<double> x)
{
  return model.evaluate(std::vector<double>(x));
}

} // namespace

TEST_SUITE("mirror_kde")
{
  TEST_CASE("bandwidth rule")
  {
    CHECK(select_bandwidth({}, 10000, 1) == doctest::Approx(0.15848931924611134).epsilon(1e-14));
    CHECK(select_bandwidth({ 2.0, 10.0 }, 100, 2) == kMaxBandwidth);
    CHECK(select_bandwidth({ 2.0, 1e-9 }, 100, 1) == kMinBandwidth);
    // smaller with more data, larger for bigger blocks
    CHECK(select_bandwidth({}, 4000, 2) < select_bandwidth({}, 1000, 2));
    CHECK(select_bandwidth({}, 1000, 3) > select_bandwidth({}, 1000, 1));
    CHECK_THROWS_AS(select_bandwidth({ 0.0, 1.0 }, 100, 1), ParameterError);
    CHECK_THROWS_AS(select_bandwidth({ 2.0, -1.0 }, 100, 1), ParameterError);
  }

  TEST_CASE("hand-computed values")
  {
    // (K(0.4) + K(-0.4)) / (2 * 0.25) with K(u) = 0.75 (1 - u^2)
    CHECK(at(one_dimensional({ 0.4, 0.6 }, 0.25), { 0.5 }) == doctest::Approx(2.52));
    CHECK(at(one_dimensional({ 0.5 }, 0.25), { 0.5 }) == doctest::Approx(3.0));
    // the sample and its reflection through 0 coincide at the boundary
    CHECK(at(one_dimensional({ 0.0 }, 0.25), { 0.0 }) == doctest::Approx(6.0));
    CHECK(one_dimensional({ 0.0 }, 0.25).evaluate_plain(std::vector{ 0.0 }) ==
          doctest::Approx(3.0));
  }

  TEST_CASE("zero outside the unit cube")
  {
    const auto model = one_dimensional({ 0.0, 1.0 }, 0.3);
    CHECK(at(model, { -1e-12 }) == 0.0);
    CHECK(at(model, { 1.0 + 1e-12 }) == 0.0);
    CHECK(at(model, { 1.0 }) > 0.0);
    CHECK(model.log_evaluate(std::vector{ 2.0 }) == -std::numeric_limits<double>::infinity());
  }

  TEST_CASE("pruned evaluation is bit-identical to the full reflection sum")
  {
    for (int p = 1; p <= 3; ++p)
      for (auto kind : { KernelKind::epanechnikov, KernelKind::triangular, KernelKind::box }) {
        const auto data = testing::uniform_matrix(200, p, 10 + p);
        const auto model = fit_with_bandwidth(data, FeatureSubset((1u << p) - 1, p), 0.17,
                                              Kernel(kind));
        const auto points = testing::uniform_matrix(300, p, 99);
        for (std::size_t i = 0; i < points.rows(); ++i)
          CHECK(model.evaluate(points.row(i)) == model.evaluate_reference(points.row(i)));
        // corners and faces exercise the reflections
        std::vector<double> corner(p, 0.0);
        CHECK(model.evaluate(corner) == model.evaluate_reference(corner));
        corner.assign(p, 1.0);
        CHECK(model.evaluate(corner) == model.evaluate_reference(corner));
      }
  }

  TEST_CASE("pruned equals reference on random sample, point and bandwidth triples")
  {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> hd(kMinBandwidth, 0.49);
    for (int trial = 0; trial < 1000; ++trial) {
      const int p = 1 + trial % 3;
      const auto data = testing::uniform_matrix(1 + trial % 40, p, rng());
      const auto model =
        fit_with_bandwidth(data, FeatureSubset((1u << p) - 1, p), hd(rng), Kernel());
      const auto x = testing::uniform_matrix(1, p, rng());
      CHECK(model.evaluate(x.row(0)) == model.evaluate_reference(x.row(0)));
    }
  }

  TEST_CASE("symmetric samples give a symmetric estimate")
  {
    // dyadic values keep every operation exact
    std::vector<double> xs;
    for (int i = 0; i <= 64; i += 5)
      for (int j = 0; j <= 64; j += 7) {
        xs.insert(xs.end(), { i / 64.0, j / 64.0 });
        xs.insert(xs.end(), { 1.0 - i / 64.0, 1.0 - j / 64.0 });
      }
    const std::size_t m = xs.size() / 2;
    for (auto kind : { KernelKind::epanechnikov, KernelKind::triangular, KernelKind::box }) {
      const MirrorKdeModel model(FeatureSubset(0b11u, 2), 0.25, Kernel(kind), DataMatrix(m, 2, xs));
      for (int a = 0; a <= 32; ++a)
        for (int b = 0; b <= 32; ++b) {
          const std::vector x{ a / 32.0, b / 32.0 };
          const std::vector y{ 1.0 - a / 32.0, 1.0 - b / 32.0 };
          CHECK(model.evaluate(x) == model.evaluate(y));
          CHECK(model.evaluate(x) >= 0.0);
        }
    }
  }

  TEST_CASE("mirror estimate integrates to one in 1D")
  {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto data = testing::uniform_matrix(30, 1, seed);
      const auto model = fit_with_bandwidth(data, FeatureSubset(1u, 1), 0.2, Kernel());
      std::vector<double> breaks{ 0.0, 1.0 };
      for (double w : data.values())
        for (double c : { w, -w, 2.0 - w })
          for (double b : { c - 0.2, c + 0.2 })
            if (b > 0.0 && b < 1.0)
              breaks.push_back(b);
      const double mass = testing::integrate_piecewise(
        [&](double x) { return model.evaluate(std::vector{ x }); }, breaks, 3);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("batch evaluation matches pointwise evaluation")
  {
    const auto data = testing::uniform_matrix(500, 2, 3);
    const auto model = fit(data, FeatureSubset(0b11u, 2), {}, Kernel());
    const auto points = testing::uniform_matrix(100, 2, 4);
    const auto values = model.evaluate_many(points);
    REQUIRE(values.size() == 100);
    for (std::size_t i = 0; i < points.rows(); ++i)
      CHECK(values[i] == model.evaluate(points.row(i)));
  }

  TEST_CASE("fit selects columns of the subset")
  {
    const auto data = testing::uniform_matrix(50, 3, 5);
    const auto model = fit_with_bandwidth(data, FeatureSubset(0b101u, 3), 0.2, Kernel());
    CHECK(model.dimension() == 2);
    CHECK(model.sample_count() == 50);
    const DataMatrix direct = data.select_columns(std::vector{ 0, 2 });
    const auto reference = MirrorKdeModel(FeatureSubset(0b11u, 2), 0.2, Kernel(), direct);
    const std::vector x{ 0.3, 0.7 };
    CHECK(model.evaluate(x) == doctest::Approx(reference.evaluate(x)).epsilon(1e-15));
  }

  TEST_CASE("invalid inputs are rejected")
  {
    const auto data = testing::uniform_matrix(10, 1, 1);
    CHECK_THROWS_AS(fit_with_bandwidth(data, FeatureSubset(1u, 1), 0.0, Kernel()),
                    ParameterError);
    CHECK_THROWS_AS(fit_with_bandwidth(data, FeatureSubset(1u, 1), 0.5, Kernel()),
                    ParameterError);
    CHECK_THROWS_AS(fit(data.slice_rows(0, 1), FeatureSubset(1u, 1), {}, Kernel()),
                    ParameterError);
    CHECK_THROWS_AS(one_dimensional({ 0.5, 1.5 }, 0.2), DataError);
    const auto model = one_dimensional({ 0.5 }, 0.2);
    CHECK_THROWS_AS(model.evaluate(std::vector{ 0.5, 0.5 }), StructuralError);
  }
}
