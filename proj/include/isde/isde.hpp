#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"
#include "isde/mirror_kde.hpp"
#include "isde/scoring.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace isde {

enum class SolverKind
{
  dynamic_programming,
  branch_and_bound
};

struct IsdeConfig
{
  int k = 2;
  //! Share of the rows used to fit the marginal estimators.
  double split_fraction = 0.5;
  double beta = 2.0;
  std::string kernel = "epanechnikov";
  double bandwidth_scale = 1.0;
  std::uint64_t seed = 0;
  bool shuffle = true;
  SolverKind solver = SolverKind::dynamic_programming;

  void validate() const;
  BandwidthRule bandwidth_rule() const { return { beta, bandwidth_scale }; }
};

struct DataSplit
{
  DataMatrix train;
  DataMatrix holdout;
};

//! Optional seeded row shuffle, then the first floor(split * N) rows train
//! and the rest are held out. Requires N >= 4, m >= 2, n >= 1.
DataSplit split_dataset(const DataMatrix& data, const IsdeConfig& config);

struct IsdeResult
{
  FeaturePartition partition;
  double score;
  //! One model per block of `partition`, in block order.
  std::vector<MirrorKdeModel> models;
  ScoreTable score_table;
  IsdeConfig config;
  std::vector<std::string> warnings;
};

//! Fit on train, score on holdout, select the partition.
IsdeResult run_on_split(const DataMatrix& train,
                        const DataMatrix& holdout,
                        const IsdeConfig& config);

//! Full pipeline on N x d data in [0,1]^d (d <= 20).
IsdeResult run(const DataMatrix& data, const IsdeConfig& config);

//! prod_{S in P} f_S(x_S); 0 outside the cube. Throws StructuralError on a
//! dimension mismatch.
double evaluate_joint(const IsdeResult& result, std::span<const double> x);

//! sum_{S in P} log f_S(x_S).
double log_evaluate_joint(const IsdeResult& result, std::span<const double> x);

} // namespace isde
