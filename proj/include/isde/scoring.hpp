#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"
#include "isde/mirror_kde.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace isde {

//! Hold-out log-likelihoods l_n(S), one per subset, sorted by mask.
class ScoreTable
{
public:
  struct Entry
  {
    FeatureSubset subset;
    double score;

    bool operator==(const Entry&) const = default;
  };

  ScoreTable() = default;

  //! Validates dimensions, block sizes <= k, uniqueness, and that scores are
  //! finite or -infinity. Completeness is checked by the solvers.
  ScoreTable(int d,
             int k,
             std::size_t holdout_count,
             std::size_t train_count,
             std::vector<Entry> entries);

  int dimension() const { return d_; }
  int max_block_size() const { return k_; }
  std::size_t holdout_count() const { return holdout_count_; }
  std::size_t train_count() const { return train_count_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::optional<double> find(Mask mask) const;
  //! Throws StructuralError if the subset is absent.
  double score(Mask mask) const;
  double score(const FeatureSubset& subset) const
  {
    return score(subset.mask());
  }

  //! Whether every element of Set_d^k has an entry.
  bool is_complete() const;

  //! A copy with every score multiplied by `factor` and shifted by `offset`.
  ScoreTable transformed(double factor, double offset = 0.0) const;

  bool operator==(const ScoreTable&) const = default;

private:
  int d_ = 0;
  int k_ = 0;
  std::size_t holdout_count_ = 0;
  std::size_t train_count_ = 0;
  std::vector<Entry> entries_;
};

//! Mean of log f_S over the hold-out rows projected on S; -infinity if any
//! row has zero density. Throws ParameterError on an empty hold-out.
double score_subset(const MirrorKdeModel& model, const DataMatrix& holdout);

struct ScoredModels
{
  ScoreTable table;
  //! Aligned with table.entries().
  std::vector<MirrorKdeModel> models;
};

//! Fits every S in Set_d^k on `train` and scores it on `holdout`. Subsets
//! are processed on an OpenMP worker pool (see worker_count()).
ScoredModels build_score_table(const DataMatrix& train,
                               const DataMatrix& holdout,
                               int k,
                               const BandwidthRule& rule,
                               const Kernel& kernel);

//! Single-threaded reference for build_score_table; identical output.
ScoredModels build_score_table_serial(const DataMatrix& train,
                                      const DataMatrix& holdout,
                                      int k,
                                      const BandwidthRule& rule,
                                      const Kernel& kernel);

//! Sum of table entries over the partition's blocks, in block order.
double partition_score(const ScoreTable& table,
                       const FeaturePartition& partition);

} // namespace isde
