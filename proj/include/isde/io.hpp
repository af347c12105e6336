#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"
#include "isde/isde.hpp"
#include "isde/mirror_kde.hpp"
#include "isde/partition_solver.hpp"
#include "isde/scoring.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace isde {

using Json = nlohmann::json;

//! CSV of decimal floats, one observation per row; a first line that does
//! not parse as numbers is treated as a header. Throws DataError.
DataMatrix read_csv(std::istream& in);
DataMatrix read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const DataMatrix& data);

//! Per-column affine map x -> (x - min) / (max - min).
struct Rescale
{
  std::vector<double> min;
  std::vector<double> max;

  static Rescale fit(const DataMatrix& data);
  DataMatrix apply(const DataMatrix& data) const;
  //! Jacobian of the map, prod 1 / (max - min).
  double jacobian() const;
};

//! Scores that are -infinity serialize as the string "-inf".
Json score_to_json(double score);
double score_from_json(const Json& j);

Json partition_to_json(const FeaturePartition& partition);
FeaturePartition partition_from_json(const Json& j, int dimension);

Json model_to_json(const MirrorKdeModel& model);
MirrorKdeModel model_from_json(const Json& j, int dimension);

Json score_table_to_json(const ScoreTable& table,
                         double beta,
                         const std::string& kernel);

Json dp_trace_to_json(const DpTrace& trace);

Json config_to_json(const IsdeConfig& config);

Json result_to_json(const IsdeResult& result,
                    const std::optional<Rescale>& rescale = std::nullopt);

//! Result restored from JSON, plus the rescale map if one was recorded.
struct LoadedModel
{
  FeaturePartition partition;
  std::vector<MirrorKdeModel> models;
  std::optional<Rescale> rescale;
  int dimension;

  double evaluate(std::span<const double> x) const;
};

LoadedModel loaded_model_from_json(const Json& j);

} // namespace isde
