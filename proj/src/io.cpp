#include "isde/io.hpp"

#include "isde/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace isde {

namespace {

std::string_view
trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool
parse_double(std::string_view token, double& out)
{
  token = trim(token);
  if (!token.empty() && token.front() == '+')
    token.remove_prefix(1);
  if (token.empty())
    return false;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view>
split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return fields;
}

} // namespace

DataMatrix
read_csv(std::istream& in)
{
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    std::size_t bad = fields.size();
    for (std::size_t j = 0; j < fields.size(); ++j)
      if (!parse_double(fields[j], row[j])) {
        bad = j;
        break;
      }
    if (bad != fields.size()) {
      if (rows == 0 && cols == 0 && line_no == 1)
        continue; // header
      throw DataError("not a decimal number", line_no, bad + 1);
    }
    if (cols == 0)
      cols = fields.size();
    else if (fields.size() != cols)
      throw DataError("row has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(cols),
                      line_no, std::min(fields.size(), cols) + 1);
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0)
    throw DataError("input contains no observations");
  return DataMatrix(rows, cols, std::move(values));
}

DataMatrix
read_csv_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open '" + path + "'");
  return read_csv(in);
}

void
write_csv(std::ostream& out, const DataMatrix& data)
{
  char buf[64];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, data(i, j));
      if (j)
        out << ',';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

Rescale
Rescale::fit(const DataMatrix& data)
{
  if (data.empty())
    throw DataError("cannot rescale an empty dataset");
  Rescale r;
  r.min.assign(data.cols(), std::numeric_limits<double>::infinity());
  r.max.assign(data.cols(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < data.cols(); ++j) {
      const double v = data(i, j);
      if (!std::isfinite(v))
        throw DataError("non-finite entry", i + 1, j + 1);
      r.min[j] = std::min(r.min[j], v);
      r.max[j] = std::max(r.max[j], v);
    }
  for (std::size_t j = 0; j < data.cols(); ++j)
    if (!(r.max[j] > r.min[j]))
      throw DataError("constant column cannot be rescaled", 1, j + 1);
  return r;
}

DataMatrix
Rescale::apply(const DataMatrix& data) const
{
  if (data.cols() != min.size())
    throw StructuralError("rescale map and data differ in dimension");
  DataMatrix out(data.rows(), data.cols());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < data.cols(); ++j)
      out(i, j) = (data(i, j) - min[j]) / (max[j] - min[j]);
  return out;
}

double
Rescale::jacobian() const
{
  double j = 1.0;
  for (std::size_t c = 0; c < min.size(); ++c)
    j /= max[c] - min[c];
  return j;
}

Json
score_to_json(double score)
{
  if (score == -std::numeric_limits<double>::infinity())
    return "-inf";
  return score;
}

double
score_from_json(const Json& j)
{
  if (j.is_string() && j.get<std::string>() == "-inf")
    return -std::numeric_limits<double>::infinity();
  if (!j.is_number())
    throw StructuralError("score must be a number or \"-inf\"");
  return j.get<double>();
}

Json
partition_to_json(const FeaturePartition& partition)
{
  return partition.index_lists();
}

FeaturePartition
partition_from_json(const Json& j, int dimension)
{
  return FeaturePartition::from_index_lists(
    j.get<std::vector<std::vector<int>>>(), dimension);
}

Json
model_to_json(const MirrorKdeModel& model)
{
  return { { "subset", model.subset().one_based() },
           { "bandwidth", model.bandwidth() },
           { "kernel", std::string(model.kernel().name()) },
           { "samples", model.samples().values() } };
}

MirrorKdeModel
model_from_json(const Json& j, int dimension)
{
  const auto subset =
    FeatureSubset::from_indices(j.at("subset").get<std::vector<int>>(), dimension);
  auto values = j.at("samples").get<std::vector<double>>();
  const auto p = static_cast<std::size_t>(subset.size());
  if (values.size() % p != 0)
    throw StructuralError("model sample array is not a multiple of |S|");
  const std::size_t m = values.size() / p;
  return MirrorKdeModel(subset, j.at("bandwidth").get<double>(),
                        Kernel::from_name(j.at("kernel").get<std::string>()),
                        DataMatrix(m, p, std::move(values)));
}

Json
score_table_to_json(const ScoreTable& table, double beta, const std::string& kernel)
{
  Json scores = Json::object();
  for (const auto& e : table.entries())
    scores[e.subset.key()] = score_to_json(e.score);
  return { { "metadata",
             { { "d", table.dimension() },
               { "k", table.max_block_size() },
               { "n", table.holdout_count() },
               { "m", table.train_count() },
               { "beta", beta },
               { "kernel", kernel } } },
           { "scores", std::move(scores) } };
}

Json
dp_trace_to_json(const DpTrace& trace)
{
  Json out = Json::object();
  for (std::size_t mask = 0; mask < trace.best.size(); ++mask)
    out[std::to_string(mask)] = { { "best", score_to_json(trace.best[mask]) },
                                  { "first_block", trace.first_block[mask] } };
  return out;
}

Json
config_to_json(const IsdeConfig& config)
{
  return { { "k", config.k },
           { "split", config.split_fraction },
           { "beta", config.beta },
           { "kernel", config.kernel },
           { "bandwidth_scale", config.bandwidth_scale },
           { "seed", config.seed },
           { "shuffle", config.shuffle },
           { "solver", config.solver == SolverKind::branch_and_bound
                         ? "branch-and-bound"
                         : "dp" } };
}

Json
result_to_json(const IsdeResult& result, const std::optional<Rescale>& rescale)
{
  Json models = Json::array();
  for (const auto& m : result.models)
    models.push_back(model_to_json(m));
  Json out = {
    { "d", result.partition.dimension() },
    { "partition", partition_to_json(result.partition) },
    { "score", score_to_json(result.score) },
    { "n_train", result.score_table.train_count() },
    { "n_holdout", result.score_table.holdout_count() },
    { "config", config_to_json(result.config) },
    { "score_table",
      score_table_to_json(result.score_table, result.config.beta, result.config.kernel) },
    { "models", std::move(models) },
    { "warnings", result.warnings },
  };
  if (rescale)
    out["rescale"] = { { "min", rescale->min }, { "max", rescale->max } };
  else
    out["rescale"] = nullptr;
  return out;
}

LoadedModel
loaded_model_from_json(const Json& j)
{
  const int d = j.at("d").get<int>();
  auto partition = partition_from_json(j.at("partition"), d);
  std::vector<MirrorKdeModel> models;
  for (const auto& m : j.at("models"))
    models.push_back(model_from_json(m, d));
  if (models.size() != partition.block_count())
    throw StructuralError("model count does not match the partition");
  for (std::size_t b = 0; b < models.size(); ++b)
    if (models[b].subset() != partition.blocks()[b])
      throw StructuralError("models are not aligned with the partition blocks");
  std::optional<Rescale> rescale;
  if (j.contains("rescale") && !j.at("rescale").is_null()) {
    rescale = Rescale{ j.at("rescale").at("min").get<std::vector<double>>(),
                       j.at("rescale").at("max").get<std::vector<double>>() };
    if (rescale->min.size() != static_cast<std::size_t>(d) ||
        rescale->max.size() != static_cast<std::size_t>(d))
      throw StructuralError("rescale map has the wrong dimension");
  }
  return { std::move(partition), std::move(models), std::move(rescale), d };
}

double
LoadedModel::evaluate(std::span<const double> x) const
{
  if (static_cast<int>(x.size()) != dimension)
    throw StructuralError("point has " + std::to_string(x.size()) +
                          " coordinates, model expects " + std::to_string(dimension));
  std::vector<double> y(x.begin(), x.end());
  double jacobian = 1.0;
  if (rescale) {
    for (std::size_t j = 0; j < y.size(); ++j)
      y[j] = (y[j] - rescale->min[j]) / (rescale->max[j] - rescale->min[j]);
    jacobian = rescale->jacobian();
  }
  for (double v : y)
    if (!(v >= 0.0 && v <= 1.0))
      return 0.0;
  double value = jacobian;
  for (std::size_t b = 0; b < models.size(); ++b) {
    const auto idx = partition.blocks()[b].indices();
    std::vector<double> xs(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t)
      xs[t] = y[static_cast<std::size_t>(idx[t])];
    value *= models[b].evaluate(xs);
  }
  return value;
}

} // namespace isde
