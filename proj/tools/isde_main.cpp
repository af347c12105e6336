#include "isde/bounds.hpp"
#include "isde/diagnostics.hpp"
#include "isde/errors.hpp"
#include "isde/gaussian_oracle.hpp"
#include "isde/io.hpp"
#include "isde/isde.hpp"
#include "isde/partition_solver.hpp"
#include "isde/truth.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace {

using isde::Json;

constexpr int kExitParameter = 2;
constexpr int kExitData = 3;

// Writes to `path`, or stdout when the path is empty or "-".
void
emit(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw isde::ParameterError("cannot write '" + path + "'");
  out << text;
  if (!out)
    throw isde::ParameterError("failed writing '" + path + "'");
}

std::string
dump(const Json& j)
{
  return j.dump(2) + "\n";
}

Json
read_json(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw isde::DataError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw isde::DataError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string
format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct FitOptions
{
  std::string input;
  std::string output;
  std::string dp_dump;
  std::string solver = "dp";
  bool rescale = false;
  bool no_shuffle = false;
  isde::IsdeConfig config;
};

void
add_model_options(CLI::App* cmd, isde::IsdeConfig& config)
{
  cmd->add_option("--k", config.k, "Largest block size")->required();
  cmd->add_option("--split", config.split_fraction, "Training fraction")
    ->capture_default_str();
  cmd->add_option("--beta", config.beta, "Smoothness used by the bandwidth rule")
    ->capture_default_str();
  cmd->add_option("--kernel", config.kernel, "epanechnikov | triangular | box")
    ->capture_default_str();
  cmd->add_option("--bandwidth-scale", config.bandwidth_scale, "Bandwidth multiplier")
    ->capture_default_str();
  cmd->add_option("--seed", config.seed, "Seed for the train/hold-out shuffle")
    ->capture_default_str();
}

int
run_fit(const FitOptions& o)
{
  auto config = o.config;
  config.shuffle = !o.no_shuffle;
  if (o.solver == "dp")
    config.solver = isde::SolverKind::dynamic_programming;
  else if (o.solver == "branch-and-bound")
    config.solver = isde::SolverKind::branch_and_bound;
  else
    throw isde::ParameterError("unknown solver '" + o.solver + "'");
  config.validate();

  auto data = isde::read_csv_file(o.input);
  std::optional<isde::Rescale> rescale;
  if (o.rescale) {
    rescale = isde::Rescale::fit(data);
    data = rescale->apply(data);
  }
  const auto result = isde::run(data, config);
  for (const auto& w : result.warnings)
    std::cerr << "warning: " << w << '\n';
  emit(o.output, dump(isde::result_to_json(result, rescale)));

  if (!o.dp_dump.empty()) {
    isde::DpTrace trace;
    isde::solve_dp(result.score_table, &trace);
    emit(o.dp_dump, dump(isde::dp_trace_to_json(trace)));
  }
  return 0;
}

int
run_eval(const std::string& model_path, const std::string& points_path,
         const std::string& output, bool log_scale)
{
  isde::LoadedModel model = [&] {
    const auto j = read_json(model_path);
    try {
      return isde::loaded_model_from_json(j);
    } catch (const Json::exception& e) {
      throw isde::DataError("malformed model file: " + std::string(e.what()));
    } catch (const isde::StructuralError& e) {
      throw isde::DataError("malformed model file: " + std::string(e.what()));
    }
  }();
  const auto points = isde::read_csv_file(points_path);
  if (static_cast<int>(points.cols()) != model.dimension)
    throw isde::DataError("points have " + std::to_string(points.cols()) +
                          " columns, model expects " +
                          std::to_string(model.dimension));
  std::string text;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const double f = model.evaluate(points.row(i));
    text += log_scale ? (f > 0.0 ? format_double(std::log(f)) : "-inf")
                      : format_double(f);
    text += '\n';
  }
  emit(output, text);
  return 0;
}

int
run_synth(const isde::GaussianBlockSpec& spec, std::size_t n, std::uint64_t seed,
          const std::string& output, bool header)
{
  const auto data = isde::sample_gaussian_copula_block(spec, n, seed);
  std::ostringstream out;
  if (header) {
    for (int j = 0; j < spec.d; ++j)
      out << (j ? "," : "") << 'x' << (j + 1);
    out << '\n';
  }
  isde::write_csv(out, data);
  emit(output, out.str());
  return 0;
}

struct OracleOptions
{
  std::vector<int> dims{ 2, 3, 4, 5, 6, 7, 8 };
  std::vector<double> sigmas{ 0.1, 0.5, 0.9 };
  std::vector<double> epsilons{ 0.0 };
  int k = 2;
  std::string format = "json";
  std::string output;
};

Json
structure_json(const isde::Structure& s)
{
  return s.sizes;
}

std::string
structure_string(const isde::Structure& s)
{
  std::string out;
  for (std::size_t i = 0; i < s.sizes.size(); ++i)
    out += (i ? "-" : "") + std::to_string(s.sizes[i]);
  return out;
}

int
run_oracle(const OracleOptions& o)
{
  if (o.k < 1)
    throw isde::ParameterError("--k must be at least 1");
  if (o.format != "json" && o.format != "csv")
    throw isde::ParameterError("--format must be json or csv");

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "d,kstar,sigma,epsilon,det_equicorrelated,det_block_perturbed,spectrum,"
         "kl_exact,kl_leading,k,optimal_structure,kl_optimal_structure,"
         "bias_upper_bound\n";
  for (int d : o.dims)
    for (int k_star = 1; k_star <= d; ++k_star) {
      if (d % k_star != 0)
        continue;
      for (double sigma : o.sigmas)
        for (double eps : o.epsilons) {
          const isde::GaussianBlockSpec spec{ d, k_star, sigma, eps };
          try {
            spec.validate();
          } catch (const isde::ParameterError&) {
            continue; // not positive definite
          }
          const int k = std::min(o.k, d);
          const auto kl = isde::kl_almost_independent(spec);
          const auto structure = isde::optimal_structure(d, k, sigma);
          const double kl_structure = isde::kl_equicorrelated_structure(d, sigma, structure);
          std::optional<double> bias;
          if (k < k_star)
            bias = isde::bias_upper_bound(spec, k);

          Json spectrum = Json::array();
          std::string spectrum_text;
          for (const auto& e : isde::block_spectrum(spec)) {
            spectrum.push_back({ { "value", e.value }, { "multiplicity", e.multiplicity } });
            spectrum_text += (spectrum_text.empty() ? "" : ";") + format_double(e.value) +
                             ":" + std::to_string(e.multiplicity);
          }
          rows.push_back({
            { "d", d },
            { "kstar", k_star },
            { "sigma", sigma },
            { "epsilon", eps },
            { "det_equicorrelated", isde::det_equicorrelated(d, sigma) },
            { "det_block_perturbed", isde::det_block_perturbed(spec) },
            { "spectrum", std::move(spectrum) },
            { "kl_exact", kl.exact },
            { "kl_leading", kl.leading },
            { "k", k },
            { "optimal_structure", structure_json(structure) },
            { "kl_optimal_structure", kl_structure },
            { "bias_upper_bound", bias ? Json(*bias) : Json(nullptr) },
          });
          csv << d << ',' << k_star << ',' << format_double(sigma) << ','
              << format_double(eps) << ','
              << format_double(isde::det_equicorrelated(d, sigma)) << ','
              << format_double(isde::det_block_perturbed(spec)) << ',' << spectrum_text
              << ',' << format_double(kl.exact) << ',' << format_double(kl.leading)
              << ',' << k << ',' << structure_string(structure) << ','
              << format_double(kl_structure) << ','
              << (bias ? format_double(*bias) : std::string()) << '\n';
        }
    }
  emit(o.output, o.format == "json" ? dump(rows) : csv.str());
  return 0;
}

struct DiagnoseOptions
{
  std::string truth = "gaussian";
  isde::GaussianBlockSpec spec{ 4, 2, 0.5, 0.0 };
  double theta = 0.8;
  std::size_t n = 2000;
  std::size_t n_mc = 20000;
  std::uint64_t seed = 0;
  double A = 1.0;
  double delta_n = 0.05;
  double delta_m = 0.05;
  double C_k = 1.0;
  bool estimate_A = false;
  std::string output;
  isde::IsdeConfig config;
};

Json
estimate_json(const isde::MonteCarloEstimate& e)
{
  return { { "estimate", e.estimate },
           { "std_error", e.std_error },
           { "used", e.used },
           { "infinite_count", e.infinite_count },
           { "flagged", e.flagged } };
}

int
run_diagnose(const DiagnoseOptions& o)
{
  o.config.validate();
  std::unique_ptr<isde::Truth> truth;
  if (o.truth == "gaussian")
    truth = std::make_unique<isde::GaussianCopulaTruth>(o.spec);
  else if (o.truth == "fgm")
    truth = std::make_unique<isde::FgmPairsTruth>(o.spec.d, o.theta);
  else
    throw isde::ParameterError("--truth must be gaussian or fgm");

  const auto report =
    isde::risk_decomposition_report(*truth, o.config, o.n, o.n_mc, o.seed);

  isde::BoundParams params;
  params.d = truth->dimension();
  params.k = o.config.k;
  params.n = report.holdout_count;
  params.m = report.train_count;
  params.A = o.A;
  params.delta_n = o.delta_n;
  params.delta_m = o.delta_m;
  params.beta = o.config.beta;
  params.C_k = o.C_k;
  const auto fb = isde::final_bound(
    params, static_cast<int>(report.partition_star.block_count()));

  Json out = {
    { "truth", o.truth },
    { "d", truth->dimension() },
    { "config", isde::config_to_json(o.config) },
    { "report",
      { { "partition_hat", isde::partition_to_json(report.partition_hat) },
        { "partition_tilde", isde::partition_to_json(report.partition_tilde) },
        { "partition_star", isde::partition_to_json(report.partition_star) },
        { "bias", report.bias },
        { "bias_exact", report.bias_exact },
        { "approximation", estimate_json(report.approximation) },
        { "selection", estimate_json(report.selection) },
        { "risk", estimate_json(report.risk) },
        { "combined_std_error", report.combined_std_error },
        { "slack", report.slack },
        { "inequality_holds", report.inequality_holds },
        { "n_mc", report.n_mc },
        { "excluded_draws", report.excluded_draws },
        { "n_train", report.train_count },
        { "n_holdout", report.holdout_count },
        { "warnings", report.warnings } } },
    { "theory",
      { { "A", params.A },
        { "C_k", params.C_k },
        { "delta_n", params.delta_n },
        { "delta_m", params.delta_m },
        { "selection_bound", isde::selection_bound(params) },
        { "final_bound",
          { { "approximation", fb.approximation },
            { "selection", fb.selection },
            { "total", fb.total } } } } },
  };
  if (o.truth == "gaussian")
    out["theory"]["spec"] = { { "kstar", o.spec.k_star },
                              { "sigma", o.spec.sigma },
                              { "epsilon", o.spec.epsilon } };
  else
    out["theory"]["theta"] = o.theta;

  if (o.estimate_A) {
    const auto data = truth->sample(o.n, o.seed);
    const auto fitted = isde::run(data, o.config);
    out["heuristic_A"] = {
      { "value", isde::estimate_bounding_constant(fitted.models) },
      { "note", "heuristic: -min log fhat over a grid; not a certified constant" },
    };
  }
  emit(o.output, dump(out));
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Independence-structure density estimation" };
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a CSV dataset");
  fit_cmd->add_option("--input", fit.input, "CSV file, optional header")->required();
  fit_cmd->add_option("--output", fit.output, "Result JSON (stdout if omitted)");
  add_model_options(fit_cmd, fit.config);
  fit_cmd->add_flag("--rescale", fit.rescale,
                    "Min-max rescale columns to [0,1]; the map is stored in the output");
  fit_cmd->add_flag("--no-shuffle", fit.no_shuffle, "Split rows in file order");
  fit_cmd->add_option("--solver", fit.solver, "dp | branch-and-bound")->capture_default_str();
  fit_cmd->add_option("--dp-dump", fit.dp_dump, "Write the DP table keyed by mask");

  std::string model_path, points_path, eval_output;
  bool eval_log = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a fitted model at points");
  eval_cmd->add_option("--model", model_path, "Result JSON from 'fit'")->required();
  eval_cmd->add_option("--points", points_path, "CSV of query points")->required();
  eval_cmd->add_option("--output", eval_output, "One density per line (stdout if omitted)");
  eval_cmd->add_flag("--log", eval_log, "Print log densities");

  isde::GaussianBlockSpec synth_spec;
  std::size_t synth_n = 0;
  std::uint64_t synth_seed = 0;
  std::string synth_output;
  bool synth_header = false;
  auto* synth_cmd =
    app.add_subcommand("synth", "Sample a block Gaussian copula on [0,1]^d");
  synth_cmd->add_option("--d", synth_spec.d, "Dimension")->required();
  synth_cmd->add_option("--kstar", synth_spec.k_star, "Block size")->required();
  synth_cmd->add_option("--sigma", synth_spec.sigma, "Within-block correlation")->required();
  synth_cmd->add_option("--epsilon", synth_spec.epsilon, "Between-block correlation")
    ->required();
  synth_cmd->add_option("--n", synth_n, "Sample size")->required();
  synth_cmd->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--output", synth_output, "CSV file (stdout if omitted)");
  synth_cmd->add_flag("--header", synth_header, "Write a header line");

  OracleOptions oracle;
  auto* oracle_cmd =
    app.add_subcommand("oracle", "Tabulate closed-form Gaussian quantities");
  oracle_cmd->add_option("--d", oracle.dims, "Dimensions")->capture_default_str();
  oracle_cmd->add_option("--sigma", oracle.sigmas, "Within-block correlations")
    ->capture_default_str();
  oracle_cmd->add_option("--epsilon", oracle.epsilons, "Between-block correlations")
    ->capture_default_str();
  oracle_cmd->add_option("--k", oracle.k, "Block size bound for structures and bias")
    ->capture_default_str();
  oracle_cmd->add_option("--format", oracle.format, "json | csv")->capture_default_str();
  oracle_cmd->add_option("--output", oracle.output, "Output file (stdout if omitted)");

  DiagnoseOptions diag;
  diag.config.k = 2;
  auto* diag_cmd =
    app.add_subcommand("diagnose", "Risk decomposition on a synthetic truth");
  diag_cmd->add_option("--truth", diag.truth, "gaussian | fgm")->capture_default_str();
  diag_cmd->add_option("--d", diag.spec.d, "Dimension")->capture_default_str();
  diag_cmd->add_option("--kstar", diag.spec.k_star, "Gaussian block size")
    ->capture_default_str();
  diag_cmd->add_option("--sigma", diag.spec.sigma, "Gaussian within-block correlation")
    ->capture_default_str();
  diag_cmd->add_option("--epsilon", diag.spec.epsilon, "Gaussian between-block correlation")
    ->capture_default_str();
  diag_cmd->add_option("--theta", diag.theta, "FGM dependence parameter")
    ->capture_default_str();
  diag_cmd->add_option("--n", diag.n, "Dataset size")->capture_default_str();
  diag_cmd->add_option("--n-mc", diag.n_mc, "Monte Carlo draws")->capture_default_str();
  diag_cmd->add_option("--A", diag.A, "Bounding constant, |log f| <= A")
    ->capture_default_str();
  diag_cmd->add_option("--delta-n", diag.delta_n)->capture_default_str();
  diag_cmd->add_option("--delta-m", diag.delta_m)->capture_default_str();
  diag_cmd->add_option("--C-k", diag.C_k, "Variance constant")->capture_default_str();
  diag_cmd->add_flag("--estimate-A", diag.estimate_A,
                     "Also report a heuristic A from a fitted model");
  diag_cmd->add_option("--output", diag.output, "JSON file (stdout if omitted)");
  diag.config.seed = 0;
  {
    auto& c = diag.config;
    diag_cmd->add_option("--k", c.k, "Largest block size")->capture_default_str();
    diag_cmd->add_option("--split", c.split_fraction)->capture_default_str();
    diag_cmd->add_option("--beta", c.beta)->capture_default_str();
    diag_cmd->add_option("--kernel", c.kernel)->capture_default_str();
    diag_cmd->add_option("--bandwidth-scale", c.bandwidth_scale)->capture_default_str();
    diag_cmd->add_option("--seed", diag.seed, "Seed for data and Monte Carlo draws")
      ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParameter;
  }

  try {
    if (*fit_cmd)
      return run_fit(fit);
    if (*eval_cmd)
      return run_eval(model_path, points_path, eval_output, eval_log);
    if (*synth_cmd)
      return run_synth(synth_spec, synth_n, synth_seed, synth_output, synth_header);
    if (*oracle_cmd)
      return run_oracle(oracle);
    if (*diag_cmd) {
      diag.config.seed = diag.seed;
      return run_diagnose(diag);
    }
  } catch (const isde::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const isde::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const isde::PreconditionError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
