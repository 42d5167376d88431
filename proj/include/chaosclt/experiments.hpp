#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "chaosclt/ratio.hpp"

namespace chaosclt {

enum class ExperimentKind { Rates, BoundReport, Ratio, Diagnostics };

/// Accepts "rates", "bound", "bound-report", "ratio", "diagnose-nz" and
/// "diagnostics".
ExperimentKind parse_experiment_kind(std::string_view name);
std::string_view experiment_kind_name(ExperimentKind kind);

struct KernelSource {
  std::string path;  // relative paths resolve against ExperimentConfig::base_dir
  std::string text;  // inline kernel text; used when path is empty
};

/// One experiment manifest. Parsed from a single JSON document; see
/// configs/ for examples of every kind.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Rates;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;  // 0: all hardware threads
  std::string output_dir = "results";
  double constant_multiplier = 1.0;
  std::filesystem::path base_dir = ".";

  struct Rates {
    double hurst = 0.5;
    std::vector<double> lags;  // explicit rho(0), rho(1), ...; replaces fGn when set
    int q = 2;
    std::vector<std::size_t> n_grid;
    std::size_t replicas = 0;
  } rates;

  struct Bound {
    std::vector<KernelSource> kernels;
  } bound;

  struct Ratio {
    double rho = 1.0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    std::vector<double> lambda_grid;
    std::size_t replicas = 0;
    PerturbationConfig perturbation;
  } ratio;

  struct Diagnostics {
    double hurst = 0.7;
    std::vector<std::size_t> n_grid;
    int M = 2;
    std::vector<std::vector<int>> signs;  // empty: all-plus and alternating
  } diagnostics;

  /// Unknown keys are rejected so that typos do not silently fall back to
  /// defaults. The kind may be given by `kind` or by the caller.
  static ExperimentConfig from_json(const nlohmann::json& document,
                                    std::optional<ExperimentKind> kind = std::nullopt,
                                    std::filesystem::path base_dir = ".");
  static ExperimentConfig from_file(const std::filesystem::path& path,
                                    std::optional<ExperimentKind> kind = std::nullopt);

  /// Grids nonempty, replicas >= 100 where sampled, seed present.
  void validate() const;
};

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

/// Rows keyed by grid point plus run metadata. Tables, summaries and plot
/// data depend only on (config, seed, version); wall-clock timing is kept in
/// a separate document.
struct ResultTable {
  ExperimentKind kind = ExperimentKind::Rates;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json timing = nlohmann::json::object();
  std::vector<std::string> plot_columns;
  std::vector<std::pair<double, double>> plot;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

struct OutputFile {
  std::string name;
  std::string contents;
};

std::string to_csv(const ResultTable& table);
/// results.csv, summary.json, timing.json and, for rate-type experiments,
/// a two-column gnuplot file.
std::vector<OutputFile> render_outputs(const ResultTable& table);
void write_outputs(const std::vector<OutputFile>& files, const std::filesystem::path& dir);

/// Simulates sqrt(n)(Q_{q,n} - E Q_{q,n}) for fGn (or an explicit lag
/// covariance), standardised by the exact variance, and fits the log-log
/// slope of the Kolmogorov distance.
ResultTable run_rates(const ExperimentConfig& config);
/// theorem31_bound of the chaos sum built from the listed kernels, and the
/// phi decomposition when every order lies in {1, 2}.
ResultTable run_bound_report(const ExperimentConfig& config);
/// Sweeps lambda for the synthetic ratio family.
ResultTable run_ratio(const ExperimentConfig& config);
/// nz_ratio_diagnostic over the n grid and sign vectors.
ResultTable run_diagnose_nz(const ExperimentConfig& config);

ResultTable run_experiment(const ExperimentConfig& config);

}  // namespace chaosclt
