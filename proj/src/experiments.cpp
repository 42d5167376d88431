#include "chaosclt/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "chaosclt/bounds.hpp"
#include "chaosclt/distances.hpp"
#include "chaosclt/errors.hpp"
#include "chaosclt/kernel_io.hpp"
#include "chaosclt/random.hpp"
#include "chaosclt/stationary_gaussian.hpp"

namespace chaosclt {

using nlohmann::json;

namespace {

constexpr std::size_t kMinReplicas = 100;

// ---------------------------------------------------------------- json input

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw DomainError(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw DomainError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

std::string key_path(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

double read_real(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw DomainError(key_path(where, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw DomainError(key_path(where, key) + ": must be finite");
  return x;
}

std::uint64_t read_unsigned(const json& v, const std::string& path) {
  // Integer literals built in C++ are stored signed; parsed text is unsigned.
  const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (!ok) throw DomainError(path + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

int read_int(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw DomainError(key_path(where, key) + ": expected an integer");
  return v.get<int>();
}

std::size_t read_size(const json& obj, const char* key, std::size_t fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return static_cast<std::size_t>(read_unsigned(obj.at(key), key_path(where, key)));
}

std::vector<std::size_t> read_size_list(const json& obj, const char* key, const std::string& where) {
  std::vector<std::size_t> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  const std::string path = key_path(where, key);
  if (!v.is_array()) throw DomainError(path + ": expected an array");
  for (const json& e : v) out.push_back(static_cast<std::size_t>(read_unsigned(e, path)));
  return out;
}

std::vector<double> read_real_list(const json& obj, const char* key, const std::string& where) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  const std::string path = key_path(where, key);
  if (!v.is_array()) throw DomainError(path + ": expected an array");
  for (const json& e : v) {
    if (!e.is_number()) throw DomainError(path + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

// ------------------------------------------------------------------ helpers

// Shortest representation that round-trips exactly.
std::string format_real(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return std::to_string(*u);
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

Cell integer_cell(std::uint64_t v) { return v; }

json base_summary(const ExperimentConfig& c) {
  return {{"kind", std::string(experiment_kind_name(c.kind))},
          {"version", CHAOSCLT_VERSION},
          {"seed", *c.seed},
          {"constant_multiplier", c.constant_multiplier}};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_signs(const std::vector<int>& signs) {
  std::string out;
  for (int s : signs) {
    if (!out.empty()) out += ' ';
    out += s > 0 ? "+1" : "-1";
  }
  return out;
}

std::vector<std::vector<int>> default_signs(int M) {
  if (M == 2) return {{1, 1}, {1, -1}};
  return {{1, 1, 1}, {1, -1, 1}, {1, 1, -1}};
}

}  // namespace

// ------------------------------------------------------------------- config

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "rates") return ExperimentKind::Rates;
  if (name == "bound" || name == "bound-report") return ExperimentKind::BoundReport;
  if (name == "ratio") return ExperimentKind::Ratio;
  if (name == "diagnose-nz" || name == "diagnostics") return ExperimentKind::Diagnostics;
  throw DomainError("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Rates: return "rates";
    case ExperimentKind::BoundReport: return "bound-report";
    case ExperimentKind::Ratio: return "ratio";
    case ExperimentKind::Diagnostics: return "diagnostics";
  }
  return "rates";
}

ExperimentConfig ExperimentConfig::from_json(const json& doc, std::optional<ExperimentKind> kind,
                                             std::filesystem::path base_dir) {
  check_keys(doc,
             {"kind", "seed", "threads", "output_dir", "constant_multiplier", "rates", "bound",
              "ratio", "diagnostics"},
             "config");
  ExperimentConfig c;
  c.base_dir = std::move(base_dir);

  std::optional<ExperimentKind> declared;
  if (doc.contains("kind")) {
    if (!doc.at("kind").is_string()) throw DomainError("kind: expected a string");
    declared = parse_experiment_kind(doc.at("kind").get<std::string>());
  }
  if (kind && declared && *kind != *declared) {
    throw DomainError("config declares kind '" + std::string(experiment_kind_name(*declared)) +
                      "' but '" + std::string(experiment_kind_name(*kind)) + "' was requested");
  }
  if (!kind && !declared) throw DomainError("config: experiment kind missing");
  c.kind = kind ? *kind : *declared;

  if (doc.contains("seed")) c.seed = read_unsigned(doc.at("seed"), "seed");
  if (doc.contains("threads")) c.threads = static_cast<unsigned>(read_unsigned(doc.at("threads"), "threads"));
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw DomainError("output_dir: expected a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  c.constant_multiplier = read_real(doc, "constant_multiplier", 1.0, "");

  const json& rates = section(doc, "rates");
  check_keys(rates, {"hurst", "lags", "q", "n_grid", "replicas"}, "rates");
  c.rates.hurst = read_real(rates, "hurst", c.rates.hurst, "rates");
  c.rates.lags = read_real_list(rates, "lags", "rates");
  c.rates.q = read_int(rates, "q", c.rates.q, "rates");
  c.rates.n_grid = read_size_list(rates, "n_grid", "rates");
  c.rates.replicas = read_size(rates, "replicas", 0, "rates");

  const json& bound = section(doc, "bound");
  check_keys(bound, {"kernels"}, "bound");
  if (bound.contains("kernels")) {
    const json& list = bound.at("kernels");
    if (!list.is_array()) throw DomainError("bound.kernels: expected an array");
    for (const json& entry : list) {
      check_keys(entry, {"path", "text"}, "bound.kernels[]");
      KernelSource src;
      if (entry.contains("path")) {
        if (!entry.at("path").is_string()) throw DomainError("bound.kernels[].path: expected a string");
        src.path = entry.at("path").get<std::string>();
      }
      if (entry.contains("text")) {
        if (!entry.at("text").is_string()) throw DomainError("bound.kernels[].text: expected a string");
        src.text = entry.at("text").get<std::string>();
      }
      if (src.path.empty() == src.text.empty()) {
        throw DomainError("bound.kernels[]: give exactly one of 'path' and 'text'");
      }
      c.bound.kernels.push_back(std::move(src));
    }
  }

  const json& ratio = section(doc, "ratio");
  check_keys(ratio, {"rho", "sigma1", "sigma2", "lambda_grid", "replicas", "perturbation"}, "ratio");
  c.ratio.rho = read_real(ratio, "rho", c.ratio.rho, "ratio");
  c.ratio.sigma1 = read_real(ratio, "sigma1", c.ratio.sigma1, "ratio");
  c.ratio.sigma2 = read_real(ratio, "sigma2", c.ratio.sigma2, "ratio");
  c.ratio.lambda_grid = read_real_list(ratio, "lambda_grid", "ratio");
  c.ratio.replicas = read_size(ratio, "replicas", 0, "ratio");
  const json& pert = section(ratio, "perturbation");
  const std::string pw = "ratio.perturbation";
  check_keys(pert,
             {"s_linear", "s_quadratic", "u_linear", "u_quadratic", "mu", "decay", "mean_shift",
              "overlap"},
             pw);
  auto& p = c.ratio.perturbation;
  p.s_linear = read_real(pert, "s_linear", 0.0, pw);
  p.s_quadratic = read_real(pert, "s_quadratic", 0.0, pw);
  p.u_linear = read_real(pert, "u_linear", 0.0, pw);
  p.u_quadratic = read_real(pert, "u_quadratic", 0.0, pw);
  p.mu = read_real(pert, "mu", 0.0, pw);
  p.decay = read_real(pert, "decay", 0.0, pw);
  p.mean_shift = read_real(pert, "mean_shift", 0.0, pw);
  p.overlap = read_real(pert, "overlap", 0.0, pw);

  const json& diag = section(doc, "diagnostics");
  check_keys(diag, {"hurst", "n_grid", "M", "signs"}, "diagnostics");
  c.diagnostics.hurst = read_real(diag, "hurst", c.diagnostics.hurst, "diagnostics");
  c.diagnostics.n_grid = read_size_list(diag, "n_grid", "diagnostics");
  c.diagnostics.M = read_int(diag, "M", c.diagnostics.M, "diagnostics");
  if (diag.contains("signs")) {
    const json& list = diag.at("signs");
    if (!list.is_array()) throw DomainError("diagnostics.signs: expected an array of arrays");
    for (const json& row : list) {
      if (!row.is_array()) throw DomainError("diagnostics.signs: expected an array of arrays");
      std::vector<int> signs;
      for (const json& s : row) {
        if (!s.is_number_integer()) throw DomainError("diagnostics.signs: entries must be +1 or -1");
        signs.push_back(s.get<int>());
      }
      c.diagnostics.signs.push_back(std::move(signs));
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path,
                                             std::optional<ExperimentKind> kind) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
  return from_json(doc, kind, path.parent_path().empty() ? "." : path.parent_path());
}

void ExperimentConfig::validate() const {
  if (!seed) throw DomainError("config: seed is mandatory");
  if (!(constant_multiplier > 0.0)) throw DomainError("constant_multiplier must be positive");
  switch (kind) {
    case ExperimentKind::Rates:
      if (rates.n_grid.empty()) throw DomainError("rates.n_grid must be nonempty");
      for (std::size_t n : rates.n_grid)
        if (n < 2) throw DomainError("rates.n_grid: every n must be >= 2");
      if (rates.replicas < kMinReplicas) throw DomainError("rates.replicas must be >= 100");
      if (rates.q < 2 || rates.q > 32 || rates.q % 2 != 0) {
        throw DomainError("rates.q must be even and in [2, 32]");
      }
      if (rates.lags.empty() && !(rates.hurst > 0.0 && rates.hurst < 0.75)) {
        throw DomainError("rates.hurst must lie in (0, 3/4)");
      }
      break;
    case ExperimentKind::BoundReport:
      if (bound.kernels.empty()) throw DomainError("bound.kernels must be nonempty");
      break;
    case ExperimentKind::Ratio:
      if (ratio.lambda_grid.empty()) throw DomainError("ratio.lambda_grid must be nonempty");
      for (double l : ratio.lambda_grid)
        if (!(l > 0.0)) throw DomainError("ratio.lambda_grid: every lambda must be positive");
      if (ratio.replicas < kMinReplicas) throw DomainError("ratio.replicas must be >= 100");
      break;
    case ExperimentKind::Diagnostics:
      if (diagnostics.n_grid.empty()) throw DomainError("diagnostics.n_grid must be nonempty");
      if (diagnostics.M != 2 && diagnostics.M != 3) throw DomainError("diagnostics.M must be 2 or 3");
      if (!(diagnostics.hurst > 0.0 && diagnostics.hurst < 1.0)) {
        throw DomainError("diagnostics.hurst must lie in (0, 1)");
      }
      for (const auto& signs : diagnostics.signs) {
        if (signs.size() != static_cast<std::size_t>(diagnostics.M)) {
          throw DomainError("diagnostics.signs: every sign vector must have length M");
        }
        for (int s : signs)
          if (s != 1 && s != -1) throw DomainError("diagnostics.signs: entries must be +1 or -1");
      }
      break;
  }
}

// ------------------------------------------------------------------ tables

std::size_t ResultTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DomainError("ResultTable: no column '" + std::string(name) + "'");
}

double ResultTable::number(std::size_t row, std::string_view name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return static_cast<double>(*u);
  throw DomainError("ResultTable: column '" + std::string(name) + "' is not numeric");
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<OutputFile> render_outputs(const ResultTable& table) {
  std::vector<OutputFile> files;
  files.push_back({"results.csv", to_csv(table)});
  files.push_back({"summary.json", table.summary.dump(2) + "\n"});
  if (!table.plot.empty()) {
    std::string dat = "#";
    for (const auto& name : table.plot_columns) dat += " " + name;
    dat += '\n';
    for (const auto& [x, y] : table.plot) dat += format_real(x) + " " + format_real(y) + "\n";
    files.push_back({std::string(experiment_kind_name(table.kind)) + ".dat", dat});
  }
  files.push_back({"timing.json", table.timing.dump(2) + "\n"});
  return files;
}

void write_outputs(const std::vector<OutputFile>& files, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DomainError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& file : files) {
    std::ofstream out(dir / file.name, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + (dir / file.name).string() + "'");
    out << file.contents;
  }
}

// ------------------------------------------------------------- experiments

ResultTable run_rates(const ExperimentConfig& c) {
  c.validate();
  const auto& cfg = c.rates;
  const Stopwatch total_clock;
  const bool fgn = cfg.lags.empty();
  const CovarianceFunction rho =
      fgn ? CovarianceFunction::fgn(cfg.hurst) : CovarianceFunction::from_lags(cfg.lags);
  const double mean = expected_power_variation(rho.rho0(), cfg.q);
  const double noise = 1.0 / std::sqrt(static_cast<double>(cfg.replicas));

  ResultTable table;
  table.kind = c.kind;
  table.columns = {"n", "seed", "stream_seed", "replicas", "d_kol", "mc_noise",
                   "bound_total", "sum_abs_rho_4_3", "sum_rho_sq_3_2", "bound_variance",
                   "distance_over_bound"};
  table.plot_columns = {"n", "d_kol"};
  json point_times = json::array();
  std::vector<std::pair<double, double>> fit_points;
  double ratio_min = INFINITY;
  double ratio_max = 0.0;

  for (std::size_t n : cfg.n_grid) {
    const Stopwatch clock;
    const StationarySampler sampler(rho, n);
    const std::uint64_t stream_seed = derive_seed(*c.seed, n);
    const double var_q = exact_variance_power_variation(rho, cfg.q, n);
    if (!(var_q > 0.0)) throw NumericalError("rates: Var(Q) is not positive at n = " + std::to_string(n));
    const double sd = std::sqrt(var_q);

    std::vector<double> stats(cfg.replicas);
    sampler.for_each_replica(cfg.replicas, stream_seed, c.threads,
                             [&](std::size_t r, std::span<const double> path) {
                               stats[r] = (power_variation(path, cfg.q) - mean) / sd;
                             });
    const double d = kolmogorov_distance(EmpiricalSample(std::move(stats)), 0.0, 1.0);

    const double bound_variance = static_cast<double>(n) * var_q / std::pow(rho.rho0(), cfg.q);
    const BoundReport bound =
        power_variation_bound(rho, n, cfg.q, bound_variance, c.constant_multiplier);
    const double ratio = d / bound.total;
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);

    table.rows.push_back({integer_cell(n), integer_cell(*c.seed), integer_cell(stream_seed),
                          integer_cell(cfg.replicas), d, noise, bound.total,
                          bound.term("sum_abs_rho_4_3"), bound.term("sum_rho_sq_3_2"),
                          bound_variance, ratio});
    table.plot.emplace_back(static_cast<double>(n), d);
    fit_points.emplace_back(static_cast<double>(n), d);
    point_times.push_back({{"n", n}, {"seconds", clock.seconds()}});
  }

  json summary = base_summary(c);
  if (fgn) {
    const RatePrediction predicted = fgn_rate(cfg.hurst, cfg.q);
    summary["hurst"] = cfg.hurst;
    summary["predicted"] = {{"exponent", predicted.exponent}, {"log_power", predicted.log_power}};
  } else {
    summary["lags"] = cfg.lags;
    summary["predicted"] = nullptr;
  }
  summary["q"] = cfg.q;
  summary["replicas"] = cfg.replicas;
  summary["n_grid"] = cfg.n_grid;
  if (fit_points.size() >= 2) {
    const RateFit fit = rate_fit(fit_points);
    summary["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual}};
  } else {
    summary["fit"] = nullptr;
  }
  summary["distance_over_bound"] = {
      {"min", ratio_min}, {"max", ratio_max}, {"spread", ratio_max / ratio_min}};
  table.summary = std::move(summary);
  table.timing = {{"threads", c.threads}, {"points", point_times}, {"total_seconds", total_clock.seconds()}};
  return table;
}

ResultTable run_bound_report(const ExperimentConfig& c) {
  c.validate();
  const Stopwatch clock;
  std::map<int, Kernel> kernels;
  std::optional<std::size_t> dimension;
  for (std::size_t i = 0; i < c.bound.kernels.size(); ++i) {
    const KernelSource& src = c.bound.kernels[i];
    const std::string name = src.path.empty() ? "kernels[" + std::to_string(i) + "]" : src.path;
    const std::string text =
        src.path.empty() ? src.text : read_text_file(c.base_dir / std::filesystem::path(src.path));
    Kernel k = [&] {
      try {
        return parse_kernel(text);
      } catch (const ParseError& e) {
        throw e.with_source(name);
      }
    }();
    const int p = order(k);
    if (dimension && *dimension != dim(k)) {
      throw DomainError(name + ": dimension " + std::to_string(dim(k)) + " differs from " +
                        std::to_string(*dimension));
    }
    dimension = dim(k);
    if (!kernels.emplace(p, std::move(k)).second) {
      throw DomainError(name + ": chaos order " + std::to_string(p) + " given twice");
    }
  }
  const ChaosSum chaos(*dimension, kernels);

  ResultTable table;
  table.kind = c.kind;
  table.columns = {"report", "quantity", "value"};
  json reports = json::object();
  auto add_report = [&](const std::string& name, const BoundReport& report) {
    for (const auto& t : report.terms) table.rows.push_back({name, t.label, t.value});
    table.rows.push_back({name, std::string("variance"), report.variance});
    table.rows.push_back({name, std::string("prefactor"), report.prefactor});
    table.rows.push_back({name, std::string("constant_multiplier"), report.constant_multiplier});
    table.rows.push_back({name, std::string("total"), report.total});
    reports[name] = to_json(report);
  };
  add_report("theorem31", theorem31_bound(chaos, c.constant_multiplier));

  if (chaos.highest_order() <= 2) {
    const std::size_t n = *dimension;
    const Kernel f1 = chaos.kernel(1) ? *chaos.kernel(1) : Kernel(DenseKernel::zeros(1, n));
    const Kernel f2 = chaos.kernel(2) ? *chaos.kernel(2) : Kernel(DenseKernel::zeros(2, n));
    add_report("phi", phi_report(f1, f2, c.constant_multiplier));
  }

  json summary = base_summary(c);
  std::vector<int> orders;
  for (const auto& [p, k] : chaos.kernels()) orders.push_back(p);
  summary["dim"] = *dimension;
  summary["orders"] = orders;
  summary["second_moment"] = second_moment(chaos);
  summary["reports"] = std::move(reports);
  table.summary = std::move(summary);
  table.timing = {{"threads", c.threads}, {"total_seconds", clock.seconds()}};
  return table;
}

ResultTable run_ratio(const ExperimentConfig& c) {
  c.validate();
  const auto& cfg = c.ratio;
  const Stopwatch total_clock;
  const double noise = 1.0 / std::sqrt(static_cast<double>(cfg.replicas));
  const double tolerance = 2.0 * noise;

  ResultTable table;
  table.kind = c.kind;
  table.columns = {"lambda", "m", "seed", "stream_seed", "replicas", "accepted",
                   "rejection_rate", "d_kol", "mc_noise", "bound_total", "phi", "mean_G",
                   "variance_F", "variance_G", "perturbations"};
  table.plot_columns = {"lambda", "d_kol"};
  json point_times = json::array();

  bool monotone = true;
  bool bound_decreasing = true;
  double previous_d = INFINITY;
  double previous_bound = INFINITY;
  double max_rejection = 0.0;
  double final_d = 0.0;
  for (double lambda : cfg.lambda_grid) {
    const Stopwatch clock;
    const RatioFamily fam =
        make_synthetic_family(cfg.rho, cfg.sigma1, cfg.sigma2, lambda, cfg.perturbation);
    const std::uint64_t stream_seed = derive_seed(*c.seed, std::bit_cast<std::uint64_t>(lambda));
    RatioBatch batch = sample_ratio_batch(fam, cfg.replicas, stream_seed, c.threads);
    if (batch.accepted.empty()) {
      throw NumericalError("ratio: every sample was rejected at lambda = " + format_real(lambda));
    }
    const std::size_t accepted = batch.accepted.size();
    const double d = kolmogorov_distance(EmpiricalSample(std::move(batch.accepted)), 0.0,
                                         fam.limit_variance());
    const BoundReport bound = theorem41_bound(fam, c.constant_multiplier);

    if (d > previous_d + tolerance) monotone = false;
    if (!(bound.total < previous_bound)) bound_decreasing = false;
    previous_d = d;
    previous_bound = bound.total;
    max_rejection = std::max(max_rejection, batch.rejection_rate());
    final_d = d;

    table.rows.push_back({lambda, integer_cell(fam.m), integer_cell(*c.seed),
                          integer_cell(stream_seed), integer_cell(cfg.replicas),
                          integer_cell(accepted), batch.rejection_rate(), d, noise, bound.total,
                          bound.term("phi"), bound.term("mean_G"), bound.term("variance_F"),
                          bound.term("variance_G"), bound.term("perturbations")});
    table.plot.emplace_back(lambda, d);
    point_times.push_back({{"lambda", lambda}, {"seconds", clock.seconds()}});
  }

  json summary = base_summary(c);
  summary["rho"] = cfg.rho;
  summary["sigma1"] = cfg.sigma1;
  summary["sigma2"] = cfg.sigma2;
  summary["replicas"] = cfg.replicas;
  summary["lambda_grid"] = cfg.lambda_grid;
  summary["limit_variance"] = cfg.sigma1 * cfg.sigma1 + cfg.sigma2 * cfg.sigma2;
  summary["monotone_within_tolerance"] = monotone;
  summary["monotone_tolerance"] = tolerance;
  summary["bound_strictly_decreasing"] = bound_decreasing;
  summary["final_d_kol"] = final_d;
  summary["max_rejection_rate"] = max_rejection;
  table.summary = std::move(summary);
  table.timing = {{"threads", c.threads}, {"points", point_times}, {"total_seconds", total_clock.seconds()}};
  return table;
}

ResultTable run_diagnose_nz(const ExperimentConfig& c) {
  c.validate();
  const auto& cfg = c.diagnostics;
  const Stopwatch clock;
  const CovarianceFunction rho = CovarianceFunction::fgn(cfg.hurst);
  const auto sign_rows = cfg.signs.empty() ? default_signs(cfg.M) : cfg.signs;

  ResultTable table;
  table.kind = c.kind;
  table.columns = {"hurst", "n", "M", "signs", "ratio"};
  for (std::size_t n : cfg.n_grid) {
    for (const auto& signs : sign_rows) {
      const double ratio = nz_ratio_diagnostic(rho, n, cfg.M, signs);
      table.rows.push_back(
          {cfg.hurst, integer_cell(n), std::int64_t{cfg.M}, format_signs(signs), ratio});
    }
  }
  json summary = base_summary(c);
  summary["hurst"] = cfg.hurst;
  summary["M"] = cfg.M;
  summary["n_grid"] = cfg.n_grid;
  summary["signs"] = sign_rows;
  table.summary = std::move(summary);
  table.timing = {{"threads", c.threads}, {"total_seconds", clock.seconds()}};
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::Rates: return run_rates(config);
    case ExperimentKind::BoundReport: return run_bound_report(config);
    case ExperimentKind::Ratio: return run_ratio(config);
    case ExperimentKind::Diagnostics: return run_diagnose_nz(config);
  }
  throw DomainError("unknown experiment kind");
}

}  // namespace chaosclt
