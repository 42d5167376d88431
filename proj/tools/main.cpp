// Command-line runner: reads a JSON experiment manifest, applies flag
// overrides and writes the result files produced by the library.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "chaosclt/chaosclt.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
};

int exit_code(cclt_status status) {
  switch (status) {
    case CCLT_OK: return 0;
    case CCLT_ERR_VALIDATION:
    case CCLT_ERR_UNSUPPORTED: return kExitValidation;
    case CCLT_ERR_NUMERICAL:
    case CCLT_ERR_INTERNAL: return kExitNumerical;
  }
  return kExitNumerical;
}

int run(const std::string& kind, const Options& opt) {
  std::ifstream in(opt.config, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open config '" << opt.config << "'\n";
    return kExitValidation;
  }
  std::ostringstream text;
  text << in.rdbuf();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << opt.config << ": " << e.what() << "\n";
    return kExitValidation;
  }
  if (!doc.is_object()) {
    std::cerr << "error: " << opt.config << ": expected a JSON object\n";
    return kExitValidation;
  }
  if (opt.seed) doc["seed"] = *opt.seed;
  if (opt.out) doc["output_dir"] = *opt.out;
  if (opt.threads) doc["threads"] = *opt.threads;

  const fs::path base = fs::path(opt.config).parent_path();
  const std::string base_dir = base.empty() ? "." : base.string();

  cclt_result* result = nullptr;
  const cclt_status status = cclt_experiment_run(kind.c_str(), doc.dump().c_str(), base_dir.c_str(), &result);
  if (status != CCLT_OK) {
    std::cerr << "error: " << cclt_last_error() << "\n";
    return exit_code(status);
  }

  const fs::path out_dir = cclt_result_output_dir(result);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create '" << out_dir.string() << "': " << ec.message() << "\n";
    cclt_result_free(result);
    return kExitValidation;
  }
  for (std::size_t i = 0; i < cclt_result_file_count(result); ++i) {
    const fs::path target = out_dir / cclt_result_file_name(result, i);
    std::ofstream out(target, std::ios::binary);
    out << cclt_result_file_text(result, i);
    if (!out) {
      std::cerr << "error: cannot write '" << target.string() << "'\n";
      cclt_result_free(result);
      return kExitValidation;
    }
    std::cout << target.string() << "\n";
  }
  cclt_result_free(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative CLT experiments on finite-dimensional Gaussian spaces"};
  app.set_version_flag("--version", std::string(cclt_version()));
  app.require_subcommand(1);

  Options opt;
  struct Command {
    const char* name;
    const char* kind;
    const char* help;
  };
  const Command commands[] = {
      {"rates", "rates", "power-variation convergence rates for fractional Gaussian noise"},
      {"bound", "bound", "bound decomposition for kernels read from files"},
      {"ratio", "ratio", "Kolmogorov distance and bound terms for the ratio family"},
      {"diagnose-nz", "diagnose-nz", "multi-lag covariance inequality ratios"},
  };
  std::string chosen;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", opt.config, "JSON experiment manifest")->required();
    sub->add_option("--seed", opt.seed, "override the manifest seed");
    sub->add_option("--out", opt.out, "override the output directory");
    sub->add_option("--threads", opt.threads, "worker threads (0: all cores)");
    sub->callback([&chosen, kind = cmd.kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  return run(chosen, opt);
}
