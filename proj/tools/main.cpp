// poissonity: command-line front end for the Poisson power-comparison
// experiments.
//
//   poissonity run --preset 1 --seed 42 --out out/
//   poissonity calibrate gamma --target 10
//   poissonity pmf-compare --preset 4
//   poissonity list-presets

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "poissonity/calibrate.hpp"
#include "poissonity/engine.hpp"
#include "poissonity/error.hpp"
#include "poissonity/presets.hpp"
#include "poissonity/report.hpp"

namespace fs = std::filesystem;
using namespace poissonity;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      levels.push_back(v);
    } catch (const std::exception&) {
      throw DomainError("--alpha: cannot parse '" + item + "'");
    }
  }
  if (levels.empty()) throw DomainError("--alpha: empty list");
  return levels;
}

void print_summary(const ExperimentResult& r, const fs::path& dir) {
  std::printf("alternative: %s\n", describe(r.config.alternative).c_str());
  std::printf("lambda=%g n=%zu R=%zu k_min=%lld k_max=%lld seed=%llu\n", r.config.lambda,
              r.config.n, r.config.replications, static_cast<long long>(r.config.k_min),
              static_cast<long long>(r.config.k_max),
              static_cast<unsigned long long>(r.config.master_seed));
  std::printf("\n%-10s %-16s %7s %12s %7s\n", "test", "sided", "alpha", "critical", "power");
  for (const auto& e : r.power) {
    std::printf("%-10s %-16s %7.3f %12.6f %7.4f\n", to_string(e.test).c_str(),
                to_string(e.sided).c_str(), e.alpha, e.critical_value, e.power);
  }
  if (!r.warnings.empty()) {
    std::printf("\nwarnings:\n");
    for (const auto& w : r.warnings) std::printf("  - %s\n", w.c_str());
  }
  std::printf("\noutputs written to %s\n", dir.string().c_str());
}

struct RunArgs {
  std::optional<int> preset;
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> n;
  std::optional<std::string> alpha;
  std::string out = "out";
  unsigned workers = 0;
  bool json = false;
};

int run_command(const RunArgs& a) {
  ExperimentConfig config;
  std::string label;
  if (a.preset) {
    config = preset(*a.preset);
    label = "preset" + std::to_string(*a.preset);
  } else {
    config = load_config(*a.config);
    label = fs::path(*a.config).stem().string();
  }
  if (a.seed) config.master_seed = *a.seed;
  if (a.reps) config.replications = *a.reps;
  if (a.n) config.n = *a.n;
  if (a.alpha) config.alpha_levels = parse_alpha_list(*a.alpha);

  // Configuration problems are usage errors; everything after is runtime.
  validate(config);

  ExperimentResult result;
  try {
    result = run_experiment(config, RunOptions{a.workers});
  } catch (const DomainError& e) {
    throw Error(e.what());
  }
  const fs::path dir = fs::path(a.out) / label;
  write_outputs(result, dir);
  if (a.json) {
    std::cout << summary_to_json(result).dump(2) << "\n";
  } else {
    print_summary(result, dir);
  }
  return kExitOk;
}

int calibrate_command(const std::string& kind, double target, double tol, bool as_json) {
  const FloorFamily family = parse_floor_family(kind);
  const CalibrationResult r = calibrate_equidispersed(family, target, tol);
  if (as_json) {
    std::cout << calibration_to_json(r, target, tol).dump(2) << "\n";
  } else {
    std::printf("family:            %s\n", to_string(family).c_str());
    std::printf("target:            %.10g\n", target);
    std::printf("k:                 %.6f\n", r.shape);
    std::printf("b:                 %.6f\n", r.scale);
    std::printf("achieved mean:     %.12f\n", r.achieved_mean);
    std::printf("achieved variance: %.12f\n", r.achieved_variance);
    std::printf("residual:          %.3e\n", r.residual);
    std::printf("iterations:        %d\n", r.iterations);
  }
  return kExitOk;
}

int pmf_compare_command(int id, const std::optional<std::string>& out) {
  const ExperimentConfig config = preset(id);
  const fs::path path =
      out ? fs::path(*out) : fs::path("out") / ("preset" + std::to_string(id)) / "pmf_compare.csv";
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create " + path.parent_path().string());
  }
  write_text_file(path, pmf_csv(pmf_compare(config)));
  std::printf("wrote %s\n", path.string().c_str());
  return kExitOk;
}

int list_presets_command(bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (const auto& p : preset_catalog()) {
      arr.push_back({{"id", p.id},
                     {"title", p.title},
                     {"config", config_to_json(p.config)},
                     {"reference_p_min", p.reference_p_min},
                     {"reference_p_max", p.reference_p_max}});
    }
    std::cout << arr.dump(2) << "\n";
    return kExitOk;
  }
  std::printf("%-3s %-7s %-4s %-6s %-6s %s\n", "id", "lambda", "n", "k_min", "k_max",
              "alternative");
  for (const auto& p : preset_catalog()) {
    std::printf("%-3d %-7g %-4zu %-6lld %-6lld %s\n", p.id, p.config.lambda, p.config.n,
                static_cast<long long>(p.config.k_min), static_cast<long long>(p.config.k_max),
                describe(p.config.alternative).c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo power comparison of Poisson dispersion and goodness-of-fit tests"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a paired null/alternative experiment");
  auto* preset_opt =
      run->add_option("--preset", run_args.preset, "Preset experiment id")->check(CLI::Range(1, 9));
  auto* config_opt =
      run->add_option("--config", run_args.config, "JSON experiment configuration")
          ->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  run->add_option("--seed", run_args.seed, "Master seed (default 1)");
  run->add_option("--reps", run_args.reps, "Number of replications R");
  run->add_option("--n", run_args.n, "Sample size");
  run->add_option("--alpha", run_args.alpha,
                  "Comma-separated significance levels (default 0.01,0.05,0.10)");
  run->add_option("--out", run_args.out, "Output directory")->capture_default_str();
  run->add_option("--workers", run_args.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  run->add_flag("--json", run_args.json, "Print the summary as JSON");

  std::string kind;
  double target = 10.0;
  double tol = 1e-8;
  bool calib_json = false;
  auto* calibrate = app.add_subcommand("calibrate", "Solve equidispersed floor gamma/Weibull parameters");
  calibrate->add_option("kind", kind, "gamma or weibull")
      ->required()
      ->check(CLI::IsMember({"gamma", "weibull"}));
  calibrate->add_option("--target", target, "Common mean and variance")
      ->capture_default_str()
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            try {
              return std::stod(s) > 2.0 ? "" : "target must exceed 2";
            } catch (const std::exception&) {
              return "target must be a number";
            }
          },
          "> 2"));
  calibrate->add_option("--tol", tol, "Moment tolerance")
      ->capture_default_str()
      ->check(CLI::Range(1e-10, 1.0));
  calibrate->add_flag("--json", calib_json, "Print the result as JSON");

  int pmf_preset = 0;
  std::optional<std::string> pmf_out;
  auto* pmf = app.add_subcommand("pmf-compare", "Write Poisson vs alternative pmf table as CSV");
  pmf->add_option("--preset", pmf_preset, "Preset experiment id")
      ->required()
      ->check(CLI::Range(1, 9));
  pmf->add_option("--out", pmf_out, "Output CSV path (default out/preset<id>/pmf_compare.csv)");

  bool list_json = false;
  auto* list = app.add_subcommand("list-presets", "List the preset experiments");
  list->add_flag("--json", list_json, "Print as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      if (!run_args.preset && !run_args.config) {
        std::cerr << "run: one of --preset or --config is required\n";
        return kExitUsage;
      }
      return run_command(run_args);
    }
    if (*calibrate) return calibrate_command(kind, target, tol, calib_json);
    if (*pmf) return pmf_compare_command(pmf_preset, pmf_out);
    if (*list) return list_presets_command(list_json);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
