// Command-line front end: runs experiments from a config file and sweeps the
// early-stopping threshold. Results land in the output directory as
// results.json plus plot-ready CSVs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flrce/flrce.hpp"

namespace {

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FLRCE_OUT"); env && *env) return env;
  return "out";
}

void print_summary(const flrce::ResultsBundle& bundle) {
  std::printf("%-14s %8s %8s %10s %14s %14s\n", "strategy", "rounds", "stopped",
              "accuracy", "energy_J", "bytes");
  for (const auto& s : bundle.strategies) {
    std::printf("%-14s %8d %8s %10.4f %14.2f %14llu\n", flrce::strategy_name(s.strategy),
                s.rounds_run, s.stopped_early ? "yes" : "no", s.final_accuracy,
                s.totals.energy_joules,
                static_cast<unsigned long long>(s.totals.bytes));
  }
}

void print_sweep(const std::vector<flrce::PsiSweepRow>& rows) {
  std::printf("%8s %10s %10s %10s %18s %18s\n", "psi", "stop", "triggered", "accuracy",
              "acc_per_joule", "acc_per_byte");
  for (const auto& r : rows) {
    std::printf("%8.3f %10d %10s %10.4f %18.6e %18.6e\n", r.psi, r.stop_round,
                r.triggered ? "yes" : "no", r.final_accuracy, r.accuracy_per_joule,
                r.accuracy_per_byte);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flrce: federated-learning simulator with relationship-based "
               "client selection and conflict-driven early stopping"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::string strategies_flag;
  std::string label_flag;
  std::uint64_t seed_flag = 0;
  bool seed_given = false;

  auto* run = app.add_subcommand("run", "Run the configured strategies and export results");
  run->add_option("--config", config_path, "Path to experiment config file")->required();
  run->add_option("--out", out_flag, "Output directory (default: $FLRCE_OUT or ./out)");
  run->add_option("--seed", seed_flag, "Override experiment seed")
      ->each([&](const std::string&) { seed_given = true; });
  run->add_option("--strategies", strategies_flag,
                  "Comma-separated strategies (flrce,flrce_no_es,random_fedavg)");
  run->add_option("--label", label_flag, "Label column name for CSV data");

  std::string values_flag;
  auto* sweep = app.add_subcommand("sweep-psi", "Grid-search the early-stopping threshold");
  sweep->add_option("--config", config_path, "Path to experiment config file")->required();
  sweep->add_option("--values", values_flag, "Comma-separated psi values")->required();
  sweep->add_option("--out", out_flag, "Output directory (default: $FLRCE_OUT or ./out)");
  sweep->add_option("--label", label_flag, "Label column name for CSV data");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = flrce::load_config(config_path);
    if (seed_given) cfg.seed = seed_flag;
    if (!label_flag.empty()) cfg.data.label_column = label_flag;
    if (!strategies_flag.empty()) {
      cfg.strategies.clear();
      for (const auto& name : flrce::detail::split_list(strategies_flag)) {
        const auto s = flrce::strategy_from_name(name);
        if (!s) {
          std::fprintf(stderr, "error: --strategies: unknown strategy '%s'\n", name.c_str());
          return 1;
        }
        cfg.strategies.push_back(*s);
      }
    }
    cfg.validate();

    const auto out_dir = resolve_out_dir(out_flag);
    if (run->parsed()) {
      const auto bundle = flrce::run_all(cfg);
      flrce::write_results(bundle, out_dir);
      flrce::export_plot_data(bundle, out_dir);
      print_summary(bundle);
      std::printf("results written to %s\n", out_dir.string().c_str());
    } else {
      std::vector<double> values;
      for (const auto& v : flrce::detail::split_list(values_flag)) {
        values.push_back(flrce::detail::parse_number<double>("--values", v));
      }
      const auto rows = flrce::sweep_psi(cfg, values);
      std::filesystem::create_directories(out_dir);
      flrce::write_psi_sweep_csv(rows, out_dir / "sweep_psi.csv");
      print_sweep(rows);
      std::printf("sweep written to %s\n", (out_dir / "sweep_psi.csv").string().c_str());
    }
  } catch (const flrce::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const flrce::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
