#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flrce/results.hpp"

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "flrce_test" / name;
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

flrce::ExperimentConfig tiny_config() {
  flrce::ExperimentConfig cfg;
  cfg.rounds = 5;
  cfg.clients = 4;
  cfg.participants = 2;
  cfg.seed = 31;
  cfg.data.classes = 2;
  cfg.data.per_class = 30;
  cfg.data.input_dim = 3;
  cfg.data.spread = 0.15;
  cfg.hidden_dims = {4};
  cfg.learning_rate = 0.2;
  cfg.local_epochs = 2;
  cfg.batch_size = 8;
  return cfg;
}

}  // namespace

TEST_CASE("a run emits one series per requested strategy") {
  auto cfg = tiny_config();
  cfg.strategies = {flrce::StrategyKind::flrce, flrce::StrategyKind::flrce_no_es,
                    flrce::StrategyKind::random_fedavg};
  const auto bundle = flrce::run_all(cfg);
  REQUIRE(bundle.strategies.size() == 3);
  REQUIRE(bundle.strategies[0].strategy == flrce::StrategyKind::flrce);
  REQUIRE(bundle.strategies[1].strategy == flrce::StrategyKind::flrce_no_es);
  REQUIRE(bundle.strategies[2].strategy == flrce::StrategyKind::random_fedavg);
  for (const auto& s : bundle.strategies) {
    REQUIRE(s.rounds_run >= 1);
    REQUIRE(s.rounds_run <= cfg.rounds);
    REQUIRE(s.final_accuracy >= 0.0);
    REQUIRE(s.final_accuracy <= 1.0);
  }
}

TEST_CASE("results files are byte-identical across repeated runs") {
  const auto cfg = tiny_config();
  const auto dir_a = temp_dir("bundle_a");
  const auto dir_b = temp_dir("bundle_b");

  const auto bundle_a = flrce::run_all(cfg);
  flrce::write_results(bundle_a, dir_a);
  flrce::export_plot_data(bundle_a, dir_a);

  const auto bundle_b = flrce::run_all(cfg);
  flrce::write_results(bundle_b, dir_b);
  flrce::export_plot_data(bundle_b, dir_b);

  REQUIRE(slurp(dir_a / "results.json") == slurp(dir_b / "results.json"));
  REQUIRE(slurp(dir_a / "accuracy_per_round.csv") == slurp(dir_b / "accuracy_per_round.csv"));
  REQUIRE(slurp(dir_a / "efficiency.csv") == slurp(dir_b / "efficiency.csv"));
  REQUIRE_FALSE(slurp(dir_a / "results.json").empty());
}

TEST_CASE("re-export is idempotent") {
  const auto cfg = tiny_config();
  const auto dir = temp_dir("idempotent");
  const auto bundle = flrce::run_all(cfg);
  flrce::export_plot_data(bundle, dir);
  const auto first = slurp(dir / "accuracy_per_round.csv");
  flrce::export_plot_data(bundle, dir);
  REQUIRE(slurp(dir / "accuracy_per_round.csv") == first);
}

TEST_CASE("accuracy csv has one row per round across strategies") {
  auto cfg = tiny_config();
  cfg.strategies = {flrce::StrategyKind::flrce, flrce::StrategyKind::random_fedavg};
  const auto dir = temp_dir("rows");
  const auto bundle = flrce::run_all(cfg);
  flrce::export_plot_data(bundle, dir);

  std::size_t expected_rows = 0;
  for (const auto& s : bundle.strategies) expected_rows += s.records.size();

  std::ifstream in(dir / "accuracy_per_round.csv");
  std::string line;
  std::getline(in, line);
  REQUIRE(line ==
          "strategy,round,mode,mean_accuracy,conflicts,es_triggered,energy_joules,bytes");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  REQUIRE(rows == expected_rows);
}

TEST_CASE("exported values match the bundle fields exactly") {
  const auto cfg = tiny_config();
  const auto dir = temp_dir("fields");
  const auto bundle = flrce::run_all(cfg);
  flrce::export_plot_data(bundle, dir);

  std::ifstream in(dir / "efficiency.csv");
  std::string line;
  std::getline(in, line);  // header
  for (const auto& s : bundle.strategies) {
    REQUIRE(std::getline(in, line));
    std::istringstream row(line);
    std::string name, rounds, stopped, acc;
    std::getline(row, name, ',');
    std::getline(row, rounds, ',');
    std::getline(row, stopped, ',');
    std::getline(row, acc, ',');
    REQUIRE(name == flrce::strategy_name(s.strategy));
    REQUIRE(std::stoi(rounds) == s.rounds_run);
    REQUIRE(std::stod(acc) == s.final_accuracy);
  }
}

TEST_CASE("results json carries schema version, config echo and map snapshots") {
  const auto cfg = tiny_config();
  const auto bundle = flrce::run_all(cfg);
  const auto j = flrce::to_json(bundle);
  REQUIRE(j["schema_version"] == flrce::kResultsSchemaVersion);
  REQUIRE(j["config"]["clients"] == 4);
  REQUIRE(j["config"]["psi"] == 1.0);  // participants / 2
  REQUIRE(j["strategies"].size() == bundle.strategies.size());
  const auto& first = j["strategies"][0];
  REQUIRE(first["omega"].size() == 4);
  REQUIRE(first["omega"][0].size() == 4);
  REQUIRE(first["heuristics"].size() == 4);
  REQUIRE(first["records"].size() == static_cast<std::size_t>(bundle.strategies[0].rounds_run));
}

TEST_CASE("psi sweep reports untriggered rows at the full horizon") {
  auto cfg = tiny_config();
  cfg.rounds = 8;
  // conflicts <= P-1 = 1, so psi = P = 2 can never trigger.
  const auto rows = flrce::sweep_psi(cfg, {0.0, 2.0});
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].psi == 0.0);
  REQUIRE_FALSE(rows[1].triggered);
  REQUIRE(rows[1].stop_round == 8);

  // psi = 0 stops at the first exploit round (conflicts >= 0 always).
  const auto bundle = flrce::run_all(cfg);
  int first_exploit = 0;
  for (const auto& r : bundle.strategies[0].records) {
    if (r.mode == flrce::SelectionMode::exploit) {
      first_exploit = r.round;
      break;
    }
  }
  if (first_exploit > 0) {
    REQUIRE(rows[0].triggered);
    REQUIRE(rows[0].stop_round == first_exploit);
  }
}

TEST_CASE("sweep stop rounds are non-decreasing in psi") {
  auto cfg = tiny_config();
  cfg.rounds = 12;
  cfg.seed = 5;
  const auto rows = flrce::sweep_psi(cfg, {0.0, 0.5, 1.0, 1.5, 2.0});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].stop_round >= rows[i - 1].stop_round);
  }
}

TEST_CASE("sweep rejects an empty value list") {
  REQUIRE_THROWS_AS(flrce::sweep_psi(tiny_config(), {}), flrce::ConfigError);
}

TEST_CASE("csv-backed experiments run end to end") {
  const auto dir = temp_dir("csvdata");
  const auto csv = dir / "data.csv";
  const auto synth = flrce::generate_synthetic(3, 40, 4, 0.2, 9);
  flrce::save_csv(synth, csv.string());

  flrce::ExperimentConfig cfg;
  cfg.rounds = 3;
  cfg.clients = 5;
  cfg.participants = 2;
  cfg.data.kind = flrce::DataConfig::Kind::csv;
  cfg.data.path = csv.string();
  cfg.data.label_column = "label";
  cfg.hidden_dims = {};
  cfg.local_epochs = 1;
  cfg.batch_size = 16;
  cfg.strategies = {flrce::StrategyKind::flrce};
  const auto bundle = flrce::run_all(cfg);
  REQUIRE(bundle.strategies.size() == 1);
  REQUIRE(bundle.strategies[0].rounds_run >= 1);
}
