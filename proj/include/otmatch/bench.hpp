#pragma once

// Experiment drivers behind the benchmark CLI. Each driver returns a Table
// whose non-timing columns are a pure function of the config (including the
// master seed), independent of the worker count.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "otmatch/matcher.hpp"

namespace otmatch::bench {

inline constexpr int kSchemaVersion = 1;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Wall-clock columns, excluded from reproducibility comparisons.
  std::vector<std::string> timing_columns;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;

  // Header line prefixed by a "# schema_version=N <name>" comment line.
  std::string to_csv(const std::string& name) const;
  // Same, with every timing column blanked.
  std::string to_csv_without_timing(const std::string& name) const;
};

enum class Solver { kFaq, kGoat };

Solver parse_solver(const std::string& name);
std::string solver_name(Solver s);

// Solver-level knobs shared by the matching experiments.
struct SolverConfig {
  std::vector<Solver> solvers{Solver::kFaq, Solver::kGoat};
  double lambda = 100.0;
  int max_iters = 30;
  double fw_tol = 1e-2;
  int sinkhorn_max_sweeps = 1000;
  double sinkhorn_tol = 1e-8;
  Projection projection = Projection::kGradient;

  MatchOptions options(Solver s, std::uint64_t rng_seed) const;
};

struct LapVsLotConfig {
  std::vector<std::size_t> n_grid{250, 500};
  int replicates = 20;
  double cost_low = 100.0;
  double cost_high = 150.0;
  double lambda = 100.0;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct RhoSbmConfig {
  std::size_t n = 150;
  std::size_t blocks = 3;
  std::vector<std::vector<double>> block_probs{
      {0.2, 0.01, 0.01}, {0.01, 0.1, 0.01}, {0.01, 0.01, 0.2}};
  std::vector<double> rho_grid{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int replicates = 10;
  SolverConfig solver;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct SeededConfig {
  std::size_t n = 90;
  std::size_t blocks = 3;
  std::vector<std::vector<double>> block_probs{
      {0.7, 0.3, 0.4}, {0.3, 0.7, 0.3}, {0.4, 0.3, 0.7}};
  std::vector<double> rho_grid{0.9};
  std::vector<std::size_t> seed_grid{0, 5, 10, 20};
  int replicates = 20;
  SolverConfig solver;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ErScalingConfig {
  std::vector<std::size_t> n_grid{100, 200, 400};
  int replicates = 5;
  // Correlation between the pair; the edge density is log(n)/n.
  double rho = 1.0;
  SolverConfig solver;
  std::uint64_t seed = 1;
  int threads = 1;
};

enum class QapInit { kBarycenter, kRandom };

struct QaplibConfig {
  std::filesystem::path dir;
  QapInit init = QapInit::kBarycenter;
  int n_restarts = 1;
  SolverConfig solver;
  std::uint64_t seed = 1;
  int threads = 1;
};

Table run_lap_vs_lot(const LapVsLotConfig& cfg);
Table run_rho_sbm(const RhoSbmConfig& cfg);
Table run_seeded(const SeededConfig& cfg);
Table run_er_scaling(const ErScalingConfig& cfg);
Table run_qaplib(const QaplibConfig& cfg);

nlohmann::json to_json(const LapVsLotConfig& cfg);
nlohmann::json to_json(const RhoSbmConfig& cfg);
nlohmann::json to_json(const SeededConfig& cfg);
nlohmann::json to_json(const ErScalingConfig& cfg);
nlohmann::json to_json(const QaplibConfig& cfg);

// Mean, sample standard deviation and standard error of `value` grouped by
// the `keys` columns, in first-appearance order.
Table summarize(const Table& t, const std::vector<std::string>& keys,
                const std::vector<std::string>& values);

// Writes <out> (CSV), <out>.summary.csv and <out>.json (config sidecar with
// schema version, master seed and column list).
void write_outputs(const std::filesystem::path& out, const std::string& name,
                   const Table& table, const Table& summary,
                   const nlohmann::json& config);

// `requested` capped by the OTMATCH_THREADS environment variable when set;
// at least 1.
int effective_threads(int requested);

// Runs task(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace otmatch::bench
