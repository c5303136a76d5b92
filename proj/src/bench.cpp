#include "otmatch/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

#include "otmatch/kernels.hpp"
#include "otmatch/lap.hpp"
#include "otmatch/objective.hpp"
#include "otmatch/qaplib.hpp"
#include "otmatch/rng.hpp"
#include "otmatch/samplers.hpp"
#include "otmatch/sinkhorn.hpp"
#include "otmatch/text_io.hpp"

namespace otmatch::bench {

namespace {

using Clock = std::chrono::steady_clock;
using Row = std::vector<std::string>;

std::string num(double x) { return format_number(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Stream key for a grid value, independent of its position in the grid.
std::uint64_t key_for(std::uint64_t master, double grid_value) {
  return stream_seed(master, std::bit_cast<std::uint64_t>(grid_value));
}

std::uint64_t key_for_name(std::uint64_t master, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return stream_seed(master, h);
}

// Rows produced by independent tasks, concatenated in task order.
Table collect(std::vector<std::string> columns,
              std::vector<std::string> timing,
              std::vector<std::vector<Row>> per_task) {
  Table t;
  t.columns = std::move(columns);
  t.timing_columns = std::move(timing);
  for (auto& rows : per_task) {
    for (auto& r : rows) t.rows.push_back(std::move(r));
  }
  return t;
}

SbmSpec make_spec(std::size_t n, std::size_t blocks,
                  const std::vector<std::vector<double>>& probs, double rho) {
  SbmSpec spec{equal_blocks(n, blocks), probs, rho};
  spec.validate();
  return spec;
}

nlohmann::json solver_json(const SolverConfig& s) {
  nlohmann::json j;
  std::vector<std::string> names;
  for (Solver v : s.solvers) names.push_back(solver_name(v));
  j["solvers"] = names;
  j["lambda"] = s.lambda;
  j["max_iters"] = s.max_iters;
  j["fw_tol"] = s.fw_tol;
  j["sinkhorn_max_sweeps"] = s.sinkhorn_max_sweeps;
  j["sinkhorn_tol"] = s.sinkhorn_tol;
  j["projection"] =
      s.projection == Projection::kGradient ? "gradient" : "iterate";
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const Table& t, const std::string& name,
                       bool blank_timing) {
  std::vector<bool> blank(t.columns.size(), false);
  if (blank_timing) {
    for (const auto& c : t.timing_columns) blank[t.column(c)] = true;
  }
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) +
                    " " + name + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += ',';
      if (!blank[c]) out += csv_escape(r[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw std::out_of_range("Table: no column " + name);
  }
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  return std::stod(rows.at(row).at(column(name)));
}

const std::string& Table::text(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

std::string Table::to_csv(const std::string& name) const {
  return render_csv(*this, name, false);
}

std::string Table::to_csv_without_timing(const std::string& name) const {
  return render_csv(*this, name, true);
}

Solver parse_solver(const std::string& name) {
  if (name == "faq") return Solver::kFaq;
  if (name == "goat") return Solver::kGoat;
  throw std::invalid_argument("unknown solver '" + name + "' (faq|goat)");
}

std::string solver_name(Solver s) { return s == Solver::kFaq ? "faq" : "goat"; }

MatchOptions SolverConfig::options(Solver s, std::uint64_t rng_seed) const {
  MatchOptions o;
  o.step_solver = s == Solver::kFaq ? StepSolver::kExactLap : StepSolver::kLot;
  o.sinkhorn.lambda = lambda;
  o.sinkhorn.max_sweeps = sinkhorn_max_sweeps;
  o.sinkhorn.tol = sinkhorn_tol;
  o.max_iters = max_iters;
  o.fw_tol = fw_tol;
  o.shuffle_input = true;
  o.rng_seed = rng_seed;
  o.projection = projection;
  o.validate();
  return o;
}

int effective_threads(int requested) {
  int n = std::max(1, requested);
  if (const char* env = std::getenv("OTMATCH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      // Replicates already run concurrently; keep kernels single-threaded.
      kernels::set_threads(1);
      while (!failed) {
        const std::size_t i = next++;
        if (i >= count) break;
        try {
          task(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Table run_lap_vs_lot(const LapVsLotConfig& cfg) {
  if (cfg.replicates < 0) throw std::invalid_argument("replicates must be >= 0");
  if (!(cfg.cost_high > cfg.cost_low)) {
    throw std::invalid_argument("cost_high must exceed cost_low");
  }
  SinkhornParams params;
  params.lambda = cfg.lambda;
  params.validate();

  struct Task {
    std::size_t n;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t n : cfg.n_grid) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, r});
  }
  std::vector<std::vector<Row>> out(tasks.size());
  parallel_for(tasks.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const Task& task = tasks[i];
    Rng rng(stream_seed(key_for(cfg.seed, static_cast<double>(task.n)),
                        static_cast<std::uint64_t>(task.replicate)));
    SquareMatrix m(task.n);
    const double width = cfg.cost_high - cfg.cost_low;
    for (double& x : m.values()) x = cfg.cost_low + width * rng.uniform();

    auto t0 = Clock::now();
    const LapSolution exact = solve_lap(m, Sense::kMinimize);
    const double lap_s = seconds_since(t0);
    t0 = Clock::now();
    const SinkhornResult approx = lot(m, Sense::kMinimize, params);
    const double lot_s = seconds_since(t0);

    const double ofv_lot = inner(approx.plan, m);
    const double gap = (exact.objective - ofv_lot) / exact.objective;
    out[i].push_back({num(task.n), num(task.replicate), num(lap_s), num(lot_s),
                      num(exact.objective), num(ofv_lot), num(gap),
                      num(approx.sweeps), approx.converged ? "1" : "0",
                      num(approx.deviation)});
  });
  return collect({"n", "replicate", "lap_seconds", "lot_seconds", "ofv_lap",
                  "ofv_lot", "relative_gap", "lot_sweeps", "lot_converged",
                  "lot_marginal_deviation"},
                 {"lap_seconds", "lot_seconds"}, std::move(out));
}

namespace {

const std::vector<std::string> kMatchColumns = {
    "solver", "match_ratio", "objective", "edge_disagreements",
    "iterations", "converged", "seconds"};

Row match_row(Solver s, const MatchResult& r, double ratio,
              const SquareMatrix& a, const SquareMatrix& b) {
  return {solver_name(s),      num(ratio),
          num(r.objective),    num(edge_disagreements(a, b, r.alignment)),
          num(r.iterations),   r.converged ? "1" : "0",
          num(r.wall_time.count())};
}

struct PlantedPair {
  SquareMatrix a;
  SquareMatrix b;       // shuffled
  Permutation truth;    // alignment that recovers the planted pairing
  Permutation shuffle;  // b == permute_matrix(original b, shuffle)
};

PlantedPair planted_sbm(const SbmSpec& spec, Rng& rng) {
  GraphPair g = sample_sbm_pair(spec, rng);
  ShuffledGraph s = shuffle_pair(g.b, rng);
  // Vertex i of A pairs with vertex i of B, now labelled shuffle[i].
  Permutation truth = s.truth.inverse();
  return {std::move(g.a), std::move(s.b), std::move(truth), std::move(s.truth)};
}

}  // namespace

Table run_rho_sbm(const RhoSbmConfig& cfg) {
  if (cfg.replicates < 0) throw std::invalid_argument("replicates must be >= 0");
  struct Task {
    double rho;
    int replicate;
  };
  std::vector<Task> tasks;
  for (double rho : cfg.rho_grid) {
    make_spec(cfg.n, cfg.blocks, cfg.block_probs, rho);
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({rho, r});
  }
  std::vector<std::vector<Row>> out(tasks.size());
  parallel_for(tasks.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::uint64_t key = stream_seed(key_for(cfg.seed, task.rho),
                                          static_cast<std::uint64_t>(task.replicate));
    Rng rng(key);
    const PlantedPair pair =
        planted_sbm(make_spec(cfg.n, cfg.blocks, cfg.block_probs, task.rho), rng);
    for (Solver s : cfg.solver.solvers) {
      const MatchResult r =
          frank_wolfe_match(pair.a, pair.b, cfg.solver.options(s, key));
      Row row{num(task.rho), num(task.replicate)};
      Row tail = match_row(s, r, match_ratio(r.alignment, pair.truth), pair.a,
                           pair.b);
      row.insert(row.end(), tail.begin(), tail.end());
      out[i].push_back(std::move(row));
    }
  });
  std::vector<std::string> cols{"rho", "replicate"};
  cols.insert(cols.end(), kMatchColumns.begin(), kMatchColumns.end());
  return collect(std::move(cols), {"seconds"}, std::move(out));
}

Table run_seeded(const SeededConfig& cfg) {
  if (cfg.replicates < 0) throw std::invalid_argument("replicates must be >= 0");
  for (std::size_t m : cfg.seed_grid) {
    if (m >= cfg.n) {
      throw std::invalid_argument("seed count must be smaller than n");
    }
  }
  struct Task {
    double rho;
    int replicate;
  };
  std::vector<Task> tasks;
  for (double rho : cfg.rho_grid) {
    make_spec(cfg.n, cfg.blocks, cfg.block_probs, rho);
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({rho, r});
  }
  std::vector<std::vector<Row>> out(tasks.size());
  parallel_for(tasks.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::uint64_t key = stream_seed(key_for(cfg.seed, task.rho),
                                          static_cast<std::uint64_t>(task.replicate));
    Rng rng(key);
    const PlantedPair pair =
        planted_sbm(make_spec(cfg.n, cfg.blocks, cfg.block_probs, task.rho), rng);
    // Nested seed sets: the first m vertices of one random order.
    Rng seed_rng(stream_seed(key, 1));
    const Permutation order = seed_rng.permutation(cfg.n);
    for (std::size_t m : cfg.seed_grid) {
      SeedSet seeds;
      for (std::size_t t = 0; t < m; ++t) {
        const std::size_t va = order[t];
        seeds.pairs.emplace_back(va, pair.shuffle[va]);
      }
      for (Solver s : cfg.solver.solvers) {
        const MatchResult r =
            seeded_match(pair.a, pair.b, seeds, cfg.solver.options(s, key));
        Row row{num(task.rho), num(m), num(task.replicate)};
        Row tail = match_row(s, r, non_seed_match_ratio(r.alignment, pair.truth, seeds),
                             pair.a, pair.b);
        row.insert(row.end(), tail.begin(), tail.end());
        out[i].push_back(std::move(row));
      }
    }
  });
  std::vector<std::string> cols{"rho", "seeds", "replicate"};
  cols.insert(cols.end(), kMatchColumns.begin(), kMatchColumns.end());
  return collect(std::move(cols), {"seconds"}, std::move(out));
}

Table run_er_scaling(const ErScalingConfig& cfg) {
  if (cfg.replicates < 0) throw std::invalid_argument("replicates must be >= 0");
  struct Task {
    std::size_t n;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t n : cfg.n_grid) {
    if (n < 2) throw std::invalid_argument("er-scaling needs n >= 2");
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, r});
  }
  std::vector<std::vector<Row>> out(tasks.size());
  parallel_for(tasks.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::uint64_t key =
        stream_seed(key_for(cfg.seed, static_cast<double>(task.n)),
                    static_cast<std::uint64_t>(task.replicate));
    Rng rng(key);
    const double n = static_cast<double>(task.n);
    const double p = std::log(n) / n;
    const PlantedPair pair = planted_sbm(SbmSpec{{task.n}, {{p}}, cfg.rho}, rng);
    for (Solver s : cfg.solver.solvers) {
      const MatchResult r =
          frank_wolfe_match(pair.a, pair.b, cfg.solver.options(s, key));
      Row row{num(task.n), num(task.replicate), num(p), num(cfg.rho)};
      Row tail = match_row(s, r, match_ratio(r.alignment, pair.truth), pair.a,
                           pair.b);
      row.insert(row.end(), tail.begin(), tail.end());
      out[i].push_back(std::move(row));
    }
  });
  std::vector<std::string> cols{"n", "replicate", "p", "rho"};
  cols.insert(cols.end(), kMatchColumns.begin(), kMatchColumns.end());
  return collect(std::move(cols), {"seconds"}, std::move(out));
}

Table run_qaplib(const QaplibConfig& cfg) {
  if (!std::filesystem::is_directory(cfg.dir)) {
    throw std::invalid_argument("not a directory: " + cfg.dir.string());
  }
  if (cfg.n_restarts < 1) throw std::invalid_argument("n_restarts must be >= 1");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(cfg.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".dat") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::vector<Row>> out(files.size());
  parallel_for(files.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const std::string name = files[i].stem().string();
    QapInstance inst;
    try {
      inst = load_qaplib_instance(files[i]);
    } catch (const std::exception& e) {
      for (Solver s : cfg.solver.solvers) {
        out[i].push_back({name, "", solver_name(s), "error", "", "", "", "",
                          "", "", e.what()});
      }
      return;
    }
    // Same seed for every solver: shuffles and initializations are shared.
    const std::uint64_t key = key_for_name(cfg.seed, name);
    std::map<Solver, MatchResult> results;
    for (Solver s : cfg.solver.solvers) {
      MatchOptions o = cfg.solver.options(s, key);
      o.sense = Sense::kMinimize;
      if (cfg.init == QapInit::kRandom) {
        o.init = InitMode::kRandomizedBlend;
        o.n_restarts = cfg.n_restarts;
      }
      results.emplace(s, frank_wolfe_match(inst.a, inst.b, o));
    }
    std::string rel;
    if (results.count(Solver::kFaq) && results.count(Solver::kGoat)) {
      const double fg = results.at(Solver::kGoat).objective;
      const double ff = results.at(Solver::kFaq).objective;
      if (fg > 0.0 && ff > 0.0) rel = num(relative_accuracy(fg, ff));
    }
    for (Solver s : cfg.solver.solvers) {
      const MatchResult& r = results.at(s);
      std::string opt, gap;
      if (inst.known_optimum) {
        opt = num(*inst.known_optimum);
        if (*inst.known_optimum != 0.0) {
          gap = num((r.objective - *inst.known_optimum) / *inst.known_optimum);
        }
      }
      out[i].push_back({name, num(inst.order()), solver_name(s), "ok",
                        num(r.objective), opt, gap, rel, num(r.iterations),
                        num(r.wall_time.count()), ""});
    }
  });
  return collect({"instance", "n", "solver", "status", "objective",
                  "known_optimum", "gap_to_optimum", "log10_goat_over_faq",
                  "iterations", "seconds", "error"},
                 {"seconds"}, std::move(out));
}

nlohmann::json to_json(const LapVsLotConfig& cfg) {
  return {{"n_grid", cfg.n_grid},       {"replicates", cfg.replicates},
          {"cost_low", cfg.cost_low},   {"cost_high", cfg.cost_high},
          {"lambda", cfg.lambda},       {"seed", cfg.seed},
          {"threads", cfg.threads}};
}

nlohmann::json to_json(const RhoSbmConfig& cfg) {
  return {{"n", cfg.n},
          {"blocks", cfg.blocks},
          {"block_probs", cfg.block_probs},
          {"rho_grid", cfg.rho_grid},
          {"replicates", cfg.replicates},
          {"solver", solver_json(cfg.solver)},
          {"seed", cfg.seed},
          {"threads", cfg.threads}};
}

nlohmann::json to_json(const SeededConfig& cfg) {
  return {{"n", cfg.n},
          {"blocks", cfg.blocks},
          {"block_probs", cfg.block_probs},
          {"rho_grid", cfg.rho_grid},
          {"seed_grid", cfg.seed_grid},
          {"replicates", cfg.replicates},
          {"solver", solver_json(cfg.solver)},
          {"seed", cfg.seed},
          {"threads", cfg.threads}};
}

nlohmann::json to_json(const ErScalingConfig& cfg) {
  return {{"n_grid", cfg.n_grid},
          {"replicates", cfg.replicates},
          {"density", "log(n)/n"},
          {"rho", cfg.rho},
          {"caption_reading",
           "the caption's log(n)/n is applied as edge density with the "
           "stated rho as correlation"},
          {"solver", solver_json(cfg.solver)},
          {"seed", cfg.seed},
          {"threads", cfg.threads}};
}

nlohmann::json to_json(const QaplibConfig& cfg) {
  return {{"dir", cfg.dir.string()},
          {"init", cfg.init == QapInit::kBarycenter ? "barycenter" : "random"},
          {"n_restarts", cfg.n_restarts},
          {"solver", solver_json(cfg.solver)},
          {"seed", cfg.seed},
          {"threads", cfg.threads}};
}

Table summarize(const Table& t, const std::vector<std::string>& keys,
                const std::vector<std::string>& values) {
  std::vector<std::size_t> key_cols, value_cols;
  for (const auto& k : keys) key_cols.push_back(t.column(k));
  for (const auto& v : values) value_cols.push_back(t.column(v));

  std::vector<Row> group_keys;
  std::map<Row, std::vector<std::vector<double>>> samples;
  for (const auto& r : t.rows) {
    Row k;
    for (std::size_t c : key_cols) k.push_back(r[c]);
    auto [it, inserted] = samples.try_emplace(k);
    if (inserted) {
      group_keys.push_back(k);
      it->second.resize(value_cols.size());
    }
    for (std::size_t v = 0; v < value_cols.size(); ++v) {
      const std::string& cell = r[value_cols[v]];
      if (!cell.empty()) it->second[v].push_back(std::stod(cell));
    }
  }

  Table s;
  s.columns = keys;
  s.columns.push_back("count");
  for (const auto& v : values) {
    s.columns.push_back(v + "_mean");
    s.columns.push_back(v + "_sd");
    s.columns.push_back(v + "_se");
    if (v == "seconds" || v.ends_with("_seconds")) {
      s.timing_columns.push_back(v + "_mean");
      s.timing_columns.push_back(v + "_sd");
      s.timing_columns.push_back(v + "_se");
    }
  }
  for (const auto& k : group_keys) {
    const auto& groups = samples.at(k);
    Row row = k;
    row.push_back(num(groups.empty() ? std::size_t{0} : groups[0].size()));
    for (const auto& xs : groups) {
      const double count = static_cast<double>(xs.size());
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean = xs.empty() ? 0.0 : mean / count;
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double sd = xs.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
      const double se = xs.empty() ? 0.0 : sd / std::sqrt(count);
      row.push_back(num(mean));
      row.push_back(num(sd));
      row.push_back(num(se));
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

void write_outputs(const std::filesystem::path& out, const std::string& name,
                   const Table& table, const Table& summary,
                   const nlohmann::json& config) {
  write_file(out, table.to_csv(name));
  std::filesystem::path summary_path = out;
  summary_path += ".summary.csv";
  write_file(summary_path, summary.to_csv(name + "-summary"));

  nlohmann::json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["experiment"] = name;
  meta["config"] = config;
  meta["master_seed"] = config.value("seed", std::uint64_t{0});
  meta["columns"] = table.columns;
  meta["timing_columns"] = table.timing_columns;
  meta["summary_columns"] = summary.columns;
  std::filesystem::path json_path = out;
  json_path += ".json";
  write_file(json_path, meta.dump(2) + "\n");
}

}  // namespace otmatch::bench
