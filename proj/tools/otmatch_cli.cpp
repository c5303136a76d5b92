// otmatch: graph matching benchmarks and a general-purpose matching entry
// point. Run `otmatch --help` for the subcommand list.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "otmatch/bench.hpp"
#include "otmatch/matcher.hpp"
#include "otmatch/objective.hpp"
#include "otmatch/rng.hpp"
#include "otmatch/samplers.hpp"
#include "otmatch/text_io.hpp"

namespace fs = std::filesystem;
using namespace otmatch;
using namespace otmatch::bench;

namespace {

std::vector<std::vector<double>> parse_block_probs(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_numbers(row));
  return rows;
}

std::vector<Solver> parse_solvers(const std::vector<std::string>& names) {
  std::vector<Solver> out;
  for (const auto& n : names) out.push_back(parse_solver(n));
  return out;
}

struct SolverFlags {
  std::vector<std::string> solvers{"faq", "goat"};
  double lambda = 100.0;
  int max_iters = 30;
  double fw_tol = 1e-2;
  std::string projection = "gradient";

  void add(CLI::App* app) {
    app->add_option("--solvers", solvers, "Solvers to run (faq, goat)")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--lambda", lambda, "Sinkhorn inverse temperature")
        ->capture_default_str();
    app->add_option("--max-iters", max_iters, "Frank-Wolfe iteration cap")
        ->capture_default_str();
    app->add_option("--fw-tol", fw_tol, "Frank-Wolfe stopping tolerance")
        ->capture_default_str();
    app->add_option("--projection", projection,
                    "Final assignment from the gradient or the iterate")
        ->check(CLI::IsMember({"gradient", "iterate"}))
        ->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig c;
    c.solvers = parse_solvers(solvers);
    c.lambda = lambda;
    c.max_iters = max_iters;
    c.fw_tol = fw_tol;
    c.projection =
        projection == "gradient" ? Projection::kGradient : Projection::kIterate;
    return c;
  }
};

void finish(const fs::path& out, const std::string& name, const Table& table,
            const std::vector<std::string>& keys,
            const std::vector<std::string>& values, const nlohmann::json& cfg) {
  write_outputs(out, name, table, summarize(table, keys, values), cfg);
  std::cerr << "wrote " << table.rows.size() << " rows to " << out.string()
            << " (+ .summary.csv, .json)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe graph matching with exact-LAP (FAQ) or "
               "Sinkhorn (GOAT) step directions"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads,
                 "Worker threads for replicates (capped by OTMATCH_THREADS)")
      ->capture_default_str();

  // lap-vs-lot
  LapVsLotConfig lvl;
  std::string lvl_out = "lap_vs_lot.csv";
  auto* c_lvl = app.add_subcommand(
      "lap-vs-lot", "Exact LAP against LOT on uniform random cost matrices");
  c_lvl->add_option("--n", lvl.n_grid, "Matrix orders")->delimiter(',')
      ->capture_default_str();
  c_lvl->add_option("--replicates", lvl.replicates)->capture_default_str();
  c_lvl->add_option("--cost-low", lvl.cost_low)->capture_default_str();
  c_lvl->add_option("--cost-high", lvl.cost_high)->capture_default_str();
  c_lvl->add_option("--lambda", lvl.lambda)->capture_default_str();
  c_lvl->add_option("--seed", lvl.seed)->capture_default_str();
  c_lvl->add_option("--out", lvl_out)->capture_default_str();

  // rho-sbm
  RhoSbmConfig sbm;
  SolverFlags sbm_solver;
  std::string sbm_probs, sbm_out = "rho_sbm.csv";
  auto* c_sbm = app.add_subcommand(
      "rho-sbm", "Match ratio on correlated SBM pairs across rho");
  c_sbm->add_option("--n", sbm.n)->capture_default_str();
  c_sbm->add_option("--blocks", sbm.blocks, "Equal-size blocks")
      ->capture_default_str();
  c_sbm->add_option("--block-probs", sbm_probs,
                    "Rows separated by ';', entries by ',' (default: "
                    "0.2/0.1/0.2 diagonal, 0.01 off-diagonal)");
  c_sbm->add_option("--rho", sbm.rho_grid)->delimiter(',')->capture_default_str();
  c_sbm->add_option("--replicates", sbm.replicates)->capture_default_str();
  c_sbm->add_option("--seed", sbm.seed)->capture_default_str();
  c_sbm->add_option("--out", sbm_out)->capture_default_str();
  sbm_solver.add(c_sbm);

  // seeded
  SeededConfig sd;
  SolverFlags sd_solver;
  std::string sd_probs, sd_out = "seeded.csv";
  auto* c_sd = app.add_subcommand(
      "seeded", "Non-seed match ratio on correlated SBM pairs across seed counts");
  c_sd->add_option("--n", sd.n)->capture_default_str();
  c_sd->add_option("--blocks", sd.blocks)->capture_default_str();
  c_sd->add_option("--block-probs", sd_probs,
                   "Rows separated by ';' (default: 0.7 diagonal, 0.3/0.4 "
                   "off-diagonal)");
  c_sd->add_option("--rho", sd.rho_grid)->delimiter(',')->capture_default_str();
  c_sd->add_option("--seeds", sd.seed_grid, "Seed counts m")->delimiter(',')
      ->capture_default_str();
  c_sd->add_option("--replicates", sd.replicates)->capture_default_str();
  c_sd->add_option("--seed", sd.seed)->capture_default_str();
  c_sd->add_option("--out", sd_out)->capture_default_str();
  sd_solver.add(c_sd);

  // er-scaling
  ErScalingConfig er;
  SolverFlags er_solver;
  std::string er_out = "er_scaling.csv";
  auto* c_er = app.add_subcommand(
      "er-scaling", "Runtime and match ratio on ER pairs with density log(n)/n");
  c_er->add_option("--n", er.n_grid)->delimiter(',')->capture_default_str();
  c_er->add_option("--rho", er.rho, "Correlation of the pair")
      ->capture_default_str();
  c_er->add_option("--replicates", er.replicates)->capture_default_str();
  c_er->add_option("--seed", er.seed)->capture_default_str();
  c_er->add_option("--out", er_out)->capture_default_str();
  er_solver.add(c_er);

  // qaplib
  QaplibConfig qap;
  SolverFlags qap_solver;
  std::string qap_dir, qap_init = "barycenter", qap_out = "qaplib.csv";
  auto* c_qap = app.add_subcommand(
      "qaplib", "Minimize every .dat instance in a directory");
  c_qap->add_option("--dir", qap_dir, "Directory of .dat (and .sln) files")
      ->required();
  c_qap->add_option("--init", qap_init)
      ->check(CLI::IsMember({"barycenter", "random"}))
      ->capture_default_str();
  c_qap->add_option("--restarts", qap.n_restarts,
                    "Random initializations (with --init random)")
      ->capture_default_str();
  c_qap->add_option("--seed", qap.seed)->capture_default_str();
  c_qap->add_option("--out", qap_out)->capture_default_str();
  qap_solver.add(c_qap);

  // match
  std::string m_a, m_b, m_solver = "goat", m_init = "barycenter",
                        m_sense = "max", m_alignment = "alignment.txt",
                        m_summary;
  bool m_ptr = false, m_shuffle = false;
  int m_restarts = 1;
  std::uint64_t m_seed = 0;
  MatchOptions m_opts;
  auto* c_match = app.add_subcommand("match", "Match two graphs from files");
  c_match->add_option("a", m_a, "First matrix file")->required();
  c_match->add_option("b", m_b, "Second matrix file")->required();
  c_match->add_option("--solver", m_solver)
      ->check(CLI::IsMember({"faq", "goat"}))
      ->capture_default_str();
  c_match->add_flag("--ptr", m_ptr, "Apply pass-to-ranks to both inputs");
  c_match->add_option("--init", m_init)
      ->check(CLI::IsMember({"barycenter", "random"}))
      ->capture_default_str();
  c_match->add_option("--restarts", m_restarts)->capture_default_str();
  c_match->add_option("--seed", m_seed)->capture_default_str();
  c_match->add_flag("--shuffle", m_shuffle, "Shuffle B before each restart");
  c_match->add_option("--sense", m_sense, "max: graph matching; min: QAP")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  c_match->add_option("--max-iters", m_opts.max_iters)->capture_default_str();
  c_match->add_option("--fw-tol", m_opts.fw_tol)->capture_default_str();
  c_match->add_option("--lambda", m_opts.sinkhorn.lambda)->capture_default_str();
  c_match->add_option("--alignment", m_alignment, "Output permutation file")
      ->capture_default_str();
  c_match->add_option("--summary", m_summary,
                      "Append the JSON summary line here (default: stdout)");

  // shuffle
  std::string s_in, s_out, s_truth;
  std::uint64_t s_seed = 0;
  auto* c_shuffle = app.add_subcommand(
      "shuffle", "Write a randomly relabelled copy of a matrix file");
  c_shuffle->add_option("input", s_in)->required();
  c_shuffle->add_option("output", s_out)->required();
  c_shuffle->add_option("--truth", s_truth,
                        "Write the relabelling permutation here");
  c_shuffle->add_option("--seed", s_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_lvl) {
      lvl.threads = threads;
      const Table t = run_lap_vs_lot(lvl);
      finish(lvl_out, "lap-vs-lot", t, {"n"},
             {"relative_gap", "lap_seconds", "lot_seconds", "lot_sweeps"},
             to_json(lvl));
    } else if (*c_sbm) {
      sbm.threads = threads;
      sbm.solver = sbm_solver.config();
      if (!sbm_probs.empty()) sbm.block_probs = parse_block_probs(sbm_probs);
      const Table t = run_rho_sbm(sbm);
      finish(sbm_out, "rho-sbm", t, {"rho", "solver"},
             {"match_ratio", "seconds", "iterations"}, to_json(sbm));
    } else if (*c_sd) {
      sd.threads = threads;
      sd.solver = sd_solver.config();
      if (!sd_probs.empty()) sd.block_probs = parse_block_probs(sd_probs);
      const Table t = run_seeded(sd);
      finish(sd_out, "seeded", t, {"rho", "seeds", "solver"},
             {"match_ratio", "seconds", "iterations"}, to_json(sd));
    } else if (*c_er) {
      er.threads = threads;
      er.solver = er_solver.config();
      const Table t = run_er_scaling(er);
      finish(er_out, "er-scaling", t, {"n", "solver"},
             {"match_ratio", "seconds", "iterations"}, to_json(er));
    } else if (*c_qap) {
      qap.threads = threads;
      qap.dir = qap_dir;
      qap.init = qap_init == "random" ? QapInit::kRandom : QapInit::kBarycenter;
      qap.solver = qap_solver.config();
      const Table t = run_qaplib(qap);
      finish(qap_out, "qaplib", t, {"solver"},
             {"objective", "gap_to_optimum", "log10_goat_over_faq", "seconds"},
             to_json(qap));
    } else if (*c_match) {
      SquareMatrix a = parse_matrix_text(read_file(m_a));
      SquareMatrix b = parse_matrix_text(read_file(m_b));
      if (a.order() != b.order()) {
        std::ostringstream msg;
        msg << "order mismatch: " << m_a << " has " << a.order() << ", "
            << m_b << " has " << b.order();
        throw std::invalid_argument(msg.str());
      }
      if (m_ptr) {
        a = pass_to_ranks(a);
        b = pass_to_ranks(b);
      }
      m_opts.step_solver =
          m_solver == "faq" ? StepSolver::kExactLap : StepSolver::kLot;
      m_opts.init = m_init == "random" ? InitMode::kRandomizedBlend
                                       : InitMode::kBarycenter;
      m_opts.n_restarts = m_restarts;
      m_opts.rng_seed = m_seed;
      m_opts.shuffle_input = m_shuffle;
      m_opts.sense = m_sense == "min" ? Sense::kMinimize : Sense::kMaximize;
      const MatchResult r = frank_wolfe_match(a, b, m_opts);
      write_file(m_alignment, format_permutation_text(r.alignment));

      nlohmann::json line{
          {"schema_version", kSchemaVersion},
          {"a", m_a},
          {"b", m_b},
          {"objective", r.objective},
          {"edge_disagreements", edge_disagreements(a, b, r.alignment)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"restart", r.restart},
          {"seconds", r.wall_time.count()},
          {"alignment_file", m_alignment},
          {"config",
           {{"solver", m_solver},
            {"ptr", m_ptr},
            {"init", m_init},
            {"restarts", m_restarts},
            {"seed", m_seed},
            {"shuffle", m_shuffle},
            {"sense", m_sense},
            {"max_iters", m_opts.max_iters},
            {"fw_tol", m_opts.fw_tol},
            {"lambda", m_opts.sinkhorn.lambda}}}};
      if (m_summary.empty()) {
        std::cout << line.dump() << "\n";
      } else {
        std::ofstream out(m_summary, std::ios::app);
        if (!out) throw std::runtime_error("cannot write " + m_summary);
        out << line.dump() << "\n";
      }
    } else if (*c_shuffle) {
      const SquareMatrix m = parse_matrix_text(read_file(s_in));
      Rng rng(s_seed);
      const ShuffledGraph s = shuffle_pair(m, rng);
      write_file(s_out, format_matrix_text(s.b));
      if (!s_truth.empty()) {
        write_file(s_truth, format_permutation_text(s.truth));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "otmatch: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
