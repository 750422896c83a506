#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Command implementations behind the CLI front end. Each run_* takes an
// argument struct filled by the flag parser, writes its report to the given
// stream, and returns a process exit code: 0 success, 1 internal, 2 a solve
// that could not produce a result, 3 bad input. Library exceptions escape;
// the caller maps them onto stderr and the exit code.

namespace welfair::cmd {

struct DataArgs {
  std::string path;
  std::string label = "y";
  std::string group;  // group column name; empty when the data has none
  std::string task = "regression";
  bool standardize = false;
  bool flip_labels = false;
  double target_rescale = 0.0;  // 0 keeps labels as loaded
  std::string group_rule;       // "column:threshold" derived grouping
};

struct ReportArgs {
  double alpha = 0.5;
  double beta = 0.5;
  double ge_alpha = 2.0;
  // classification benefit table override b00,b01,b10,b11; empty = default
  std::vector<double> benefit;
};

struct SolverArgs {
  double tol_c = 1e-6;
  double tol_g = 1e-8;
  double lambda_max = 1e12;
  double scale_c = 5.0;
  std::size_t max_outer = 200;
  std::size_t max_inner = 10000;
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
};

struct TrainArgs {
  DataArgs data;
  ReportArgs report;
  SolverArgs solver;
  double alpha = 0.5;
  double tau = 1.0;
  std::string out = "model.txt";
  std::string report_out;  // also write the row here when non-empty
};

struct SweepArgs {
  DataArgs data;
  ReportArgs report;
  SolverArgs solver;
  std::vector<double> alphas;
  std::vector<double> taus;
  std::size_t folds = 1;
  std::string out = "results.csv";
  std::string models_dir;  // save each cell's model here when non-empty
  std::size_t jobs = 0;    // 0 = hardware concurrency
};

struct RankArgs {
  std::vector<std::string> predictions;  // one score file per model
  std::string labels;                    // aligned label file
  std::string task = "regression";
  ReportArgs report;
  std::string measure = "welfare";  // welfare | atkinson | ge2
  std::size_t folds = 1;
  std::uint64_t seed = 0;
};

struct MetricsArgs {
  DataArgs data;
  ReportArgs report;
  std::string predictions;  // score file, one value per row
  std::string model;        // alternative: model file to predict with
};

struct MechanismArgs {
  DataArgs data;
  ReportArgs report;
  std::string kind;  // dwork_delta | epsilon_net | speicher
  double delta = 0.0;
  bool delta_unbounded = false;  // margin of infinity
  double eps = 0.0;
  double tau = 0.0;
  std::vector<double> mu_grid;  // empty = default grid around the plain fit
  bool literal = false;
  double tol_c = 1e-6;
  std::string out = "model.txt";
};

struct GenArgs {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double theta_scale = 1.0;
  std::string out = "data.csv";
  std::string truth;  // model file for the generating weights; empty skips it
};

int run_train(const TrainArgs& args, std::ostream& out);
int run_sweep(const SweepArgs& args, std::ostream& out);
int run_rank(const RankArgs& args, std::ostream& out);
int run_metrics(const MetricsArgs& args, std::ostream& out);
int run_mechanism(const MechanismArgs& args, std::ostream& out);
int run_gen(const GenArgs& args, std::ostream& out);

}  // namespace welfair::cmd
