#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "welfair/errors.hpp"

// Exit codes: 0 success, 1 internal error, 2 a solve that could not produce
// a result (infeasible, non-convergent), 3 bad input or data. Every failure
// prints one machine-readable line to stderr: error kind=<Kind> msg="...".

namespace {

void add_data_flags(CLI::App* app, welfair::cmd::DataArgs* data) {
  app->add_option("--data", data->path, "dataset CSV")->required();
  app->add_option("--label", data->label, "label column name");
  app->add_option("--group", data->group, "0/1 group column name");
  app->add_option("--task", data->task, "regression or classification");
  app->add_flag("--standardize", data->standardize,
                "standardize non-binary feature columns");
  app->add_flag("--flip-labels", data->flip_labels, "negate labels");
  app->add_option("--target-rescale", data->target_rescale,
                  "divide labels by this value");
  app->add_option("--group-rule", data->group_rule,
                  "derive groups from column:threshold");
}

void add_report_flags(CLI::App* app, welfair::cmd::ReportArgs* report) {
  app->add_option("--beta", report->beta, "inequality aversion for atkinson");
  app->add_option("--ge-alpha", report->ge_alpha,
                  "generalized entropy parameter");
  app->add_option("--benefit", report->benefit,
                  "classification benefit table b00,b01,b10,b11")
      ->delimiter(',')
      ->expected(0, 4);
}

void add_solver_flags(CLI::App* app, welfair::cmd::SolverArgs* solver) {
  app->add_option("--tol-c", solver->tol_c, "constraint tolerance");
  app->add_option("--tol-g", solver->tol_g, "stationarity tolerance");
  app->add_option("--lambda-max", solver->lambda_max, "multiplier budget");
  app->add_option("--scale-c", solver->scale_c,
                  "classification score divisor");
  app->add_option("--max-outer", solver->max_outer, "dual search budget");
  app->add_option("--max-inner", solver->max_inner, "descent step budget");
  app->add_option("--restarts", solver->restarts,
                  "classification restarts");
}

int exit_code(welfair::ErrorClass cls) {
  switch (cls) {
    case welfair::ErrorClass::input:
      return 3;
    case welfair::ErrorClass::solve:
      return 2;
    case welfair::ErrorClass::internal:
      return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-constrained learning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags parse after a subcommand name too
  app.set_config("--config", "", "key=value config file, flags win");

  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  app.add_option("--seed", seed, "random seed")->configurable(true);
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)")
      ->configurable(true);

  welfair::cmd::TrainArgs train;
  CLI::App* ctrain =
      app.add_subcommand("train", "fit one welfare-constrained model");
  add_data_flags(ctrain, &train.data);
  add_report_flags(ctrain, &train.report);
  add_solver_flags(ctrain, &train.solver);
  ctrain->add_option("--alpha", train.alpha, "welfare risk parameter");
  ctrain->add_option("--tau", train.tau, "welfare lower bound");
  ctrain->add_option("--out", train.out, "model file to write");
  ctrain->add_option("--report-out", train.report_out,
                     "also write the report row here");

  welfair::cmd::SweepArgs sweep;
  CLI::App* csweep =
      app.add_subcommand("sweep", "train over an alpha x tau grid");
  add_data_flags(csweep, &sweep.data);
  add_report_flags(csweep, &sweep.report);
  add_solver_flags(csweep, &sweep.solver);
  csweep->add_option("--alphas", sweep.alphas, "alpha grid")
      ->delimiter(',')
      ->required();
  csweep->add_option("--taus", sweep.taus, "tau grid")
      ->delimiter(',')
      ->required();
  csweep->add_option("--folds", sweep.folds, "cross-validation folds");
  csweep->add_option("--out", sweep.out, "results CSV to write");
  csweep->add_option("--models-dir", sweep.models_dir,
                     "save each cell's model here");

  welfair::cmd::RankArgs rank;
  CLI::App* crank =
      app.add_subcommand("rank", "order prediction files by a measure");
  crank->add_option("predictions", rank.predictions, "prediction files")
      ->required()
      ->expected(-1);
  crank->add_option("--labels", rank.labels, "label file")->required();
  crank->add_option("--task", rank.task, "regression or classification");
  crank->add_option("--alpha", rank.report.alpha, "welfare risk parameter");
  add_report_flags(crank, &rank.report);
  crank->add_option("--measure", rank.measure, "welfare, atkinson, or ge2");
  crank->add_option("--folds", rank.folds, "emit per-fold scores");

  welfair::cmd::MetricsArgs metrics;
  CLI::App* cmetrics =
      app.add_subcommand("metrics", "full metric report for predictions");
  add_data_flags(cmetrics, &metrics.data);
  add_report_flags(cmetrics, &metrics.report);
  cmetrics->add_option("--alpha", metrics.report.alpha,
                       "welfare risk parameter");
  cmetrics->add_option("--predictions", metrics.predictions,
                       "score file, one value per row");
  cmetrics->add_option("--model", metrics.model,
                       "model file to predict with");

  welfair::cmd::MechanismArgs mechanism;
  CLI::App* cmech =
      app.add_subcommand("mechanism", "run a fairness mechanism");
  add_data_flags(cmech, &mechanism.data);
  add_report_flags(cmech, &mechanism.report);
  cmech->add_option("--alpha", mechanism.report.alpha,
                    "welfare risk parameter for the report");
  cmech->add_option("--kind", mechanism.kind,
                    "dwork_delta, epsilon_net, or speicher")
      ->required();
  cmech->add_option("--delta", mechanism.delta, "violation margin");
  cmech->add_flag("--delta-unbounded", mechanism.delta_unbounded,
                  "margin of infinity (select nothing)");
  cmech->add_option("--eps", mechanism.eps, "net radius");
  cmech->add_option("--tau", mechanism.tau, "spread bound");
  cmech->add_option("--mu-grid", mechanism.mu_grid, "mean benefit levels")
      ->delimiter(',');
  cmech->add_flag("--literal", mechanism.literal,
                  "use the lower-bound spread reading");
  cmech->add_option("--tol-c", mechanism.tol_c, "constraint tolerance");
  cmech->add_option("--out", mechanism.out, "model file to write");

  welfair::cmd::GenArgs gen;
  CLI::App* cgen =
      app.add_subcommand("gen", "generate a realizable synthetic dataset");
  cgen->add_option("--n", gen.n, "rows")->required();
  cgen->add_option("--k", gen.k, "columns incl. the constant")->required();
  cgen->add_option("--theta-scale", gen.theta_scale,
                   "scale of the generating weights");
  cgen->add_option("--out", gen.out, "dataset CSV to write");
  cgen->add_option("--truth", gen.truth, "write generating weights here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    int rc = app.exit(e);
    std::cerr << "error kind=InvalidArgument msg=\"" << e.what() << "\"\n";
    return rc == 0 ? 0 : 3;
  }

  train.solver.seed = seed;
  sweep.solver.seed = seed;
  sweep.jobs = jobs;
  rank.seed = seed;
  gen.seed = seed;

  try {
    if (*ctrain) return welfair::cmd::run_train(train, std::cout);
    if (*csweep) return welfair::cmd::run_sweep(sweep, std::cout);
    if (*crank) return welfair::cmd::run_rank(rank, std::cout);
    if (*cmetrics) return welfair::cmd::run_metrics(metrics, std::cout);
    if (*cmech) return welfair::cmd::run_mechanism(mechanism, std::cout);
    if (*cgen) return welfair::cmd::run_gen(gen, std::cout);
  } catch (const welfair::Error& e) {
    std::cerr << "error kind=" << e.kind() << " msg=\"" << e.what()
              << "\"\n";
    return exit_code(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error kind=Internal msg=\"" << e.what() << "\"\n";
    return 1;
  }
  return 0;
}
