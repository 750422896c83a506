#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>
#include <utility>

#include "results_table.hpp"
#include "welfair/benefits.hpp"
#include "welfair/datakit.hpp"
#include "welfair/errors.hpp"
#include "welfair/fairmetrics.hpp"
#include "welfair/mechanisms.hpp"
#include "welfair/solver.hpp"
#include "welfair/welfare.hpp"

namespace welfair::cmd {

namespace {

Task parse_task(const std::string& name) {
  if (name == "regression") return Task::regression;
  if (name == "classification") return Task::classification;
  throw InvalidArgument("unknown task '" + name +
                        "' (use regression or classification)");
}

Dataset load_data(const DataArgs& args) {
  if (args.path.empty()) throw InvalidArgument("no dataset path given");
  CsvSchema schema;
  schema.label_column = args.label;
  if (!args.group.empty()) schema.group_column = args.group;
  schema.task = parse_task(args.task);
  LoadedCsv loaded = load_csv(args.path, schema);

  bool wants_pre = args.standardize || args.flip_labels ||
                   args.target_rescale != 0.0 || !args.group_rule.empty();
  if (!wants_pre) return std::move(loaded.data);

  PreprocessConfig pcfg;
  pcfg.standardize = args.standardize;
  pcfg.flip_labels = args.flip_labels;
  if (args.target_rescale != 0.0) pcfg.target_rescale = args.target_rescale;
  if (!args.group_rule.empty()) {
    std::size_t colon = args.group_rule.rfind(':');
    if (colon == std::string::npos || colon == 0)
      throw InvalidArgument("group rule must look like column:threshold");
    GroupRule rule;
    rule.column = args.group_rule.substr(0, colon);
    std::string thr = args.group_rule.substr(colon + 1);
    std::size_t used = 0;
    try {
      rule.threshold = std::stod(thr, &used);
    } catch (const std::exception&) {
      throw MalformedNumber("group rule threshold '" + thr + "'");
    }
    if (used != thr.size())
      throw MalformedNumber("group rule threshold '" + thr + "'");
    pcfg.group_rule = rule;
  }
  return preprocess(loaded.data, pcfg).data;
}

BenefitSpec benefit_override(const ReportArgs& args, Task task) {
  if (args.benefit.size() != 4)
    throw InvalidArgument("benefit override needs b00,b01,b10,b11");
  if (task != Task::classification)
    throw InvalidArgument("benefit tables apply to classification only");
  BinaryBenefitTable table;
  table.b00 = args.benefit[0];
  table.b01 = args.benefit[1];
  table.b10 = args.benefit[2];
  table.b11 = args.benefit[3];
  return to_pm1(fit_binary_benefit(table));
}

ReportConfig report_config(const ReportArgs& args, Task task) {
  ReportConfig cfg;
  cfg.alpha = args.alpha;
  cfg.beta = args.beta;
  cfg.ge_alpha = args.ge_alpha;
  if (!args.benefit.empty()) cfg.benefit = benefit_override(args, task);
  return cfg;
}

SolverConfig solver_config(const SolverArgs& args) {
  SolverConfig cfg;
  cfg.tol_c = args.tol_c;
  cfg.tol_g = args.tol_g;
  cfg.lambda_max = args.lambda_max;
  cfg.max_outer = args.max_outer;
  cfg.max_inner = args.max_inner;
  cfg.restarts = args.restarts;
  cfg.seed = args.seed;
  return cfg;
}

ConstraintSpec constraint_spec(Task task, double alpha, double tau,
                               const ReportArgs& report,
                               const SolverArgs& solver) {
  ConstraintSpec spec = default_constraint(task, alpha, tau);
  spec.scale_c = solver.scale_c;
  if (!report.benefit.empty()) spec.benefit = benefit_override(report, task);
  return spec;
}

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::max_iter:
      return "max_iter";
  }
  return "unknown";
}

// Metric columns for a model evaluated on d; the report alpha follows the
// cell's training alpha so the welfare column tracks the constraint.
ResultRow evaluated_row(const Dataset& d, const LinearModel& model,
                        ReportConfig rcfg) {
  ResultRow row;
  fill_from_report(full_report(d, model.predict(d), rcfg), &row);
  row.intercept = model.weights.back();
  return row;
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw MalformedNumber(path + " line " + std::to_string(lineno) + ": '" +
                            line + "'");
    }
    if (used != line.size())
      throw MalformedNumber(path + " line " + std::to_string(lineno) + ": '" +
                            line + "'");
    values.push_back(v);
  }
  return values;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

int run_train(const TrainArgs& args, std::ostream& out) {
  Dataset d = load_data(args.data);
  ConstraintSpec spec =
      constraint_spec(d.task, args.alpha, args.tau, args.report, args.solver);
  SolveResult res = solve_constrained(d, spec, solver_config(args.solver));

  ModelMeta meta = {{"alpha", fmt17(args.alpha)},
                    {"tau", fmt17(args.tau)},
                    {"lambda", fmt17(res.lambda)},
                    {"status", status_name(res.status)}};
  save_model(args.out, res.model, meta);

  ReportConfig rcfg = report_config(args.report, d.task);
  rcfg.alpha = args.alpha;
  ResultRow row = evaluated_row(d, res.model, rcfg);
  row.alpha = args.alpha;
  row.tau = args.tau;
  row.fold = 0;
  row.lambda = res.lambda;
  row.status = status_name(res.status);

  std::string table = render_table({row});
  out << table;
  if (!args.report_out.empty()) write_text(args.report_out, table);
  return 0;
}

int run_sweep(const SweepArgs& args, std::ostream& out) {
  if (args.alphas.empty() || args.taus.empty())
    throw InvalidArgument("sweep needs at least one alpha and one tau");
  for (double a : args.alphas)
    if (!(a > 0.0) || !(a < 1.0))
      throw InvalidArgument("alpha values must lie in (0,1)");
  Dataset full = load_data(args.data);

  std::vector<FoldSplit> splits;
  if (args.folds > 1) {
    splits = kfold_split(full.n, args.folds, args.solver.seed);
  } else {
    FoldSplit whole;
    whole.train.resize(full.n);
    for (std::size_t i = 0; i < full.n; ++i) whole.train[i] = i;
    whole.test = whole.train;
    splits.push_back(std::move(whole));
  }

  if (!args.models_dir.empty())
    std::filesystem::create_directories(args.models_dir);

  struct Cell {
    std::size_t ai, ti, fold;
  };
  std::vector<Cell> cells;
  for (std::size_t ai = 0; ai < args.alphas.size(); ++ai)
    for (std::size_t ti = 0; ti < args.taus.size(); ++ti)
      for (std::size_t f = 0; f < splits.size(); ++f)
        cells.push_back({ai, ti, f});

  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> succeeded{0};
  std::exception_ptr first_failure;
  std::mutex failure_mu;

  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell& cell = cells[idx];
      double alpha = args.alphas[cell.ai];
      double tau = args.taus[cell.ti];
      ResultRow row;
      row.alpha = alpha;
      row.tau = tau;
      row.fold = static_cast<long>(cell.fold);
      try {
        Dataset train = args.folds > 1 ? subset(full, splits[cell.fold].train)
                                       : full;
        ConstraintSpec spec = constraint_spec(full.task, alpha, tau,
                                              args.report, args.solver);
        SolveResult res =
            solve_constrained(train, spec, solver_config(args.solver));
        if (!args.models_dir.empty()) {
          std::string name = args.models_dir + "/model_a" +
                             std::to_string(cell.ai) + "_t" +
                             std::to_string(cell.ti) + "_f" +
                             std::to_string(cell.fold) + ".txt";
          ModelMeta meta = {{"alpha", fmt17(alpha)},
                            {"tau", fmt17(tau)},
                            {"lambda", fmt17(res.lambda)},
                            {"fold", std::to_string(cell.fold)},
                            {"status", status_name(res.status)}};
          save_model(name, res.model, meta);
        }
        Dataset eval =
            args.folds > 1 ? subset(full, splits[cell.fold].test) : full;
        ReportConfig rcfg = report_config(args.report, full.task);
        rcfg.alpha = alpha;
        ResultRow filled = evaluated_row(eval, res.model, rcfg);
        filled.alpha = row.alpha;
        filled.tau = row.tau;
        filled.fold = row.fold;
        filled.lambda = res.lambda;
        filled.status = status_name(res.status);
        row = std::move(filled);
        succeeded.fetch_add(1);
      } catch (const Error& e) {
        if (e.error_class() != ErrorClass::solve) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!first_failure) first_failure = std::current_exception();
          return;
        }
        row.status = e.kind() == "Infeasible" || e.kind() == "AllInfeasible"
                         ? "infeasible"
                         : "error:" + e.kind();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!first_failure) first_failure = std::current_exception();
        return;
      }
      rows[idx] = std::move(row);
    }
  };

  std::size_t jobs = args.jobs != 0
                         ? args.jobs
                         : std::max<std::size_t>(
                               1, std::thread::hardware_concurrency());
  jobs = std::min(jobs, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (first_failure) std::rethrow_exception(first_failure);

  write_text(args.out, render_table(rows));
  out << "sweep cells=" << cells.size() << " succeeded=" << succeeded.load()
      << " out=" << args.out << "\n";
  if (succeeded.load() == 0)
    throw Infeasible("every sweep cell failed to solve");
  return 0;
}

int run_rank(const RankArgs& args, std::ostream& out) {
  if (args.predictions.empty())
    throw InvalidArgument("no prediction files given");
  if (args.labels.empty()) throw InvalidArgument("no label file given");
  Task task = parse_task(args.task);
  std::vector<double> labels = read_values(args.labels);
  if (labels.empty()) throw TooFewRows("label file " + args.labels);

  BenefitSpec benefit = task == Task::regression
                            ? regression_benefit()
                            : to_pm1(fit_binary_benefit(
                                  default_classification_table()));
  if (!args.report.benefit.empty())
    benefit = benefit_override(args.report, task);

  RankMeasure measure;
  if (args.measure == "welfare") {
    measure.kind = RankMeasure::Kind::welfare;
    measure.param = args.report.alpha;
  } else if (args.measure == "atkinson") {
    measure.kind = RankMeasure::Kind::atkinson;
    measure.param = args.report.beta;
  } else if (args.measure == "ge2") {
    measure.kind = RankMeasure::Kind::ge;
    measure.param = args.report.ge_alpha;
  } else {
    throw InvalidArgument("unknown measure '" + args.measure +
                          "' (use welfare, atkinson, or ge2)");
  }

  struct Scores {
    std::string file;
    std::vector<double> values;
  };
  std::vector<Scores> models;
  for (const std::string& path : args.predictions) {
    std::vector<double> scores = read_values(path);
    if (scores.size() != labels.size())
      throw LengthMismatch(path + " has " + std::to_string(scores.size()) +
                           " predictions for " +
                           std::to_string(labels.size()) + " labels");
    if (task == Task::classification) scores = hard_labels(scores);
    models.push_back({path, std::move(scores)});
  }

  std::vector<FoldSplit> splits;
  if (args.folds > 1) {
    splits = kfold_split(labels.size(), args.folds, args.seed);
  } else {
    FoldSplit whole;
    whole.test.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) whole.test[i] = i;
    splits.push_back(std::move(whole));
  }

  // score everything before printing so a bad file leaves stdout empty
  std::string table = "fold,rank,file,score,measure\n";
  for (std::size_t f = 0; f < splits.size(); ++f) {
    std::vector<std::pair<std::string, BenefitProfile>> profiles;
    for (const Scores& m : models) {
      std::vector<double> p, y;
      p.reserve(splits[f].test.size());
      y.reserve(splits[f].test.size());
      for (std::size_t i : splits[f].test) {
        p.push_back(m.values[i]);
        y.push_back(labels[i]);
      }
      profiles.emplace_back(m.file, build_profile(p, y, benefit));
    }
    auto ranked = rank_models(profiles, measure);
    for (std::size_t r = 0; r < ranked.size(); ++r)
      table += std::to_string(f) + ',' + std::to_string(r + 1) + ',' +
               ranked[r].first + ',' + fmt17(ranked[r].second) + ',' +
               args.measure + "\n";
  }
  out << table;
  return 0;
}

int run_metrics(const MetricsArgs& args, std::ostream& out) {
  Dataset d = load_data(args.data);
  ResultRow row;
  std::vector<double> scores;
  if (!args.model.empty()) {
    LinearModel m = load_model(args.model);
    scores = m.predict(d);
    row.intercept = m.weights.back();
  } else if (!args.predictions.empty()) {
    scores = read_values(args.predictions);
    if (scores.size() != d.n)
      throw LengthMismatch(args.predictions + " has " +
                           std::to_string(scores.size()) +
                           " predictions for " + std::to_string(d.n) +
                           " rows");
  } else {
    throw InvalidArgument("metrics needs --predictions or --model");
  }

  ReportConfig rcfg = report_config(args.report, d.task);
  fill_from_report(full_report(d, scores, rcfg), &row);
  row.alpha = args.report.alpha;
  out << render_table({std::move(row)});
  return 0;
}

int run_mechanism(const MechanismArgs& args, std::ostream& out) {
  Dataset d = load_data(args.data);
  MechanismConfig cfg;
  cfg.tol_c = args.tol_c;
  cfg.literal_lower_bound = args.literal;

  MechanismResult res;
  std::string extra;
  if (args.kind == "dwork_delta") {
    DistanceMatrix dm = DistanceMatrix::from_features(d, cfg.distance_cap);
    double delta = args.delta_unbounded
                       ? std::numeric_limits<double>::infinity()
                       : args.delta;
    res = dwork_delta_mechanism(d, delta, dm, cfg);
  } else if (args.kind == "epsilon_net") {
    res = epsilon_net_mechanism(d, args.eps, cfg);
    extra = " representatives=" +
            std::to_string(epsilon_net(d, args.eps, cfg.distance_cap).size());
  } else if (args.kind == "speicher") {
    std::vector<double> grid =
        args.mu_grid.empty() ? default_mu_grid(d) : args.mu_grid;
    res = speicher_mechanism(d, args.tau, grid, cfg);
    extra = " mu=" + fmt17(res.mu) + " skipped=" +
            std::to_string(res.skipped_grid);
  } else {
    throw InvalidArgument("unknown mechanism '" + args.kind +
                          "' (use dwork_delta, epsilon_net, or speicher)");
  }

  ModelMeta meta = {{"mechanism", args.kind},
                    {"status", status_name(res.status)}};
  save_model(args.out, res.model, meta);

  out << "mechanism kind=" << args.kind
      << " added_constraints=" << res.added_constraints
      << " max_violation=" << fmt17(res.max_violation)
      << " avg_violation=" << fmt17(res.avg_violation) << extra
      << " status=" << status_name(res.status) << "\n";

  ReportConfig rcfg = report_config(args.report, d.task);
  ResultRow row = evaluated_row(d, res.model, rcfg);
  row.alpha = args.report.alpha;
  row.status = status_name(res.status);
  out << render_table({std::move(row)});
  return 0;
}

int run_gen(const GenArgs& args, std::ostream& out) {
  if (args.n < 1) throw InvalidArgument("need n >= 1");
  if (args.k < 2) throw InvalidArgument("need k >= 2");
  GeneratedData gen = gen_realizable(args.n, args.k, args.seed,
                                     args.theta_scale);
  save_csv(args.out, gen.data);
  if (!args.truth.empty()) {
    ModelMeta meta = {{"seed", std::to_string(args.seed)},
                      {"n", std::to_string(args.n)},
                      {"k", std::to_string(args.k)}};
    save_model(args.truth, gen.truth, meta);
  }
  out << "gen rows=" << args.n << " cols=" << args.k
      << " seed=" << args.seed << " data=" << args.out;
  if (!args.truth.empty()) out << " truth=" << args.truth;
  out << "\n";
  return 0;
}

}  // namespace welfair::cmd
