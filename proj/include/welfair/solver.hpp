#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>

#include "welfair/benefits.hpp"
#include "welfair/dataset.hpp"
#include "welfair/model.hpp"

// Welfare-constrained empirical risk minimization for linear predictors:
// squared loss for regression, logistic loss for classification, each subject
// to a lower bound tau on the mean CRRA welfare of the benefit profile. The
// single inequality constraint is handled by bisection on the Lagrange
// multiplier; each multiplier value is solved by a spectral-step descent with
// a nonmonotone line search that keeps every benefit strictly positive.

namespace welfair {

struct ConstraintSpec {
  double alpha = 0.5;   // risk-aversion exponent, in (0,1)
  double tau = 1.0;     // lower bound on mean welfare, > 0
  double scale_c = 5.0; // classification score divisor, > 0
  BenefitSpec benefit;  // continuous for regression, pm1 for classification
};

// Task-standard spec: regression uses yhat - y + 1 benefits; classification
// divides scores by 5 and scores them with the default benefit table.
ConstraintSpec default_constraint(Task task, double alpha, double tau);

struct SolverConfig {
  double tol_c = 1e-6;        // constraint activity tolerance
  double tol_g = 1e-8;        // inner stationarity tolerance
  double lambda_max = 1e12;   // multiplier budget before declaring infeasible
  std::size_t max_outer = 200;
  std::size_t max_inner = 10000;
  double eps_b = 1e-8;        // hard lower bound kept on every benefit
  std::size_t restarts = 8;   // classification restarts
  std::uint64_t seed = 0;
};

enum class SolveStatus { optimal, infeasible, max_iter };

struct SolveResult {
  LinearModel model;
  double lambda = 0.0;            // dual multiplier, mean-form convention
  double constraint_value = 0.0;  // mean welfare at the solution
  double loss = 0.0;              // mean squared or mean logistic loss
  bool active = false;            // lambda > 0 and constraint tight
  SolveStatus status = SolveStatus::optimal;
  // true only on the regression path, where convexity plus the dual bracket
  // certify global optimality; classification results are best-of-restarts
  bool certified = false;
  std::size_t outer_iterations = 0;  // inner solves spent on the dual search
  std::size_t inner_iterations = 0;  // descent steps across all inner solves
  double inner_gradient_norm = 0.0;  // stationarity at the returned point
};

// Plain loss minimization. Regression converges to the least-squares
// solution; classification minimizes logistic loss over the unit sphere
// (best of config.restarts starts). Throws NonConvergence when the iteration
// budget runs out before the stationarity tolerance is met.
LinearModel solve_unconstrained(const Dataset& d, Task task,
                                const SolverConfig& config = {});

// Squared loss subject to mean welfare >= tau. Certified by the dual
// bracket; throws Infeasible when the multiplier budget is exhausted and
// DomainCollapse when no starting point keeps benefits positive.
SolveResult solve_constrained_regression(const Dataset& d,
                                         const ConstraintSpec& spec,
                                         const SolverConfig& config = {});

// Logistic loss over the unit sphere subject to mean welfare >= tau, with
// benefits evaluated at score/scale_c. Non-convex: multi-restart projected
// descent, never certified. A rigorous per-instance bound on the attainable
// welfare rejects hopeless tau values up front.
SolveResult solve_constrained_classification(const Dataset& d,
                                             const ConstraintSpec& spec,
                                             const SolverConfig& config = {});

// Dispatch on d.task.
SolveResult solve_constrained(const Dataset& d, const ConstraintSpec& spec,
                              const SolverConfig& config = {});

// Mean welfare of the model's predictions under the spec's benefit (scores
// divided by scale_c for binary-domain benefits). Throws NonPositiveBenefit
// when a benefit is outside the welfare domain.
double constraint_welfare(const Dataset& d, const ConstraintSpec& spec,
                          const LinearModel& m);

// Inner minimizer at a fixed multiplier, exposed so the dual path can be
// probed directly; warm starts from `warm` when given.
LinearModel penalized_regression_fit(const Dataset& d,
                                     const ConstraintSpec& spec,
                                     const SolverConfig& config, double lambda,
                                     const LinearModel* warm = nullptr);

struct DualPath {
  LinearModel theta;      // solution on the feasible side of the bracket
  double lambda = 0.0;
  std::size_t fits = 0;   // inner solves performed
  bool tight = true;      // bracket reached its relative-width target
};

// Bisection on the multiplier of a single concave constraint. `fit` solves
// the penalized problem for a multiplier (warm-started), `gap` returns mean
// welfare minus tau (-inf outside the domain). Requires gap(start) < 0; the
// bracket [0,1] doubles upward until feasible, then shrinks below relative
// width 1e-10 and until the complementary-slackness product clears tol_c.
// Throws LambdaOverflow when lambda_max is hit while still infeasible.
DualPath dual_bisection(
    const std::function<LinearModel(double, const LinearModel&)>& fit,
    const std::function<double(const LinearModel&)>& gap,
    const LinearModel& start, const SolverConfig& config);

// For labels exactly linear in the features, the constrained optimum is the
// generating weights with the intercept raised by tau^(1/alpha) - 1, paired
// with multiplier (2/(alpha tau)) tau^(1/alpha) (tau^(1/alpha) - 1).
// Requires 0 < alpha < 1 and tau >= 1.
std::pair<LinearModel, double> closed_form_realizable(
    const LinearModel& theta_star, double alpha, double tau);

struct KktResiduals {
  double stationarity_norm = 0.0;
  double primal_violation = 0.0;
  double dual_feasibility = 0.0;
  double complementary_slackness = 0.0;
};

// First-order residuals of the regression program at (result.model,
// result.lambda), mean-form. Only defined for continuous-domain benefits.
KktResiduals kkt_residuals(const Dataset& d, const ConstraintSpec& spec,
                           const SolveResult& result);

}  // namespace welfair
