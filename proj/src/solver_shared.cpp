#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "solver_detail.hpp"
#include "welfair/errors.hpp"
#include "welfair/fairmetrics.hpp"
#include "welfair/kernels.hpp"
#include "welfair/solver.hpp"
#include "welfair/welfare.hpp"

namespace welfair {

ConstraintSpec default_constraint(Task task, double alpha, double tau) {
  ConstraintSpec spec;
  spec.alpha = alpha;
  spec.tau = tau;
  if (task == Task::regression) {
    spec.benefit = regression_benefit();
  } else {
    spec.benefit = to_pm1(fit_binary_benefit(default_classification_table()));
    spec.scale_c = 5.0;
  }
  return spec;
}

namespace detail {

void validate_spec(const ConstraintSpec& spec, Task task) {
  if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0))
    throw UnsupportedAlpha("constrained solve needs alpha in (0,1)");
  if (!(spec.tau > 0.0) || !std::isfinite(spec.tau))
    throw InvalidArgument("tau must be positive and finite");
  if (spec.benefit.floor)
    throw InvalidArgument(
        "solver handles positivity itself; pass an unclamped benefit");
  if (task == Task::regression) {
    if (spec.benefit.domain != LabelDomain::continuous)
      throw InvalidArgument("regression program expects the yhat-y+1 benefit");
  } else {
    if (spec.benefit.domain != LabelDomain::binaryPM1)
      throw InvalidArgument(
          "classification program expects a -1/+1 benefit; relabel with "
          "to_pm1 first");
    if (!(spec.scale_c > 0.0) || !std::isfinite(spec.scale_c))
      throw InvalidArgument("score divisor must be positive and finite");
  }
}

void validate_config(const SolverConfig& config) {
  if (!(config.tol_c > 0.0) || !(config.tol_g > 0.0) ||
      !(config.lambda_max > 0.0) || !(config.eps_b > 0.0) ||
      config.max_outer == 0 || config.max_inner == 0 || config.restarts == 0)
    throw InvalidArgument("solver configuration values must be positive");
}

void benefit_coeffs(const Dataset& d, const ConstraintSpec& spec,
                    std::vector<double>* a, std::vector<double>* o) {
  a->resize(d.n);
  o->resize(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    if (spec.benefit.domain == LabelDomain::continuous) {
      (*a)[i] = 1.0;
      (*o)[i] = 1.0 - d.y[i];
    } else if (d.y[i] == 1.0) {
      (*a)[i] = spec.benefit.c1 / spec.scale_c;
      (*o)[i] = spec.benefit.d1;
    } else {
      (*a)[i] = spec.benefit.c0 / spec.scale_c;
      (*o)[i] = spec.benefit.d0;
    }
  }
}

double welfare_gap(const Dataset& d, const ConstraintSpec& spec,
                   const LinearModel& m) {
  std::vector<double> t(d.n), b(d.n);
  kernels::matvec(d.X.data(), m.weights.data(), t.data(), d.n, d.k);
  if (spec.benefit.domain == LabelDomain::continuous) {
    for (std::size_t i = 0; i < d.n; ++i) b[i] = (t[i] - d.y[i]) + 1.0;
  } else {
    for (std::size_t i = 0; i < d.n; ++i) {
      double s = t[i] / spec.scale_c;
      b[i] = d.y[i] == 1.0 ? spec.benefit.c1 * s + spec.benefit.d1
                           : spec.benefit.c0 * s + spec.benefit.d0;
    }
  }
  for (std::size_t i = 0; i < d.n; ++i)
    if (!(b[i] > 0.0)) return -std::numeric_limits<double>::infinity();
  return kernels::pow_sum(b.data(), spec.alpha, d.n) /
             static_cast<double>(d.n) -
         spec.tau;
}

}  // namespace detail

double constraint_welfare(const Dataset& d, const ConstraintSpec& spec,
                          const LinearModel& m) {
  std::vector<double> yhat = m.predict(d);
  if (spec.benefit.domain != LabelDomain::continuous)
    for (double& v : yhat) v /= spec.scale_c;
  BenefitProfile prof = build_profile(yhat, d.y, spec.benefit);
  return empirical_welfare(prof, spec.alpha);
}

DualPath dual_bisection(
    const std::function<LinearModel(double, const LinearModel&)>& fit,
    const std::function<double(const LinearModel&)>& gap,
    const LinearModel& start, const SolverConfig& config) {
  detail::validate_config(config);
  DualPath out;
  double lo = 0.0, hi = 1.0;
  LinearModel cur = fit(hi, start);
  ++out.fits;
  double g = gap(cur);
  while (g < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > config.lambda_max)
      throw LambdaOverflow("constraint still violated at multiplier " +
                           std::to_string(hi));
    if (out.fits >= config.max_outer) {
      out.tight = false;
      out.theta = cur;
      out.lambda = hi;
      return out;
    }
    cur = fit(hi, cur);
    ++out.fits;
    g = gap(cur);
  }
  LinearModel best = cur;
  double g_best = g;

  // shrink until the bracket is relatively tight AND the complementary
  // slackness product lambda * (welfare - tau) clears the tolerance
  while (out.fits < config.max_outer) {
    bool width_ok = (hi - lo) <= 1e-10 * hi;
    bool slack_ok = hi * g_best <= 0.1 * config.tol_c;
    if (width_ok && slack_ok) break;
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // precision floor
    cur = fit(mid, cur);
    ++out.fits;
    g = gap(cur);
    if (g >= 0.0) {
      hi = mid;
      best = cur;
      g_best = g;
    } else {
      lo = mid;
    }
  }
  out.tight = (hi - lo) <= 1e-10 * hi;
  out.theta = best;
  out.lambda = hi;
  return out;
}

LinearModel solve_unconstrained(const Dataset& d, Task task,
                                const SolverConfig& config) {
  d.validate();
  detail::validate_config(config);
  if (d.task != task)
    throw InvalidArgument("dataset task does not match the requested solve");
  detail::FitDiag diag;
  LinearModel m = task == Task::regression
                      ? detail::ls_fit(d, config, &diag)
                      : detail::sphere_logistic_fit(d, config, &diag);
  if (!diag.converged)
    throw NonConvergence("loss minimization stalled at gradient norm " +
                         std::to_string(diag.grad_norm));
  return m;
}

SolveResult solve_constrained(const Dataset& d, const ConstraintSpec& spec,
                              const SolverConfig& config) {
  return d.task == Task::regression
             ? solve_constrained_regression(d, spec, config)
             : solve_constrained_classification(d, spec, config);
}

}  // namespace welfair
