#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "inner_loop.hpp"
#include "solver_detail.hpp"
#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"
#include "welfair/solver.hpp"

namespace welfair {

namespace {

double l2_norm(const std::vector<double>& v) {
  return std::sqrt(kernels::sumsq(v.data(), v.size()));
}

struct RegressionScratch {
  std::vector<double> t, r, b, p, w;
  explicit RegressionScratch(std::size_t n) : t(n), r(n), b(n), p(n), w(n) {}
};

// Mean squared loss and gradient.
struct LsEval {
  const Dataset& d;
  RegressionScratch& s;
  bool operator()(const std::vector<double>& th, double* f,
                  std::vector<double>* g) const {
    double inv_n = 1.0 / static_cast<double>(d.n);
    kernels::residuals(d.X.data(), th.data(), d.y.data(), s.r.data(), d.n,
                       d.k);
    *f = kernels::sumsq(s.r.data(), d.n) * inv_n;
    for (std::size_t i = 0; i < d.n; ++i) s.w[i] = 2.0 * inv_n * s.r[i];
    kernels::mat_t_vec(d.X.data(), s.w.data(), g->data(), d.n, d.k);
    return true;
  }
};

// Mean squared loss minus lambda times the constraint slack, with the hard
// benefit floor enforced by rejecting the point.
struct PenalizedLsEval {
  const Dataset& d;
  RegressionScratch& s;
  double alpha, lambda, tau, eps_b;
  bool operator()(const std::vector<double>& th, double* f,
                  std::vector<double>* g) const {
    double inv_n = 1.0 / static_cast<double>(d.n);
    kernels::residuals(d.X.data(), th.data(), d.y.data(), s.r.data(), d.n,
                       d.k);
    for (std::size_t i = 0; i < d.n; ++i) {
      s.b[i] = s.r[i] + 1.0;
      if (!(s.b[i] >= eps_b)) return false;
    }
    kernels::pow_each(s.b.data(), alpha - 1.0, s.p.data(), d.n);
    double welfare = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) welfare += s.b[i] * s.p[i];
    welfare *= inv_n;
    *f = kernels::sumsq(s.r.data(), d.n) * inv_n - lambda * (welfare - tau);
    for (std::size_t i = 0; i < d.n; ++i)
      s.w[i] = inv_n * (2.0 * s.r[i] - lambda * alpha * s.p[i]);
    kernels::mat_t_vec(d.X.data(), s.w.data(), g->data(), d.n, d.k);
    return true;
  }
};

void identity_project(std::vector<double>&) {}

double grad_norm_stat(const std::vector<double>&,
                      const std::vector<double>& g) {
  return std::sqrt(kernels::sumsq(g.data(), g.size()));
}

// Gaussian elimination with partial pivoting; A is m x m row-major and both
// A and rhs are overwritten. False when a pivot vanishes.
bool solve_dense(std::vector<double>& A, std::vector<double>& rhs,
                 std::size_t m) {
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < m; ++row)
      if (std::fabs(A[row * m + col]) > std::fabs(A[piv * m + col])) piv = row;
    if (A[piv * m + col] == 0.0) return false;
    if (piv != col) {
      for (std::size_t j = col; j < m; ++j)
        std::swap(A[col * m + j], A[piv * m + j]);
      std::swap(rhs[col], rhs[piv]);
    }
    double inv = 1.0 / A[col * m + col];
    for (std::size_t row = col + 1; row < m; ++row) {
      double f = A[row * m + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < m; ++j)
        A[row * m + j] -= f * A[col * m + j];
      rhs[row] -= f * rhs[col];
    }
  }
  for (std::size_t col = m; col-- > 0;) {
    double sum = rhs[col];
    for (std::size_t j = col + 1; j < m; ++j) sum -= A[col * m + j] * rhs[j];
    rhs[col] = sum / A[col * m + col];
  }
  return true;
}

// Damped Newton refinement of the active-constraint first-order system in
// (theta, lambda). The bisection lands close to the saddle point but its
// slackness product is limited by the inner solve's gradient tolerance,
// which hurts at large multipliers; a few joint steps push both residuals
// to the precision floor. Trial steps must keep every benefit above eps_b
// and the multiplier non-negative, and are only accepted on a residual
// decrease, so the refined point never regresses.
void kkt_polish(const Dataset& d, const ConstraintSpec& spec,
                const SolverConfig& config, RegressionScratch& s,
                LinearModel& m, double& lambda) {
  const std::size_t n = d.n, k = d.k, dim = k + 1;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> F(dim), trial_F(dim), A(dim * dim), rhs(dim), v(k);
  std::vector<double> theta = m.weights, trial(k);

  // stationarity of the penalized objective plus the constraint gap; fills
  // the scratch residual/benefit/power arrays for the Hessian assembly
  auto residual = [&](const std::vector<double>& th, double la,
                      std::vector<double>& out) {
    kernels::residuals(d.X.data(), th.data(), d.y.data(), s.r.data(), n, k);
    for (std::size_t i = 0; i < n; ++i) {
      s.b[i] = s.r[i] + 1.0;
      if (!(s.b[i] >= config.eps_b))
        return std::numeric_limits<double>::infinity();
    }
    kernels::pow_each(s.b.data(), spec.alpha - 1.0, s.p.data(), n);
    double welfare = 0.0;
    for (std::size_t i = 0; i < n; ++i) welfare += s.b[i] * s.p[i];
    welfare *= inv_n;
    for (std::size_t i = 0; i < n; ++i)
      s.w[i] = inv_n * (2.0 * s.r[i] - la * spec.alpha * s.p[i]);
    kernels::mat_t_vec(d.X.data(), s.w.data(), out.data(), n, k);
    out[k] = spec.tau - welfare;
    return l2_norm(out);
  };

  double fn = residual(theta, lambda, F);
  if (!std::isfinite(fn)) return;
  for (int round = 0; round < 8 && fn > 1e-13; ++round) {
    // saddle system [H, -v; -v^T, 0] with H the penalized-objective Hessian
    // and v the constraint gradient, both at the current point
    std::fill(A.begin(), A.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double curv = inv_n * (2.0 + lambda * spec.alpha * (1.0 - spec.alpha) *
                                       s.p[i] / s.b[i]);
      const double* x = &d.X[i * k];
      for (std::size_t row = 0; row < k; ++row)
        for (std::size_t col = row; col < k; ++col)
          A[row * dim + col] += curv * x[row] * x[col];
    }
    for (std::size_t row = 1; row < k; ++row)
      for (std::size_t col = 0; col < row; ++col)
        A[row * dim + col] = A[col * dim + row];
    for (std::size_t i = 0; i < n; ++i)
      s.w[i] = inv_n * spec.alpha * s.p[i];
    kernels::mat_t_vec(d.X.data(), s.w.data(), v.data(), n, k);
    for (std::size_t j = 0; j < k; ++j) {
      A[j * dim + k] = -v[j];
      A[k * dim + j] = -v[j];
    }
    for (std::size_t j = 0; j < dim; ++j) rhs[j] = -F[j];
    if (!solve_dense(A, rhs, dim)) return;

    bool accepted = false;
    double scale = 1.0;
    for (int half = 0; half < 30; ++half, scale *= 0.5) {
      for (std::size_t j = 0; j < k; ++j) trial[j] = theta[j] + scale * rhs[j];
      double la = std::max(0.0, lambda + scale * rhs[k]);
      double fn_trial = residual(trial, la, trial_F);
      if (fn_trial < fn) {
        theta = trial;
        lambda = la;
        F = trial_F;
        fn = fn_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    // the accepted trial's residual call left the scratch arrays at the new
    // point, so the next assembly reads fresh values
  }
  m.weights = std::move(theta);
}

LinearModel penalized_fit_internal(const Dataset& d, const ConstraintSpec& spec,
                                   const SolverConfig& config, double lambda,
                                   const LinearModel* warm,
                                   RegressionScratch& scratch,
                                   detail::FitDiag* diag) {
  std::vector<double> x0 =
      warm && warm->weights.size() == d.k ? warm->weights
                                          : std::vector<double>(d.k, 0.0);
  // a unit intercept step raises every benefit by one, so any start can be
  // lifted into the domain
  kernels::residuals(d.X.data(), x0.data(), d.y.data(), scratch.r.data(), d.n,
                     d.k);
  double min_b = kernels::reduce_min(scratch.r.data(), d.n) + 1.0;
  double lift_to = std::max(0.5, 2.0 * config.eps_b);
  if (min_b < lift_to) x0[d.k - 1] += lift_to - min_b;

  PenalizedLsEval eval{d, scratch, spec.alpha, lambda, spec.tau, config.eps_b};
  detail::InnerOptions opt;
  opt.tol_g = config.tol_g;
  opt.max_iter = config.max_inner;
  auto res = detail::bb_minimize(eval, identity_project, grad_norm_stat,
                                 std::move(x0), opt);
  if (res.invalid_start)
    throw DomainCollapse("no starting point keeps all benefits positive");
  if (diag) {
    diag->iters = res.iters;
    diag->grad_norm = res.grad_norm;
    diag->converged = res.converged;
  }
  LinearModel m;
  m.task = Task::regression;
  m.weights = std::move(res.x);
  return m;
}

}  // namespace

namespace detail {

LinearModel ls_fit(const Dataset& d, const SolverConfig& config,
                   FitDiag* diag) {
  RegressionScratch scratch(d.n);
  LsEval eval{d, scratch};
  InnerOptions opt;
  opt.tol_g = config.tol_g;
  opt.max_iter = config.max_inner;
  auto res = bb_minimize(eval, identity_project, grad_norm_stat,
                         std::vector<double>(d.k, 0.0), opt);
  if (diag) {
    diag->iters = res.iters;
    diag->grad_norm = res.grad_norm;
    diag->converged = res.converged;
  }
  LinearModel m;
  m.task = Task::regression;
  m.weights = std::move(res.x);
  return m;
}

}  // namespace detail

LinearModel penalized_regression_fit(const Dataset& d,
                                     const ConstraintSpec& spec,
                                     const SolverConfig& config, double lambda,
                                     const LinearModel* warm) {
  d.validate();
  detail::validate_spec(spec, Task::regression);
  detail::validate_config(config);
  if (!(lambda >= 0.0))
    throw InvalidArgument("multiplier must be non-negative");
  RegressionScratch scratch(d.n);
  return penalized_fit_internal(d, spec, config, lambda, warm, scratch,
                                nullptr);
}

SolveResult solve_constrained_regression(const Dataset& d,
                                         const ConstraintSpec& spec,
                                         const SolverConfig& config) {
  d.validate();
  if (d.task != Task::regression)
    throw InvalidArgument("dataset is not a regression task");
  detail::validate_spec(spec, Task::regression);
  detail::validate_config(config);

  RegressionScratch scratch(d.n);
  SolveResult res;
  res.certified = true;

  detail::FitDiag diag;
  LinearModel theta = detail::ls_fit(d, config, &diag);
  res.inner_iterations = diag.iters;

  double gap = detail::welfare_gap(d, spec, theta);
  if (gap >= 0.0) {
    res.model = std::move(theta);
    res.lambda = 0.0;
    res.constraint_value = gap + spec.tau;
    res.active = false;
    res.status = diag.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    res.inner_gradient_norm = diag.grad_norm;
    kernels::residuals(d.X.data(), res.model.weights.data(), d.y.data(),
                       scratch.r.data(), d.n, d.k);
    res.loss =
        kernels::sumsq(scratch.r.data(), d.n) / static_cast<double>(d.n);
    return res;
  }

  auto fit = [&](double lambda, const LinearModel& warm) {
    detail::FitDiag step;
    LinearModel m = penalized_fit_internal(d, spec, config, lambda, &warm,
                                           scratch, &step);
    res.inner_iterations += step.iters;
    return m;
  };
  auto gap_at = [&](const LinearModel& m) {
    return detail::welfare_gap(d, spec, m);
  };

  DualPath path;
  try {
    path = dual_bisection(fit, gap_at, theta, config);
  } catch (const LambdaOverflow&) {
    throw Infeasible(
        "no model reaches the welfare bound within the multiplier budget");
  }

  res.model = std::move(path.theta);
  res.lambda = path.lambda;
  kkt_polish(d, spec, config, scratch, res.model, res.lambda);
  res.outer_iterations = path.fits;
  res.constraint_value = detail::welfare_gap(d, spec, res.model) + spec.tau;
  res.active = true;
  // stationarity of the penalized objective at the point actually returned
  res.inner_gradient_norm = kkt_residuals(d, spec, res).stationarity_norm;
  kernels::residuals(d.X.data(), res.model.weights.data(), d.y.data(),
                     scratch.r.data(), d.n, d.k);
  res.loss = kernels::sumsq(scratch.r.data(), d.n) / static_cast<double>(d.n);
  bool slack_ok = std::fabs(res.constraint_value - spec.tau) <= config.tol_c;
  bool inner_ok = res.inner_gradient_norm <= 10.0 * config.tol_g;
  // a polished point certifies itself through its slackness product even
  // when the bracket ran out of budget before tightening
  bool comp_ok =
      std::fabs(res.lambda * (res.constraint_value - spec.tau)) <=
      config.tol_c;
  res.status = (path.tight || comp_ok) && inner_ok && slack_ok
                   ? SolveStatus::optimal
                   : SolveStatus::max_iter;
  return res;
}

std::pair<LinearModel, double> closed_form_realizable(
    const LinearModel& theta_star, double alpha, double tau) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw UnsupportedAlpha("closed form needs alpha in (0,1)");
  if (!(tau >= 1.0) || !std::isfinite(tau))
    throw InvalidArgument("closed form needs tau >= 1");
  if (theta_star.weights.empty())
    throw InvalidArgument("empty weight vector");
  double root = std::pow(tau, 1.0 / alpha);
  LinearModel shifted = theta_star;
  shifted.weights.back() += root - 1.0;
  double lambda = (2.0 / (alpha * tau)) * root * (root - 1.0);
  return {std::move(shifted), lambda};
}

KktResiduals kkt_residuals(const Dataset& d, const ConstraintSpec& spec,
                           const SolveResult& result) {
  d.validate();
  if (spec.benefit.domain != LabelDomain::continuous)
    throw InvalidArgument(
        "first-order residuals are defined for the regression program");
  if (result.model.weights.size() != d.k)
    throw LengthMismatch("model width does not match dataset");

  std::size_t n = d.n;
  double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> r(n), b(n), p(n), w(n), grad(d.k);
  kernels::residuals(d.X.data(), result.model.weights.data(), d.y.data(),
                     r.data(), n, d.k);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = r[i] + 1.0;
    if (!(b[i] > 0.0))
      throw NonPositiveBenefit("stationarity undefined: benefit at index " +
                               std::to_string(i) + " is not positive");
  }
  double lambda = result.lambda;
  kernels::pow_each(b.data(), spec.alpha - 1.0, p.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = inv_n * (2.0 * r[i] - lambda * spec.alpha * p[i]);
  kernels::mat_t_vec(d.X.data(), w.data(), grad.data(), n, d.k);

  double welfare = 0.0;
  for (std::size_t i = 0; i < n; ++i) welfare += b[i] * p[i];
  welfare *= inv_n;

  KktResiduals out;
  out.stationarity_norm = l2_norm(grad);
  out.primal_violation = std::max(0.0, spec.tau - welfare);
  out.dual_feasibility = std::max(0.0, -lambda);
  out.complementary_slackness = std::fabs(lambda * (welfare - spec.tau));
  return out;
}

}  // namespace welfair
