#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "inner_loop.hpp"
#include "solver_detail.hpp"
#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"
#include "welfair/rng.hpp"
#include "welfair/solver.hpp"

namespace welfair {

namespace {

double softplus(double z) {
  if (z > 35.0) return z;
  return std::log1p(std::exp(z));
}

void normalize_or_last_axis(std::vector<double>& v) {
  double norm = std::sqrt(kernels::sumsq(v.data(), v.size()));
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  } else {
    std::fill(v.begin(), v.end(), 0.0);
    v.back() = 1.0;
  }
}

double tangential_norm(const std::vector<double>& x,
                       const std::vector<double>& g) {
  double radial = kernels::dot(g.data(), x.data(), x.size());
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double t = g[j] - radial * x[j];
    s += t * t;
  }
  return std::sqrt(s);
}

struct ClsScratch {
  std::vector<double> t, b, p, w;
  explicit ClsScratch(std::size_t n) : t(n), b(n), p(n), w(n) {}
};

// Mean logistic loss and gradient.
struct LogisticEval {
  const Dataset& d;
  ClsScratch& s;
  bool operator()(const std::vector<double>& th, double* f,
                  std::vector<double>* g) const {
    double inv_n = 1.0 / static_cast<double>(d.n);
    kernels::matvec(d.X.data(), th.data(), s.t.data(), d.n, d.k);
    double loss = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      double yt = d.y[i] * s.t[i];
      loss += softplus(-yt);
      s.w[i] = -d.y[i] * inv_n / (1.0 + std::exp(yt));
    }
    *f = loss * inv_n;
    kernels::mat_t_vec(d.X.data(), s.w.data(), g->data(), d.n, d.k);
    return true;
  }
};

// Logistic loss minus lambda times the welfare slack; benefits are affine in
// the raw score with the divisor folded into the per-instance slope.
struct PenalizedLogisticEval {
  const Dataset& d;
  ClsScratch& s;
  const std::vector<double>& a;
  const std::vector<double>& o;
  double alpha, lambda, tau, eps_b;
  bool operator()(const std::vector<double>& th, double* f,
                  std::vector<double>* g) const {
    double inv_n = 1.0 / static_cast<double>(d.n);
    kernels::matvec(d.X.data(), th.data(), s.t.data(), d.n, d.k);
    for (std::size_t i = 0; i < d.n; ++i) {
      s.b[i] = a[i] * s.t[i] + o[i];
      if (!(s.b[i] >= eps_b)) return false;
    }
    kernels::pow_each(s.b.data(), alpha - 1.0, s.p.data(), d.n);
    double loss = 0.0, welfare = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      double yt = d.y[i] * s.t[i];
      loss += softplus(-yt);
      welfare += s.b[i] * s.p[i];
      s.w[i] = inv_n * (-d.y[i] / (1.0 + std::exp(yt)) -
                        lambda * alpha * a[i] * s.p[i]);
    }
    *f = loss * inv_n - lambda * (welfare * inv_n - tau);
    kernels::mat_t_vec(d.X.data(), s.w.data(), g->data(), d.n, d.k);
    return true;
  }
};

std::vector<double> random_unit(std::size_t k, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> v(k);
  for (double& x : v) x = rng.next_normal();
  normalize_or_last_axis(v);
  return v;
}

bool domain_valid(const Dataset& d, const std::vector<double>& a,
                  const std::vector<double>& o, double eps_b,
                  const std::vector<double>& th, std::vector<double>& t) {
  kernels::matvec(d.X.data(), th.data(), t.data(), d.n, d.k);
  for (std::size_t i = 0; i < d.n; ++i)
    if (!(a[i] * t[i] + o[i] >= eps_b)) return false;
  return true;
}

// Blend toward the intercept axis until every benefit clears the floor.
std::vector<double> repair_start(const Dataset& d,
                                 const std::vector<double>& a,
                                 const std::vector<double>& o, double eps_b,
                                 std::vector<double> th) {
  std::vector<double> t(d.n);
  normalize_or_last_axis(th);
  if (domain_valid(d, a, o, eps_b, th, t)) return th;
  std::vector<double> axis(d.k, 0.0);
  axis.back() = 1.0;
  for (double w : {0.25, 0.5, 0.75, 1.0}) {
    std::vector<double> cand(d.k);
    for (std::size_t j = 0; j < d.k; ++j)
      cand[j] = (1.0 - w) * th[j] + w * axis[j];
    normalize_or_last_axis(cand);
    if (domain_valid(d, a, o, eps_b, cand, t)) return cand;
  }
  axis.back() = -1.0;
  if (domain_valid(d, a, o, eps_b, axis, t)) return axis;
  throw DomainCollapse("no unit model keeps all benefits positive");
}

}  // namespace

namespace detail {

LinearModel sphere_logistic_fit(const Dataset& d, const SolverConfig& config,
                                FitDiag* diag) {
  ClsScratch scratch(d.n);
  LogisticEval eval{d, scratch};
  InnerOptions opt;
  opt.tol_g = config.tol_g;
  opt.max_iter = config.max_inner;

  InnerOutcome best;
  bool have = false;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    std::vector<double> x0;
    if (r == 0) {
      x0.assign(d.k, 0.0);
      x0.back() = 1.0;
    } else {
      x0 = random_unit(d.k, config.seed + 0x9E3779B9u * r);
    }
    auto res = bb_minimize(eval, normalize_or_last_axis, tangential_norm,
                           std::move(x0), opt);
    if (!have || res.f < best.f) {
      best = std::move(res);
      have = true;
    }
  }
  if (diag) {
    diag->iters = best.iters;
    diag->grad_norm = best.grad_norm;
    diag->converged = best.converged;
  }
  LinearModel m;
  m.task = Task::classification;
  m.weights = std::move(best.x);
  return m;
}

}  // namespace detail

SolveResult solve_constrained_classification(const Dataset& d,
                                             const ConstraintSpec& spec,
                                             const SolverConfig& config) {
  d.validate();
  if (d.task != Task::classification)
    throw InvalidArgument("dataset is not a classification task");
  detail::validate_spec(spec, Task::classification);
  detail::validate_config(config);

  std::vector<double> a, o;
  detail::benefit_coeffs(d, spec, &a, &o);

  // Rigorous ceiling: |score| <= ||x_i|| for unit weights, and the benefit is
  // affine in the score, so its per-instance maximum sits at an endpoint.
  double upper = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double* row = d.X.data() + i * d.k;
    double reach = std::sqrt(kernels::dot(row, row, d.k));
    double b_hi = o[i] + std::fabs(a[i]) * reach;
    if (!(b_hi > config.eps_b))
      throw Infeasible("instance " + std::to_string(i) +
                       " cannot receive positive benefit under any unit "
                       "model");
    upper += std::pow(b_hi, spec.alpha);
  }
  upper /= static_cast<double>(d.n);
  if (spec.tau > upper + config.tol_c)
    throw Infeasible("welfare bound " + std::to_string(spec.tau) +
                     " exceeds the attainable ceiling " +
                     std::to_string(upper));

  ClsScratch scratch(d.n);
  LogisticEval loss_eval{d, scratch};
  auto mean_loss = [&](const LinearModel& m) {
    double f = 0.0;
    std::vector<double> g(d.k);
    loss_eval(m.weights, &f, &g);
    return f;
  };

  SolveResult res;
  res.certified = false;

  detail::FitDiag diag;
  LinearModel theta = detail::sphere_logistic_fit(d, config, &diag);
  res.inner_iterations = diag.iters;
  double gap = detail::welfare_gap(d, spec, theta);
  if (gap >= 0.0) {
    res.loss = mean_loss(theta);
    res.model = std::move(theta);
    res.lambda = 0.0;
    res.constraint_value = gap + spec.tau;
    res.active = false;
    res.status = diag.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    res.inner_gradient_norm = diag.grad_norm;
    return res;
  }

  detail::InnerOptions opt;
  opt.tol_g = config.tol_g;
  opt.max_iter = config.max_inner;
  auto gap_at = [&](const LinearModel& m) {
    return detail::welfare_gap(d, spec, m);
  };

  bool have = false;
  DualPath best_path;
  double best_loss = 0.0, best_stat = 0.0;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    LinearModel start;
    start.task = Task::classification;
    start.weights = r == 0 ? theta.weights
                           : random_unit(d.k, config.seed + 0x517CC1B7u * r);
    double last_stat = 0.0;
    auto fit = [&](double lambda, const LinearModel& warm) {
      PenalizedLogisticEval eval{d,          scratch,  a,
                                 o,          spec.alpha, lambda,
                                 spec.tau,   config.eps_b};
      auto x0 = repair_start(d, a, o, config.eps_b, warm.weights);
      auto inner = detail::bb_minimize(eval, normalize_or_last_axis,
                                       tangential_norm, std::move(x0), opt);
      res.inner_iterations += inner.iters;
      last_stat = inner.grad_norm;
      LinearModel m;
      m.task = Task::classification;
      m.weights = std::move(inner.x);
      return m;
    };
    DualPath path;
    try {
      path = dual_bisection(fit, gap_at, start, config);
    } catch (const LambdaOverflow&) {
      continue;
    } catch (const DomainCollapse&) {
      continue;
    }
    res.outer_iterations += path.fits;
    double loss = mean_loss(path.theta);
    if (!have || loss < best_loss) {
      have = true;
      best_loss = loss;
      best_path = std::move(path);
      best_stat = last_stat;
    }
  }
  if (!have)
    throw Infeasible(
        "no restart reached the welfare bound within the multiplier budget");

  normalize_or_last_axis(best_path.theta.weights);
  res.model = std::move(best_path.theta);
  res.lambda = best_path.lambda;
  res.constraint_value = detail::welfare_gap(d, spec, res.model) + spec.tau;
  res.loss = best_loss;
  res.active = true;
  res.inner_gradient_norm = best_stat;
  bool slack_ok = std::fabs(res.constraint_value - spec.tau) <= config.tol_c;
  res.status = best_path.tight && slack_ok ? SolveStatus::optimal
                                           : SolveStatus::max_iter;
  return res;
}

}  // namespace welfair
