#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "inner_loop.hpp"
#include "solver_detail.hpp"
#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"
#include "welfair/mechanisms.hpp"

namespace welfair {

namespace {

void check_config(const MechanismConfig& config) {
  if (!(config.tol_c > 0.0) || !(config.tol_g > 0.0) ||
      !(config.al_tol > 0.0) || !(config.lambda_max > 0.0) ||
      !(config.penalty_growth > 1.0) || config.max_inner == 0 ||
      config.penalty_rounds == 0 || config.al_rounds == 0 ||
      config.max_outer == 0)
    throw InvalidArgument("mechanism configuration values must be positive");
}

SolverConfig as_solver_config(const MechanismConfig& config) {
  SolverConfig s;
  s.tol_c = config.tol_c;
  s.tol_g = config.tol_g;
  s.lambda_max = config.lambda_max;
  s.max_outer = config.max_outer;
  s.max_inner = config.max_inner;
  s.restarts = 1;
  return s;
}

void identity_project(std::vector<double>&) {}

double plain_grad_norm(const std::vector<double>&,
                       const std::vector<double>& g) {
  return std::sqrt(kernels::sumsq(g.data(), g.size()));
}

// Mean squared loss plus rho times the squared hinge of each pair's gap
// excess, on both sides of the cap.
struct PairPenaltyEval {
  const Dataset& d;
  const std::vector<PairConstraint>& pairs;
  double rho;
  std::vector<double>& t;
  std::vector<double>& w;
  bool operator()(const std::vector<double>& th, double* f,
                  std::vector<double>* g) const {
    double inv_n = 1.0 / static_cast<double>(d.n);
    kernels::matvec(d.X.data(), th.data(), t.data(), d.n, d.k);
    double loss = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      double r = t[i] - d.y[i];
      loss += r * r;
      w[i] = 2.0 * r * inv_n;
    }
    double pen = 0.0;
    for (const PairConstraint& pc : pairs) {
      double diff = t[pc.i] - t[pc.j];
      double over = std::fmax(0.0, diff - pc.bound);
      double under = std::fmax(0.0, -diff - pc.bound);
      pen += over * over + under * under;
      double coef = 2.0 * rho * (over - under);
      w[pc.i] += coef;
      w[pc.j] -= coef;
    }
    *f = loss * inv_n + rho * pen;
    kernels::mat_t_vec(d.X.data(), w.data(), g->data(), d.n, d.k);
    return true;
  }
};

double worst_pair_gap(const std::vector<double>& t,
                      const std::vector<PairConstraint>& pairs) {
  double worst = 0.0;
  for (const PairConstraint& pc : pairs)
    worst = std::fmax(worst, std::fabs(t[pc.i] - t[pc.j]) - pc.bound);
  return worst;
}

void fill_violation_stats(const std::vector<double>& t,
                          const DistanceMatrix& dm, MechanismResult* out) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      worst = std::fmax(worst, std::fabs(t[i] - t[j]) - dm.at(i, j));
  out->max_violation = std::fmax(0.0, worst);
  out->avg_violation = dwork_violation(t, dm);
}

// Escalates the pair-penalty weight until every enforced pair is within
// tol_c of its cap.
MechanismResult capped_fit(const Dataset& d,
                           const std::vector<PairConstraint>& pairs,
                           const DistanceMatrix& dm,
                           const MechanismConfig& config) {
  SolverConfig scfg = as_solver_config(config);
  detail::FitDiag diag;
  LinearModel cur = detail::ls_fit(d, scfg, &diag);
  std::vector<double> t = cur.predict(d);

  MechanismResult out;
  out.added_constraints = pairs.size();
  if (pairs.empty()) {
    out.model = std::move(cur);
    out.status = diag.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    fill_violation_stats(t, dm, &out);
    return out;
  }

  detail::InnerOptions opt;
  opt.tol_g = config.tol_g;
  opt.max_iter = config.max_inner;
  std::vector<double> w(d.n);
  double rho = config.penalty_growth;
  bool capped = false;
  double worst = 0.0;
  for (std::size_t round = 0; round < config.penalty_rounds; ++round) {
    PairPenaltyEval eval{d, pairs, rho, t, w};
    auto inner = detail::bb_minimize(eval, identity_project, plain_grad_norm,
                                     cur.weights, opt);
    cur.weights = std::move(inner.x);
    kernels::matvec(d.X.data(), cur.weights.data(), t.data(), d.n, d.k);
    worst = worst_pair_gap(t, pairs);
    if (worst <= config.tol_c) {
      capped = true;
      break;
    }
    rho *= config.penalty_growth;
  }
  if (!capped)
    throw NonConvergence("pair caps still violated by " +
                         std::to_string(worst) +
                         " after the penalty budget");
  out.model = std::move(cur);
  out.status = SolveStatus::optimal;
  fill_violation_stats(t, dm, &out);
  return out;
}

std::vector<std::size_t> net_from_matrix(const DistanceMatrix& dm,
                                         double eps) {
  std::size_t n = dm.size();
  std::vector<std::size_t> reps = {0};
  std::vector<double> nearest(n);
  dm.row(0, nearest.data());
  for (;;) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (nearest[i] > nearest[far]) far = i;
    if (nearest[far] <= eps) break;
    reps.push_back(far);
    std::vector<double> row(n);
    dm.row(far, row.data());
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::fmin(nearest[i], row[i]);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

// Mean squared loss, the spread term lambda (mean b^2 - cap) with its sign
// chosen by the constraint direction, and the augmented mean equality.
struct MeanSpreadEval {
  const Dataset& d;
  double mu, lambda, cap, nu, rho;
  double dir;  // +1 caps the spread from above, -1 is the literal reading
  std::vector<double>& t;
  std::vector<double>& w;
  bool operator()(const std::vector<double>& th, double* f,
                  std::vector<double>* g) const {
    double inv_n = 1.0 / static_cast<double>(d.n);
    kernels::matvec(d.X.data(), th.data(), t.data(), d.n, d.k);
    double loss = 0.0, q = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      double r = t[i] - d.y[i];
      double b = r + 1.0;
      loss += r * r;
      q += b * b;
      mean_b += b;
      t[i] = b;  // reuse the buffer for the gradient pass
    }
    loss *= inv_n;
    q *= inv_n;
    mean_b *= inv_n;
    double c = mean_b - mu;
    *f = loss + dir * lambda * (q - cap) + nu * c + 0.5 * rho * c * c;
    for (std::size_t i = 0; i < d.n; ++i) {
      double b = t[i];
      w[i] = (2.0 * (b - 1.0) + dir * lambda * 2.0 * b + nu + rho * c) * inv_n;
    }
    kernels::mat_t_vec(d.X.data(), w.data(), g->data(), d.n, d.k);
    return true;
  }
};

struct MuSolve {
  LinearModel model;
  double loss = 0.0;
  bool clean = true;  // equality met and the multiplier search closed
};

double mean_benefit(const Dataset& d, const std::vector<double>& t) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < d.n; ++i) s += (t[i] - d.y[i]) + 1.0;
  return static_cast<double>(s / static_cast<long double>(d.n));
}

double mean_sq_benefit(const Dataset& d, const std::vector<double>& t) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < d.n; ++i) {
    long double b = (t[i] - d.y[i]) + 1.0;
    s += b * b;
  }
  return static_cast<double>(s / static_cast<long double>(d.n));
}

double mean_sq_loss(const Dataset& d, const std::vector<double>& t) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < d.n; ++i) {
    long double r = t[i] - d.y[i];
    s += r * r;
  }
  return static_cast<double>(s / static_cast<long double>(d.n));
}

MuSolve solve_mean_level(const Dataset& d, double mu, double tau,
                         const MechanismConfig& config) {
  SolverConfig scfg = as_solver_config(config);
  double cap = mu * mu * (1.0 + 2.0 * tau);
  double dir = config.literal_lower_bound ? -1.0 : 1.0;

  if (tau == 0.0) {
    // constant benefits: interpolate the shifted labels exactly or give up
    Dataset shifted = d;
    for (double& yi : shifted.y) yi += mu - 1.0;
    detail::FitDiag diag;
    LinearModel m = detail::ls_fit(shifted, scfg, &diag);
    std::vector<double> t = m.predict(d);
    double mb = mean_benefit(d, t);
    double q = mean_sq_benefit(d, t);
    double spread = (q - mu * mu) / (2.0 * mu * mu);
    if (std::fabs(mb - mu) > config.tol_c || spread > config.tol_c)
      throw Infeasible("constant benefit level " + std::to_string(mu) +
                       " is not reachable");
    MuSolve out;
    out.loss = mean_sq_loss(d, t);
    out.model = std::move(m);
    out.clean = diag.converged;
    return out;
  }

  detail::InnerOptions opt;
  opt.tol_g = config.tol_g;
  opt.max_iter = config.max_inner;
  std::vector<double> t(d.n), w(d.n);

  bool equality_met = true;
  auto fit = [&](double lambda, const LinearModel& warm) {
    LinearModel m = warm;
    double nu = 0.0, rho = 10.0, prev_c = std::numeric_limits<double>::max();
    for (std::size_t round = 0; round < config.al_rounds; ++round) {
      MeanSpreadEval eval{d, mu, lambda, cap, nu, rho, dir, t, w};
      auto inner = detail::bb_minimize(eval, identity_project,
                                       plain_grad_norm, m.weights, opt);
      m.weights = std::move(inner.x);
      kernels::matvec(d.X.data(), m.weights.data(), t.data(), d.n, d.k);
      double c = mean_benefit(d, t) - mu;
      if (std::fabs(c) <= config.al_tol) {
        equality_met = true;
        return m;
      }
      nu += rho * c;
      if (std::fabs(c) > 0.25 * std::fabs(prev_c))
        rho = std::fmin(rho * 10.0, 1e12);
      prev_c = c;
    }
    equality_met = false;
    return m;
  };

  detail::FitDiag diag;
  LinearModel start = detail::ls_fit(d, scfg, &diag);
  LinearModel at_zero = fit(0.0, start);
  bool zero_equality = equality_met;
  std::vector<double> tz = at_zero.predict(d);
  double spread_gap = dir * (cap - mean_sq_benefit(d, tz));
  if (spread_gap >= 0.0) {
    MuSolve out;
    out.loss = mean_sq_loss(d, tz);
    out.model = std::move(at_zero);
    out.clean = zero_equality;
    return out;
  }

  MuSolve out;
  if (!config.literal_lower_bound) {
    auto gap = [&](const LinearModel& m) {
      std::vector<double> tm = m.predict(d);
      return cap - mean_sq_benefit(d, tm);
    };
    DualPath path;
    try {
      path = dual_bisection(fit, gap, at_zero, scfg);
    } catch (const LambdaOverflow&) {
      throw Infeasible("mean level " + std::to_string(mu) +
                       " cannot meet the spread cap");
    }
    out.clean = equality_met && path.tight;
    out.model = std::move(path.theta);
  } else {
    // the literal direction flips the penalty sign, which caps usable
    // multipliers at 1: beyond it the objective loses convexity
    double lo = 0.0, hi = 0.0;
    LinearModel cur = at_zero, best;
    bool found = false;
    for (int p = 1; p <= 45 && !found; ++p) {
      hi = 1.0 - std::pow(0.5, p);
      cur = fit(hi, cur);
      std::vector<double> tc = cur.predict(d);
      if (mean_sq_benefit(d, tc) - cap >= 0.0) {
        best = cur;
        found = true;
      } else {
        lo = hi;
      }
    }
    if (!found)
      throw Infeasible("mean level " + std::to_string(mu) +
                       " cannot reach the printed spread floor");
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      cur = fit(mid, cur);
      std::vector<double> tc = cur.predict(d);
      if (mean_sq_benefit(d, tc) - cap >= 0.0) {
        hi = mid;
        best = cur;
      } else {
        lo = mid;
      }
    }
    out.clean = equality_met;
    out.model = std::move(best);
  }
  std::vector<double> tf = out.model.predict(d);
  out.loss = mean_sq_loss(d, tf);
  return out;
}

void require_regression(const Dataset& d) {
  d.validate();
  if (d.task != Task::regression)
    throw InvalidArgument("mechanisms operate on regression datasets");
}

}  // namespace

MechanismResult dwork_delta_mechanism(const Dataset& d, double delta,
                                      const DistanceMatrix& distances,
                                      const MechanismConfig& config) {
  require_regression(d);
  check_config(config);
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be non-negative");
  if (distances.size() != d.n)
    throw LengthMismatch("distance matrix size does not match the dataset");

  SolverConfig scfg = as_solver_config(config);
  detail::FitDiag diag;
  LinearModel base = detail::ls_fit(d, scfg, &diag);
  std::vector<double> t = base.predict(d);

  std::vector<PairConstraint> pairs;
  for (std::size_t i = 0; i + 1 < d.n; ++i) {
    for (std::size_t j = i + 1; j < d.n; ++j) {
      double bound = distances.at(i, j);
      double v = std::fabs(t[i] - t[j]) - bound;
      if (v > 0.0 && v >= delta) pairs.push_back({i, j, bound});
    }
  }
  if (pairs.empty()) {
    MechanismResult out;
    out.model = std::move(base);
    out.status = diag.converged ? SolveStatus::optimal : SolveStatus::max_iter;
    fill_violation_stats(t, distances, &out);
    return out;
  }
  return capped_fit(d, pairs, distances, config);
}

std::vector<std::size_t> epsilon_net(const Dataset& d, double eps,
                                     std::size_t distance_cap) {
  d.validate();
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (d.n == 0) throw TooFewRows("cannot compress an empty dataset");
  if (d.n == 1) return {0};
  DistanceMatrix dm = DistanceMatrix::from_features(d, distance_cap);
  return net_from_matrix(dm, eps);
}

MechanismResult epsilon_net_mechanism(const Dataset& d, double eps,
                                      const MechanismConfig& config) {
  require_regression(d);
  check_config(config);
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (d.n < 2) throw TooFewRows("need at least two rows to cap pairs");
  DistanceMatrix dm = DistanceMatrix::from_features(d, config.distance_cap);
  std::vector<std::size_t> reps = net_from_matrix(dm, eps);
  std::vector<PairConstraint> pairs;
  for (std::size_t a = 0; a + 1 < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b)
      pairs.push_back({reps[a], reps[b], dm.at(reps[a], reps[b])});
  return capped_fit(d, pairs, dm, config);
}

std::vector<double> default_mu_grid(const Dataset& d) {
  d.validate();
  SolverConfig scfg;
  LinearModel base = detail::ls_fit(d, scfg);
  std::vector<double> t = base.predict(d);
  double mb = mean_benefit(d, t);
  if (!(mb > 0.0))
    throw InvalidArgument("plain fit's mean benefit is not positive");
  std::vector<double> grid(21);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = mb * (0.5 + 0.05 * static_cast<double>(i));
  return grid;
}

MechanismResult speicher_mechanism(const Dataset& d, double tau,
                                   const std::vector<double>& mu_grid,
                                   const MechanismConfig& config) {
  require_regression(d);
  check_config(config);
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw InvalidArgument("tau must be non-negative and finite");
  if (mu_grid.empty()) throw InvalidArgument("mean-level grid is empty");
  for (double mu : mu_grid)
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw InvalidArgument("mean levels must be positive and finite");

  MechanismResult out;
  bool have = false;
  MuSolve best;
  for (double mu : mu_grid) {
    MuSolve cand;
    try {
      cand = solve_mean_level(d, mu, tau, config);
    } catch (const Infeasible&) {
      ++out.skipped_grid;
      continue;
    }
    if (!have || cand.loss < best.loss) {
      have = true;
      best = std::move(cand);
      out.mu = mu;
    }
  }
  if (!have)
    throw AllInfeasible(
        "no mean level in the grid admits the spread constraint");
  out.model = std::move(best.model);
  out.status = best.clean ? SolveStatus::optimal : SolveStatus::max_iter;
  return out;
}

}  // namespace welfair
