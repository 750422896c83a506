#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

// Spectral-step (Barzilai-Borwein) descent with the Grippo-Lampariello-Lucidi
// nonmonotone sufficient-decrease test. Shared by the least-squares, welfare-
// penalized, and sphere-projected inner problems.

namespace welfair::detail {

struct InnerOptions {
  double tol_g = 1e-8;
  std::size_t max_iter = 10000;
  double armijo = 1e-4;
  std::size_t history = 10;  // nonmonotone reference window
};

struct InnerOutcome {
  std::vector<double> x;
  double f = 0.0;
  double grad_norm = 0.0;  // stationarity measure at x
  std::size_t iters = 0;
  bool converged = false;
  bool invalid_start = false;  // x0 was outside the objective's domain
};

// eval(x, &f, &g) -> false when x is outside the domain (benefits below the
// floor); project maps a trial point back onto the feasible manifold;
// stat_norm is the first-order stationarity measure (gradient norm, or its
// tangential part on a manifold). x0 must be inside the domain.
template <class Eval, class Project, class StatNorm>
InnerOutcome bb_minimize(Eval&& eval, Project&& project, StatNorm&& stat_norm,
                         std::vector<double> x0, const InnerOptions& opt) {
  const std::size_t k = x0.size();
  InnerOutcome out;
  std::vector<double> g(k), xn(k), gn(k);
  double f = 0.0;
  if (!eval(x0, &f, &g)) {
    out.invalid_start = true;
    out.x = std::move(x0);
    return out;
  }
  std::vector<double> window = {f};

  double g2 = 0.0;
  for (double v : g) g2 += v * v;
  double eta = 1.0 / (1.0 + std::sqrt(g2));

  for (; out.iters < opt.max_iter; ++out.iters) {
    if (stat_norm(x0, g) <= opt.tol_g) {
      out.converged = true;
      break;
    }
    double fref = *std::max_element(window.begin(), window.end());
    double step = eta;
    double fn = f;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j < k; ++j) xn[j] = x0[j] - step * g[j];
      project(xn);
      double dec = 0.0;
      for (std::size_t j = 0; j < k; ++j) dec += (xn[j] - x0[j]) * g[j];
      if (dec < 0.0 && eval(xn, &fn, &gn) && fn <= fref + opt.armijo * dec) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at the precision floor

    double sy = 0.0, ss = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double s = xn[j] - x0[j];
      sy += s * (gn[j] - g[j]);
      ss += s * s;
    }
    eta = sy > 0.0 ? std::clamp(ss / sy, 1e-16, 1e16) : step * 2.0;
    x0.swap(xn);
    g.swap(gn);
    f = fn;
    window.push_back(f);
    if (window.size() > opt.history) window.erase(window.begin());
  }

  out.grad_norm = stat_norm(x0, g);
  if (out.grad_norm <= opt.tol_g) out.converged = true;
  out.x = std::move(x0);
  out.f = f;
  return out;
}

}  // namespace welfair::detail
