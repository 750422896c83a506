#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

// Naive reference computations the tests compare the library against: plain
// loops, std::pow, and textbook linear algebra, written without any of the
// library's own numeric machinery.

namespace oracle {

inline double welfare_mean(const std::vector<double>& b, double alpha) {
  long double s = 0.0L;
  for (double v : b) {
    if (alpha == 0.0)
      s += std::log(v);
    else if (alpha > 0.0)
      s += std::pow(v, alpha);
    else
      s -= std::pow(v, alpha);
  }
  return static_cast<double>(s / static_cast<long double>(b.size()));
}

inline double ede(const std::vector<double>& b, double alpha) {
  long double s = 0.0L;
  for (double v : b) s += std::pow(v, alpha);
  return std::pow(static_cast<double>(s / static_cast<long double>(b.size())),
                  1.0 / alpha);
}

inline double mean(const std::vector<double>& b) {
  long double s = 0.0L;
  for (double v : b) s += v;
  return static_cast<double>(s / static_cast<long double>(b.size()));
}

inline double atkinson(const std::vector<double>& b, double beta) {
  double mu = mean(b);
  double equivalent;
  if (beta == 1.0) {
    long double s = 0.0L;
    for (double v : b) s += std::log(v);
    equivalent =
        std::exp(static_cast<double>(s / static_cast<long double>(b.size())));
  } else {
    equivalent = ede(b, 1.0 - beta);
  }
  return 1.0 - equivalent / mu;
}

inline double gen_entropy(const std::vector<double>& b, double a) {
  double mu = mean(b);
  long double s = 0.0L;
  for (double v : b) s += std::pow(v / mu, a) - 1.0;
  return static_cast<double>(s) / (static_cast<double>(b.size()) * a * (a - 1.0));
}

// Gaussian elimination with partial pivoting; A is row-major k x k.
inline std::vector<double> solve_linear(std::vector<double> A,
                                        std::vector<double> rhs,
                                        std::size_t k) {
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::fabs(A[r * k + col]) > std::fabs(A[pivot * k + col])) pivot = r;
    if (std::fabs(A[pivot * k + col]) < 1e-14)
      throw std::runtime_error("singular system in reference solver");
    if (pivot != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(A[pivot * k + c], A[col * k + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      double f = A[r * k + col] / A[col * k + col];
      for (std::size_t c = col; c < k; ++c) A[r * k + c] -= f * A[col * k + c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(k);
  for (std::size_t ri = k; ri-- > 0;) {
    double s = rhs[ri];
    for (std::size_t c = ri + 1; c < k; ++c) s -= A[ri * k + c] * x[c];
    x[ri] = s / A[ri * k + ri];
  }
  return x;
}

// Normal-equations least squares: X row-major n x k.
inline std::vector<double> least_squares(const std::vector<double>& X,
                                         const std::vector<double>& y,
                                         std::size_t n, std::size_t k) {
  std::vector<double> A(k * k, 0.0), rhs(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      rhs[r] += X[i * k + r] * y[i];
      for (std::size_t c = 0; c < k; ++c)
        A[r * k + c] += X[i * k + r] * X[i * k + c];
    }
  }
  return solve_linear(std::move(A), std::move(rhs), k);
}

// min ||X theta - y||^2 subject to a . theta = c, eliminating the variable
// with the largest |a_j|.
inline std::vector<double> eq_constrained_ls(const std::vector<double>& X,
                                             const std::vector<double>& y,
                                             std::size_t n, std::size_t k,
                                             const std::vector<double>& a,
                                             double c) {
  std::size_t p = 0;
  for (std::size_t j = 1; j < k; ++j)
    if (std::fabs(a[j]) > std::fabs(a[p])) p = j;
  if (std::fabs(a[p]) < 1e-14)
    throw std::runtime_error("degenerate constraint in reference solver");

  // theta_p = (c - sum_{j != p} a_j theta_j) / a_p
  std::vector<double> Xr(n * (k - 1));
  std::vector<double> yr(n);
  for (std::size_t i = 0; i < n; ++i) {
    double xp = X[i * k + p];
    std::size_t cc = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == p) continue;
      Xr[i * (k - 1) + cc] = X[i * k + j] - (a[j] / a[p]) * xp;
      ++cc;
    }
    yr[i] = y[i] - (c / a[p]) * xp;
  }
  std::vector<double> tr = least_squares(Xr, yr, n, k - 1);
  std::vector<double> theta(k);
  double acc = c;
  std::size_t cc = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == p) continue;
    theta[j] = tr[cc];
    acc -= a[j] * tr[cc];
    ++cc;
  }
  theta[p] = acc / a[p];
  return theta;
}

inline double sse(const std::vector<double>& X, const std::vector<double>& y,
                  std::size_t n, std::size_t k, const double* theta) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double pred = 0.0L;
    for (std::size_t j = 0; j < k; ++j) pred += X[i * k + j] * theta[j];
    long double r = pred - y[i];
    s += r * r;
  }
  return static_cast<double>(s);
}

// Mean CRRA welfare of the affine benefits X theta - y + 1; -inf when any
// base is non-positive (point outside the constraint's domain).
inline double grid_welfare(const std::vector<double>& X,
                           const std::vector<double>& y, std::size_t n,
                           std::size_t k, const double* theta, double alpha) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < k; ++j) pred += X[i * k + j] * theta[j];
    double base = pred - y[i] + 1.0;
    if (base <= 0.0) return -std::numeric_limits<double>::infinity();
    s += std::pow(base, alpha);
  }
  return static_cast<double>(s / static_cast<long double>(n));
}

struct GridSearch2d {
  bool any_feasible = false;
  double best_obj = 0.0;
  std::array<double, 2> best_theta = {0.0, 0.0};
};

// Dense search over the two-weight welfare-constrained least-squares
// program (slope and intercept; k must be 2). For a fixed slope every
// benefit grows with the intercept, so welfare does too: the feasible
// intercepts form a half-line whose endpoint is found by bisection, and the
// per-slope winner is either that endpoint or the per-slope least-squares
// intercept when it is feasible. The slope itself is scanned densely, then
// rescanned twice around the winner with 50x finer steps.
inline GridSearch2d grid_search_2d(const std::vector<double>& X,
                                   const std::vector<double>& y, std::size_t n,
                                   double alpha, double tau, double lo,
                                   double hi, double coarse_h) {
  GridSearch2d out;

  auto best_intercept = [&](double slope, double* t1) {
    // domain edge: smallest intercept keeping every benefit positive
    double edge = -std::numeric_limits<double>::infinity();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      edge = std::fmax(edge, y[i] - slope * X[i * 2] - 1.0);
      mx += X[i * 2];
      my += y[i];
    }
    double ls = (my - slope * mx) / static_cast<double>(n);
    auto welfare = [&](double t) {
      double theta[2] = {slope, t};
      return grid_welfare(X, y, n, 2, theta, alpha);
    };
    double low = edge + 1e-12 * (1.0 + std::fabs(edge));
    if (welfare(low) >= tau) {
      *t1 = std::fmax(ls, low);
      return true;
    }
    double span = 1.0;
    double high = low + span;
    while (welfare(high) < tau) {
      span *= 2.0;
      high = low + span;
      if (span > 1e12) return false;
    }
    for (int it = 0; it < 200 && low < high; ++it) {
      double mid = 0.5 * (low + high);
      if (mid <= low || mid >= high) break;
      (welfare(mid) >= tau ? high : low) = mid;
    }
    *t1 = std::fmax(ls, high);  // high stays on the feasible side
    return true;
  };

  auto scan = [&](double l0, double h0, double step) {
    for (double t0 = l0; t0 <= h0 + 1e-15; t0 += step) {
      double t1 = 0.0;
      if (!best_intercept(t0, &t1)) continue;
      double theta[2] = {t0, t1};
      if (grid_welfare(X, y, n, 2, theta, alpha) < tau) continue;
      double obj = sse(X, y, n, 2, theta);
      if (!out.any_feasible || obj < out.best_obj) {
        out.any_feasible = true;
        out.best_obj = obj;
        out.best_theta = {t0, t1};
      }
    }
  };

  double step = coarse_h / 50.0;
  scan(lo, hi, step);
  for (int pass = 0; pass < 2 && out.any_feasible; ++pass) {
    double r = 2.0 * step;
    step /= 50.0;
    scan(out.best_theta[0] - r, out.best_theta[0] + r, step);
  }
  return out;
}

// Dense search over the two-weight program that pins the mean benefit to mu
// and caps the mean squared benefit at mu^2 (1 + 2 tau). The mean equality
// fixes the intercept exactly for each slope, so only the slope is scanned.
inline GridSearch2d speicher_grid(const std::vector<double>& X,
                                  const std::vector<double>& y, std::size_t n,
                                  double mu, double tau, double lo, double hi,
                                  double coarse_h) {
  GridSearch2d out;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += X[i * 2];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cap = mu * mu * (1.0 + 2.0 * tau) + 1e-12;

  auto scan = [&](double l0, double h0, double step) {
    for (double t0 = l0; t0 <= h0 + 1e-15; t0 += step) {
      double t1 = (mu - 1.0) + my - t0 * mx;
      long double q = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        long double b = t0 * X[i * 2] + t1 - y[i] + 1.0;
        q += b * b;
      }
      if (static_cast<double>(q / static_cast<long double>(n)) > cap)
        continue;
      double theta[2] = {t0, t1};
      double obj = sse(X, y, n, 2, theta);
      if (!out.any_feasible || obj < out.best_obj) {
        out.any_feasible = true;
        out.best_obj = obj;
        out.best_theta = {t0, t1};
      }
    }
  };

  double step = coarse_h / 50.0;
  scan(lo, hi, step);
  for (int pass = 0; pass < 2 && out.any_feasible; ++pass) {
    double r = 2.0 * step;
    step /= 50.0;
    scan(out.best_theta[0] - r, out.best_theta[0] + r, step);
  }
  return out;
}

}  // namespace oracle
