#include <cmath>

#include "welfair/kernels.hpp"

// Reference implementations. Deliberately straight loops: these define the
// semantics the vector variants are tested against.

namespace welfair::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sumsq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double reduce_min(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] < m ? x[i] : m;
  return m;
}

double reduce_max(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

void pow_each(const double* b, double alpha, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(alpha * std::log(b[i]));
}

double pow_sum(const double* b, double alpha, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(alpha * std::log(b[i]));
  return acc;
}

double log_sum(const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::log(b[i]);
  return acc;
}

void matvec(const double* X, const double* theta, double* out, std::size_t n,
            std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) out[i] = dot(X + i * k, theta, k);
}

void residuals(const double* X, const double* theta, const double* y,
               double* r, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) r[i] = dot(X + i * k, theta, k) - y[i];
}

void mat_t_vec(const double* X, const double* w, double* out, std::size_t n,
               std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < n; ++i) axpy(w[i], X + i * k, out, k);
}

double sq_dist(const double* a, const double* b, std::size_t k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dwork_row(double p_i, const double* p, const double* d, std::size_t m) {
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double v = std::fabs(p_i - p[j]) - d[j];
    if (v > 0.0) acc += v;
  }
  return acc;
}

}  // namespace welfair::kernels::scalar
