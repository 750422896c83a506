#pragma once

#include <cstddef>

// Dense inner-loop kernels behind the numerical modules. Every kernel has a
// plain scalar reference implementation and, on x86-64, an AVX2+FMA variant.
// The top-level functions dispatch once at runtime based on CPUID (or an
// explicit override) and are what library code calls; the per-backend
// namespaces stay visible so equivalence tests can pin a backend directly.
//
// Unless noted, pointers must not alias and sizes may be zero.

namespace welfair::kernels {

enum class Backend { scalar, avx2 };

// True when the AVX2 variant was compiled in and the CPU supports it.
bool avx2_supported();

// Backend the dispatched entry points currently resolve to.
Backend active_backend();

// Pin the backend (throws InvalidArgument if unavailable); reset returns to
// automatic selection. Not thread-safe against concurrent kernel calls.
void force_backend(Backend b);
void reset_backend();

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
double sumsq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);  // y += a*x
double reduce_min(const double* x, std::size_t n);               // n >= 1
double reduce_max(const double* x, std::size_t n);               // n >= 1

// Powers of strictly positive inputs, computed as exp(alpha * log(b)).
void pow_each(const double* b, double alpha, double* out, std::size_t n);
double pow_sum(const double* b, double alpha, std::size_t n);
double log_sum(const double* b, std::size_t n);

// Row-major X of shape n x k.
void matvec(const double* X, const double* theta, double* out, std::size_t n,
            std::size_t k);
// r_i = X_i . theta - y_i
void residuals(const double* X, const double* theta, const double* y,
               double* r, std::size_t n, std::size_t k);
// out = X^T w, out has length k (overwritten)
void mat_t_vec(const double* X, const double* w, double* out, std::size_t n,
               std::size_t k);

double sq_dist(const double* a, const double* b, std::size_t k);

// sum_j max(0, |p_i - p[j]| - d[j]) over j in [0, m)
double dwork_row(double p_i, const double* p, const double* d, std::size_t m);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
double sumsq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double reduce_min(const double* x, std::size_t n);
double reduce_max(const double* x, std::size_t n);
void pow_each(const double* b, double alpha, double* out, std::size_t n);
double pow_sum(const double* b, double alpha, std::size_t n);
double log_sum(const double* b, std::size_t n);
void matvec(const double* X, const double* theta, double* out, std::size_t n,
            std::size_t k);
void residuals(const double* X, const double* theta, const double* y,
               double* r, std::size_t n, std::size_t k);
void mat_t_vec(const double* X, const double* w, double* out, std::size_t n,
               std::size_t k);
double sq_dist(const double* a, const double* b, std::size_t k);
double dwork_row(double p_i, const double* p, const double* d, std::size_t m);
}  // namespace scalar

#if defined(WELFAIR_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
double sumsq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double reduce_min(const double* x, std::size_t n);
double reduce_max(const double* x, std::size_t n);
void pow_each(const double* b, double alpha, double* out, std::size_t n);
double pow_sum(const double* b, double alpha, std::size_t n);
double log_sum(const double* b, std::size_t n);
void matvec(const double* X, const double* theta, double* out, std::size_t n,
            std::size_t k);
void residuals(const double* X, const double* theta, const double* y,
               double* r, std::size_t n, std::size_t k);
void mat_t_vec(const double* X, const double* w, double* out, std::size_t n,
               std::size_t k);
double sq_dist(const double* a, const double* b, std::size_t k);
double dwork_row(double p_i, const double* p, const double* d, std::size_t m);
}  // namespace avx2
#endif

}  // namespace welfair::kernels
