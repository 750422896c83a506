#include "welfair/kernels.hpp"

#include "welfair/errors.hpp"

namespace welfair::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(WELFAIR_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend pick_default() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

Backend g_backend = pick_default();

}  // namespace

bool avx2_supported() { return cpu_has_avx2(); }

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw InvalidArgument("avx2 backend not available on this machine");
  g_backend = b;
}

void reset_backend() { g_backend = pick_default(); }

#if defined(WELFAIR_HAVE_AVX2)
#define WELFAIR_DISPATCH(call) \
  return g_backend == Backend::avx2 ? avx2::call : scalar::call
#else
#define WELFAIR_DISPATCH(call) return scalar::call
#endif

double dot(const double* a, const double* b, std::size_t n) {
  WELFAIR_DISPATCH(dot(a, b, n));
}
double sum(const double* x, std::size_t n) { WELFAIR_DISPATCH(sum(x, n)); }
double sumsq(const double* x, std::size_t n) { WELFAIR_DISPATCH(sumsq(x, n)); }
void axpy(double a, const double* x, double* y, std::size_t n) {
#if defined(WELFAIR_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::axpy(a, x, y, n);
#endif
  scalar::axpy(a, x, y, n);
}
double reduce_min(const double* x, std::size_t n) {
  WELFAIR_DISPATCH(reduce_min(x, n));
}
double reduce_max(const double* x, std::size_t n) {
  WELFAIR_DISPATCH(reduce_max(x, n));
}
void pow_each(const double* b, double alpha, double* out, std::size_t n) {
#if defined(WELFAIR_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::pow_each(b, alpha, out, n);
#endif
  scalar::pow_each(b, alpha, out, n);
}
double pow_sum(const double* b, double alpha, std::size_t n) {
  WELFAIR_DISPATCH(pow_sum(b, alpha, n));
}
double log_sum(const double* b, std::size_t n) {
  WELFAIR_DISPATCH(log_sum(b, n));
}
void matvec(const double* X, const double* theta, double* out, std::size_t n,
            std::size_t k) {
#if defined(WELFAIR_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::matvec(X, theta, out, n, k);
#endif
  scalar::matvec(X, theta, out, n, k);
}
void residuals(const double* X, const double* theta, const double* y,
               double* r, std::size_t n, std::size_t k) {
#if defined(WELFAIR_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::residuals(X, theta, y, r, n, k);
#endif
  scalar::residuals(X, theta, y, r, n, k);
}
void mat_t_vec(const double* X, const double* w, double* out, std::size_t n,
               std::size_t k) {
#if defined(WELFAIR_HAVE_AVX2)
  if (g_backend == Backend::avx2) return avx2::mat_t_vec(X, w, out, n, k);
#endif
  scalar::mat_t_vec(X, w, out, n, k);
}
double sq_dist(const double* a, const double* b, std::size_t k) {
  WELFAIR_DISPATCH(sq_dist(a, b, k));
}
double dwork_row(double p_i, const double* p, const double* d, std::size_t m) {
  WELFAIR_DISPATCH(dwork_row(p_i, p, d, m));
}

#undef WELFAIR_DISPATCH

}  // namespace welfair::kernels
