#include "fairsample/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fairsample::kernels {

namespace detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{dot_scalar, squared_distance_scalar, axpy_scalar};
  return ops;
}

}  // namespace detail

namespace {

struct Dispatch {
  const detail::Ops* ops;
  Backend backend;
};

Dispatch pick_default() {
  const char* env = std::getenv("FAIRSAMPLE_KERNELS");
#if defined(FAIRSAMPLE_HAVE_AVX2)
  if (env && std::strcmp(env, "scalar") == 0)
    return {&detail::scalar_ops(), Backend::Scalar};
  if (detail::avx2_supported() && (!env || std::strcmp(env, "avx2") == 0))
    return {&detail::avx2_ops(), Backend::Avx2};
#elif defined(FAIRSAMPLE_HAVE_NEON)
  if (env && std::strcmp(env, "scalar") == 0)
    return {&detail::scalar_ops(), Backend::Scalar};
  if (!env || std::strcmp(env, "neon") == 0)
    return {&detail::neon_ops(), Backend::Neon};
#else
  (void)env;
#endif
  return {&detail::scalar_ops(), Backend::Scalar};
}

Dispatch& dispatch() {
  static Dispatch d = pick_default();
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "?";
}

bool set_backend(Backend b) {
  switch (b) {
    case Backend::Scalar:
      dispatch() = {&detail::scalar_ops(), Backend::Scalar};
      return true;
    case Backend::Avx2:
#if defined(FAIRSAMPLE_HAVE_AVX2)
      if (detail::avx2_supported()) {
        dispatch() = {&detail::avx2_ops(), Backend::Avx2};
        return true;
      }
#endif
      return false;
    case Backend::Neon:
#if defined(FAIRSAMPLE_HAVE_NEON)
      dispatch() = {&detail::neon_ops(), Backend::Neon};
      return true;
#else
      return false;
#endif
  }
  return false;
}

double dot(const double* a, const double* b, std::size_t n) {
  return dispatch().ops->dot(a, b, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  return dispatch().ops->squared_distance(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  dispatch().ops->axpy(alpha, x, y, n);
}

}  // namespace fairsample::kernels
