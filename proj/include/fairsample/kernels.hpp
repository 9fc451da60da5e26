#pragma once

#include <cstddef>

namespace fairsample::kernels {

enum class Backend { Scalar, Avx2, Neon };

/// Backend currently in use. Selected once at first use: the widest SIMD
/// path the CPU supports, unless FAIRSAMPLE_KERNELS=scalar|avx2|neon
/// overrides it.
Backend active_backend();

const char* backend_name(Backend b);

/// Force a backend. Returns false (and leaves the dispatch untouched) if the
/// requested backend is not available on this CPU/build.
bool set_backend(Backend b);

/// Inner product of a and b.
double dot(const double* a, const double* b, std::size_t n);

/// Squared Euclidean distance between a and b.
double squared_distance(const double* a, const double* b, std::size_t n);

/// y += alpha * x.
void axpy(double alpha, const double* x, double* y, std::size_t n);

namespace detail {

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

const Ops& scalar_ops();
#if defined(FAIRSAMPLE_HAVE_AVX2)
const Ops& avx2_ops();
bool avx2_supported();
#endif
#if defined(FAIRSAMPLE_HAVE_NEON)
const Ops& neon_ops();
#endif

}  // namespace detail

}  // namespace fairsample::kernels
