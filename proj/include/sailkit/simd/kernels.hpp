#pragma once

#include <cstddef>

// Low-level arithmetic kernels used by the surrogate prediction paths.
// Scalar reference implementations always exist; on x86-64 an AVX2+FMA
// variant is selected at runtime when the CPU supports it. Set the
// environment variable SAILKIT_FORCE_SCALAR=1 to pin the scalar path.

namespace sailkit::simd {

enum class Isa { Scalar, Avx2 };

// ISA chosen at first use (cached).
Isa active_isa();

// Inner product of a and b.
double dot(const double* a, const double* b, std::size_t n);

// Plain squared Euclidean distance.
double sqdist(const double* a, const double* b, std::size_t n);

// Sum_i ((a_i - b_i) * inv_scale_i)^2, the ARD distance of the SE kernel.
double sqdist_scaled(const double* a, const double* b, const double* inv_scale,
                     std::size_t n);

double sum(const double* a, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
double sqdist_scalar(const double* a, const double* b, std::size_t n);
double sqdist_scaled_scalar(const double* a, const double* b,
                            const double* inv_scale, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);

#if defined(__x86_64__)
double dot_avx2(const double* a, const double* b, std::size_t n);
double sqdist_avx2(const double* a, const double* b, std::size_t n);
double sqdist_scaled_avx2(const double* a, const double* b,
                          const double* inv_scale, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
#endif

} // namespace detail

} // namespace sailkit::simd
