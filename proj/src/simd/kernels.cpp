#include "sailkit/simd/kernels.hpp"

#include <cstdlib>

namespace sailkit::simd {

namespace {

Isa detect_isa() {
    if (const char* force = std::getenv("SAILKIT_FORCE_SCALAR");
        force && force[0] == '1') {
        return Isa::Scalar;
    }
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return Isa::Avx2;
    }
#endif
    return Isa::Scalar;
}

} // namespace

Isa active_isa() {
    static const Isa isa = detect_isa();
    return isa;
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__)
    if (active_isa() == Isa::Avx2) return detail::dot_avx2(a, b, n);
#endif
    return detail::dot_scalar(a, b, n);
}

double sqdist(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__)
    if (active_isa() == Isa::Avx2) return detail::sqdist_avx2(a, b, n);
#endif
    return detail::sqdist_scalar(a, b, n);
}

double sqdist_scaled(const double* a, const double* b, const double* inv_scale,
                     std::size_t n) {
#if defined(__x86_64__)
    if (active_isa() == Isa::Avx2)
        return detail::sqdist_scaled_avx2(a, b, inv_scale, n);
#endif
    return detail::sqdist_scaled_scalar(a, b, inv_scale, n);
}

double sum(const double* a, std::size_t n) {
#if defined(__x86_64__)
    if (active_isa() == Isa::Avx2) return detail::sum_avx2(a, n);
#endif
    return detail::sum_scalar(a, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
#if defined(__x86_64__)
    if (active_isa() == Isa::Avx2) {
        detail::axpy_avx2(alpha, x, y, n);
        return;
    }
#endif
    detail::axpy_scalar(alpha, x, y, n);
}

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double sqdist_scaled_scalar(const double* a, const double* b,
                            const double* inv_scale, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) * inv_scale[i];
        acc += d * d;
    }
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace detail

} // namespace sailkit::simd
