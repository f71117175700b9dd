#include <doctest.h>

#include <cmath>
#include <vector>

#include "sailkit/core/rng.hpp"
#include "sailkit/simd/kernels.hpp"

using namespace sailkit;

namespace {

std::vector<double> random_array(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-10.0, 10.0);
    return v;
}

} // namespace

TEST_CASE("dispatched kernels agree with scalar references") {
    Rng rng(123);
    for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 16ul, 33ul, 257ul}) {
        auto a = random_array(n, rng);
        auto b = random_array(n, rng);
        std::vector<double> scale(n, 0.0);
        for (double& s : scale) s = rng.uniform(0.1, 3.0);

        const double tol = 1e-11 * (static_cast<double>(n) + 1.0);
        CHECK(simd::dot(a.data(), b.data(), n) ==
              doctest::Approx(simd::detail::dot_scalar(a.data(), b.data(), n)).epsilon(tol));
        CHECK(simd::sqdist(a.data(), b.data(), n) ==
              doctest::Approx(simd::detail::sqdist_scalar(a.data(), b.data(), n)).epsilon(tol));
        CHECK(simd::sqdist_scaled(a.data(), b.data(), scale.data(), n) ==
              doctest::Approx(simd::detail::sqdist_scaled_scalar(a.data(), b.data(),
                                                                 scale.data(), n))
                  .epsilon(tol));
        CHECK(simd::sum(a.data(), n) ==
              doctest::Approx(simd::detail::sum_scalar(a.data(), n)).epsilon(tol));

        auto y1 = b;
        auto y2 = b;
        simd::axpy(2.5, a.data(), y1.data(), n);
        simd::detail::axpy_scalar(2.5, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("kernel identities") {
    Rng rng(7);
    auto a = random_array(19, rng);
    CHECK(simd::sqdist(a.data(), a.data(), a.size()) == doctest::Approx(0.0));
    CHECK(simd::dot(a.data(), a.data(), a.size()) >= 0.0);

#if defined(__x86_64__)
    // This toolchain targets x86-64; the dispatcher should have found AVX2
    // unless the test environment forces scalar.
    if (!std::getenv("SAILKIT_FORCE_SCALAR")) {
        CHECK(simd::active_isa() == simd::Isa::Avx2);
    }
#endif
}
