#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "levy2b/simd.hpp"

using namespace levy2b;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = d(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
    const simd::Ops* vec = simd::avx2_ops();
    if (vec == nullptr) {
        MESSAGE("AVX2 not available; dispatch covered by scalar fallback");
        return;
    }
    const simd::Ops& ref = simd::scalar_ops();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> wd(-2.0, 2.0);
    std::uniform_int_distribution<int> off_d(-15, 15);

    for (int n : {3, 4, 5, 7, 8, 16, 17, 100, 321, 1000}) {
        for (int trial = 0; trial < 20; ++trial) {
            auto src = random_vec(rng, n);
            double pm = wd(rng), pc = wd(rng), pp = wd(rng);

            std::vector<double> a(src.size(), 0.0), b(src.size(), 0.0);
            ref.stencil3(src.data(), a.data(), n, pm, pc, pp);
            vec->stencil3(src.data(), b.data(), n, pm, pc, pp);
            CHECK(bitwise_equal(a, b));

            int off = off_d(rng);
            double w_hi = 0.5 * (wd(rng) + 2.0) / 2.0;
            ref.shift_blend(src.data(), a.data(), n, off, 1.0 - w_hi, w_hi);
            vec->shift_blend(src.data(), b.data(), n, off, 1.0 - w_hi, w_hi);
            CHECK(bitwise_equal(a, b));

            auto acc1 = random_vec(rng, n);
            auto acc2 = acc1;
            ref.axpy(pm, src.data(), acc1.data(), n);
            vec->axpy(pm, src.data(), acc2.data(), n);
            CHECK(bitwise_equal(acc1, acc2));

            auto base = random_vec(rng, n);
            ref.scale_add(base.data(), pc, src.data(), a.data(), n);
            vec->scale_add(base.data(), pc, src.data(), b.data(), n);
            CHECK(bitwise_equal(a, b));

            ref.central_diff(src.data(), a.data(), n, 3.7);
            vec->central_diff(src.data(), b.data(), n, 3.7);
            CHECK(bitwise_equal(a, b));

            ref.second_diff(src.data(), a.data(), n, 2.1);
            vec->second_diff(src.data(), b.data(), n, 2.1);
            CHECK(bitwise_equal(a, b));

            auto accv1 = random_vec(rng, n);
            auto accv2 = accv1;
            std::vector<std::int32_t> t1(static_cast<std::size_t>(n), 0), t2 = t1;
            auto cand = random_vec(rng, n);
            ref.max_tag(accv1.data(), t1.data(), cand.data(), 3, n);
            vec->max_tag(accv2.data(), t2.data(), cand.data(), 3, n);
            CHECK(bitwise_equal(accv1, accv2));
            CHECK(t1 == t2);
        }
    }
}

TEST_CASE("max_tag keeps the lowest tag on exact ties") {
    const simd::Ops& ref = simd::scalar_ops();
    std::vector<double> acc = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<std::int32_t> tag(5, 0);
    std::vector<double> cand = acc;  // exact ties must not steal the tag
    ref.max_tag(acc.data(), tag.data(), cand.data(), 7, 5);
    for (std::int32_t t : tag) CHECK(t == 0);
    const simd::Ops* vec = simd::avx2_ops();
    if (vec != nullptr) {
        std::vector<std::int32_t> tag2(5, 0);
        std::vector<double> acc2 = {1.0, 2.0, 3.0, 4.0, 5.0};
        vec->max_tag(acc2.data(), tag2.data(), cand.data(), 7, 5);
        for (std::int32_t t : tag2) CHECK(t == 0);
    }
}

TEST_CASE("shift_blend clamps out-of-range reads to the boundary") {
    const simd::Ops& ref = simd::scalar_ops();
    std::vector<double> src = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> dst(4, 0.0);
    ref.shift_blend(src.data(), dst.data(), 4, 2, 0.25, 0.75);
    // i=0: 0.25*src[2] + 0.75*src[3]; i>=1: both reads clamp to src[3]
    CHECK(dst[0] == doctest::Approx(0.25 * 3.0 + 0.75 * 4.0));
    CHECK(dst[1] == doctest::Approx(4.0));
    CHECK(dst[3] == doctest::Approx(4.0));

    ref.shift_blend(src.data(), dst.data(), 4, -5, 0.5, 0.5);
    for (double v : dst) CHECK(v == doctest::Approx(1.0));
}
