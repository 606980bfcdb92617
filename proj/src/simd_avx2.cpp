// AVX2 kernels. Per-element association matches simd_scalar.cpp exactly
// (mul/add only, no FMA) so outputs are bit-identical to the reference.

#include "levy2b/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define LEVY2B_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define LEVY2B_HAVE_AVX2_BUILD 0
#endif

namespace levy2b::simd {

#if LEVY2B_HAVE_AVX2_BUILD

namespace {

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

void stencil3_avx2(const double* src, double* dst, int n, double pm, double pc, double pp) {
    const __m256d vm = _mm256_set1_pd(pm);
    const __m256d vc = _mm256_set1_pd(pc);
    const __m256d vp = _mm256_set1_pd(pp);
    int i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d a = _mm256_loadu_pd(src + i - 1);
        __m256d b = _mm256_loadu_pd(src + i);
        __m256d c = _mm256_loadu_pd(src + i + 1);
        __m256d r = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(vm, a), _mm256_mul_pd(vc, b)),
                                  _mm256_mul_pd(vp, c));
        _mm256_storeu_pd(dst + i, r);
    }
    for (; i < n - 1; ++i) dst[i] = (pm * src[i - 1] + pc * src[i]) + pp * src[i + 1];
}

void shift_blend_avx2(const double* src, double* dst, int n, int off, double w_lo,
                      double w_hi) {
    const __m256d vlo = _mm256_set1_pd(w_lo);
    const __m256d vhi = _mm256_set1_pd(w_hi);
    int lo = off >= 0 ? 0 : -off;
    int hi = n - 1 - (off + 1 > 0 ? off + 1 : 0);  // inclusive
    if (lo > n) lo = n;
    if (hi < -1) hi = -1;
    for (int i = 0; i < lo && i < n; ++i)
        dst[i] = w_lo * src[clamp_index(i + off, n)] + w_hi * src[clamp_index(i + off + 1, n)];
    int i = lo;
    for (; i + 4 <= hi + 1; i += 4) {
        __m256d a = _mm256_loadu_pd(src + i + off);
        __m256d b = _mm256_loadu_pd(src + i + off + 1);
        __m256d r = _mm256_add_pd(_mm256_mul_pd(vlo, a), _mm256_mul_pd(vhi, b));
        _mm256_storeu_pd(dst + i, r);
    }
    for (; i <= hi; ++i) dst[i] = w_lo * src[i + off] + w_hi * src[i + off + 1];
    for (i = (hi + 1 > lo ? hi + 1 : lo); i < n; ++i)
        dst[i] = w_lo * src[clamp_index(i + off, n)] + w_hi * src[clamp_index(i + off + 1, n)];
}

void axpy_avx2(double a, const double* x, double* y, int n) {
    const __m256d va = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d yv = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(va, xv)));
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_add_avx2(const double* base, double a, const double* x, double* y, int n) {
    const __m256d va = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d bv = _mm256_loadu_pd(base + i);
        __m256d xv = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(bv, _mm256_mul_pd(va, xv)));
    }
    for (; i < n; ++i) y[i] = base[i] + a * x[i];
}

void central_diff_avx2(const double* src, double* dst, int n, double inv_2dx) {
    if (n < 2) {
        if (n == 1) dst[0] = 0.0;
        return;
    }
    const __m256d vs = _mm256_set1_pd(inv_2dx);
    dst[0] = (src[1] - src[0]) * (2.0 * inv_2dx);
    int i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d hi = _mm256_loadu_pd(src + i + 1);
        __m256d lo = _mm256_loadu_pd(src + i - 1);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_sub_pd(hi, lo), vs));
    }
    for (; i < n - 1; ++i) dst[i] = (src[i + 1] - src[i - 1]) * inv_2dx;
    dst[n - 1] = (src[n - 1] - src[n - 2]) * (2.0 * inv_2dx);
}

void second_diff_avx2(const double* src, double* dst, int n, double inv_dx2) {
    if (n > 0) dst[0] = 0.0;
    const __m256d vs = _mm256_set1_pd(inv_dx2);
    const __m256d two = _mm256_set1_pd(2.0);
    int i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d hi = _mm256_loadu_pd(src + i + 1);
        __m256d mid = _mm256_loadu_pd(src + i);
        __m256d lo = _mm256_loadu_pd(src + i - 1);
        __m256d r = _mm256_add_pd(_mm256_sub_pd(hi, _mm256_mul_pd(two, mid)), lo);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(r, vs));
    }
    for (; i < n - 1; ++i) dst[i] = ((src[i + 1] - 2.0 * src[i]) + src[i - 1]) * inv_dx2;
    if (n > 1) dst[n - 1] = 0.0;
}

void max_tag_avx2(double* acc, std::int32_t* tag, const double* cand, std::int32_t t,
                  int n) {
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(acc + i);
        __m256d c = _mm256_loadu_pd(cand + i);
        __m256d mask = _mm256_cmp_pd(c, a, _CMP_GT_OQ);
        _mm256_storeu_pd(acc + i, _mm256_blendv_pd(a, c, mask));
        int bits = _mm256_movemask_pd(mask);
        if (bits) {
            if (bits & 1) tag[i] = t;
            if (bits & 2) tag[i + 1] = t;
            if (bits & 4) tag[i + 2] = t;
            if (bits & 8) tag[i + 3] = t;
        }
    }
    for (; i < n; ++i) {
        if (cand[i] > acc[i]) {
            acc[i] = cand[i];
            tag[i] = t;
        }
    }
}

}  // namespace

static bool runtime_supports_avx2() { return __builtin_cpu_supports("avx2"); }

const Ops* avx2_ops() {
    static const bool supported = runtime_supports_avx2();
    if (!supported) return nullptr;
    static const Ops ops = {
        "avx2",         stencil3_avx2,    shift_blend_avx2, axpy_avx2,
        scale_add_avx2, central_diff_avx2, second_diff_avx2, max_tag_avx2,
    };
    return &ops;
}

#else

const Ops* avx2_ops() { return nullptr; }

#endif

}  // namespace levy2b::simd
