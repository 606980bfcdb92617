// Scalar reference kernels. The AVX2 variants mirror the association of every
// expression here exactly; both translation units are built with
// -ffp-contract=off so results are bit-identical across implementations.

#include "levy2b/simd.hpp"

namespace levy2b::simd {

namespace {

void stencil3_scalar(const double* src, double* dst, int n, double pm, double pc, double pp) {
    for (int i = 1; i < n - 1; ++i)
        dst[i] = (pm * src[i - 1] + pc * src[i]) + pp * src[i + 1];
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

void shift_blend_scalar(const double* src, double* dst, int n, int off, double w_lo,
                        double w_hi) {
    // interior span where both reads are in range
    int lo = off >= 0 ? 0 : -off;
    int hi = n - 1 - (off + 1 > 0 ? off + 1 : 0);  // inclusive
    if (lo > n) lo = n;
    if (hi < -1) hi = -1;
    for (int i = 0; i < lo && i < n; ++i)
        dst[i] = w_lo * src[clamp_index(i + off, n)] + w_hi * src[clamp_index(i + off + 1, n)];
    for (int i = lo; i <= hi; ++i) dst[i] = w_lo * src[i + off] + w_hi * src[i + off + 1];
    for (int i = (hi + 1 > lo ? hi + 1 : lo); i < n; ++i)
        dst[i] = w_lo * src[clamp_index(i + off, n)] + w_hi * src[clamp_index(i + off + 1, n)];
}

void axpy_scalar(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_add_scalar(const double* base, double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] = base[i] + a * x[i];
}

void central_diff_scalar(const double* src, double* dst, int n, double inv_2dx) {
    if (n < 2) {
        if (n == 1) dst[0] = 0.0;
        return;
    }
    dst[0] = (src[1] - src[0]) * (2.0 * inv_2dx);
    for (int i = 1; i < n - 1; ++i) dst[i] = (src[i + 1] - src[i - 1]) * inv_2dx;
    dst[n - 1] = (src[n - 1] - src[n - 2]) * (2.0 * inv_2dx);
}

void second_diff_scalar(const double* src, double* dst, int n, double inv_dx2) {
    if (n > 0) dst[0] = 0.0;
    for (int i = 1; i < n - 1; ++i)
        dst[i] = ((src[i + 1] - 2.0 * src[i]) + src[i - 1]) * inv_dx2;
    if (n > 1) dst[n - 1] = 0.0;
}

void max_tag_scalar(double* acc, std::int32_t* tag, const double* cand, std::int32_t t,
                    int n) {
    for (int i = 0; i < n; ++i) {
        if (cand[i] > acc[i]) {
            acc[i] = cand[i];
            tag[i] = t;
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",         stencil3_scalar,    shift_blend_scalar, axpy_scalar,
        scale_add_scalar, central_diff_scalar, second_diff_scalar, max_tag_scalar,
    };
    return ops;
}

}  // namespace levy2b::simd
