#pragma once

#include <cstdint>

namespace levy2b::simd {

/// Elementwise/stencil primitives behind the backward sweeps. Each entry has
/// a scalar reference implementation and (on x86-64) an AVX2 variant with the
/// identical per-element association, compiled with FP contraction off, so the
/// two are bit-identical; the equivalence tests assert that on whole solves.
///
/// Conventions: `stencil3` writes interior elements [1, n-2] only;
/// `central_diff` is one-sided at the ends; `second_diff` writes 0 at the
/// ends; `shift_blend` clamps out-of-range reads to the first/last element.
struct Ops {
    const char* name;

    // dst[i] = pm*src[i-1] + pc*src[i] + pp*src[i+1]
    void (*stencil3)(const double* src, double* dst, int n, double pm, double pc, double pp);

    // dst[i] = w_lo*src[clamp(i+off)] + w_hi*src[clamp(i+off+1)]
    void (*shift_blend)(const double* src, double* dst, int n, int off, double w_lo,
                        double w_hi);

    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, int n);

    // y[i] = base[i] + a*x[i]
    void (*scale_add)(const double* base, double a, const double* x, double* y, int n);

    // dst[i] = (src[i+1]-src[i-1])*inv_2dx interior; one-sided at the ends
    void (*central_diff)(const double* src, double* dst, int n, double inv_2dx);

    // dst[i] = (src[i+1]-2*src[i]+src[i-1])*inv_dx2 interior; 0 at the ends
    void (*second_diff)(const double* src, double* dst, int n, double inv_dx2);

    // strict improvement keeps the lowest tag on ties:
    // if (cand[i] > acc[i]) { acc[i] = cand[i]; tag[i] = t; }
    void (*max_tag)(double* acc, std::int32_t* tag, const double* cand, std::int32_t t,
                    int n);
};

const Ops& scalar_ops();

/// AVX2 variant; nullptr when the build or the CPU does not support it.
const Ops* avx2_ops();

/// Runtime-selected implementation. LEVY2B_SIMD=scalar|avx2|auto overrides
/// (auto = best supported; requesting avx2 on an unsupported CPU falls back
/// to scalar).
const Ops& ops();

}  // namespace levy2b::simd
