// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants of the float32 hot loops. Compiled with -mavx2 -mfma and
// only entered when the CPU reports both features. f64 entries stay on the
// scalar reference; they are off the training hot path.

#include <immintrin.h>

#include <cmath>

#include "msp/kernels.hpp"

namespace msp::kernels {

Table make_scalar_table();

namespace {

// 4x16 register tile; k-loop innermost so each C element accumulates in order.
void gemm_f32_avx2(int64_t m, int64_t n, int64_t k, const float* a, int64_t lda, const float* b,
                   int64_t ldb, float beta, float* c, int64_t ldc) {
    const int64_t n16 = n & ~int64_t(15);
    for (int64_t j0 = 0; j0 < n16; j0 += 16) {
        int64_t i0 = 0;
        for (; i0 + 4 <= m; i0 += 4) {
            __m256 acc00 = _mm256_setzero_ps(), acc01 = _mm256_setzero_ps();
            __m256 acc10 = _mm256_setzero_ps(), acc11 = _mm256_setzero_ps();
            __m256 acc20 = _mm256_setzero_ps(), acc21 = _mm256_setzero_ps();
            __m256 acc30 = _mm256_setzero_ps(), acc31 = _mm256_setzero_ps();
            const float* a0 = a + (i0 + 0) * lda;
            const float* a1 = a + (i0 + 1) * lda;
            const float* a2 = a + (i0 + 2) * lda;
            const float* a3 = a + (i0 + 3) * lda;
            for (int64_t p = 0; p < k; ++p) {
                const float* brow = b + p * ldb + j0;
                const __m256 b0 = _mm256_loadu_ps(brow);
                const __m256 b1 = _mm256_loadu_ps(brow + 8);
                const __m256 va0 = _mm256_set1_ps(a0[p]);
                const __m256 va1 = _mm256_set1_ps(a1[p]);
                const __m256 va2 = _mm256_set1_ps(a2[p]);
                const __m256 va3 = _mm256_set1_ps(a3[p]);
                acc00 = _mm256_fmadd_ps(va0, b0, acc00);
                acc01 = _mm256_fmadd_ps(va0, b1, acc01);
                acc10 = _mm256_fmadd_ps(va1, b0, acc10);
                acc11 = _mm256_fmadd_ps(va1, b1, acc11);
                acc20 = _mm256_fmadd_ps(va2, b0, acc20);
                acc21 = _mm256_fmadd_ps(va2, b1, acc21);
                acc30 = _mm256_fmadd_ps(va3, b0, acc30);
                acc31 = _mm256_fmadd_ps(va3, b1, acc31);
            }
            auto store_row = [&](int64_t i, __m256 lo, __m256 hi) {
                float* crow = c + i * ldc + j0;
                if (beta == 0.0f) {
                    _mm256_storeu_ps(crow, lo);
                    _mm256_storeu_ps(crow + 8, hi);
                } else {
                    _mm256_storeu_ps(crow, _mm256_add_ps(_mm256_loadu_ps(crow), lo));
                    _mm256_storeu_ps(crow + 8, _mm256_add_ps(_mm256_loadu_ps(crow + 8), hi));
                }
            };
            store_row(i0 + 0, acc00, acc01);
            store_row(i0 + 1, acc10, acc11);
            store_row(i0 + 2, acc20, acc21);
            store_row(i0 + 3, acc30, acc31);
        }
        for (; i0 < m; ++i0) {
            __m256 acc0 = _mm256_setzero_ps(), acc1 = _mm256_setzero_ps();
            const float* arow = a + i0 * lda;
            for (int64_t p = 0; p < k; ++p) {
                const float* brow = b + p * ldb + j0;
                const __m256 va = _mm256_set1_ps(arow[p]);
                acc0 = _mm256_fmadd_ps(va, _mm256_loadu_ps(brow), acc0);
                acc1 = _mm256_fmadd_ps(va, _mm256_loadu_ps(brow + 8), acc1);
            }
            float* crow = c + i0 * ldc + j0;
            if (beta == 0.0f) {
                _mm256_storeu_ps(crow, acc0);
                _mm256_storeu_ps(crow + 8, acc1);
            } else {
                _mm256_storeu_ps(crow, _mm256_add_ps(_mm256_loadu_ps(crow), acc0));
                _mm256_storeu_ps(crow + 8, _mm256_add_ps(_mm256_loadu_ps(crow + 8), acc1));
            }
        }
    }
    // column tail
    if (n16 < n) {
        for (int64_t i = 0; i < m; ++i) {
            float* crow = c + i * ldc;
            const float* arow = a + i * lda;
            for (int64_t j = n16; j < n; ++j) {
                float acc = 0.0f;
                for (int64_t p = 0; p < k; ++p) acc = std::fma(arow[p], b[p * ldb + j], acc);
                crow[j] = (beta == 0.0f) ? acc : crow[j] + acc;
            }
        }
    }
}

void axpy_f32_avx2(int64_t n, float alpha, const float* x, float* y) {
    const __m256 va = _mm256_set1_ps(alpha);
    int64_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_f32_avx2(int64_t n, float alpha, float* x) {
    const __m256 va = _mm256_set1_ps(alpha);
    int64_t i = 0;
    for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void add_f32_avx2(int64_t n, const float* a, const float* b, float* out) {
    int64_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_f32_avx2(int64_t n, const float* a, const float* b, float* out) {
    int64_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_f32_avx2(int64_t n, const float* a, const float* b, float* out) {
    int64_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

// Cephes-style exp on 8 lanes, |rel err| < 2e-7 over the clamped range.
__m256 exp256_ps(__m256 x) {
    const __m256 hi = _mm256_set1_ps(88.3762626647949f);
    const __m256 lo = _mm256_set1_ps(-88.3762626647949f);
    const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
    const __m256 c1 = _mm256_set1_ps(0.693359375f);
    const __m256 c2 = _mm256_set1_ps(-2.12194440e-4f);
    const __m256 half = _mm256_set1_ps(0.5f);
    const __m256 one = _mm256_set1_ps(1.0f);

    x = _mm256_min_ps(x, hi);
    x = _mm256_max_ps(x, lo);

    __m256 fx = _mm256_fmadd_ps(x, log2e, half);
    fx = _mm256_floor_ps(fx);
    x = _mm256_fnmadd_ps(fx, c1, x);
    x = _mm256_fnmadd_ps(fx, c2, x);

    __m256 y = _mm256_set1_ps(1.9875691500e-4f);
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
    y = _mm256_fmadd_ps(y, x, half);
    y = _mm256_fmadd_ps(y, _mm256_mul_ps(x, x), _mm256_add_ps(x, one));

    const __m256i emm0 =
        _mm256_slli_epi32(_mm256_add_epi32(_mm256_cvtps_epi32(fx), _mm256_set1_epi32(127)), 23);
    return _mm256_mul_ps(y, _mm256_castsi256_ps(emm0));
}

void silu_f32_avx2(int64_t n, const float* x, float* y) {
    const __m256 one = _mm256_set1_ps(1.0f);
    int64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vx = _mm256_loadu_ps(x + i);
        const __m256 e = exp256_ps(_mm256_sub_ps(_mm256_setzero_ps(), vx));
        const __m256 s = _mm256_div_ps(one, _mm256_add_ps(one, e));
        _mm256_storeu_ps(y + i, _mm256_mul_ps(vx, s));
    }
    for (; i < n; ++i) {
        const float s = 1.0f / (1.0f + std::exp(-x[i]));
        y[i] = x[i] * s;
    }
}

void silu_grad_f32_avx2(int64_t n, const float* x, const float* dy, float* dx) {
    const __m256 one = _mm256_set1_ps(1.0f);
    int64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vx = _mm256_loadu_ps(x + i);
        const __m256 e = exp256_ps(_mm256_sub_ps(_mm256_setzero_ps(), vx));
        const __m256 s = _mm256_div_ps(one, _mm256_add_ps(one, e));
        const __m256 d = _mm256_fmadd_ps(_mm256_mul_ps(vx, s), _mm256_sub_ps(one, s), s);
        _mm256_storeu_ps(dx + i, _mm256_mul_ps(_mm256_loadu_ps(dy + i), d));
    }
    for (; i < n; ++i) {
        const float s = 1.0f / (1.0f + std::exp(-x[i]));
        dx[i] = dy[i] * (s + x[i] * s * (1.0f - s));
    }
}

void adam_f32_avx2(int64_t n, float* p, const float* g, float* m, float* v, float lr, float beta1,
                   float beta2, float eps, float bias1, float bias2) {
    const __m256 vb1 = _mm256_set1_ps(beta1), vb2 = _mm256_set1_ps(beta2);
    const __m256 v1mb1 = _mm256_set1_ps(1.0f - beta1), v1mb2 = _mm256_set1_ps(1.0f - beta2);
    const __m256 vlr = _mm256_set1_ps(lr), veps = _mm256_set1_ps(eps);
    const __m256 vib1 = _mm256_set1_ps(1.0f / bias1), vib2 = _mm256_set1_ps(1.0f / bias2);
    int64_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vg = _mm256_loadu_ps(g + i);
        __m256 vm = _mm256_fmadd_ps(v1mb1, vg, _mm256_mul_ps(vb1, _mm256_loadu_ps(m + i)));
        __m256 vv = _mm256_fmadd_ps(v1mb2, _mm256_mul_ps(vg, vg),
                                    _mm256_mul_ps(vb2, _mm256_loadu_ps(v + i)));
        _mm256_storeu_ps(m + i, vm);
        _mm256_storeu_ps(v + i, vv);
        const __m256 mhat = _mm256_mul_ps(vm, vib1);
        const __m256 vhat = _mm256_mul_ps(vv, vib2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), veps);
        const __m256 upd = _mm256_div_ps(_mm256_mul_ps(vlr, mhat), denom);
        _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + eps);
    }
}

}  // namespace

Table make_avx2_table() {
    Table t = make_scalar_table();
    t.gemm_f32 = gemm_f32_avx2;
    t.axpy_f32 = axpy_f32_avx2;
    t.scale_f32 = scale_f32_avx2;
    t.add_f32 = add_f32_avx2;
    t.sub_f32 = sub_f32_avx2;
    t.mul_f32 = mul_f32_avx2;
    t.silu_f32 = silu_f32_avx2;
    t.silu_grad_f32 = silu_grad_f32_avx2;
    t.adam_f32 = adam_f32_avx2;
    return t;
}

}  // namespace msp::kernels
