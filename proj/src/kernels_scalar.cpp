// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Plain loops, one accumulation chain per output element.
// The AVX2 variants must match these within floating-point reassociation of
// the same chain (FMA contraction only), which the kernel tests enforce.

#include <cmath>

#include "msp/kernels.hpp"

namespace msp::kernels {

namespace {

template <typename T>
void gemm_ref(int64_t m, int64_t n, int64_t k, const T* a, int64_t lda, const T* b, int64_t ldb,
              T beta, T* c, int64_t ldc) {
    for (int64_t i = 0; i < m; ++i) {
        T* crow = c + i * ldc;
        if (beta == T(0)) {
            for (int64_t j = 0; j < n; ++j) crow[j] = T(0);
        }
        for (int64_t p = 0; p < k; ++p) {
            const T aval = a[i * lda + p];
            const T* brow = b + p * ldb;
            for (int64_t j = 0; j < n; ++j) crow[j] += aval * brow[j];
        }
    }
}

template <typename T>
void axpy_ref(int64_t n, T alpha, const T* x, T* y) {
    for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void scale_ref(int64_t n, T alpha, T* x) {
    for (int64_t i = 0; i < n; ++i) x[i] *= alpha;
}

template <typename T>
void add_ref(int64_t n, const T* a, const T* b, T* out) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

template <typename T>
void sub_ref(int64_t n, const T* a, const T* b, T* out) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

template <typename T>
void mul_ref(int64_t n, const T* a, const T* b, T* out) {
    for (int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

template <typename T>
void silu_ref(int64_t n, const T* x, T* y) {
    for (int64_t i = 0; i < n; ++i) {
        const T s = T(1) / (T(1) + std::exp(-x[i]));
        y[i] = x[i] * s;
    }
}

template <typename T>
void silu_grad_ref(int64_t n, const T* x, const T* dy, T* dx) {
    for (int64_t i = 0; i < n; ++i) {
        const T s = T(1) / (T(1) + std::exp(-x[i]));
        dx[i] = dy[i] * (s + x[i] * s * (T(1) - s));
    }
}

template <typename T>
void adam_ref(int64_t n, T* p, const T* g, T* m, T* v, T lr, T beta1, T beta2, T eps, T bias1,
              T bias2) {
    for (int64_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (T(1) - beta1) * g[i];
        v[i] = beta2 * v[i] + (T(1) - beta2) * g[i] * g[i];
        const T mhat = m[i] / bias1;
        const T vhat = v[i] / bias2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

template <typename T>
double sum_ref(int64_t n, const T* x) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) acc += static_cast<double>(x[i]);
    return acc;
}

template <typename T>
double sumsq_ref(int64_t n, const T* x) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double v = static_cast<double>(x[i]);
        acc += v * v;
    }
    return acc;
}

}  // namespace

Table make_scalar_table() {
    Table t{};
    t.gemm_f32 = gemm_ref<float>;
    t.gemm_f64 = gemm_ref<double>;
    t.axpy_f32 = axpy_ref<float>;
    t.axpy_f64 = axpy_ref<double>;
    t.scale_f32 = scale_ref<float>;
    t.scale_f64 = scale_ref<double>;
    t.add_f32 = add_ref<float>;
    t.add_f64 = add_ref<double>;
    t.sub_f32 = sub_ref<float>;
    t.sub_f64 = sub_ref<double>;
    t.mul_f32 = mul_ref<float>;
    t.mul_f64 = mul_ref<double>;
    t.silu_f32 = silu_ref<float>;
    t.silu_f64 = silu_ref<double>;
    t.silu_grad_f32 = silu_grad_ref<float>;
    t.silu_grad_f64 = silu_grad_ref<double>;
    t.adam_f32 = adam_ref<float>;
    t.adam_f64 = adam_ref<double>;
    t.sum_f32 = sum_ref<float>;
    t.sum_f64 = sum_ref<double>;
    t.sumsq_f32 = sumsq_ref<float>;
    t.sumsq_f64 = sumsq_ref<double>;
    return t;
}

}  // namespace msp::kernels
