// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace msp::kernels {

enum class Isa { Scalar, Avx2 };

/// Flat table of the arithmetic inner loops. Every entry has a scalar
/// reference implementation; the AVX2 table overrides the float32 hot paths.
/// Each output element is produced by exactly one accumulation chain in a
/// fixed order, so results are reproducible run to run for a given table.
struct Table {
    // C[M x N] = A[M x K] * B[K x N] + beta * C   (row-major, beta in {0,1})
    void (*gemm_f32)(int64_t m, int64_t n, int64_t k, const float* a, int64_t lda,
                     const float* b, int64_t ldb, float beta, float* c, int64_t ldc);
    void (*gemm_f64)(int64_t m, int64_t n, int64_t k, const double* a, int64_t lda,
                     const double* b, int64_t ldb, double beta, double* c, int64_t ldc);

    // C[M x N] = A[M x K] * B^T (B is [N x K] row-major) + beta * C
    void (*gemm_nt_f32)(int64_t m, int64_t n, int64_t k, const float* a, int64_t lda,
                        const float* b, int64_t ldb, float beta, float* c, int64_t ldc);
    void (*gemm_nt_f64)(int64_t m, int64_t n, int64_t k, const double* a, int64_t lda,
                        const double* b, int64_t ldb, double beta, double* c, int64_t ldc);

    void (*axpy_f32)(int64_t n, float alpha, const float* x, float* y);  // y += alpha*x
    void (*axpy_f64)(int64_t n, double alpha, const double* x, double* y);

    void (*scale_f32)(int64_t n, float alpha, float* x);
    void (*scale_f64)(int64_t n, double alpha, double* x);

    void (*add_f32)(int64_t n, const float* a, const float* b, float* out);
    void (*add_f64)(int64_t n, const double* a, const double* b, double* out);
    void (*sub_f32)(int64_t n, const float* a, const float* b, float* out);
    void (*sub_f64)(int64_t n, const double* a, const double* b, double* out);
    void (*mul_f32)(int64_t n, const float* a, const float* b, float* out);
    void (*mul_f64)(int64_t n, const double* a, const double* b, double* out);

    void (*silu_f32)(int64_t n, const float* x, float* y);
    void (*silu_f64)(int64_t n, const double* x, double* y);
    void (*silu_grad_f32)(int64_t n, const float* x, const float* dy, float* dx);
    void (*silu_grad_f64)(int64_t n, const double* x, const double* dy, double* dx);

    // Adam with bias correction baked into bias1/bias2 = 1 - beta^step.
    void (*adam_f32)(int64_t n, float* p, const float* g, float* m, float* v, float lr,
                     float beta1, float beta2, float eps, float bias1, float bias2);
    void (*adam_f64)(int64_t n, double* p, const double* g, double* m, double* v, double lr,
                     double beta1, double beta2, double eps, double bias1, double bias2);

    double (*sum_f32)(int64_t n, const float* x);
    double (*sum_f64)(int64_t n, const double* x);
    double (*sumsq_f32)(int64_t n, const float* x);
    double (*sumsq_f64)(int64_t n, const double* x);
};

const Table& table();                 // active table (dispatch decided once)
const Table& table_for(Isa isa);      // explicit table, used by equivalence tests
Isa active_isa();
void set_isa(Isa isa);                // override (tests, MSP_KERNELS env)
bool avx2_supported();

// Typed convenience wrappers over the active table.
template <typename T>
void gemm(int64_t m, int64_t n, int64_t k, const T* a, int64_t lda, const T* b, int64_t ldb,
          T beta, T* c, int64_t ldc) {
    if constexpr (sizeof(T) == sizeof(float))
        table().gemm_f32(m, n, k, (const float*)a, lda, (const float*)b, ldb, (float)beta,
                         (float*)c, ldc);
    else
        table().gemm_f64(m, n, k, (const double*)a, lda, (const double*)b, ldb, (double)beta,
                         (double*)c, ldc);
}

template <typename T>
void gemm_nt(int64_t m, int64_t n, int64_t k, const T* a, int64_t lda, const T* b, int64_t ldb,
             T beta, T* c, int64_t ldc) {
    if constexpr (sizeof(T) == sizeof(float))
        table().gemm_nt_f32(m, n, k, (const float*)a, lda, (const float*)b, ldb, (float)beta,
                            (float*)c, ldc);
    else
        table().gemm_nt_f64(m, n, k, (const double*)a, lda, (const double*)b, ldb, (double)beta,
                            (double*)c, ldc);
}

template <typename T>
void axpy(int64_t n, T alpha, const T* x, T* y) {
    if constexpr (sizeof(T) == sizeof(float))
        table().axpy_f32(n, (float)alpha, (const float*)x, (float*)y);
    else
        table().axpy_f64(n, (double)alpha, (const double*)x, (double*)y);
}

template <typename T>
void scale(int64_t n, T alpha, T* x) {
    if constexpr (sizeof(T) == sizeof(float))
        table().scale_f32(n, (float)alpha, (float*)x);
    else
        table().scale_f64(n, (double)alpha, (double*)x);
}

template <typename T>
void add(int64_t n, const T* a, const T* b, T* out) {
    if constexpr (sizeof(T) == sizeof(float))
        table().add_f32(n, (const float*)a, (const float*)b, (float*)out);
    else
        table().add_f64(n, (const double*)a, (const double*)b, (double*)out);
}

template <typename T>
void sub(int64_t n, const T* a, const T* b, T* out) {
    if constexpr (sizeof(T) == sizeof(float))
        table().sub_f32(n, (const float*)a, (const float*)b, (float*)out);
    else
        table().sub_f64(n, (const double*)a, (const double*)b, (double*)out);
}

template <typename T>
void mul(int64_t n, const T* a, const T* b, T* out) {
    if constexpr (sizeof(T) == sizeof(float))
        table().mul_f32(n, (const float*)a, (const float*)b, (float*)out);
    else
        table().mul_f64(n, (const double*)a, (const double*)b, (double*)out);
}

template <typename T>
void silu(int64_t n, const T* x, T* y) {
    if constexpr (sizeof(T) == sizeof(float))
        table().silu_f32(n, (const float*)x, (float*)y);
    else
        table().silu_f64(n, (const double*)x, (double*)y);
}

template <typename T>
void silu_grad(int64_t n, const T* x, const T* dy, T* dx) {
    if constexpr (sizeof(T) == sizeof(float))
        table().silu_grad_f32(n, (const float*)x, (const float*)dy, (float*)dx);
    else
        table().silu_grad_f64(n, (const double*)x, (const double*)dy, (double*)dx);
}

template <typename T>
void adam(int64_t n, T* p, const T* g, T* m, T* v, T lr, T beta1, T beta2, T eps, T bias1,
          T bias2) {
    if constexpr (sizeof(T) == sizeof(float))
        table().adam_f32(n, (float*)p, (const float*)g, (float*)m, (float*)v, (float)lr,
                         (float)beta1, (float)beta2, (float)eps, (float)bias1, (float)bias2);
    else
        table().adam_f64(n, (double*)p, (const double*)g, (double*)m, (double*)v, (double)lr,
                         (double)beta1, (double)beta2, (double)eps, (double)bias1, (double)bias2);
}

template <typename T>
double sum(int64_t n, const T* x) {
    if constexpr (sizeof(T) == sizeof(float))
        return table().sum_f32(n, (const float*)x);
    else
        return table().sum_f64(n, (const double*)x);
}

template <typename T>
double sumsq(int64_t n, const T* x) {
    if constexpr (sizeof(T) == sizeof(float))
        return table().sumsq_f32(n, (const float*)x);
    else
        return table().sumsq_f64(n, (const double*)x);
}

}  // namespace msp::kernels
