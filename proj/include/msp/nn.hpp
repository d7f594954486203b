// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msp/rng.hpp"
#include "msp/tensor.hpp"

namespace msp::nn {

template <typename T>
struct Param {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;

    void init_shape(std::vector<int64_t> shape) {
        value = Tensor<T>(std::move(shape));
        grad = Tensor<T>(value.shape());
    }
    void zero_grad() { grad.fill(T(0)); }
};

template <typename T>
using ParamRefs = std::vector<Param<T>*>;

// ---------------------------------------------------------------------------
// Layers. forward() saves what backward() needs; backward() returns dx and
// accumulates parameter gradients. All tensors are NCHW (or N x F for dense).
// ---------------------------------------------------------------------------

template <typename T>
struct Conv2d {
    int in_ch = 0, out_ch = 0, ksize = 3, stride = 1, pad = 1;
    Param<T> weight;  // [out_ch, in_ch*k*k]
    Param<T> bias;    // [out_ch]
    Tensor<T> x_saved;

    void init(int in_c, int out_c, int k, int s, int p, Rng& rng, const std::string& name,
              bool zero_init = false);
    Tensor<T> forward(const Tensor<T>& x, bool train);
    Tensor<T> backward(const Tensor<T>& dy);
    void collect(ParamRefs<T>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }
};

template <typename T>
struct GroupNorm {
    int channels = 0, groups = 8;
    T eps = T(1e-5);
    Param<T> gamma, beta;
    Tensor<T> x_saved, mean_saved, rstd_saved;

    void init(int ch, int g, const std::string& name);
    Tensor<T> forward(const Tensor<T>& x, bool train);
    Tensor<T> backward(const Tensor<T>& dy);
    void collect(ParamRefs<T>& out) {
        out.push_back(&gamma);
        out.push_back(&beta);
    }
};

template <typename T>
struct SiLU {
    Tensor<T> x_saved;
    Tensor<T> forward(const Tensor<T>& x, bool train);
    Tensor<T> backward(const Tensor<T>& dy);
};

template <typename T>
struct Linear {
    int in_f = 0, out_f = 0;
    Param<T> weight;  // [out_f, in_f]
    Param<T> bias;    // [out_f]
    Tensor<T> x_saved;

    void init(int in_features, int out_features, Rng& rng, const std::string& name);
    Tensor<T> forward(const Tensor<T>& x, bool train);  // x: [N, in_f]
    Tensor<T> backward(const Tensor<T>& dy);
    void collect(ParamRefs<T>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }
};

/// Embedding table summed over each sample's id list (the toy prompt).
template <typename T>
struct EmbeddingSum {
    int vocab = 0, dim = 0;
    Param<T> table;  // [vocab, dim]
    std::vector<std::vector<int>> ids_saved;

    void init(int vocab_size, int d, Rng& rng, const std::string& name);
    Tensor<T> forward(const std::vector<std::vector<int>>& ids, bool train);  // [N, dim]
    void backward(const Tensor<T>& dy);
    void collect(ParamRefs<T>& out) { out.push_back(&table); }
};

template <typename T>
struct Upsample2x {
    std::vector<int64_t> in_shape;
    Tensor<T> forward(const Tensor<T>& x, bool train);
    Tensor<T> backward(const Tensor<T>& dy);
};

template <typename T>
struct GlobalAvgPool {
    std::vector<int64_t> in_shape;
    Tensor<T> forward(const Tensor<T>& x, bool train);  // -> [N, C]
    Tensor<T> backward(const Tensor<T>& dy);
};

/// GN-SiLU-Conv x2 with residual skip and optional per-channel conditioning
/// bias projected from a cond vector.
template <typename T>
struct ResBlock {
    int in_ch = 0, out_ch = 0, cond_dim = 0;
    GroupNorm<T> gn1, gn2;
    SiLU<T> act1, act2, act_cond;
    Conv2d<T> conv1, conv2, skip;  // skip used when in_ch != out_ch
    Linear<T> cond_proj;
    bool has_skip = false;

    void init(int in_c, int out_c, int cond_d, Rng& rng, const std::string& name);
    // cond: [N, cond_dim] or empty when cond_dim == 0
    Tensor<T> forward(const Tensor<T>& x, const Tensor<T>& cond, bool train);
    // returns dx; accumulates dcond into dcond_out (same shape as cond)
    Tensor<T> backward(const Tensor<T>& dy, Tensor<T>* dcond_out);
    void collect(ParamRefs<T>& out);
};

// ---------------------------------------------------------------------------

template <typename T>
struct Adam {
    T lr = T(1e-3), beta1 = T(0.9), beta2 = T(0.999), eps = T(1e-8);
    int64_t step_count = 0;
    std::vector<Tensor<T>> m, v;

    void init(const ParamRefs<T>& params);
    void step(const ParamRefs<T>& params);
};

template <typename T>
void zero_grads(const ParamRefs<T>& params);

template <typename T>
int64_t param_count(const ParamRefs<T>& params);

/// Clips the global L2 norm of all gradients to max_norm; returns the norm.
template <typename T>
double clip_grad_norm(const ParamRefs<T>& params, double max_norm);

// Channel helpers.
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
void split_channels(const Tensor<T>& d, int64_t ca, Tensor<T>& da, Tensor<T>& db);

/// Sinusoidal embedding of integer timesteps, [N, dim].
template <typename T>
Tensor<T> timestep_embedding(const std::vector<int>& ts, int dim);

}  // namespace msp::nn
