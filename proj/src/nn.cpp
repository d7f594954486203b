// SPDX-License-Identifier: Apache-2.0

#include "msp/nn.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "msp/kernels.hpp"

namespace msp::nn {

namespace {

// col is [in_ch*k*k, Ho*Wo] for one sample.
template <typename T>
void im2col(const T* x, int C, int H, int W, int k, int stride, int pad, int Ho, int Wo, T* col) {
    for (int c = 0; c < C; ++c) {
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                T* dst = col + (int64_t(c) * k * k + ky * k + kx) * (int64_t(Ho) * Wo);
                for (int oy = 0; oy < Ho; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= H) {
                        std::memset(dst + int64_t(oy) * Wo, 0, sizeof(T) * size_t(Wo));
                        continue;
                    }
                    const T* src_row = x + (int64_t(c) * H + iy) * W;
                    for (int ox = 0; ox < Wo; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        dst[int64_t(oy) * Wo + ox] = (ix < 0 || ix >= W) ? T(0) : src_row[ix];
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im_add(const T* col, int C, int H, int W, int k, int stride, int pad, int Ho, int Wo,
                T* x) {
    for (int c = 0; c < C; ++c) {
        for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
                const T* src = col + (int64_t(c) * k * k + ky * k + kx) * (int64_t(Ho) * Wo);
                for (int oy = 0; oy < Ho; ++oy) {
                    const int iy = oy * stride + ky - pad;
                    if (iy < 0 || iy >= H) continue;
                    T* dst_row = x + (int64_t(c) * H + iy) * W;
                    for (int ox = 0; ox < Wo; ++ox) {
                        const int ix = ox * stride + kx - pad;
                        if (ix >= 0 && ix < W) dst_row[ix] += src[int64_t(oy) * Wo + ox];
                    }
                }
            }
        }
    }
}

template <typename T>
void he_init(Tensor<T>& w, int fan_in, Rng& rng) {
    const double std = std::sqrt(2.0 / double(fan_in));
    for (int64_t i = 0; i < w.numel(); ++i) w[i] = T(rng.normal() * std);
}

}  // namespace

// ----------------------------------------------------------------- Conv2d --

template <typename T>
void Conv2d<T>::init(int in_c, int out_c, int k, int s, int p, Rng& rng, const std::string& name,
                     bool zero_init) {
    in_ch = in_c;
    out_ch = out_c;
    ksize = k;
    stride = s;
    pad = p;
    weight.name = name + ".weight";
    bias.name = name + ".bias";
    weight.init_shape({out_c, int64_t(in_c) * k * k});
    bias.init_shape({out_c});
    if (zero_init)
        weight.value.fill(T(0));
    else
        he_init(weight.value, in_c * k * k, rng);
    bias.value.fill(T(0));
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x, bool train) {
    const int64_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
    if (x.dim(1) != in_ch) throw std::invalid_argument("Conv2d: channel mismatch");
    const int Ho = int((H + 2 * pad - ksize) / stride + 1);
    const int Wo = int((W + 2 * pad - ksize) / stride + 1);
    const int64_t K = int64_t(in_ch) * ksize * ksize;
    const int64_t HWo = int64_t(Ho) * Wo;

    Tensor<T> y({N, out_ch, Ho, Wo});
    Tensor<T> col({K, HWo});
    for (int64_t n = 0; n < N; ++n) {
        im2col(x.data() + n * in_ch * H * W, in_ch, int(H), int(W), ksize, stride, pad, Ho, Wo,
               col.data());
        kernels::gemm<T>(out_ch, HWo, K, weight.value.data(), K, col.data(), HWo, T(0),
                         y.data() + n * out_ch * HWo, HWo);
        for (int oc = 0; oc < out_ch; ++oc) {
            T* row = y.data() + (n * out_ch + oc) * HWo;
            const T b = bias.value[oc];
            for (int64_t i = 0; i < HWo; ++i) row[i] += b;
        }
    }
    if (train) x_saved = x;
    return y;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& dy) {
    const Tensor<T>& x = x_saved;
    const int64_t N = x.dim(0), H = x.dim(2), W = x.dim(3);
    const int64_t Ho = dy.dim(2), Wo = dy.dim(3);
    const int64_t K = int64_t(in_ch) * ksize * ksize;
    const int64_t HWo = Ho * Wo;

    Tensor<T> dx(x.shape(), T(0));
    Tensor<T> col({K, HWo});
    Tensor<T> dcol({K, HWo});
    Tensor<T> colT({HWo, K});
    Tensor<T> wT({K, int64_t(out_ch)});
    for (int oc = 0; oc < out_ch; ++oc)
        for (int64_t p = 0; p < K; ++p) wT[p * out_ch + oc] = weight.value[oc * K + p];
    for (int64_t n = 0; n < N; ++n) {
        const T* dyn = dy.data() + n * out_ch * HWo;
        // dW += dY * col^T  (recompute col; cheaper than caching per layer)
        im2col(x.data() + n * in_ch * H * W, in_ch, int(H), int(W), ksize, stride, pad, int(Ho),
               int(Wo), col.data());
        for (int64_t i = 0; i < HWo; ++i)
            for (int64_t p = 0; p < K; ++p) colT[i * K + p] = col[p * HWo + i];
        kernels::gemm<T>(out_ch, K, HWo, dyn, HWo, colT.data(), K, T(1), weight.grad.data(), K);
        // db += row sums of dY
        for (int oc = 0; oc < out_ch; ++oc)
            bias.grad[oc] += T(kernels::sum<T>(HWo, dyn + oc * HWo));
        // dcol = W^T * dY, then scatter back
        kernels::gemm<T>(K, HWo, out_ch, wT.data(), out_ch, dyn, HWo, T(0), dcol.data(), HWo);
        col2im_add(dcol.data(), in_ch, int(H), int(W), ksize, stride, pad, int(Ho), int(Wo),
                   dx.data() + n * in_ch * H * W);
    }
    return dx;
}

// -------------------------------------------------------------- GroupNorm --

template <typename T>
void GroupNorm<T>::init(int ch, int g, const std::string& name) {
    channels = ch;
    groups = g;
    if (ch % g != 0) throw std::invalid_argument("GroupNorm: channels % groups != 0");
    gamma.name = name + ".gamma";
    beta.name = name + ".beta";
    gamma.init_shape({ch});
    beta.init_shape({ch});
    gamma.value.fill(T(1));
    beta.value.fill(T(0));
}

template <typename T>
Tensor<T> GroupNorm<T>::forward(const Tensor<T>& x, bool train) {
    const int64_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    if (C != channels) throw std::invalid_argument("GroupNorm: channel mismatch");
    const int64_t cpg = C / groups;
    const int64_t m = cpg * H * W;

    Tensor<T> y(x.shape());
    Tensor<T> mean({N, groups}), rstd({N, groups});
    for (int64_t n = 0; n < N; ++n) {
        for (int64_t g = 0; g < groups; ++g) {
            const T* xs = x.data() + (n * C + g * cpg) * H * W;
            const double s = kernels::sum<T>(m, xs);
            const double ss = kernels::sumsq<T>(m, xs);
            const double mu = s / double(m);
            const double var = std::max(0.0, ss / double(m) - mu * mu);
            const double rs = 1.0 / std::sqrt(var + double(eps));
            mean[n * groups + g] = T(mu);
            rstd[n * groups + g] = T(rs);
            T* ys = y.data() + (n * C + g * cpg) * H * W;
            for (int64_t c = 0; c < cpg; ++c) {
                const T ga = gamma.value[g * cpg + c], be = beta.value[g * cpg + c];
                const T* xc = xs + c * H * W;
                T* yc = ys + c * H * W;
                for (int64_t i = 0; i < H * W; ++i)
                    yc[i] = T((double(xc[i]) - mu) * rs) * ga + be;
            }
        }
    }
    if (train) {
        x_saved = x;
        mean_saved = mean;
        rstd_saved = rstd;
    }
    return y;
}

template <typename T>
Tensor<T> GroupNorm<T>::backward(const Tensor<T>& dy) {
    const Tensor<T>& x = x_saved;
    const int64_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const int64_t cpg = C / groups;
    const int64_t m = cpg * H * W;

    Tensor<T> dx(x.shape());
    for (int64_t n = 0; n < N; ++n) {
        for (int64_t g = 0; g < groups; ++g) {
            const T mu = mean_saved[n * groups + g];
            const T rs = rstd_saved[n * groups + g];
            const T* xs = x.data() + (n * C + g * cpg) * H * W;
            const T* dys = dy.data() + (n * C + g * cpg) * H * W;
            // Accumulate dgamma/dbeta and the two group reductions.
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for (int64_t c = 0; c < cpg; ++c) {
                const T ga = gamma.value[g * cpg + c];
                const T* xc = xs + c * H * W;
                const T* dyc = dys + c * H * W;
                double dg = 0.0, db = 0.0;
                for (int64_t i = 0; i < H * W; ++i) {
                    const double xhat = (double(xc[i]) - double(mu)) * double(rs);
                    const double dxh = double(dyc[i]) * double(ga);
                    dg += double(dyc[i]) * xhat;
                    db += double(dyc[i]);
                    sum_dxhat += dxh;
                    sum_dxhat_xhat += dxh * xhat;
                }
                gamma.grad[g * cpg + c] += T(dg);
                beta.grad[g * cpg + c] += T(db);
            }
            const double inv_m = 1.0 / double(m);
            T* dxs = dx.data() + (n * C + g * cpg) * H * W;
            for (int64_t c = 0; c < cpg; ++c) {
                const T ga = gamma.value[g * cpg + c];
                const T* xc = xs + c * H * W;
                const T* dyc = dys + c * H * W;
                T* dxc = dxs + c * H * W;
                for (int64_t i = 0; i < H * W; ++i) {
                    const double xhat = (double(xc[i]) - double(mu)) * double(rs);
                    const double dxh = double(dyc[i]) * double(ga);
                    dxc[i] = T(double(rs) * (dxh - inv_m * sum_dxhat - xhat * inv_m * sum_dxhat_xhat));
                }
            }
        }
    }
    return dx;
}

// ------------------------------------------------------------------- SiLU --

template <typename T>
Tensor<T> SiLU<T>::forward(const Tensor<T>& x, bool train) {
    Tensor<T> y(x.shape());
    kernels::silu<T>(x.numel(), x.data(), y.data());
    if (train) x_saved = x;
    return y;
}

template <typename T>
Tensor<T> SiLU<T>::backward(const Tensor<T>& dy) {
    Tensor<T> dx(dy.shape());
    kernels::silu_grad<T>(dy.numel(), x_saved.data(), dy.data(), dx.data());
    return dx;
}

// ----------------------------------------------------------------- Linear --

template <typename T>
void Linear<T>::init(int in_features, int out_features, Rng& rng, const std::string& name) {
    in_f = in_features;
    out_f = out_features;
    weight.name = name + ".weight";
    bias.name = name + ".bias";
    weight.init_shape({out_f, in_f});
    bias.init_shape({out_f});
    he_init(weight.value, in_f, rng);
    bias.value.fill(T(0));
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& x, bool train) {
    const int64_t N = x.dim(0);
    if (x.dim(1) != in_f) throw std::invalid_argument("Linear: feature mismatch");
    Tensor<T> y({N, out_f});
    // y = x * W^T: compute row by row to reuse gemm (W stored [out,in]).
    for (int64_t n = 0; n < N; ++n)
        kernels::gemm<T>(out_f, 1, in_f, weight.value.data(), in_f, x.data() + n * in_f, 1, T(0),
                         y.data() + n * out_f, 1);
    for (int64_t n = 0; n < N; ++n)
        kernels::add<T>(out_f, y.data() + n * out_f, bias.value.data(), y.data() + n * out_f);
    if (train) x_saved = x;
    return y;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& dy) {
    const Tensor<T>& x = x_saved;
    const int64_t N = x.dim(0);
    Tensor<T> dx({N, in_f}, T(0));
    for (int64_t n = 0; n < N; ++n) {
        const T* dyn = dy.data() + n * out_f;
        const T* xn = x.data() + n * in_f;
        // dW += dy^T outer x ; dx = dy * W
        for (int64_t o = 0; o < out_f; ++o) {
            kernels::axpy<T>(in_f, dyn[o], xn, weight.grad.data() + o * in_f);
            bias.grad[o] += dyn[o];
            kernels::axpy<T>(in_f, dyn[o], weight.value.data() + o * in_f, dx.data() + n * in_f);
        }
    }
    return dx;
}

// ----------------------------------------------------------- EmbeddingSum --

template <typename T>
void EmbeddingSum<T>::init(int vocab_size, int d, Rng& rng, const std::string& name) {
    vocab = vocab_size;
    dim = d;
    table.name = name + ".table";
    table.init_shape({vocab, dim});
    for (int64_t i = 0; i < table.value.numel(); ++i) table.value[i] = T(rng.normal() * 0.02);
}

template <typename T>
Tensor<T> EmbeddingSum<T>::forward(const std::vector<std::vector<int>>& ids, bool train) {
    const int64_t N = int64_t(ids.size());
    Tensor<T> y({N, dim}, T(0));
    for (int64_t n = 0; n < N; ++n)
        for (int id : ids[size_t(n)]) {
            if (id < 0 || id >= vocab)
                throw std::out_of_range("EmbeddingSum: unknown token id " + std::to_string(id));
            kernels::axpy<T>(dim, T(1), table.value.data() + int64_t(id) * dim,
                             y.data() + n * dim);
        }
    if (train) ids_saved = ids;
    return y;
}

template <typename T>
void EmbeddingSum<T>::backward(const Tensor<T>& dy) {
    for (int64_t n = 0; n < int64_t(ids_saved.size()); ++n)
        for (int id : ids_saved[size_t(n)])
            kernels::axpy<T>(dim, T(1), dy.data() + n * dim, table.grad.data() + int64_t(id) * dim);
}

// ------------------------------------------------------------- Upsample2x --

template <typename T>
Tensor<T> Upsample2x<T>::forward(const Tensor<T>& x, bool train) {
    const int64_t N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor<T> y({N, C, H * 2, W * 2});
    for (int64_t nc = 0; nc < N * C; ++nc) {
        const T* xs = x.data() + nc * H * W;
        T* ys = y.data() + nc * H * W * 4;
        for (int64_t i = 0; i < H; ++i)
            for (int64_t j = 0; j < W; ++j) {
                const T v = xs[i * W + j];
                T* base = ys + (i * 2) * (W * 2) + j * 2;
                base[0] = v;
                base[1] = v;
                base[W * 2] = v;
                base[W * 2 + 1] = v;
            }
    }
    if (train) in_shape = x.shape();
    return y;
}

template <typename T>
Tensor<T> Upsample2x<T>::backward(const Tensor<T>& dy) {
    const int64_t N = in_shape[0], C = in_shape[1], H = in_shape[2], W = in_shape[3];
    Tensor<T> dx({N, C, H, W});
    for (int64_t nc = 0; nc < N * C; ++nc) {
        const T* dys = dy.data() + nc * H * W * 4;
        T* dxs = dx.data() + nc * H * W;
        for (int64_t i = 0; i < H; ++i)
            for (int64_t j = 0; j < W; ++j) {
                const T* base = dys + (i * 2) * (W * 2) + j * 2;
                dxs[i * W + j] = base[0] + base[1] + base[W * 2] + base[W * 2 + 1];
            }
    }
    return dx;
}

// ---------------------------------------------------------- GlobalAvgPool --

template <typename T>
Tensor<T> GlobalAvgPool<T>::forward(const Tensor<T>& x, bool train) {
    const int64_t N = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
    Tensor<T> y({N, C});
    for (int64_t n = 0; n < N; ++n)
        for (int64_t c = 0; c < C; ++c)
            y[n * C + c] = T(kernels::sum<T>(HW, x.data() + (n * C + c) * HW) / double(HW));
    if (train) in_shape = x.shape();
    return y;
}

template <typename T>
Tensor<T> GlobalAvgPool<T>::backward(const Tensor<T>& dy) {
    const int64_t N = in_shape[0], C = in_shape[1], HW = in_shape[2] * in_shape[3];
    Tensor<T> dx({N, C, in_shape[2], in_shape[3]});
    for (int64_t n = 0; n < N; ++n)
        for (int64_t c = 0; c < C; ++c) {
            const T g = dy[n * C + c] / T(HW);
            T* d = dx.data() + (n * C + c) * HW;
            for (int64_t i = 0; i < HW; ++i) d[i] = g;
        }
    return dx;
}

// --------------------------------------------------------------- ResBlock --

template <typename T>
void ResBlock<T>::init(int in_c, int out_c, int cond_d, Rng& rng, const std::string& name) {
    in_ch = in_c;
    out_ch = out_c;
    cond_dim = cond_d;
    gn1.init(in_c, std::min(8, in_c), name + ".gn1");
    gn2.init(out_c, std::min(8, out_c), name + ".gn2");
    conv1.init(in_c, out_c, 3, 1, 1, rng, name + ".conv1");
    conv2.init(out_c, out_c, 3, 1, 1, rng, name + ".conv2");
    if (in_c != out_c) {
        has_skip = true;
        skip.init(in_c, out_c, 1, 1, 0, rng, name + ".skip");
    }
    if (cond_d > 0) cond_proj.init(cond_d, out_c, rng, name + ".cond");
}

template <typename T>
Tensor<T> ResBlock<T>::forward(const Tensor<T>& x, const Tensor<T>& cond, bool train) {
    Tensor<T> h = conv1.forward(act1.forward(gn1.forward(x, train), train), train);
    if (cond_dim > 0) {
        Tensor<T> cb = cond_proj.forward(act_cond.forward(cond, train), train);  // [N, out_ch]
        const int64_t N = h.dim(0), HW = h.dim(2) * h.dim(3);
        for (int64_t n = 0; n < N; ++n)
            for (int64_t c = 0; c < out_ch; ++c) {
                T* hs = h.data() + (n * out_ch + c) * HW;
                const T b = cb[n * out_ch + c];
                for (int64_t i = 0; i < HW; ++i) hs[i] += b;
            }
    }
    Tensor<T> h2 = conv2.forward(act2.forward(gn2.forward(h, train), train), train);
    Tensor<T> sk = has_skip ? skip.forward(x, train) : x;
    Tensor<T> y(h2.shape());
    kernels::add<T>(y.numel(), h2.data(), sk.data(), y.data());
    return y;
}

template <typename T>
Tensor<T> ResBlock<T>::backward(const Tensor<T>& dy, Tensor<T>* dcond_out) {
    // y = h2 + skip(x)
    Tensor<T> dh = gn2.backward(act2.backward(conv2.backward(dy)));
    if (cond_dim > 0) {
        const int64_t N = dh.dim(0), HW = dh.dim(2) * dh.dim(3);
        Tensor<T> dcb({N, out_ch});
        for (int64_t n = 0; n < N; ++n)
            for (int64_t c = 0; c < out_ch; ++c)
                dcb[n * out_ch + c] = T(kernels::sum<T>(HW, dh.data() + (n * out_ch + c) * HW));
        Tensor<T> dc = act_cond.backward(cond_proj.backward(dcb));
        if (dcond_out) kernels::add<T>(dc.numel(), dc.data(), dcond_out->data(), dcond_out->data());
    }
    Tensor<T> dx = gn1.backward(act1.backward(conv1.backward(dh)));
    if (has_skip) {
        Tensor<T> dsk = skip.backward(dy);
        kernels::add<T>(dx.numel(), dx.data(), dsk.data(), dx.data());
    } else {
        kernels::add<T>(dx.numel(), dx.data(), dy.data(), dx.data());
    }
    return dx;
}

template <typename T>
void ResBlock<T>::collect(ParamRefs<T>& out) {
    gn1.collect(out);
    gn2.collect(out);
    conv1.collect(out);
    conv2.collect(out);
    if (has_skip) skip.collect(out);
    if (cond_dim > 0) cond_proj.collect(out);
}

// ------------------------------------------------------------------- Adam --

template <typename T>
void Adam<T>::init(const ParamRefs<T>& params) {
    m.clear();
    v.clear();
    for (auto* p : params) {
        m.emplace_back(p->value.shape(), T(0));
        v.emplace_back(p->value.shape(), T(0));
    }
    step_count = 0;
}

template <typename T>
void Adam<T>::step(const ParamRefs<T>& params) {
    if (m.size() != params.size()) throw std::logic_error("Adam: init/step param mismatch");
    ++step_count;
    const T bias1 = T(1) - T(std::pow(double(beta1), double(step_count)));
    const T bias2 = T(1) - T(std::pow(double(beta2), double(step_count)));
    for (size_t i = 0; i < params.size(); ++i) {
        Param<T>* p = params[i];
        kernels::adam<T>(p->value.numel(), p->value.data(), p->grad.data(), m[i].data(),
                         v[i].data(), lr, beta1, beta2, eps, bias1, bias2);
    }
}

template <typename T>
void zero_grads(const ParamRefs<T>& params) {
    for (auto* p : params) p->zero_grad();
}

template <typename T>
int64_t param_count(const ParamRefs<T>& params) {
    int64_t n = 0;
    for (auto* p : params) n += p->value.numel();
    return n;
}

template <typename T>
double clip_grad_norm(const ParamRefs<T>& params, double max_norm) {
    double total = 0.0;
    for (auto* p : params) total += kernels::sumsq<T>(p->grad.numel(), p->grad.data());
    const double norm = std::sqrt(total);
    if (norm > max_norm && norm > 0.0) {
        const T s = T(max_norm / norm);
        for (auto* p : params) kernels::scale<T>(p->grad.numel(), s, p->grad.data());
    }
    return norm;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    const int64_t N = a.dim(0), Ca = a.dim(1), Cb = b.dim(1), H = a.dim(2), W = a.dim(3);
    if (b.dim(0) != N || b.dim(2) != H || b.dim(3) != W)
        throw std::invalid_argument("concat_channels: shape mismatch");
    Tensor<T> y({N, Ca + Cb, H, W});
    const int64_t hw = H * W;
    for (int64_t n = 0; n < N; ++n) {
        std::memcpy(y.data() + n * (Ca + Cb) * hw, a.data() + n * Ca * hw,
                    sizeof(T) * size_t(Ca * hw));
        std::memcpy(y.data() + (n * (Ca + Cb) + Ca) * hw, b.data() + n * Cb * hw,
                    sizeof(T) * size_t(Cb * hw));
    }
    return y;
}

template <typename T>
void split_channels(const Tensor<T>& d, int64_t ca, Tensor<T>& da, Tensor<T>& db) {
    const int64_t N = d.dim(0), C = d.dim(1), H = d.dim(2), W = d.dim(3);
    const int64_t cb = C - ca;
    da = Tensor<T>({N, ca, H, W});
    db = Tensor<T>({N, cb, H, W});
    const int64_t hw = H * W;
    for (int64_t n = 0; n < N; ++n) {
        std::memcpy(da.data() + n * ca * hw, d.data() + n * C * hw, sizeof(T) * size_t(ca * hw));
        std::memcpy(db.data() + n * cb * hw, d.data() + (n * C + ca) * hw,
                    sizeof(T) * size_t(cb * hw));
    }
}

template <typename T>
Tensor<T> timestep_embedding(const std::vector<int>& ts, int dim) {
    const int64_t N = int64_t(ts.size());
    const int half = dim / 2;
    Tensor<T> y({N, dim});
    for (int64_t n = 0; n < N; ++n) {
        for (int i = 0; i < half; ++i) {
            const double freq = std::exp(-std::log(10000.0) * double(i) / double(half));
            const double a = double(ts[size_t(n)]) * freq;
            y[n * dim + i] = T(std::sin(a));
            y[n * dim + half + i] = T(std::cos(a));
        }
    }
    return y;
}

// Explicit instantiations.
#define MSP_NN_INSTANTIATE(T)                                                            \
    template struct Conv2d<T>;                                                           \
    template struct GroupNorm<T>;                                                        \
    template struct SiLU<T>;                                                             \
    template struct Linear<T>;                                                           \
    template struct EmbeddingSum<T>;                                                     \
    template struct Upsample2x<T>;                                                       \
    template struct GlobalAvgPool<T>;                                                    \
    template struct ResBlock<T>;                                                         \
    template struct Adam<T>;                                                             \
    template void zero_grads<T>(const ParamRefs<T>&);                                    \
    template int64_t param_count<T>(const ParamRefs<T>&);                                \
    template double clip_grad_norm<T>(const ParamRefs<T>&, double);                      \
    template Tensor<T> concat_channels<T>(const Tensor<T>&, const Tensor<T>&);           \
    template void split_channels<T>(const Tensor<T>&, int64_t, Tensor<T>&, Tensor<T>&);  \
    template Tensor<T> timestep_embedding<T>(const std::vector<int>&, int);

MSP_NN_INSTANTIATE(float)
MSP_NN_INSTANTIATE(double)

}  // namespace msp::nn
