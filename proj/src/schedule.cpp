// SPDX-License-Identifier: Apache-2.0

#include "msp/schedule.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace msp {

namespace {

void check_t(int t, const NoiseSchedule& sched, const char* op) {
    if (t < 1 || t > sched.num_train_steps)
        throw std::out_of_range(std::string(op) + ": timestep " + std::to_string(t) +
                                " outside [1, " + std::to_string(sched.num_train_steps) + "]");
}

void validate(const NoiseSchedule& s, bool require_monotone_betas) {
    if (s.num_train_steps < 1) throw std::invalid_argument("schedule: num_steps must be >= 1");
    double prev_bar = 1.0;
    for (int t = 1; t <= s.num_train_steps; ++t) {
        const double b = s.beta(t);
        if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("schedule: beta out of (0,1)");
        if (require_monotone_betas && t > 1 && b < s.beta(t - 1))
            throw std::invalid_argument("schedule: betas must be non-decreasing");
        if (std::abs(s.alpha(t) - (1.0 - b)) > 1e-15)
            throw std::invalid_argument("schedule: alpha != 1 - beta");
        if (!(s.alpha_bar(t) > 0.0 && s.alpha_bar(t) < prev_bar))
            throw std::invalid_argument("schedule: alpha_bar must be strictly decreasing in (0,1)");
        prev_bar = s.alpha_bar(t);
    }
}

}  // namespace

uint64_t NoiseSchedule::fingerprint() const {
    // FNV-1a over T and the raw beta bytes.
    uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const void* p, size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    feed(&num_train_steps, sizeof(num_train_steps));
    feed(betas.data(), betas.size() * sizeof(double));
    return h;
}

NoiseSchedule make_schedule(int num_steps, double beta_start, double beta_end) {
    if (num_steps < 1) throw std::invalid_argument("make_schedule: num_steps must be >= 1");
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0))
        throw std::invalid_argument("make_schedule: need 0 < beta_start <= beta_end < 1");

    NoiseSchedule s;
    s.num_train_steps = num_steps;
    s.betas.resize(static_cast<size_t>(num_steps));
    s.alphas.resize(static_cast<size_t>(num_steps));
    s.alpha_bars.resize(static_cast<size_t>(num_steps));
    double bar = 1.0;
    for (int t = 1; t <= num_steps; ++t) {
        const double frac = (num_steps == 1) ? 0.0 : double(t - 1) / double(num_steps - 1);
        const double beta = beta_start + (beta_end - beta_start) * frac;
        s.betas[size_t(t - 1)] = beta;
        s.alphas[size_t(t - 1)] = 1.0 - beta;
        bar *= 1.0 - beta;
        s.alpha_bars[size_t(t - 1)] = bar;
    }
    validate(s, /*require_monotone_betas=*/true);
    return s;
}

NoiseSchedule respace_schedule(const NoiseSchedule& sched, const std::vector<int>& ascending_ts) {
    if (ascending_ts.empty()) throw std::invalid_argument("respace_schedule: empty timestep list");
    NoiseSchedule s;
    s.num_train_steps = static_cast<int>(ascending_ts.size());
    double prev_bar = 1.0;
    for (int i = 0; i < s.num_train_steps; ++i) {
        const int t = ascending_ts[size_t(i)];
        check_t(t, sched, "respace_schedule");
        if (i > 0 && t <= ascending_ts[size_t(i - 1)])
            throw std::invalid_argument("respace_schedule: timesteps must be strictly ascending");
        const double bar = sched.alpha_bar(t);
        const double alpha = bar / prev_bar;
        s.alpha_bars.push_back(bar);
        s.alphas.push_back(alpha);
        s.betas.push_back(1.0 - alpha);
        prev_bar = bar;
    }
    validate(s, /*require_monotone_betas=*/false);
    return s;
}

std::vector<int> strided_timesteps(int train_steps, int sample_steps) {
    if (sample_steps < 1 || sample_steps > train_steps)
        throw std::out_of_range("strided_timesteps: need 1 <= sample_steps <= train_steps");
    std::vector<int> ts(static_cast<size_t>(sample_steps));
    if (sample_steps == 1) {
        ts[0] = train_steps;
        return ts;
    }
    // Evenly spaced from train_steps down to 1, rounded to nearest.
    const double span = double(train_steps - 1) / double(sample_steps - 1);
    for (int i = 0; i < sample_steps; ++i)
        ts[size_t(i)] = train_steps - int(std::llround(span * i));
    ts.front() = train_steps;
    ts.back() = 1;
    for (size_t i = 1; i < ts.size(); ++i)
        if (ts[i] >= ts[i - 1]) throw std::logic_error("strided_timesteps: not strictly decreasing");
    return ts;
}

template <typename T>
Tensor<T> q_sample(const Tensor<T>& x0, int t, const Tensor<T>& noise,
                   const NoiseSchedule& sched) {
    check_t(t, sched, "q_sample");
    require_same_shape(x0, noise, "q_sample");
    const T a = static_cast<T>(std::sqrt(sched.alpha_bar(t)));
    const T b = static_cast<T>(std::sqrt(1.0 - sched.alpha_bar(t)));
    Tensor<T> out(x0.shape());
    for (int64_t i = 0; i < out.numel(); ++i) out[i] = a * x0[i] + b * noise[i];
    return out;
}

template <typename T>
Tensor<T> project_x0(const Tensor<T>& x_t, const Tensor<T>& eps, int t,
                     const NoiseSchedule& sched) {
    check_t(t, sched, "project_x0");
    require_same_shape(x_t, eps, "project_x0");
    // Inverts q_sample, so the cumulative product is the right coefficient.
    const double bar = sched.alpha_bar(t);
    const T inv = static_cast<T>(1.0 / std::sqrt(bar));
    const T coef = static_cast<T>(std::sqrt(1.0 - bar) / std::sqrt(bar));
    Tensor<T> out(x_t.shape());
    for (int64_t i = 0; i < out.numel(); ++i) out[i] = inv * x_t[i] - coef * eps[i];
    return out;
}

template <typename T>
Tensor<T> cfg_combine(const Tensor<T>& eps_u, const Tensor<T>& eps_c, T scale) {
    require_same_shape(eps_u, eps_c, "cfg_combine");
    if (scale == T(1)) return eps_c;
    Tensor<T> out(eps_u.shape());
    for (int64_t i = 0; i < out.numel(); ++i)
        out[i] = eps_u[i] + scale * (eps_c[i] - eps_u[i]);
    return out;
}

template <typename T>
Tensor<T> reverse_step_with_noise(const Tensor<T>& x_t, const Tensor<T>& eps, int t,
                                  const NoiseSchedule& sched, const Tensor<T>& z) {
    check_t(t, sched, "reverse_step");
    require_same_shape(x_t, eps, "reverse_step");
    const double beta = sched.beta(t);
    const double bar = sched.alpha_bar(t);
    const T mean_scale = static_cast<T>(1.0 / std::sqrt(sched.alpha(t)));
    const T eps_coef = static_cast<T>(beta / std::sqrt(1.0 - bar));
    Tensor<T> out(x_t.shape());
    if (t == 1) {
        for (int64_t i = 0; i < out.numel(); ++i)
            out[i] = mean_scale * (x_t[i] - eps_coef * eps[i]);
        return out;
    }
    require_same_shape(x_t, z, "reverse_step");
    const double bar_prev = sched.alpha_bar(t - 1);
    const T sigma = static_cast<T>(std::sqrt(beta * (1.0 - bar_prev) / (1.0 - bar)));
    for (int64_t i = 0; i < out.numel(); ++i)
        out[i] = mean_scale * (x_t[i] - eps_coef * eps[i]) + sigma * z[i];
    return out;
}

template <typename T>
Tensor<T> reverse_step(const Tensor<T>& x_t, const Tensor<T>& eps, int t,
                       const NoiseSchedule& sched, Rng& rng) {
    if (t != 1) {
        Tensor<T> z(x_t.shape());
        fill_normal(z, rng);
        return reverse_step_with_noise(x_t, eps, t, sched, z);
    }
    return reverse_step_with_noise(x_t, eps, t, sched, Tensor<T>());
}

template TensorF q_sample<float>(const TensorF&, int, const TensorF&, const NoiseSchedule&);
template TensorD q_sample<double>(const TensorD&, int, const TensorD&, const NoiseSchedule&);
template TensorF project_x0<float>(const TensorF&, const TensorF&, int, const NoiseSchedule&);
template TensorD project_x0<double>(const TensorD&, const TensorD&, int, const NoiseSchedule&);
template TensorF cfg_combine<float>(const TensorF&, const TensorF&, float);
template TensorD cfg_combine<double>(const TensorD&, const TensorD&, double);
template TensorF reverse_step_with_noise<float>(const TensorF&, const TensorF&, int,
                                                const NoiseSchedule&, const TensorF&);
template TensorD reverse_step_with_noise<double>(const TensorD&, const TensorD&, int,
                                                 const NoiseSchedule&, const TensorD&);
template TensorF reverse_step<float>(const TensorF&, const TensorF&, int, const NoiseSchedule&,
                                     Rng&);
template TensorD reverse_step<double>(const TensorD&, const TensorD&, int, const NoiseSchedule&,
                                      Rng&);

}  // namespace msp
