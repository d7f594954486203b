// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "msp/rng.hpp"
#include "msp/tensor.hpp"

namespace msp {

/// Forward-process constants. Coefficient arrays are kept in double;
/// timesteps are 1-based (t in [1, T]).
struct NoiseSchedule {
    int num_train_steps = 0;
    std::vector<double> betas;       // beta_t
    std::vector<double> alphas;      // 1 - beta_t
    std::vector<double> alpha_bars;  // prod_{s<=t} alpha_s

    double beta(int t) const { return betas[static_cast<size_t>(t - 1)]; }
    double alpha(int t) const { return alphas[static_cast<size_t>(t - 1)]; }
    double alpha_bar(int t) const { return alpha_bars[static_cast<size_t>(t - 1)]; }

    uint64_t fingerprint() const;
};

/// Linear beta schedule.
NoiseSchedule make_schedule(int num_steps, double beta_start, double beta_end);

/// Subsequence schedule over the given (ascending) original timesteps:
/// alpha_bar'_i = alpha_bar_{ts[i]}. Used to run fewer sampling steps than
/// the model was trained with.
NoiseSchedule respace_schedule(const NoiseSchedule& sched, const std::vector<int>& ascending_ts);

/// Strictly decreasing, evenly spaced timesteps from train_steps down to 1,
/// both endpoints included.
std::vector<int> strided_timesteps(int train_steps, int sample_steps);

/// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) noise
template <typename T>
Tensor<T> q_sample(const Tensor<T>& x0, int t, const Tensor<T>& noise, const NoiseSchedule& sched);

/// x0_hat = x_t / sqrt(abar_t) - sqrt(1 - abar_t) / sqrt(abar_t) * eps
template <typename T>
Tensor<T> project_x0(const Tensor<T>& x_t, const Tensor<T>& eps, int t, const NoiseSchedule& sched);

/// eps_u + scale * (eps_c - eps_u); scale == 1 returns eps_c exactly.
template <typename T>
Tensor<T> cfg_combine(const Tensor<T>& eps_u, const Tensor<T>& eps_c, T scale);

/// Ancestral step x_t -> x_{t-1}; no noise is added at t == 1.
template <typename T>
Tensor<T> reverse_step(const Tensor<T>& x_t, const Tensor<T>& eps, int t,
                       const NoiseSchedule& sched, Rng& rng);

/// Same step with the noise draw supplied by the caller (the sampler shares
/// one draw per step across segments).
template <typename T>
Tensor<T> reverse_step_with_noise(const Tensor<T>& x_t, const Tensor<T>& eps, int t,
                                  const NoiseSchedule& sched, const Tensor<T>& z);

}  // namespace msp
