#pragma once

#include "ggan/trainer.hpp"

namespace ggan {

// k -> h -> x with a K-component Gaussian-mixture latent. Uniform mixture
// weights and identity covariances are fixed; only the component means train.
struct GmganConfig {
  std::size_t K = 10;
  std::size_t dim_h = 128;
  std::size_t dim_x = 0;
  std::vector<std::size_t> g_hidden{64};
  std::vector<std::size_t> e_hidden{64};
  std::vector<std::size_t> d_hidden{64, 64};
  double tau = 0.1;  // Gumbel-softmax temperature
  double mu_scale = 5.0;  // magnitude of the signed one-hot mean init
  bool gaussian_head = false;  // extractor emits (mean, log-scale) instead of a point mass
};

struct GmganBundle {
  GmganConfig cfg;
  ModelBundle core;
};

struct SsganConfig {
  std::size_t T = 4;
  std::size_t dim_h = 128;
  std::size_t dim_v = 8;
  std::size_t dim_x = 0;  // flattened frame size
  std::vector<std::size_t> o_hidden{32};
  std::vector<std::size_t> g_hidden{64};
  std::vector<std::size_t> e1_hidden{64};
  std::vector<std::size_t> e2_hidden{64};
  std::vector<std::size_t> d_hidden{64, 64};
  bool shared_epsilon = true;  // one transition-noise draw reused for every t
};

struct SsganBundle {
  SsganConfig cfg;
  ModelBundle core;
};

// Registers all parameters in `store` and wires the dependency functions.
// GMGAN uses the inverse-factorization recognition model; factor set is
// {(x,h), (h,k)}.
GmganBundle build_gmgan(const GmganConfig& cfg, ParamStore& store, std::mt19937_64& rng);

// SSGAN uses the mean-field recognition model with v_t conditioned on x_t
// only. Transition/generator/per-frame extractor parameters are shared
// across time; factor groups are (v_{t+1}, v_t) and (x_t, h, v_t), 2T-1
// instances total.
SsganBundle build_ssgan(const SsganConfig& cfg, ParamStore& store, std::mt19937_64& rng);

// Posterior over mixture components: softmax_k( -1/2 ||h - mu_k||^2 ) for
// uniform weights and identity covariance. h is [B, d], mu is [K, d].
Tensor gmgan_posterior_k(const Tensor& h, const Tensor& mu);

// Generates samples with a hard one-hot k: h = mu_k + noise, x = G(h).
Tensor gmgan_sample_x(const GmganBundle& bundle, ParamStore& store, std::size_t k,
                      std::size_t n, std::uint64_t seed);

// Reconstruction path G(E(x)).
Tensor gmgan_reconstruct(const GmganBundle& bundle, ParamStore& store, const Tensor& x);
Tensor gmgan_extract_h(const GmganBundle& bundle, ParamStore& store, const Tensor& x);

struct Rollout {
  Tensor frames;  // [steps, dim_x]
  Tensor vpath;   // [steps, dim_v]
};

// Iterates the transition operator then the generator for `steps` frames,
// possibly far beyond the training horizon.
Rollout ssgan_rollout(const SsganBundle& bundle, ParamStore& store, const Tensor& h,
                      const Tensor& v1, std::size_t steps, std::uint64_t noise_seed);

// Re-renders a driving clip's inferred motion with a different content code:
// v_t = E2(driving frame t), output_t = G(content_h, v_t).
Rollout motion_analogy(const SsganBundle& bundle, ParamStore& store, const Tensor& content_h,
                       const Tensor& driving_frames);

// Per-frame motion codes E2(x_t) and the clip content code E1(x_{1:T}).
Tensor ssgan_extract_v(const SsganBundle& bundle, ParamStore& store, const Tensor& frames);
Tensor ssgan_extract_h(const SsganBundle& bundle, ParamStore& store, const Tensor& clips);
Tensor ssgan_reconstruct(const SsganBundle& bundle, ParamStore& store, const Tensor& clips);

// Generic wiring for a user-declared graph: every variable gets an MLP
// dependency function of its parents plus noise; categorical variables go
// through the Gumbel-softmax relaxation.
struct CustomConfig {
  std::vector<std::size_t> hidden{64};
  std::vector<std::size_t> d_hidden{64, 64};
  double tau = 0.1;
  bool mean_field = false;
  std::map<std::string, std::vector<std::string>> overrides;
};

ModelBundle build_custom(const Dag& dag, const CustomConfig& cfg, ParamStore& store,
                         std::mt19937_64& rng);

}  // namespace ggan
