#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <random>

#include "ggan/mlp.hpp"
#include "ggan/stochastics.hpp"
#include "ggan/tabular.hpp"

namespace ggan {

// One tied discriminator: all instances of factors.factors[factor_index]
// share its parameters. Inputs are the instance variables concatenated in
// factor order, optionally through per-variable feature stacks first.
struct FactorDiscriminator {
  std::size_t factor_index = 0;
  std::string prefix;                            // parameter prefix, e.g. "disc.xh"
  std::vector<std::optional<MlpSpec>> features;  // per variable position; empty = raw
  MlpSpec trunk;                                 // ends in a 1-unit linear logit
};

enum class Mode { local, global };
enum class GenLoss { minimax, non_saturating };

struct TrainerConfig {
  Mode mode = Mode::local;
  std::size_t batch = 100;
  AdamConfig adam;           // lr, beta1=0.5, beta2=0.999
  long steps = 0;
  GenLoss gen_loss = GenLoss::non_saturating;
  std::uint64_t seed = 0;
  int disc_steps_per_model_step = 1;
  long eval_every = 0;       // 0 = never
  long checkpoint_every = 0; // used by the CLI layer
  void validate() const;
};

// Everything the training loop needs to draw p- and q-minibatches and run the
// discriminators. Instances (GMGAN, SSGAN, custom) produce one of these.
struct ModelBundle {
  Dag dag;
  RecognitionGraph rec;
  FactorSet factors;
  std::map<std::string, DependencyFn> p_fns;
  std::map<std::string, DependencyFn> q_fns;
  std::map<std::string, std::string> noise_share;  // p-side shared draws
  std::vector<FactorDiscriminator> discs;          // one per factor group
  MlpSpec global_disc;                             // all variables concatenated
  std::string global_prefix = "disc.global";
  std::vector<std::string> global_order;           // concatenation order for the global input

  SampleTable sample_p(Tape& t, std::size_t batch, std::uint64_t noise_seed) const;
  SampleTable sample_q(Tape& t, const std::map<std::string, Tensor>& observed,
                       std::uint64_t noise_seed) const;
};

struct Objective {
  Var value = -1;                  // divergence estimate (maximized by the discriminators)
  std::vector<double> per_factor;  // one term per factor instance
};

// (1/|F|) sum over instances of E_q log D_A + E_p log(1 - D_A), minibatch
// means, logits kept in stable softplus form.
Objective local_objective(Tape& t, const ModelBundle& bundle, const SampleTable& table_p,
                          const SampleTable& table_q);

// ALI-style single discriminator over all variables jointly.
Objective global_objective(Tape& t, const ModelBundle& bundle, const SampleTable& table_p,
                           const SampleTable& table_q);

struct Dataset {
  const Tensor* samples = nullptr;  // [N, D]
  std::size_t size() const { return samples ? samples->rows() : 0; }
  Tensor gather(const std::vector<std::size_t>& idx) const;
};

struct TrainerState {
  ParamStore store;
  long step = 0;
  std::mt19937_64 rng;
};

struct MetricsRow {
  long step = 0;
  std::string mode;
  double objective = 0.0;
  std::vector<double> per_factor;
  std::vector<std::pair<std::string, double>> evals;
};

using EvalHook = std::function<std::vector<std::pair<std::string, double>>(TrainerState&)>;
using StepHook = std::function<void(TrainerState&)>;

// One Adam ascent step on the discriminators; theta/phi/prior untouched.
// Returns the divergence estimate on the supplied minibatch.
double disc_step(TrainerState& state, const TrainerConfig& cfg, const ModelBundle& bundle,
                 const std::map<std::string, Tensor>& observed_batch, std::uint64_t seed_p,
                 std::uint64_t seed_q, std::vector<double>* per_factor = nullptr);

// One Adam step on generative/recognition/prior parameters; psi untouched.
double model_step(TrainerState& state, const TrainerConfig& cfg, const ModelBundle& bundle,
                  const std::map<std::string, Tensor>& observed_batch, std::uint64_t seed_p,
                  std::uint64_t seed_q, std::vector<double>* per_factor = nullptr);

// Alternates disc_step and model_step with fresh minibatches per phase.
// Deterministic given state.rng. Aborts with NonFiniteLoss on divergence.
std::vector<MetricsRow> train(TrainerState& state, const TrainerConfig& cfg, const ModelBundle& bundle,
                              const Dataset& data,
                              const std::function<std::map<std::string, Tensor>(const Tensor&)>& split_observed,
                              const EvalHook& eval_hook = {}, std::ostream* csv = nullptr,
                              const StepHook& step_hook = {});

void write_metrics_header(std::ostream& os);
void write_metrics_row(std::ostream& os, const MetricsRow& row);

}  // namespace ggan
