#pragma once

#include <functional>
#include <map>
#include <string>

#include "ggan/graph.hpp"
#include "ggan/tape.hpp"

namespace ggan {

// Per-variable noise drawn once per minibatch: standard Gaussian for
// continuous variables, i.i.d. Gumbel(0,1) for categorical ones.
// Regeneration with the same seed reproduces the tensors exactly.
struct NoiseBundle {
  std::uint64_t seed = 0;
  std::map<std::string, Tensor> noise;

  // share_groups maps a variable name to a group key; all members of a group
  // receive the identical tensor (SSGAN's shared epsilon across time).
  static NoiseBundle make(const Dag& dag, std::size_t batch, std::uint64_t seed,
                          const std::map<std::string, std::string>& share_groups = {});

  const Tensor* find(const std::string& name) const {
    auto it = noise.find(name);
    return it == noise.end() ? nullptr : &it->second;
  }
};

enum class Source { p, q };

// One minibatch of joint assignments, as live tape nodes.
struct SampleTable {
  Source source = Source::p;
  std::map<std::string, Var> values;
  std::size_t batch = 0;

  Var at(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw GganError(Err::MissingVariable, "sample table has no '" + name + "'");
    return it->second;
  }
};

// Maps sampled inputs (and this variable's noise, when present) to the
// variable's value.
using DependencyFn =
    std::function<Var(Tape&, const std::map<std::string, Var>& inputs, const Tensor* noise)>;

Var gaussian_reparam(Tape& t, Var mean, Var log_scale, Var noise);
Var gumbel_softmax(Tape& t, Var logits, double temperature, Var gumbel_noise);

// Hard temperature-zero limit and plain evaluation helpers (no gradients).
Tensor gumbel_argmax_onehot(const Tensor& logits, const Tensor& gumbel_noise);

// p-side: walk the generative DAG in topological order; every variable must
// have a DependencyFn (roots consume only noise).
SampleTable ancestral_sample(Tape& t, const Dag& dag, const std::map<std::string, DependencyFn>& fns,
                             const NoiseBundle& noise);

// q-side: copy observed data in, then walk the recognition graph's
// elimination order running the latent extractors.
SampleTable ancestral_sample(Tape& t, const Dag& dag, const RecognitionGraph& rec,
                             const std::map<std::string, DependencyFn>& fns, const NoiseBundle& noise,
                             const std::map<std::string, Tensor>& observed);

}  // namespace ggan
