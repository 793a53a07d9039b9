#include "ggan/stochastics.hpp"

#include <cmath>
#include <random>

namespace ggan {

NoiseBundle NoiseBundle::make(const Dag& dag, std::size_t batch, std::uint64_t seed,
                              const std::map<std::string, std::string>& share_groups) {
  NoiseBundle b;
  b.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(std::numeric_limits<double>::min(), 1.0);
  std::map<std::string, Tensor> group_cache;

  for (auto& node : dag.nodes) {
    auto it = share_groups.find(node.name);
    if (it != share_groups.end()) {
      auto cached = group_cache.find(it->second);
      if (cached != group_cache.end()) {
        b.noise[node.name] = cached->second;
        continue;
      }
    }
    Tensor t = Tensor::zeros({batch, node.domain.dim});
    if (node.domain.kind == Domain::Kind::continuous) {
      for (double& v : t.data) v = gauss(rng);
    } else {
      for (double& v : t.data) v = -std::log(-std::log(unif(rng)));
    }
    if (it != share_groups.end()) group_cache[it->second] = t;
    b.noise[node.name] = std::move(t);
  }
  return b;
}

Var gaussian_reparam(Tape& t, Var mean, Var log_scale, Var noise) {
  if (!t.val(mean).same_shape(t.val(log_scale)) || !t.val(mean).same_shape(t.val(noise)))
    throw GganError(Err::ShapeMismatch, "gaussian_reparam: shapes disagree");
  return t.add(mean, t.mul(t.exp_(log_scale), noise));
}

Var gumbel_softmax(Tape& t, Var logits, double temperature, Var gumbel_noise) {
  if (temperature <= 0.0)
    throw GganError(Err::NonPositiveTemperature, "gumbel_softmax temperature must be > 0");
  if (!t.val(logits).same_shape(t.val(gumbel_noise)))
    throw GganError(Err::ShapeMismatch, "gumbel_softmax: noise shape mismatch");
  return t.softmax_rows(t.scale(t.add(logits, gumbel_noise), 1.0 / temperature));
}

Tensor gumbel_argmax_onehot(const Tensor& logits, const Tensor& gumbel_noise) {
  const std::size_t B = logits.rows(), K = logits.cols();
  Tensor out = Tensor::zeros({B, K});
  for (std::size_t r = 0; r < B; ++r) {
    std::size_t best = 0;
    double bv = logits.at(r, 0) + gumbel_noise.at(r, 0);
    for (std::size_t c = 1; c < K; ++c) {
      const double v = logits.at(r, c) + gumbel_noise.at(r, c);
      if (v > bv) {
        bv = v;
        best = c;
      }
    }
    out.at(r, best) = 1.0;
  }
  return out;
}

static Var run_fn(Tape& t, const std::map<std::string, DependencyFn>& fns, const std::string& name,
                  const std::map<std::string, Var>& inputs, const NoiseBundle& noise) {
  auto it = fns.find(name);
  if (it == fns.end())
    throw GganError(Err::MissingDependencyFn, "no dependency function for '" + name + "'");
  return it->second(t, inputs, noise.find(name));
}

SampleTable ancestral_sample(Tape& t, const Dag& dag, const std::map<std::string, DependencyFn>& fns,
                             const NoiseBundle& noise) {
  SampleTable table;
  table.source = Source::p;
  for (auto& name : topological_order(dag)) {
    std::map<std::string, Var> inputs;
    for (auto& p : dag.parents(name)) inputs[p] = table.values.at(p);
    Var v = run_fn(t, fns, name, inputs, noise);
    table.batch = t.val(v).rows();
    table.values[name] = v;
  }
  return table;
}

SampleTable ancestral_sample(Tape& t, const Dag& dag, const RecognitionGraph& rec,
                             const std::map<std::string, DependencyFn>& fns, const NoiseBundle& noise,
                             const std::map<std::string, Tensor>& observed) {
  SampleTable table;
  table.source = Source::q;
  for (auto& name : dag.observed()) {
    auto it = observed.find(name);
    if (it == observed.end())
      throw GganError(Err::MissingObserved, "observed input '" + name + "' not supplied");
    Var v = t.leaf(it->second);
    table.batch = t.val(v).rows();
    table.values[name] = v;
  }
  for (auto& z : rec.elimination_order) {
    std::map<std::string, Var> inputs;
    for (auto& c : rec.conditioning.at(z)) inputs[c] = table.values.at(c);
    table.values[z] = run_fn(t, fns, z, inputs, noise);
  }
  return table;
}

}  // namespace ggan
