#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ggan/params.hpp"
#include "ggan/tensor.hpp"

namespace ggan {

using Var = int;

// Reverse-mode tape over rank-2 tensors. Values are computed eagerly; each op
// records a closure that scatters the output gradient to its inputs.
//
// Parameters bound through param() are deduplicated per tape, so a parameter
// used at several sites (tied weights) accumulates all its gradient in one
// node.
class Tape {
 public:
  explicit Tape(ParamStore* store = nullptr) : store_(store) {}

  Var leaf(Tensor value);
  Var param(const std::string& name);

  const Tensor& val(Var v) const { return nodes_[std::size_t(v)].value; }
  const Tensor& grad(Var v) const { return nodes_[std::size_t(v)].grad; }

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double c);
  Var add_scalar(Var a, double c);
  // x[B,n] * w[n,m] (+ bias row b[1,m] broadcast over rows when b >= 0)
  Var linear(Var x, Var w, Var b = -1);
  Var relu(Var a);
  Var leaky_relu(Var a, double slope);
  Var tanh_(Var a);
  Var sigmoid(Var a);
  Var exp_(Var a);
  Var softplus(Var a);
  Var softmax_rows(Var a);
  Var concat_cols(const std::vector<Var>& xs);
  Var slice_cols(Var a, std::size_t start, std::size_t len);
  // [B,K] of -0.5 * ||h_b - mu_k||^2
  Var neg_half_sqdist(Var h, Var mu);
  Var sum_all(Var a);
  Var mean_all(Var a);

  // Seeds d(loss)/d(loss) = 1 and runs the recorded closures in reverse.
  void backward(Var scalar_loss);

  // Gradients of every bound parameter after backward(); unbound parameters
  // are absent (callers treat absence as zero).
  std::map<std::string, Tensor> param_grads() const;

  ParamStore* store() const { return store_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void()> back;  // empty for leaves
  };

  Var push(Tensor value, std::function<void()> back = {});
  Tensor& g(Var v) { return nodes_[std::size_t(v)].grad; }

  ParamStore* store_;
  std::vector<Node> nodes_;
  std::map<std::string, Var> param_vars_;
};

// Mean binary cross-entropy against a constant target in {0,1}, computed in
// stable logit form: mean(softplus(logit) - target * logit).
Var bce_logits(Tape& t, Var logit, double target);
double bce_logits_value(double logit, double target);

}  // namespace ggan
