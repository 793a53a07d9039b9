#include "ggan/mlp.hpp"

#include <cmath>

namespace ggan {

const char* act_name(Act a) {
  switch (a) {
    case Act::relu: return "relu";
    case Act::leaky_relu: return "leaky_relu";
    case Act::tanh: return "tanh";
    case Act::sigmoid: return "sigmoid";
    case Act::linear: return "linear";
    case Act::softmax: return "softmax";
  }
  return "?";
}

Act act_from_name(const std::string& s) {
  if (s == "relu") return Act::relu;
  if (s == "leaky_relu") return Act::leaky_relu;
  if (s == "tanh") return Act::tanh;
  if (s == "sigmoid") return Act::sigmoid;
  if (s == "linear") return Act::linear;
  if (s == "softmax") return Act::softmax;
  throw GganError(Err::BadParameter, "unknown activation '" + s + "'");
}

void MlpSpec::validate() const {
  if (input < 1) throw GganError(Err::BadDimension, "mlp input width must be >= 1");
  if (widths.size() != acts.size())
    throw GganError(Err::BadDimension, "mlp widths/acts length mismatch");
  for (auto w : widths)
    if (w < 1) throw GganError(Err::BadDimension, "mlp layer width must be >= 1");
  if (lrelu_slope <= 0.0 || lrelu_slope >= 1.0)
    throw GganError(Err::BadParameter, "leaky relu slope must be in (0,1)");
  for (auto& [name, sl] : slices)
    if (sl.first + sl.second > output())
      throw GganError(Err::BadDimension, "slice '" + name + "' exceeds output width");
}

MlpSpec mlp(std::size_t input, std::vector<std::size_t> widths, std::vector<Act> acts) {
  MlpSpec s;
  s.input = input;
  s.widths = std::move(widths);
  s.acts = std::move(acts);
  s.validate();
  return s;
}

void mlp_init(ParamStore& store, const std::string& prefix, const MlpSpec& spec, Owner owner,
              std::mt19937_64& rng) {
  spec.validate();
  std::size_t in = spec.input;
  for (std::size_t i = 0; i < spec.widths.size(); ++i) {
    const std::size_t out = spec.widths[i];
    store.add(prefix + ".w" + std::to_string(i),
              gaussian_init({in, out}, 1.0 / std::sqrt(double(in)), rng), owner);
    store.add(prefix + ".b" + std::to_string(i), Tensor::zeros({1, out}), owner);
    in = out;
  }
}

Var mlp_forward(Tape& t, const std::string& prefix, const MlpSpec& spec, Var input) {
  if (t.val(input).cols() != spec.input)
    throw GganError(Err::ShapeMismatch, "mlp '" + prefix + "': input width " +
                                            std::to_string(t.val(input).cols()) + " != spec " +
                                            std::to_string(spec.input));
  Var h = input;
  for (std::size_t i = 0; i < spec.widths.size(); ++i) {
    Var w = t.param(prefix + ".w" + std::to_string(i));
    Var b = t.param(prefix + ".b" + std::to_string(i));
    h = t.linear(h, w, b);
    switch (spec.acts[i]) {
      case Act::relu: h = t.relu(h); break;
      case Act::leaky_relu: h = t.leaky_relu(h, spec.lrelu_slope); break;
      case Act::tanh: h = t.tanh_(h); break;
      case Act::sigmoid: h = t.sigmoid(h); break;
      case Act::linear: break;
      case Act::softmax: h = t.softmax_rows(h); break;
    }
  }
  return h;
}

std::vector<std::string> mlp_param_names(const std::string& prefix, const MlpSpec& spec) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.widths.size(); ++i) {
    names.push_back(prefix + ".w" + std::to_string(i));
    names.push_back(prefix + ".b" + std::to_string(i));
  }
  return names;
}

GradReport grad_check(const LossBuilder& build, ParamStore& store,
                      const std::vector<std::string>& names, double tol, double h) {
  Tape t(&store);
  Var loss = build(t);
  t.backward(loss);
  auto analytic = t.param_grads();

  auto loss_at = [&]() {
    Tape ft(&store);
    return ft.val(build(ft)).data[0];
  };

  GradReport rep;
  for (const auto& name : names) {
    Param& p = store.get(name);
    const Tensor* ga = analytic.count(name) ? &analytic.at(name) : nullptr;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value.data[i];
      p.value.data[i] = saved + h;
      const double up = loss_at();
      p.value.data[i] = saved - h;
      const double dn = loss_at();
      p.value.data[i] = saved;
      const double fd = (up - dn) / (2.0 * h);
      const double an = ga ? ga->data[i] : 0.0;
      const double err = std::abs(an - fd) / std::max(1e-6, std::abs(an) + std::abs(fd));
      if (err > rep.max_rel_err) {
        rep.max_rel_err = err;
        rep.worst_param = name + "[" + std::to_string(i) + "]";
      }
    }
  }
  rep.pass = rep.max_rel_err <= tol;
  return rep;
}

}  // namespace ggan
