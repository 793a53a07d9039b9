#include "ggan/params.hpp"

#include <cmath>

namespace ggan {

const char* err_name(Err e) {
  switch (e) {
    case Err::CycleDetected: return "CycleDetected";
    case Err::DuplicateName: return "DuplicateName";
    case Err::ObservedParentOfLatent: return "ObservedParentOfLatent";
    case Err::UnknownVariable: return "UnknownVariable";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::NonPositiveTemperature: return "NonPositiveTemperature";
    case Err::MissingDependencyFn: return "MissingDependencyFn";
    case Err::MissingObserved: return "MissingObserved";
    case Err::MissingVariable: return "MissingVariable";
    case Err::NonFiniteGradient: return "NonFiniteGradient";
    case Err::NonFiniteLoss: return "NonFiniteLoss";
    case Err::BadDimension: return "BadDimension";
    case Err::BadParameter: return "BadParameter";
    case Err::BadMagic: return "BadMagic";
    case Err::TruncatedFile: return "TruncatedFile";
    case Err::VersionMismatch: return "VersionMismatch";
    case Err::CorruptManifest: return "CorruptManifest";
    case Err::IoError: return "IoError";
    case Err::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

const char* owner_name(Owner o) {
  switch (o) {
    case Owner::generative: return "generative";
    case Owner::recognition: return "recognition";
    case Owner::discriminators: return "discriminators";
    case Owner::prior: return "prior";
  }
  return "?";
}

Owner owner_from_name(const std::string& s) {
  if (s == "generative") return Owner::generative;
  if (s == "recognition") return Owner::recognition;
  if (s == "discriminators") return Owner::discriminators;
  if (s == "prior") return Owner::prior;
  throw GganError(Err::CorruptManifest, "unknown owner group '" + s + "'");
}

Param& ParamStore::add(const std::string& name, Tensor value, Owner owner) {
  if (items_.count(name)) throw GganError(Err::DuplicateName, "parameter '" + name + "' already exists");
  Param p;
  p.m = Tensor::zeros(value.shape);
  p.v = Tensor::zeros(value.shape);
  p.value = std::move(value);
  p.owner = owner;
  return items_.emplace(name, std::move(p)).first->second;
}

Param& ParamStore::get(const std::string& name) {
  auto it = items_.find(name);
  if (it == items_.end()) throw GganError(Err::UnknownVariable, "no parameter '" + name + "'");
  return it->second;
}

const Param& ParamStore::get(const std::string& name) const {
  auto it = items_.find(name);
  if (it == items_.end()) throw GganError(Err::UnknownVariable, "no parameter '" + name + "'");
  return it->second;
}

long ParamStore::adam_steps(Owner group) const {
  auto it = step_count_.find(group);
  return it == step_count_.end() ? 0 : it->second;
}

void ParamStore::adam_step(const std::map<std::string, Tensor>& grads, const std::set<Owner>& groups,
                           const AdamConfig& cfg, int sign) {
  std::set<Owner> touched;
  for (auto& [name, g] : grads) {
    auto it = items_.find(name);
    if (it == items_.end()) continue;
    if (!groups.count(it->second.owner)) continue;
    if (!g.all_finite()) throw GganError(Err::NonFiniteGradient, "gradient for '" + name + "' is not finite");
    touched.insert(it->second.owner);
  }
  std::map<Owner, long> t;
  for (Owner o : touched) t[o] = ++step_count_[o];

  for (auto& [name, g] : grads) {
    auto it = items_.find(name);
    if (it == items_.end()) continue;
    Param& p = it->second;
    if (!groups.count(p.owner)) continue;
    if (!g.same_shape(p.value)) throw GganError(Err::ShapeMismatch, "gradient shape mismatch for '" + name + "'");
    const long step = t[p.owner];
    const double bc1 = 1.0 - std::pow(cfg.beta1, double(step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, double(step));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double gi = sign < 0 ? g.data[i] : -g.data[i];
      p.m.data[i] = cfg.beta1 * p.m.data[i] + (1.0 - cfg.beta1) * gi;
      p.v.data[i] = cfg.beta2 * p.v.data[i] + (1.0 - cfg.beta2) * gi * gi;
      const double mhat = p.m.data[i] / bc1;
      const double vhat = p.v.data[i] / bc2;
      p.value.data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

Tensor gaussian_init(std::vector<std::size_t> shape, double stddev, std::mt19937_64& rng) {
  Tensor t = Tensor::zeros(std::move(shape));
  std::normal_distribution<double> n(0.0, stddev);
  for (double& v : t.data) v = n(rng);
  return t;
}

}  // namespace ggan
