#pragma once

#include <map>
#include <random>
#include <set>
#include <string>

#include "ggan/tensor.hpp"

namespace ggan {

// Parameter ownership groups. Updates touch exactly one subset of groups:
// discriminator steps update {discriminators}, model steps update
// {generative, recognition, prior}.
enum class Owner { generative, recognition, discriminators, prior };

const char* owner_name(Owner o);
Owner owner_from_name(const std::string& s);

struct Param {
  Tensor value;
  Tensor m;  // Adam first moment
  Tensor v;  // Adam second moment
  Owner owner = Owner::generative;
};

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class ParamStore {
 public:
  Param& add(const std::string& name, Tensor value, Owner owner);
  Param& get(const std::string& name);
  const Param& get(const std::string& name) const;
  bool has(const std::string& name) const { return items_.count(name) != 0; }

  const std::map<std::string, Param>& items() const { return items_; }
  std::map<std::string, Param>& items() { return items_; }

  // One bias-corrected Adam step on every parameter in `groups` for which a
  // gradient is supplied. `sign` is -1 for descent, +1 for ascent.
  // Throws NonFiniteGradient if any supplied gradient is non-finite.
  void adam_step(const std::map<std::string, Tensor>& grads, const std::set<Owner>& groups,
                 const AdamConfig& cfg, int sign = -1);

  long adam_steps(Owner group) const;
  void set_adam_steps(Owner group, long n) { step_count_[group] = n; }

 private:
  std::map<std::string, Param> items_;
  std::map<Owner, long> step_count_;
};

// Gaussian init helper: entries i.i.d. N(0, stddev^2).
Tensor gaussian_init(std::vector<std::size_t> shape, double stddev, std::mt19937_64& rng);

}  // namespace ggan
