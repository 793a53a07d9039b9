#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ggan/tape.hpp"

namespace ggan {

enum class Act { relu, leaky_relu, tanh, sigmoid, linear, softmax };

const char* act_name(Act a);
Act act_from_name(const std::string& s);

// Fully connected stack. widths[i] is the output width of layer i; acts[i]
// its activation. Named output slices let one head carry e.g. mean and
// log-scale halves.
struct MlpSpec {
  std::size_t input = 0;
  std::vector<std::size_t> widths;
  std::vector<Act> acts;
  double lrelu_slope = 0.2;
  std::map<std::string, std::pair<std::size_t, std::size_t>> slices;  // name -> (start, len)

  std::size_t output() const { return widths.empty() ? input : widths.back(); }
  void validate() const;
};

MlpSpec mlp(std::size_t input, std::vector<std::size_t> widths, std::vector<Act> acts);

// Registers weight/bias tensors "<prefix>.w<i>" / "<prefix>.b<i>".
// Weights ~ N(0, 1/sqrt(fan_in)), biases zero.
void mlp_init(ParamStore& store, const std::string& prefix, const MlpSpec& spec, Owner owner,
              std::mt19937_64& rng);

Var mlp_forward(Tape& t, const std::string& prefix, const MlpSpec& spec, Var input);

std::vector<std::string> mlp_param_names(const std::string& prefix, const MlpSpec& spec);

struct GradReport {
  double max_rel_err = 0.0;
  bool pass = false;
  std::string worst_param;
};

// Central finite differences on every element of the named parameters against
// the tape gradient of build(). build() must be deterministic (noise frozen).
using LossBuilder = std::function<Var(Tape&)>;
GradReport grad_check(const LossBuilder& build, ParamStore& store,
                      const std::vector<std::string>& names, double tol, double h = 1e-5);

}  // namespace ggan
