#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ggan/errors.hpp"

namespace ggan {

enum class VarKind { latent, observed };

struct Domain {
  enum class Kind { continuous, categorical };
  Kind kind = Kind::continuous;
  std::size_t dim = 1;  // feature dim for continuous, K for categorical

  static Domain continuous(std::size_t dim) { return {Kind::continuous, dim}; }
  static Domain categorical(std::size_t K) { return {Kind::categorical, K}; }
  bool operator==(const Domain&) const = default;
  void validate() const;
};

struct VariableSpec {
  std::string name;
  VarKind kind = VarKind::latent;
  Domain domain;
  std::optional<std::string> tie_group;
  bool operator==(const VariableSpec&) const = default;
};

// The generative Bayesian network. Node declaration order is meaningful: it
// breaks ties in topological and elimination orders.
struct Dag {
  std::vector<VariableSpec> nodes;
  std::vector<std::pair<std::string, std::string>> edges;  // (parent, child)

  bool has(const std::string& name) const;
  const VariableSpec& var(const std::string& name) const;
  std::size_t index(const std::string& name) const;
  std::vector<std::string> parents(const std::string& name) const;   // declaration order
  std::vector<std::string> children(const std::string& name) const;  // declaration order
  std::vector<std::string> latents() const;
  std::vector<std::string> observed() const;
  bool operator==(const Dag&) const = default;
};

struct ValidationIssue {
  Err kind;
  std::vector<std::string> offending;
  std::string message;
};

struct ValidationResult {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

// Inference structure: for each latent, the ordered set it conditions on.
// elimination_order is the ancestral sampling order of the latents.
struct RecognitionGraph {
  std::map<std::string, std::vector<std::string>> conditioning;
  std::vector<std::string> elimination_order;
};

// One discriminator target. `variables` names the representative instance;
// every tuple in `instances` shares the discriminator.
struct Factor {
  std::vector<std::string> variables;
  std::string tie_group;
  std::vector<std::vector<std::string>> instances;
};

struct FactorSet {
  std::vector<Factor> factors;
  // Objective averaging divides by the instance count, not the group count.
  std::size_t instance_count() const {
    std::size_t n = 0;
    for (auto& f : factors) n += f.instances.size();
    return n;
  }
};

// Checks acyclicity, name uniqueness, edge endpoints, and the rule that a
// latent variable only has latent parents.
ValidationResult validate_dag(const Dag& dag);
void require_valid(const Dag& dag);  // throws the first issue

// Deterministic: ties broken by declaration order. Throws CycleDetected.
std::vector<std::string> topological_order(const Dag& dag);

// parents(v) + children(v) + co-parents(v), excluding v.
std::set<std::string> markov_blanket(const Dag& dag, const std::string& v);

// Builds the recognition structure by inverting the generative graph
// leaves-to-root: latents in reverse topological order of the latent
// subgraph (ties by declaration order); each latent conditions on the part
// of its Markov blanket already placed, observations included from the start.
RecognitionGraph inverse_factorization(const Dag& dag);

// Every latent conditions on the full observed set, except where `overrides`
// narrows it to a named observed subset.
RecognitionGraph mean_field(const Dag& dag,
                            const std::map<std::string, std::vector<std::string>>& overrides = {});

// One (v, parents(v)) instance per non-root variable; root factors are
// dropped (fixed priors surface through their children). Instances whose
// positions share tie groups and domains collapse into one Factor.
FactorSet extract_factors(const Dag& dag);

}  // namespace ggan
