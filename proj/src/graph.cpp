#include "ggan/graph.hpp"

#include <algorithm>

namespace ggan {

void Domain::validate() const {
  if (kind == Kind::continuous && dim < 1)
    throw GganError(Err::BadDimension, "continuous domain needs dim >= 1");
  if (kind == Kind::categorical && dim < 2)
    throw GganError(Err::BadDimension, "categorical domain needs K >= 2");
}

bool Dag::has(const std::string& name) const {
  for (auto& n : nodes)
    if (n.name == name) return true;
  return false;
}

const VariableSpec& Dag::var(const std::string& name) const {
  for (auto& n : nodes)
    if (n.name == name) return n;
  throw GganError(Err::UnknownVariable, "no variable '" + name + "'");
}

std::size_t Dag::index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return i;
  throw GganError(Err::UnknownVariable, "no variable '" + name + "'");
}

static std::vector<std::string> sorted_by_declaration(const Dag& dag, std::set<std::string> names) {
  std::vector<std::string> out;
  for (auto& n : dag.nodes)
    if (names.count(n.name)) out.push_back(n.name);
  return out;
}

std::vector<std::string> Dag::parents(const std::string& name) const {
  std::set<std::string> s;
  for (auto& [p, c] : edges)
    if (c == name) s.insert(p);
  return sorted_by_declaration(*this, std::move(s));
}

std::vector<std::string> Dag::children(const std::string& name) const {
  std::set<std::string> s;
  for (auto& [p, c] : edges)
    if (p == name) s.insert(c);
  return sorted_by_declaration(*this, std::move(s));
}

std::vector<std::string> Dag::latents() const {
  std::vector<std::string> out;
  for (auto& n : nodes)
    if (n.kind == VarKind::latent) out.push_back(n.name);
  return out;
}

std::vector<std::string> Dag::observed() const {
  std::vector<std::string> out;
  for (auto& n : nodes)
    if (n.kind == VarKind::observed) out.push_back(n.name);
  return out;
}

// Kahn's algorithm over an explicit edge list; among ready nodes the lowest
// declaration index goes first. `restrict_to` limits both nodes and edges.
static std::vector<std::string> kahn(const Dag& dag, const std::set<std::string>& restrict_to,
                                     bool reversed) {
  std::vector<std::string> names;
  for (auto& n : dag.nodes)
    if (restrict_to.count(n.name)) names.push_back(n.name);
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> out_edges;
  for (auto& n : names) indegree[n] = 0;
  for (auto& [p, c] : dag.edges) {
    if (!restrict_to.count(p) || !restrict_to.count(c)) continue;
    const std::string& from = reversed ? c : p;
    const std::string& to = reversed ? p : c;
    out_edges[from].push_back(to);
    ++indegree[to];
  }
  std::vector<std::string> order;
  std::set<std::string> done;
  while (order.size() < names.size()) {
    bool advanced = false;
    for (auto& n : names) {
      if (done.count(n) || indegree[n] != 0) continue;
      order.push_back(n);
      done.insert(n);
      for (auto& t : out_edges[n]) --indegree[t];
      advanced = true;
      break;
    }
    if (!advanced) throw GganError(Err::CycleDetected, "graph contains a cycle");
  }
  return order;
}

ValidationResult validate_dag(const Dag& dag) {
  ValidationResult res;
  auto flag = [&](Err kind, std::vector<std::string> offending, std::string msg) {
    res.ok = false;
    res.issues.push_back({kind, std::move(offending), std::move(msg)});
  };

  std::set<std::string> seen;
  for (auto& n : dag.nodes) {
    if (!seen.insert(n.name).second)
      flag(Err::DuplicateName, {n.name}, "duplicate variable name '" + n.name + "'");
    try {
      n.domain.validate();
    } catch (const GganError& e) {
      flag(e.kind(), {n.name}, e.what());
    }
  }
  for (auto& [p, c] : dag.edges) {
    for (auto* e : {&p, &c})
      if (!seen.count(*e)) flag(Err::UnknownVariable, {*e}, "edge endpoint '" + *e + "' undeclared");
  }
  if (!res.ok) return res;

  for (auto& [p, c] : dag.edges) {
    if (dag.var(c).kind == VarKind::latent && dag.var(p).kind == VarKind::observed)
      flag(Err::ObservedParentOfLatent, {p, c},
           "observed '" + p + "' is a parent of latent '" + c + "'");
  }

  std::set<std::string> all(seen);
  try {
    kahn(dag, all, false);
  } catch (const GganError&) {
    flag(Err::CycleDetected, {}, "graph contains a cycle");
  }
  return res;
}

void require_valid(const Dag& dag) {
  auto res = validate_dag(dag);
  if (!res.ok) throw GganError(res.issues[0].kind, res.issues[0].message);
}

std::vector<std::string> topological_order(const Dag& dag) {
  std::set<std::string> all;
  for (auto& n : dag.nodes) all.insert(n.name);
  return kahn(dag, all, false);
}

std::set<std::string> markov_blanket(const Dag& dag, const std::string& v) {
  dag.var(v);  // throws UnknownVariable
  std::set<std::string> blanket;
  for (auto& p : dag.parents(v)) blanket.insert(p);
  for (auto& c : dag.children(v)) {
    blanket.insert(c);
    for (auto& cp : dag.parents(c)) blanket.insert(cp);
  }
  blanket.erase(v);
  return blanket;
}

RecognitionGraph inverse_factorization(const Dag& dag) {
  require_valid(dag);
  std::set<std::string> latent_set;
  for (auto& z : dag.latents()) latent_set.insert(z);

  // Leaves-to-root: run Kahn on the latent subgraph with edges reversed, so
  // sinks come out first.
  std::vector<std::string> order = kahn(dag, latent_set, true);

  RecognitionGraph rec;
  std::set<std::string> placed;
  for (auto& x : dag.observed()) placed.insert(x);
  for (auto& z : order) {
    std::set<std::string> cond;
    for (auto& b : markov_blanket(dag, z))
      if (placed.count(b)) cond.insert(b);
    rec.conditioning[z] = sorted_by_declaration(dag, std::move(cond));
    rec.elimination_order.push_back(z);
    placed.insert(z);
  }
  return rec;
}

RecognitionGraph mean_field(const Dag& dag,
                            const std::map<std::string, std::vector<std::string>>& overrides) {
  require_valid(dag);
  const auto obs = dag.observed();
  for (auto& [z, subset] : overrides) {
    if (!dag.has(z) || dag.var(z).kind != VarKind::latent)
      throw GganError(Err::UnknownVariable, "override target '" + z + "' is not a latent variable");
    for (auto& x : subset)
      if (!dag.has(x) || dag.var(x).kind != VarKind::observed)
        throw GganError(Err::UnknownVariable, "override entry '" + x + "' is not observed");
  }
  RecognitionGraph rec;
  for (auto& z : dag.latents()) {
    auto it = overrides.find(z);
    rec.conditioning[z] = it != overrides.end() ? it->second : obs;
    rec.elimination_order.push_back(z);
  }
  return rec;
}

FactorSet extract_factors(const Dag& dag) {
  require_valid(dag);
  FactorSet set;
  std::map<std::string, std::size_t> group_index;  // signature -> factor index

  for (auto& v : topological_order(dag)) {
    const auto parents = dag.parents(v);
    if (parents.empty()) continue;  // root priors are fixed; dropped from the factor set

    std::vector<std::string> instance{v};
    instance.insert(instance.end(), parents.begin(), parents.end());

    // Two instances share a discriminator iff every position carries the same
    // tie group and the same domain. Untied variables key by their own name.
    std::string signature;
    for (auto& name : instance) {
      const auto& spec = dag.var(name);
      signature += spec.tie_group.value_or(name);
      signature += spec.domain.kind == Domain::Kind::categorical ? ":c" : ":r";
      signature += std::to_string(spec.domain.dim) + "|";
    }

    auto it = group_index.find(signature);
    if (it == group_index.end()) {
      Factor f;
      f.variables = instance;
      f.tie_group = signature;
      f.instances.push_back(std::move(instance));
      group_index[signature] = set.factors.size();
      set.factors.push_back(std::move(f));
    } else {
      set.factors[it->second].instances.push_back(std::move(instance));
    }
  }
  return set;
}

}  // namespace ggan
