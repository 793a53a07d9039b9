#include <cstdio>

#include "doctest.h"
#include "ggan/graph.hpp"
#include "ggan/graph_io.hpp"

using namespace ggan;

namespace {

Dag gmgan_dag() {
  Dag d;
  d.nodes = {{"k", VarKind::latent, Domain::categorical(3), {}},
             {"h", VarKind::latent, Domain::continuous(4), {}},
             {"x", VarKind::observed, Domain::continuous(8), {}}};
  d.edges = {{"k", "h"}, {"h", "x"}};
  return d;
}

Dag chain_dag(std::size_t T) {
  Dag d;
  d.nodes.push_back({"h", VarKind::latent, Domain::continuous(4), {}});
  for (std::size_t t = 1; t <= T; ++t)
    d.nodes.push_back({"v" + std::to_string(t), VarKind::latent, Domain::continuous(2), std::string("v")});
  for (std::size_t t = 1; t <= T; ++t)
    d.nodes.push_back({"x" + std::to_string(t), VarKind::observed, Domain::continuous(9), std::string("x")});
  for (std::size_t t = 1; t < T; ++t)
    d.edges.emplace_back("v" + std::to_string(t), "v" + std::to_string(t + 1));
  for (std::size_t t = 1; t <= T; ++t) {
    d.edges.emplace_back("h", "x" + std::to_string(t));
    d.edges.emplace_back("v" + std::to_string(t), "x" + std::to_string(t));
  }
  return d;
}

}  // namespace

TEST_CASE("validate_dag accepts the mixture graph") {
  auto r = validate_dag(gmgan_dag());
  CHECK(r.ok);
  CHECK(r.issues.empty());
}

TEST_CASE("validate_dag flags duplicate names") {
  Dag d = gmgan_dag();
  d.nodes.push_back({"k", VarKind::latent, Domain::categorical(2), {}});
  auto r = validate_dag(d);
  CHECK_FALSE(r.ok);
  CHECK(r.issues[0].kind == Err::DuplicateName);
}

TEST_CASE("validate_dag flags unknown edge endpoints") {
  Dag d = gmgan_dag();
  d.edges.emplace_back("h", "ghost");
  auto r = validate_dag(d);
  CHECK_FALSE(r.ok);
  CHECK(r.issues[0].kind == Err::UnknownVariable);
}

TEST_CASE("validate_dag flags observed parent of latent") {
  Dag d;
  d.nodes = {{"x", VarKind::observed, Domain::continuous(2), {}},
             {"z", VarKind::latent, Domain::continuous(2), {}}};
  d.edges = {{"x", "z"}};
  auto r = validate_dag(d);
  CHECK_FALSE(r.ok);
  CHECK(r.issues[0].kind == Err::ObservedParentOfLatent);
}

TEST_CASE("validate_dag flags cycles") {
  Dag d;
  d.nodes = {{"a", VarKind::latent, Domain::continuous(1), {}},
             {"b", VarKind::latent, Domain::continuous(1), {}}};
  d.edges = {{"a", "b"}, {"b", "a"}};
  auto r = validate_dag(d);
  CHECK_FALSE(r.ok);
  CHECK(r.issues[0].kind == Err::CycleDetected);
  CHECK_THROWS_AS(topological_order(d), GganError);
}

TEST_CASE("topological order follows declaration order on ties") {
  Dag d = chain_dag(3);
  auto order = topological_order(d);
  // h and v1 are both roots; h declared first.
  CHECK(order[0] == "h");
  CHECK(order[1] == "v1");
  auto pos = [&](const std::string& n) {
    return std::find(order.begin(), order.end(), n) - order.begin();
  };
  CHECK(pos("v1") < pos("v2"));
  CHECK(pos("v2") < pos("x2"));
}

TEST_CASE("markov blanket has parents, children, co-parents") {
  Dag d = chain_dag(3);
  auto mb = markov_blanket(d, "v2");
  // parents {v1}, children {v3, x2}, co-parents of x2 {h}.
  CHECK(mb == std::set<std::string>{"v1", "v3", "x2", "h"});
  CHECK(mb.count("v2") == 0);
}

TEST_CASE("inverse factorization on the mixture graph") {
  auto rec = inverse_factorization(gmgan_dag());
  // leaves first: h conditions on x, then k conditions on h.
  CHECK(rec.elimination_order == std::vector<std::string>{"h", "k"});
  CHECK(rec.conditioning.at("h") == std::vector<std::string>{"x"});
  CHECK(rec.conditioning.at("k") == std::vector<std::string>{"h"});
}

TEST_CASE("inverse factorization on a v-structure") {
  Dag d;
  d.nodes = {{"z1", VarKind::latent, Domain::continuous(1), {}},
             {"z2", VarKind::latent, Domain::continuous(1), {}},
             {"x", VarKind::observed, Domain::continuous(1), {}}};
  d.edges = {{"z1", "x"}, {"z2", "x"}};
  auto rec = inverse_factorization(d);
  // both latents are leaves; declaration order breaks the tie, and
  // z2 (a co-parent) enters z2's conditioning only after z1 is placed.
  CHECK(rec.elimination_order == std::vector<std::string>{"z1", "z2"});
  CHECK(rec.conditioning.at("z1") == std::vector<std::string>{"x"});
  CHECK(rec.conditioning.at("z2") == std::vector<std::string>{"z1", "x"});
}

TEST_CASE("mean field conditions every latent on all observations") {
  Dag d = chain_dag(2);
  auto rec = mean_field(d);
  CHECK(rec.conditioning.at("h") == std::vector<std::string>{"x1", "x2"});
  CHECK(rec.conditioning.at("v2") == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("mean field overrides narrow the conditioning set") {
  Dag d = chain_dag(2);
  auto rec = mean_field(d, {{"v1", {"x1"}}, {"v2", {"x2"}}});
  CHECK(rec.conditioning.at("v1") == std::vector<std::string>{"x1"});
  CHECK(rec.conditioning.at("v2") == std::vector<std::string>{"x2"});
  CHECK(rec.conditioning.at("h") == std::vector<std::string>{"x1", "x2"});
  CHECK_THROWS_AS(mean_field(d, {{"x1", {"x2"}}}), GganError);
  CHECK_THROWS_AS(mean_field(d, {{"v1", {"h"}}}), GganError);
}

TEST_CASE("factor extraction drops roots and collapses tied instances") {
  Dag d = gmgan_dag();
  auto fs = extract_factors(d);
  REQUIRE(fs.factors.size() == 2);
  CHECK(fs.instance_count() == 2);
  CHECK(fs.factors[0].variables == std::vector<std::string>{"h", "k"});
  CHECK(fs.factors[1].variables == std::vector<std::string>{"x", "h"});

  Dag chain = chain_dag(4);
  auto cf = extract_factors(chain);
  // groups (v_{t+1}, v_t) and (x_t, h, v_t); 3 + 4 = 7 instances.
  REQUIRE(cf.factors.size() == 2);
  CHECK(cf.instance_count() == 7);
  CHECK(cf.factors[0].instances.size() == 3);
  CHECK(cf.factors[1].instances.size() == 4);
  CHECK(cf.factors[1].instances[2] == std::vector<std::string>{"x3", "h", "v3"});
}

TEST_CASE("graph description round-trips through json") {
  GraphDescription desc;
  desc.dag = chain_dag(3);
  desc.recognition_mode = "mean_field";
  desc.overrides = {{"v1", {"x1"}}, {"v2", {"x2"}}, {"v3", {"x3"}}};
  std::string text = graph_to_json(desc);
  GraphDescription back = graph_from_json(text);
  CHECK(back == desc);
  CHECK(graph_to_json(back) == text);

  std::string path = "roundtrip_graph.json";
  save_graph(path, desc);
  CHECK(load_graph(path) == desc);
  std::remove(path.c_str());

  CHECK_THROWS_AS(graph_from_json("{"), GganError);
  CHECK_THROWS_AS(
      graph_from_json(R"({"variables":[{"name":"z","kind":"fuzzy","domain":{"type":"continuous","dim":1}}]})"),
      GganError);
}
