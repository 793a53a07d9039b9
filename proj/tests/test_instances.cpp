#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "ggan/instances.hpp"

using namespace ggan;

namespace {

GmganConfig small_gmgan() {
  GmganConfig cfg;
  cfg.K = 3;
  cfg.dim_h = 2;
  cfg.dim_x = 5;
  cfg.g_hidden = {8};
  cfg.e_hidden = {8};
  cfg.d_hidden = {8};
  return cfg;
}

SsganConfig small_ssgan(std::size_t T) {
  SsganConfig cfg;
  cfg.T = T;
  cfg.dim_h = 4;
  cfg.dim_v = 3;
  cfg.dim_x = 9;
  cfg.o_hidden = {6};
  cfg.g_hidden = {8};
  cfg.e1_hidden = {8};
  cfg.e2_hidden = {8};
  cfg.d_hidden = {8};
  return cfg;
}

std::set<std::string> param_names(const ParamStore& store) {
  std::set<std::string> names;
  for (auto& [name, p] : store.items()) names.insert(name);
  return names;
}

}  // namespace

TEST_CASE("posterior over components matches the closed form") {
  Tensor h({1, 1}, {0.0});
  Tensor mu({2, 1}, {0.0, 2.0});
  Tensor post = gmgan_posterior_k(h, mu);
  // softmax(0, -2) = (0.8808, 0.1192)
  CHECK(post.at(0, 0) == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(post.at(0, 1) == doctest::Approx(0.11920292202211755).epsilon(1e-12));
}

TEST_CASE("posterior rows are normalized and permutation equivariant") {
  std::mt19937_64 rng(5);
  Tensor h = gaussian_init({6, 3}, 1.0, rng);
  Tensor mu = gaussian_init({4, 3}, 1.0, rng);
  Tensor post = gmgan_posterior_k(h, mu);
  for (std::size_t r = 0; r < 6; ++r) {
    double s = 0;
    for (std::size_t c = 0; c < 4; ++c) s += post.at(r, c);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
  // swap components 0 and 2 in mu
  Tensor mu2 = mu;
  for (std::size_t j = 0; j < 3; ++j) std::swap(mu2.at(0, j), mu2.at(2, j));
  Tensor post2 = gmgan_posterior_k(h, mu2);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(post2.at(r, 0) == doctest::Approx(post.at(r, 2)).epsilon(1e-12));
    CHECK(post2.at(r, 2) == doctest::Approx(post.at(r, 0)).epsilon(1e-12));
    CHECK(post2.at(r, 1) == doctest::Approx(post.at(r, 1)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gmgan_posterior_k(Tensor::zeros({2, 2}), Tensor::zeros({3, 4})), GganError);
}

TEST_CASE("the mixture instance wires the expected structure") {
  ParamStore store;
  std::mt19937_64 rng(1);
  auto bundle = build_gmgan(small_gmgan(), store, rng);
  CHECK(bundle.core.rec.elimination_order == std::vector<std::string>{"h", "k"});
  CHECK(bundle.core.factors.factors.size() == 2);
  CHECK(store.get("prior.mu").value.shape == std::vector<std::size_t>{3, 2});
  CHECK(store.get("prior.mu").owner == Owner::prior);
  CHECK(store.get("prior.mu").value.all_finite());
  CHECK(store.has("gen.G.w0"));
  CHECK(store.has("rec.E.w0"));
  CHECK(store.has("disc.g0.w0"));
  CHECK(store.has("disc.g1.w0"));
  CHECK(store.has("disc.global.w0"));
}

TEST_CASE("mixture sampling and reconstruction paths have consistent shapes") {
  ParamStore store;
  std::mt19937_64 rng(2);
  auto bundle = build_gmgan(small_gmgan(), store, rng);
  Tensor x = gmgan_sample_x(bundle, store, 1, 7, 33);
  CHECK(x.shape == std::vector<std::size_t>{7, 5});
  for (double v : x.data) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  Tensor again = gmgan_sample_x(bundle, store, 1, 7, 33);
  CHECK(x.data == again.data);
  CHECK_THROWS_AS(gmgan_sample_x(bundle, store, 9, 1, 0), GganError);

  Tensor h = gmgan_extract_h(bundle, store, x);
  CHECK(h.shape == std::vector<std::size_t>{7, 2});
  Tensor rec = gmgan_reconstruct(bundle, store, x);
  CHECK(rec.shape == x.shape);
  CHECK(rec.all_finite());
}

TEST_CASE("a gaussian extractor head doubles the output width") {
  ParamStore a, b;
  std::mt19937_64 r1(3), r2(3);
  GmganConfig cfg = small_gmgan();
  build_gmgan(cfg, a, r1);
  cfg.gaussian_head = true;
  build_gmgan(cfg, b, r2);
  CHECK(b.get("rec.E.w1").value.shape == std::vector<std::size_t>{8, 4});
  CHECK(a.get("rec.E.w1").value.shape == std::vector<std::size_t>{8, 2});
}

TEST_CASE("video instance parameter count is independent of T") {
  ParamStore s2, s5;
  std::mt19937_64 r1(4), r2(4);
  build_ssgan(small_ssgan(2), s2, r1);
  build_ssgan(small_ssgan(5), s5, r2);
  auto n2 = param_names(s2), n5 = param_names(s5);
  // E1 reads T frames, so its first layer grows; everything else is shared.
  for (auto& n : n2)
    if (n.rfind("rec.E1", 0) != 0) CHECK(n5.count(n) == 1);
  CHECK(n2.size() == n5.size());
  CHECK(s2.get("gen.O.w0").value.shape == s5.get("gen.O.w0").value.shape);
  CHECK(s2.get("rec.E1.w0").value.shape == std::vector<std::size_t>{18, 8});
  CHECK(s5.get("rec.E1.w0").value.shape == std::vector<std::size_t>{45, 8});
}

TEST_CASE("video factor groups are (v,v) and (x,h,v) with 2T-1 instances") {
  ParamStore store;
  std::mt19937_64 rng(6);
  auto bundle = build_ssgan(small_ssgan(4), store, rng);
  REQUIRE(bundle.core.factors.factors.size() == 2);
  CHECK(bundle.core.factors.instance_count() == 7);
  CHECK(bundle.core.discs.size() == 2);
  // shared transition noise
  CHECK(bundle.core.noise_share.at("v2") == "eps");
  CHECK(bundle.core.noise_share.at("v4") == "eps");
  CHECK(bundle.core.noise_share.count("v1") == 0);
}

TEST_CASE("an identity transition yields a constant rollout") {
  ParamStore store;
  std::mt19937_64 rng(7);
  auto bundle = build_ssgan(small_ssgan(3), store, rng);
  // silence the trunk and make the skip connection the identity
  auto& w1 = store.get("gen.O.w1").value;
  std::fill(w1.data.begin(), w1.data.end(), 0.0);
  auto& sw = store.get("gen.Oskip.w0").value;
  std::fill(sw.data.begin(), sw.data.end(), 0.0);
  for (std::size_t j = 0; j < 3; ++j) sw.at(j, j) = 1.0;

  std::mt19937_64 nrng(8);
  Tensor h = gaussian_init({2, 4}, 1.0, nrng);
  Tensor v1 = gaussian_init({2, 3}, 1.0, nrng);
  auto roll = ssgan_rollout(bundle, store, h, v1, 50, 9);
  CHECK(roll.vpath.shape == std::vector<std::size_t>{50, 2, 3});
  CHECK(roll.frames.shape == std::vector<std::size_t>{50, 2, 9});
  for (std::size_t s = 0; s < 50; ++s)
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(roll.vpath.data[s * 6 + i] == doctest::Approx(v1.data[i]).epsilon(1e-12));
  for (std::size_t i = 0; i < 18; ++i)
    CHECK(roll.frames.data[49 * 18 + i] == doctest::Approx(roll.frames.data[i]).epsilon(1e-12));
}

TEST_CASE("long rollouts stay finite at random init") {
  ParamStore store;
  std::mt19937_64 rng(10);
  auto bundle = build_ssgan(small_ssgan(4), store, rng);
  std::mt19937_64 nrng(11);
  Tensor h = gaussian_init({3, 4}, 1.0, nrng);
  Tensor v1 = gaussian_init({3, 3}, 1.0, nrng);
  auto roll = ssgan_rollout(bundle, store, h, v1, 100, 12);
  CHECK(roll.frames.all_finite());
  CHECK(roll.vpath.all_finite());
}

TEST_CASE("motion analogy ignores the content code in the motion path") {
  ParamStore store;
  std::mt19937_64 rng(13);
  auto bundle = build_ssgan(small_ssgan(3), store, rng);
  std::mt19937_64 nrng(14);
  Tensor driving = gaussian_init({5, 9}, 0.5, nrng);
  Tensor h1 = gaussian_init({1, 4}, 1.0, nrng);
  Tensor h2 = gaussian_init({1, 4}, 1.0, nrng);
  auto a = motion_analogy(bundle, store, h1, driving);
  auto b = motion_analogy(bundle, store, h2, driving);
  CHECK(a.frames.rows() == 5);
  CHECK(a.vpath.data == b.vpath.data);
  CHECK(a.frames.data != b.frames.data);

  Tensor one_frame = gaussian_init({1, 9}, 0.5, nrng);
  auto c = motion_analogy(bundle, store, h1, one_frame);
  CHECK(c.frames.rows() == 1);
  CHECK_THROWS_AS(motion_analogy(bundle, store, h1, Tensor::zeros({0, 9})), GganError);
}

TEST_CASE("extraction and reconstruction shapes line up for clips") {
  ParamStore store;
  std::mt19937_64 rng(15);
  auto bundle = build_ssgan(small_ssgan(3), store, rng);
  std::mt19937_64 nrng(16);
  Tensor clips = gaussian_init({4, 27}, 0.5, nrng);
  CHECK(ssgan_extract_h(bundle, store, clips).shape == std::vector<std::size_t>{4, 4});
  Tensor frames = gaussian_init({4, 9}, 0.5, nrng);
  CHECK(ssgan_extract_v(bundle, store, frames).shape == std::vector<std::size_t>{4, 3});
  Tensor rec = ssgan_reconstruct(bundle, store, clips);
  CHECK(rec.shape == clips.shape);
  CHECK(rec.all_finite());
  CHECK_THROWS_AS(ssgan_extract_h(bundle, store, frames), GganError);
}

TEST_CASE("custom wiring covers mixed graphs") {
  Dag d;
  d.nodes = {{"k", VarKind::latent, Domain::categorical(3), {}},
             {"z", VarKind::latent, Domain::continuous(2), {}},
             {"x", VarKind::observed, Domain::continuous(4), {}}};
  d.edges = {{"k", "z"}, {"z", "x"}};
  ParamStore store;
  std::mt19937_64 rng(17);
  CustomConfig cfg;
  cfg.hidden = {8};
  cfg.d_hidden = {8};
  auto bundle = build_custom(d, cfg, store, rng);
  Tape t(&store);
  auto tp = bundle.sample_p(t, 6, 21);
  CHECK(t.val(tp.at("x")).shape == std::vector<std::size_t>{6, 4});
  CHECK(t.val(tp.at("k")).shape == std::vector<std::size_t>{6, 3});
  auto tq = bundle.sample_q(t, {{"x", t.val(tp.at("x"))}}, 22);
  CHECK(t.val(tq.at("k")).shape == std::vector<std::size_t>{6, 3});
  CHECK(t.val(tq.at("z")).shape == std::vector<std::size_t>{6, 2});
}
