#include "ggan/instances.hpp"

#include <cmath>

namespace ggan {

namespace {

std::vector<Act> hidden_acts(std::size_t n, Act hidden, Act out) {
  std::vector<Act> acts(n, hidden);
  acts.push_back(out);
  return acts;
}

MlpSpec stack(std::size_t input, std::vector<std::size_t> hidden, std::size_t out, Act hidden_act,
              Act out_act) {
  hidden.push_back(out);
  return mlp(input, std::move(hidden), hidden_acts(hidden.size() - 1, hidden_act, out_act));
}

std::size_t dag_width(const Dag& dag, const std::vector<std::string>& vars) {
  std::size_t w = 0;
  for (auto& v : vars) w += dag.var(v).domain.dim;
  return w;
}

// One leaky-ReLU trunk discriminator per factor group, raw concatenated
// inputs (desk-scale MLPs skip the per-variable feature stacks).
std::vector<FactorDiscriminator> make_discs(const Dag& dag, const FactorSet& factors,
                                            const std::vector<std::size_t>& d_hidden,
                                            ParamStore& store, std::mt19937_64& rng) {
  std::vector<FactorDiscriminator> discs;
  for (std::size_t i = 0; i < factors.factors.size(); ++i) {
    FactorDiscriminator d;
    d.factor_index = i;
    d.prefix = "disc.g" + std::to_string(i);
    d.features.resize(factors.factors[i].variables.size());
    d.trunk = stack(dag_width(dag, factors.factors[i].variables), d_hidden, 1, Act::leaky_relu,
                    Act::linear);
    mlp_init(store, d.prefix, d.trunk, Owner::discriminators, rng);
    discs.push_back(std::move(d));
  }
  return discs;
}

MlpSpec make_global_disc(const Dag& dag, const std::vector<std::string>& order,
                         const std::vector<std::size_t>& d_hidden, ParamStore& store,
                         const std::string& prefix, std::mt19937_64& rng) {
  MlpSpec spec = stack(dag_width(dag, order), d_hidden, 1, Act::leaky_relu, Act::linear);
  mlp_init(store, prefix, spec, Owner::discriminators, rng);
  return spec;
}

}  // namespace

GmganBundle build_gmgan(const GmganConfig& cfg, ParamStore& store, std::mt19937_64& rng) {
  if (cfg.K < 2) throw GganError(Err::BadDimension, "gmgan needs K >= 2");
  if (cfg.dim_h < 1 || cfg.dim_x < 1) throw GganError(Err::BadDimension, "gmgan dims must be >= 1");

  GmganBundle b;
  b.cfg = cfg;
  ModelBundle& m = b.core;
  m.dag.nodes = {
      {"k", VarKind::latent, Domain::categorical(cfg.K), std::nullopt},
      {"h", VarKind::latent, Domain::continuous(cfg.dim_h), std::nullopt},
      {"x", VarKind::observed, Domain::continuous(cfg.dim_x), std::nullopt},
  };
  m.dag.edges = {{"k", "h"}, {"h", "x"}};
  require_valid(m.dag);
  m.rec = inverse_factorization(m.dag);
  m.factors = extract_factors(m.dag);
  m.global_order = topological_order(m.dag);

  // Component means: the only trainable prior parameters. Placed on signed
  // axis one-hots at mu_scale so the prior is multimodal and symmetric from
  // the start; components beyond 2*dim_h fall back to scaled random draws.
  {
    Tensor mu = Tensor::zeros({cfg.K, cfg.dim_h});
    for (std::size_t k = 0; k < cfg.K; ++k) {
      if (k < cfg.dim_h) {
        mu.at(k, k) = cfg.mu_scale;
      } else if (k < 2 * cfg.dim_h) {
        mu.at(k, k - cfg.dim_h) = -cfg.mu_scale;
      } else {
        std::normal_distribution<double> g(0.0, cfg.mu_scale / std::sqrt(double(cfg.dim_h)));
        for (std::size_t j = 0; j < cfg.dim_h; ++j) mu.at(k, j) = g(rng);
      }
    }
    store.add("prior.mu", std::move(mu), Owner::prior);
  }

  MlpSpec g_spec = stack(cfg.dim_h, cfg.g_hidden, cfg.dim_x, Act::relu, Act::tanh);
  mlp_init(store, "gen.G", g_spec, Owner::generative, rng);

  MlpSpec e_spec = stack(cfg.dim_x, cfg.e_hidden, cfg.gaussian_head ? 2 * cfg.dim_h : cfg.dim_h,
                         Act::leaky_relu, Act::linear);
  if (cfg.gaussian_head) {
    e_spec.slices["mean"] = {0, cfg.dim_h};
    e_spec.slices["log_scale"] = {cfg.dim_h, cfg.dim_h};
  }
  mlp_init(store, "rec.E", e_spec, Owner::recognition, rng);

  const double tau = cfg.tau;
  const std::size_t K = cfg.K;
  m.p_fns["k"] = [K, tau](Tape& t, const std::map<std::string, Var>&, const Tensor* noise) {
    if (!noise) throw GganError(Err::MissingDependencyFn, "k needs gumbel noise");
    Var logits = t.leaf(Tensor::zeros({noise->rows(), K}));  // uniform prior
    return gumbel_softmax(t, logits, tau, t.leaf(*noise));
  };
  m.p_fns["h"] = [](Tape& t, const std::map<std::string, Var>& in, const Tensor* noise) {
    if (!noise) throw GganError(Err::MissingDependencyFn, "h needs gaussian noise");
    // Relaxed mixture selection: h = k~ * mu + eps, identity covariance.
    return t.add(t.linear(in.at("k"), t.param("prior.mu")), t.leaf(*noise));
  };
  m.p_fns["x"] = [g_spec](Tape& t, const std::map<std::string, Var>& in, const Tensor*) {
    return mlp_forward(t, "gen.G", g_spec, in.at("h"));
  };

  const bool gauss_head = cfg.gaussian_head;
  const std::size_t dim_h = cfg.dim_h;
  m.q_fns["h"] = [e_spec, gauss_head, dim_h](Tape& t, const std::map<std::string, Var>& in,
                                             const Tensor* noise) {
    Var out = mlp_forward(t, "rec.E", e_spec, in.at("x"));
    if (!gauss_head) return out;
    if (!noise) throw GganError(Err::MissingDependencyFn, "gaussian-head h needs noise");
    Var mean = t.slice_cols(out, 0, dim_h);
    Var log_scale = t.slice_cols(out, dim_h, dim_h);
    return gaussian_reparam(t, mean, log_scale, t.leaf(*noise));
  };
  m.q_fns["k"] = [tau](Tape& t, const std::map<std::string, Var>& in, const Tensor* noise) {
    if (!noise) throw GganError(Err::MissingDependencyFn, "k needs gumbel noise");
    Var logits = t.neg_half_sqdist(in.at("h"), t.param("prior.mu"));
    return gumbel_softmax(t, logits, tau, t.leaf(*noise));
  };

  m.discs = make_discs(m.dag, m.factors, cfg.d_hidden, store, rng);
  m.global_disc = make_global_disc(m.dag, m.global_order, cfg.d_hidden, store, m.global_prefix, rng);
  return b;
}

Tensor gmgan_posterior_k(const Tensor& h, const Tensor& mu) {
  if (h.cols() != mu.cols()) throw GganError(Err::ShapeMismatch, "posterior_k: dim mismatch");
  Tape t;
  Var logits = t.neg_half_sqdist(t.leaf(h), t.leaf(mu));
  return t.val(t.softmax_rows(logits));
}

Tensor gmgan_sample_x(const GmganBundle& bundle, ParamStore& store, std::size_t k, std::size_t n,
                      std::uint64_t seed) {
  if (k >= bundle.cfg.K) throw GganError(Err::BadParameter, "component index out of range");
  std::mt19937_64 rng(seed);
  Tensor h = gaussian_init({n, bundle.cfg.dim_h}, 1.0, rng);
  const Tensor& mu = store.get("prior.mu").value;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < bundle.cfg.dim_h; ++j) h.at(r, j) += mu.at(k, j);
  Tape t(&store);
  std::map<std::string, Var> in{{"h", t.leaf(h)}};
  return t.val(bundle.core.p_fns.at("x")(t, in, nullptr));
}

Tensor gmgan_extract_h(const GmganBundle& bundle, ParamStore& store, const Tensor& x) {
  Tape t(&store);
  std::map<std::string, Var> in{{"x", t.leaf(x)}};
  // Point-mass read of the extractor; the gaussian head's mean slice when present.
  if (!bundle.cfg.gaussian_head) return t.val(bundle.core.q_fns.at("h")(t, in, nullptr));
  Tensor zero = Tensor::zeros({x.rows(), bundle.cfg.dim_h});
  return t.val(bundle.core.q_fns.at("h")(t, in, &zero));
}

Tensor gmgan_reconstruct(const GmganBundle& bundle, ParamStore& store, const Tensor& x) {
  Tensor h = gmgan_extract_h(bundle, store, x);
  Tape t(&store);
  std::map<std::string, Var> in{{"h", t.leaf(h)}};
  return t.val(bundle.core.p_fns.at("x")(t, in, nullptr));
}

SsganBundle build_ssgan(const SsganConfig& cfg, ParamStore& store, std::mt19937_64& rng) {
  if (cfg.T < 2) throw GganError(Err::BadDimension, "ssgan needs T >= 2");
  if (cfg.dim_h < 1 || cfg.dim_v < 1 || cfg.dim_x < 1)
    throw GganError(Err::BadDimension, "ssgan dims must be >= 1");

  SsganBundle b;
  b.cfg = cfg;
  ModelBundle& m = b.core;
  m.dag.nodes.push_back({"h", VarKind::latent, Domain::continuous(cfg.dim_h), std::nullopt});
  for (std::size_t t = 1; t <= cfg.T; ++t)
    m.dag.nodes.push_back(
        {"v" + std::to_string(t), VarKind::latent, Domain::continuous(cfg.dim_v), "v"});
  for (std::size_t t = 1; t <= cfg.T; ++t)
    m.dag.nodes.push_back(
        {"x" + std::to_string(t), VarKind::observed, Domain::continuous(cfg.dim_x), "x"});
  for (std::size_t t = 1; t + 1 <= cfg.T; ++t)
    m.dag.edges.push_back({"v" + std::to_string(t), "v" + std::to_string(t + 1)});
  for (std::size_t t = 1; t <= cfg.T; ++t) {
    m.dag.edges.push_back({"h", "x" + std::to_string(t)});
    m.dag.edges.push_back({"v" + std::to_string(t), "x" + std::to_string(t)});
  }
  require_valid(m.dag);

  std::map<std::string, std::vector<std::string>> overrides;
  for (std::size_t t = 1; t <= cfg.T; ++t)
    overrides["v" + std::to_string(t)] = {"x" + std::to_string(t)};
  m.rec = mean_field(m.dag, overrides);
  m.factors = extract_factors(m.dag);
  m.global_order = topological_order(m.dag);

  MlpSpec o_spec = stack(2 * cfg.dim_v, cfg.o_hidden, cfg.dim_v, Act::leaky_relu, Act::linear);
  mlp_init(store, "gen.O", o_spec, Owner::generative, rng);
  MlpSpec skip_spec = stack(cfg.dim_v, {}, cfg.dim_v, Act::linear, Act::linear);
  mlp_init(store, "gen.Oskip", skip_spec, Owner::generative, rng);
  MlpSpec g_spec = stack(cfg.dim_h + cfg.dim_v, cfg.g_hidden, cfg.dim_x, Act::relu, Act::tanh);
  mlp_init(store, "gen.G", g_spec, Owner::generative, rng);
  MlpSpec e1_spec = stack(cfg.T * cfg.dim_x, cfg.e1_hidden, cfg.dim_h, Act::leaky_relu, Act::linear);
  mlp_init(store, "rec.E1", e1_spec, Owner::recognition, rng);
  MlpSpec e2_spec = stack(cfg.dim_x, cfg.e2_hidden, cfg.dim_v, Act::leaky_relu, Act::linear);
  mlp_init(store, "rec.E2", e2_spec, Owner::recognition, rng);

  auto prior_draw = [](Tape& t, const std::map<std::string, Var>&, const Tensor* noise) {
    if (!noise) throw GganError(Err::MissingDependencyFn, "prior draw needs noise");
    return t.leaf(*noise);
  };
  m.p_fns["h"] = prior_draw;
  m.p_fns["v1"] = prior_draw;
  for (std::size_t ti = 2; ti <= cfg.T; ++ti) {
    const std::string prev = "v" + std::to_string(ti - 1);
    // Transition with additive linear skip: v_{t+1} = MLP(v_t, eps) + Lin(v_t).
    m.p_fns["v" + std::to_string(ti)] = [o_spec, skip_spec, prev](
                                            Tape& t, const std::map<std::string, Var>& in,
                                            const Tensor* noise) {
      if (!noise) throw GganError(Err::MissingDependencyFn, "transition needs noise");
      Var v = in.at(prev);
      Var trunk = mlp_forward(t, "gen.O", o_spec, t.concat_cols({v, t.leaf(*noise)}));
      return t.add(trunk, mlp_forward(t, "gen.Oskip", skip_spec, v));
    };
  }
  for (std::size_t ti = 1; ti <= cfg.T; ++ti) {
    const std::string vt = "v" + std::to_string(ti);
    m.p_fns["x" + std::to_string(ti)] = [g_spec, vt](Tape& t, const std::map<std::string, Var>& in,
                                                     const Tensor*) {
      return mlp_forward(t, "gen.G", g_spec, t.concat_cols({in.at("h"), in.at(vt)}));
    };
  }

  m.q_fns["h"] = [e1_spec, T = cfg.T](Tape& t, const std::map<std::string, Var>& in, const Tensor*) {
    std::vector<Var> frames;
    for (std::size_t ti = 1; ti <= T; ++ti) frames.push_back(in.at("x" + std::to_string(ti)));
    return mlp_forward(t, "rec.E1", e1_spec, t.concat_cols(frames));
  };
  for (std::size_t ti = 1; ti <= cfg.T; ++ti) {
    const std::string xt = "x" + std::to_string(ti);
    m.q_fns["v" + std::to_string(ti)] = [e2_spec, xt](Tape& t, const std::map<std::string, Var>& in,
                                                      const Tensor*) {
      return mlp_forward(t, "rec.E2", e2_spec, in.at(xt));
    };
  }

  if (cfg.shared_epsilon)
    for (std::size_t ti = 2; ti <= cfg.T; ++ti) m.noise_share["v" + std::to_string(ti)] = "eps";

  m.discs = make_discs(m.dag, m.factors, cfg.d_hidden, store, rng);
  m.global_disc = make_global_disc(m.dag, m.global_order, cfg.d_hidden, store, m.global_prefix, rng);
  return b;
}

static Var apply_transition(const SsganBundle& bundle, Tape& t, Var v, const Tensor& eps) {
  std::map<std::string, Var> in{{"v1", v}};
  return bundle.core.p_fns.at("v2")(t, in, &eps);
}

static Var apply_frame(const SsganBundle& bundle, Tape& t, Var h, Var v) {
  std::map<std::string, Var> in{{"h", h}, {"v1", v}};
  return bundle.core.p_fns.at("x1")(t, in, nullptr);
}

Rollout ssgan_rollout(const SsganBundle& bundle, ParamStore& store, const Tensor& h,
                      const Tensor& v1, std::size_t steps, std::uint64_t noise_seed) {
  if (steps < 1) throw GganError(Err::BadParameter, "rollout needs steps >= 1");
  const std::size_t B = h.rows();
  if (v1.rows() != B) throw GganError(Err::ShapeMismatch, "rollout: h and v1 batch mismatch");
  std::mt19937_64 rng(noise_seed);
  Tensor eps = gaussian_init({B, bundle.cfg.dim_v}, 1.0, rng);

  Rollout out;
  out.frames = Tensor::zeros({steps, B, bundle.cfg.dim_x});
  out.vpath = Tensor::zeros({steps, B, bundle.cfg.dim_v});
  Tape t(&store);
  Var hv = t.leaf(h);
  Var v = t.leaf(v1);
  for (std::size_t s = 0; s < steps; ++s) {
    Var frame = apply_frame(bundle, t, hv, v);
    std::copy_n(t.val(v).data.data(), B * bundle.cfg.dim_v,
                out.vpath.data.data() + s * B * bundle.cfg.dim_v);
    std::copy_n(t.val(frame).data.data(), B * bundle.cfg.dim_x,
                out.frames.data.data() + s * B * bundle.cfg.dim_x);
    if (s + 1 < steps) {
      if (!bundle.cfg.shared_epsilon) eps = gaussian_init({B, bundle.cfg.dim_v}, 1.0, rng);
      v = apply_transition(bundle, t, v, eps);
    }
  }
  return out;
}

Tensor ssgan_extract_v(const SsganBundle& bundle, ParamStore& store, const Tensor& frames) {
  Tape t(&store);
  std::map<std::string, Var> in{{"x1", t.leaf(frames)}};
  return t.val(bundle.core.q_fns.at("v1")(t, in, nullptr));
}

Tensor ssgan_extract_h(const SsganBundle& bundle, ParamStore& store, const Tensor& clips) {
  const std::size_t T = bundle.cfg.T, dx = bundle.cfg.dim_x;
  if (clips.cols() != T * dx) throw GganError(Err::ShapeMismatch, "extract_h: clip width != T*dim_x");
  Tape t(&store);
  std::map<std::string, Var> in;
  Var flat = t.leaf(clips);
  for (std::size_t ti = 1; ti <= T; ++ti)
    in["x" + std::to_string(ti)] = t.slice_cols(flat, (ti - 1) * dx, dx);
  return t.val(bundle.core.q_fns.at("h")(t, in, nullptr));
}

Tensor ssgan_reconstruct(const SsganBundle& bundle, ParamStore& store, const Tensor& clips) {
  const std::size_t T = bundle.cfg.T, dx = bundle.cfg.dim_x, n = clips.rows();
  Tensor h = ssgan_extract_h(bundle, store, clips);
  Tensor out = Tensor::zeros({n, T * dx});
  Tape t(&store);
  Var hv = t.leaf(h);
  Var flat = t.leaf(clips);
  for (std::size_t ti = 0; ti < T; ++ti) {
    std::map<std::string, Var> in{{"x1", t.slice_cols(flat, ti * dx, dx)}};
    Var v = bundle.core.q_fns.at("v1")(t, in, nullptr);
    Var frame = apply_frame(bundle, t, hv, v);
    for (std::size_t r = 0; r < n; ++r)
      std::copy_n(t.val(frame).data.data() + r * dx, dx, out.data.data() + r * T * dx + ti * dx);
  }
  return out;
}

Rollout motion_analogy(const SsganBundle& bundle, ParamStore& store, const Tensor& content_h,
                       const Tensor& driving_frames) {
  if (driving_frames.rows() < 1) throw GganError(Err::EmptyInput, "motion_analogy: empty driving clip");
  if (driving_frames.cols() != bundle.cfg.dim_x)
    throw GganError(Err::ShapeMismatch, "motion_analogy: frame width != dim_x");
  if (content_h.cols() != bundle.cfg.dim_h)
    throw GganError(Err::ShapeMismatch, "motion_analogy: content width != dim_h");
  const std::size_t T = driving_frames.rows();

  Tensor v = ssgan_extract_v(bundle, store, driving_frames);
  Tensor h_rep = Tensor::zeros({T, bundle.cfg.dim_h});
  for (std::size_t r = 0; r < T; ++r)
    std::copy_n(content_h.data.data(), bundle.cfg.dim_h, h_rep.data.data() + r * bundle.cfg.dim_h);

  Tape t(&store);
  Var frames = apply_frame(bundle, t, t.leaf(h_rep), t.leaf(v));
  Rollout out;
  out.frames = t.val(frames);
  out.vpath = v;
  return out;
}

ModelBundle build_custom(const Dag& dag, const CustomConfig& cfg, ParamStore& store,
                         std::mt19937_64& rng) {
  require_valid(dag);
  ModelBundle m;
  m.dag = dag;
  m.rec = cfg.mean_field ? mean_field(dag, cfg.overrides) : inverse_factorization(dag);
  m.factors = extract_factors(dag);
  m.global_order = topological_order(dag);

  auto width_of = [&](const std::vector<std::string>& names) { return dag_width(dag, names); };

  // Generative side: one MLP per tie group (or per variable when untied).
  std::set<std::string> gen_done;
  for (auto& node : dag.nodes) {
    const auto parents = dag.parents(node.name);
    const std::string key = node.tie_group.value_or(node.name);
    const std::string prefix = "gen." + key;
    const bool categorical = node.domain.kind == Domain::Kind::categorical;

    if (parents.empty()) {
      if (categorical) {
        const std::size_t K = node.domain.dim;
        const double tau = cfg.tau;
        m.p_fns[node.name] = [K, tau](Tape& t, const std::map<std::string, Var>&, const Tensor* nz) {
          if (!nz) throw GganError(Err::MissingDependencyFn, "categorical root needs gumbel noise");
          return gumbel_softmax(t, t.leaf(Tensor::zeros({nz->rows(), K})), tau, t.leaf(*nz));
        };
      } else {
        m.p_fns[node.name] = [](Tape& t, const std::map<std::string, Var>&, const Tensor* nz) {
          if (!nz) throw GganError(Err::MissingDependencyFn, "root prior needs noise");
          return t.leaf(*nz);
        };
      }
      continue;
    }

    const std::size_t noise_dim = categorical ? 0 : node.domain.dim;
    MlpSpec spec = stack(width_of(parents) + noise_dim, cfg.hidden, node.domain.dim,
                         Act::leaky_relu,
                         categorical ? Act::linear
                                     : (node.kind == VarKind::observed ? Act::tanh : Act::linear));
    if (gen_done.insert(prefix).second) mlp_init(store, prefix, spec, Owner::generative, rng);
    const double tau = cfg.tau;
    m.p_fns[node.name] = [spec, prefix, parents, categorical, tau](
                             Tape& t, const std::map<std::string, Var>& in, const Tensor* nz) {
      std::vector<Var> parts;
      for (auto& p : parents) parts.push_back(in.at(p));
      if (!categorical) {
        if (!nz) throw GganError(Err::MissingDependencyFn, "implicit conditional needs noise");
        parts.push_back(t.leaf(*nz));
        return mlp_forward(t, prefix, spec, t.concat_cols(parts));
      }
      if (!nz) throw GganError(Err::MissingDependencyFn, "categorical conditional needs gumbel noise");
      Var logits = mlp_forward(t, prefix, spec, t.concat_cols(parts));
      return gumbel_softmax(t, logits, tau, t.leaf(*nz));
    };
  }

  // Recognition side: deterministic extractors per latent (relaxed draw for
  // categorical latents).
  std::set<std::string> rec_done;
  for (auto& z : m.rec.elimination_order) {
    const auto& node = dag.var(z);
    const auto cond = m.rec.conditioning.at(z);
    const std::string prefix = "rec." + node.tie_group.value_or(z);
    const bool categorical = node.domain.kind == Domain::Kind::categorical;
    MlpSpec spec = stack(width_of(cond), cfg.hidden, node.domain.dim, Act::leaky_relu, Act::linear);
    if (rec_done.insert(prefix).second) mlp_init(store, prefix, spec, Owner::recognition, rng);
    const double tau = cfg.tau;
    m.q_fns[z] = [spec, prefix, cond, categorical, tau](Tape& t,
                                                        const std::map<std::string, Var>& in,
                                                        const Tensor* nz) {
      std::vector<Var> parts;
      for (auto& c : cond) parts.push_back(in.at(c));
      Var out = mlp_forward(t, prefix, spec, t.concat_cols(parts));
      if (!categorical) return out;
      if (!nz) throw GganError(Err::MissingDependencyFn, "categorical extractor needs gumbel noise");
      return gumbel_softmax(t, out, tau, t.leaf(*nz));
    };
  }

  m.discs = make_discs(dag, m.factors, cfg.d_hidden, store, rng);
  m.global_disc = make_global_disc(dag, m.global_order, cfg.d_hidden, store, m.global_prefix, rng);
  return m;
}

}  // namespace ggan
