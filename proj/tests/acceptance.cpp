// End-to-end acceptance gates. Each criterion prints exactly one PASS/FAIL
// line; the exit code is the number of failures. Individual criteria can be
// selected by number on the command line (default: all).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ggan/checkpoint.hpp"
#include "ggan/data.hpp"
#include "ggan/eval.hpp"
#include "ggan/instances.hpp"
#include "ggan/tabular.hpp"

using namespace ggan;

namespace {

double now_s() {
  using clk = std::chrono::steady_clock;
  static const clk::time_point t0 = clk::now();
  return std::chrono::duration<double>(clk::now() - t0).count();
}

struct Criterion {
  int id;
  const char* title;
  bool (*run)(std::string& detail);
};

// ---------------------------------------------------------------- fixtures

Dag gmgan_dag(std::size_t K, std::size_t dim_h, std::size_t dim_x) {
  Dag d;
  d.nodes = {{"k", VarKind::latent, Domain::categorical(K), {}},
             {"h", VarKind::latent, Domain::continuous(dim_h), {}},
             {"x", VarKind::observed, Domain::continuous(dim_x), {}}};
  d.edges = {{"k", "h"}, {"h", "x"}};
  return d;
}

Dag ssgan_dag(std::size_t T, std::size_t dim_h, std::size_t dim_v, std::size_t dim_x) {
  Dag d;
  d.nodes.push_back({"h", VarKind::latent, Domain::continuous(dim_h), {}});
  for (std::size_t t = 1; t <= T; ++t)
    d.nodes.push_back({"v" + std::to_string(t), VarKind::latent, Domain::continuous(dim_v), "v"});
  for (std::size_t t = 1; t <= T; ++t)
    d.nodes.push_back({"x" + std::to_string(t), VarKind::observed, Domain::continuous(dim_x), "x"});
  for (std::size_t t = 1; t < T; ++t)
    d.edges.push_back({"v" + std::to_string(t), "v" + std::to_string(t + 1)});
  for (std::size_t t = 1; t <= T; ++t) {
    d.edges.push_back({"h", "x" + std::to_string(t)});
    d.edges.push_back({"v" + std::to_string(t), "x" + std::to_string(t)});
  }
  return d;
}

std::map<std::string, Tensor> split_x(const Tensor& b) { return {{"x", b}}; }

std::map<std::string, Tensor> split_clip(const Tensor& b, std::size_t T, std::size_t fdim) {
  std::map<std::string, Tensor> obs;
  const std::size_t B = b.rows();
  for (std::size_t t = 1; t <= T; ++t) {
    Tensor f = Tensor::zeros({B, fdim});
    for (std::size_t r = 0; r < B; ++r)
      for (std::size_t c = 0; c < fdim; ++c) f.at(r, c) = b.at(r, (t - 1) * fdim + c);
    obs["x" + std::to_string(t)] = f;
  }
  return obs;
}

// The clustering benchmark configuration shared by criteria 5 and 6.
GmganConfig bench_gmgan() {
  GmganConfig gc;
  gc.K = 5;
  gc.dim_h = 8;
  gc.dim_x = 32;
  gc.g_hidden = {64};
  gc.e_hidden = {64};
  gc.d_hidden = {64, 64};
  gc.gaussian_head = true;
  gc.tau = 0.1;
  return gc;
}

TrainerConfig bench_trainer(long steps) {
  TrainerConfig tc;
  tc.batch = 100;
  tc.adam.lr = 2e-4;
  tc.adam.beta1 = 0.5;
  tc.steps = steps;
  return tc;
}

SsganConfig bench_ssgan(std::size_t T, std::size_t fdim) {
  SsganConfig sc;
  sc.T = T;
  sc.dim_h = 16;
  sc.dim_v = 4;
  sc.dim_x = fdim;
  sc.o_hidden = {32};
  sc.g_hidden = {64};
  sc.e1_hidden = {64};
  sc.e2_hidden = {64};
  sc.d_hidden = {64, 64};
  return sc;
}

double vnorm_row(const Tensor& m, std::size_t r) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) s += m.at(r, j) * m.at(r, j);
  return std::sqrt(s);
}

// ------------------------------------------------------------- criterion 1

bool c1_structure(std::string& detail) {
  const double t0 = now_s();
  RecognitionGraph rg = inverse_factorization(gmgan_dag(10, 4, 8));
  bool ok = rg.elimination_order == std::vector<std::string>{"h", "k"} &&
            rg.conditioning.size() == 2 &&
            rg.conditioning.at("h") == std::vector<std::string>{"x"} &&
            rg.conditioning.at("k") == std::vector<std::string>{"h"};

  const std::size_t T = 4;
  std::map<std::string, std::vector<std::string>> ov;
  for (std::size_t t = 1; t <= T; ++t)
    ov["v" + std::to_string(t)] = {"x" + std::to_string(t)};
  RecognitionGraph mf = mean_field(ssgan_dag(T, 4, 2, 16), ov);
  std::vector<std::string> all_x;
  for (std::size_t t = 1; t <= T; ++t) all_x.push_back("x" + std::to_string(t));
  ok = ok && mf.conditioning.size() == T + 1 && mf.conditioning.at("h") == all_x;
  for (std::size_t t = 1; t <= T; ++t)
    ok = ok && mf.conditioning.at("v" + std::to_string(t)) ==
                   std::vector<std::string>{"x" + std::to_string(t)};
  const double el = now_s() - t0;
  detail = "q(h|x),q(k|h) and q(h|x_1:T),q(v_t|x_t) verified in " + std::to_string(el) + "s";
  return ok && el < 1.0;
}

// ------------------------------------------------------------- criterion 2

TabularModel random_binary_chain(std::size_t n, std::uint64_t seed, Dag& dag_out) {
  Dag d;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name = "z" + std::to_string(i + 1);
    d.nodes.push_back({name, i + 1 == n ? VarKind::observed : VarKind::latent,
                       Domain::categorical(2), {}});
    if (i > 0) d.edges.push_back({"z" + std::to_string(i), name});
  }
  dag_out = d;
  TabularModel tab;
  for (auto& v : d.nodes) {
    tab.names.push_back(v.name);
    tab.card.push_back(2);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  auto fill = [&](std::vector<double>& dist) {
    dist.resize(std::size_t(1) << n);
    double z = 0.0;
    for (auto& w : dist) z += (w = u(rng));
    for (auto& w : dist) w /= z;
  };
  fill(tab.p);
  fill(tab.q);
  tab.validate();
  return tab;
}

bool c2_factor_oracle(std::string& detail) {
  const double t0 = now_s();
  const double log4 = 2.0 * std::log(2.0);
  double worst_route = 0.0, worst_opt = 0.0;
  int models = 0;
  for (std::size_t n = 3; n <= 5; ++n) {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      Dag dag;
      TabularModel tab = random_binary_chain(n, seed * 100 + n, dag);
      FactorSet fs = extract_factors(dag);
      LocalJsResult a = exact_local_js(tab, fs);
      LocalJsResult b = exact_local_js_joint(tab, fs);
      LocalJsResult o = optimal_disc_objective(tab, fs);
      worst_route = std::max(worst_route, std::fabs(a.total - b.total));
      for (std::size_t i = 0; i < a.per_factor.size(); ++i) {
        worst_route = std::max(worst_route, std::fabs(a.per_factor[i] - b.per_factor[i]));
        worst_opt = std::max(worst_opt, std::fabs(o.per_factor[i] - (a.per_factor[i] - log4)));
      }
      worst_opt = std::max(worst_opt, std::fabs(o.total - (a.total - log4)));
      ++models;
    }
  }
  const double el = now_s() - t0;
  std::ostringstream os;
  os << models << " models, route gap " << worst_route << ", optimal-D gap " << worst_opt
     << ", " << el << "s";
  detail = os.str();
  return models >= 5 && worst_route <= 1e-12 && worst_opt <= 1e-9 && el < 10.0;
}

// ------------------------------------------------------------- criterion 3

bool check_bundle_grads(const ModelBundle& core, ParamStore& store,
                        const std::map<std::string, Tensor>& observed, std::uint64_t seed,
                        double& worst, std::string& worst_name) {
  std::vector<std::string> names;
  for (auto& [name, p] : store.items()) names.push_back(name);
  auto loss_local = [&](Tape& t) {
    SampleTable tp = core.sample_p(t, observed.begin()->second.rows(), seed);
    SampleTable tq = core.sample_q(t, observed, seed + 1);
    return local_objective(t, core, tp, tq).value;
  };
  auto loss_global = [&](Tape& t) {
    SampleTable tp = core.sample_p(t, observed.begin()->second.rows(), seed);
    SampleTable tq = core.sample_q(t, observed, seed + 1);
    return global_objective(t, core, tp, tq).value;
  };
  GradReport rl = grad_check(loss_local, store, names, 1e-4);
  GradReport rg = grad_check(loss_global, store, names, 1e-4);
  if (rl.max_rel_err > worst) { worst = rl.max_rel_err; worst_name = rl.worst_param; }
  if (rg.max_rel_err > worst) { worst = rg.max_rel_err; worst_name = rg.worst_param; }
  return rl.pass && rg.pass;
}

bool c3_gradient_suite(std::string& detail) {
  const double t0 = now_s();
  bool ok = true;
  double worst = 0.0;
  std::string worst_name;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    {
      GmganConfig gc;
      gc.K = 2; gc.dim_h = 2; gc.dim_x = 3;
      gc.g_hidden = {4}; gc.e_hidden = {4}; gc.d_hidden = {4};
      gc.gaussian_head = true;
      ParamStore store;
      std::mt19937_64 rng(seed);
      GmganBundle b = build_gmgan(gc, store, rng);
      Tensor x = gaussian_init({2, 3}, 0.5, rng);
      ok = check_bundle_grads(b.core, store, {{"x", x}}, seed * 7, worst, worst_name) && ok;
    }
    {
      SsganConfig sc;
      sc.T = 2; sc.dim_h = 2; sc.dim_v = 2; sc.dim_x = 4;
      sc.o_hidden = {3}; sc.g_hidden = {4}; sc.e1_hidden = {4}; sc.e2_hidden = {4};
      sc.d_hidden = {4};
      ParamStore store;
      std::mt19937_64 rng(seed + 100);
      SsganBundle b = build_ssgan(sc, store, rng);
      std::map<std::string, Tensor> obs;
      for (std::size_t t = 1; t <= 2; ++t)
        obs["x" + std::to_string(t)] = gaussian_init({2, 4}, 0.5, rng);
      ok = check_bundle_grads(b.core, store, obs, seed * 13, worst, worst_name) && ok;
    }
  }
  const double el = now_s() - t0;
  std::ostringstream os;
  os << "10 seeds x 2 bundles x {local,global}, max rel err " << worst << " (" << worst_name
     << "), " << el << "s";
  detail = os.str();
  return ok && el < 120.0;
}

// ------------------------------------------------------------- criterion 4

bool c4_stochastics(std::string& detail) {
  const double t0 = now_s();
  bool ok = true;
  std::mt19937_64 rng(42);

  Dag d;
  d.nodes = {{"k", VarKind::latent, Domain::categorical(6), {}}};
  NoiseBundle nb = NoiseBundle::make(d, 256, 7);
  Tensor logits = gaussian_init({256, 6}, 1.0, rng);
  double prev_mean_max = 0.0;
  for (double tau : {1.0, 0.1, 0.01}) {
    ParamStore store;
    Tape t(&store);
    Var y = gumbel_softmax(t, t.leaf(logits), tau, t.leaf(*nb.find("k")));
    const Tensor& v = t.val(y);
    double mean_max = 0.0;
    for (std::size_t r = 0; r < v.rows(); ++r) {
      double s = 0.0, mx = 0.0;
      for (std::size_t c = 0; c < v.cols(); ++c) {
        ok = ok && v.at(r, c) >= 0.0;
        s += v.at(r, c);
        mx = std::max(mx, v.at(r, c));
      }
      ok = ok && std::fabs(s - 1.0) <= 1e-6;
      mean_max += mx;
    }
    mean_max /= double(v.rows());
    ok = ok && mean_max > prev_mean_max;  // saturation increases as tau drops
    prev_mean_max = mean_max;
  }

  const std::size_t n = 20000;
  const double mu = 0.7, sigma = 0.3;
  Tensor noise = Tensor::zeros({n, 1});
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : noise.data) v = g(rng);
  Tensor mean_t = Tensor::zeros({n, 1}), ls_t = Tensor::zeros({n, 1});
  for (auto& v : mean_t.data) v = mu;
  for (auto& v : ls_t.data) v = std::log(sigma);
  ParamStore store;
  Tape t(&store);
  Var s = gaussian_reparam(t, t.leaf(mean_t), t.leaf(ls_t), t.leaf(noise));
  double m = 0.0;
  for (double v : t.val(s).data) m += v;
  m /= double(n);
  const double band = 3.0 * sigma / std::sqrt(double(n));
  ok = ok && std::fabs(m - mu) <= band;

  const double el = now_s() - t0;
  std::ostringstream os;
  os << "simplex+saturation ok, reparam mean " << m << " within " << band << " of " << mu
     << ", " << el << "s";
  detail = os.str();
  return ok && el < 10.0;
}

// ------------------------------------------------------------- criterion 5

bool c5_gmgan_clustering(std::string& detail) {
  MixtureDataset data = make_mixture(5, 32, 5000, 8.0, 1234);
  GmganConfig gc = bench_gmgan();
  TrainerConfig tc = bench_trainer(20000);
  int good = 0;
  double slowest = 0.0;
  std::ostringstream os;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double t0 = now_s();
    SeedOutcome o = run_gmgan_seed(gc, tc, data, seed);
    const double el = now_s() - t0;
    slowest = std::max(slowest, el);
    if (o.ok && o.acc >= 0.95) ++good;
    os << " s" << seed << "=" << (o.ok ? o.acc : -1.0);
  }
  std::ostringstream os2;
  os2 << good << "/10 seeds with ACC>=0.95, slowest seed " << slowest << "s;" << os.str();
  detail = os2.str();
  return good >= 8 && slowest <= 300.0;
}

// ------------------------------------------------------------- criterion 6

bool c6_local_beats_global(std::string& detail) {
  MixtureDataset data = make_mixture(5, 32, 5000, 8.0, 1234);
  GmganConfig gc = bench_gmgan();
  TrainerConfig tl = bench_trainer(6000), tg = tl;
  tl.mode = Mode::local;
  tg.mode = Mode::global;
  ModeComparison cmp = compare_modes(gc, tl, tg, data, {1, 2, 3, 4, 5});
  // the report is written whether or not the ordering holds
  write_comparison_text(std::cout, cmp);
  std::ofstream csv("acceptance-local-vs-global.csv");
  write_comparison_csv(csv, cmp);
  std::ostringstream os;
  os << "ACC " << cmp.local.mean_acc << " vs " << cmp.global.mean_acc << ", MSE "
     << cmp.local.mean_mse << " vs " << cmp.global.mean_mse
     << " (report in acceptance-local-vs-global.csv)";
  detail = os.str();
  return cmp.local.mean_acc >= cmp.global.mean_acc && cmp.local.mean_mse <= cmp.global.mean_mse;
}

// ------------------------------------------------------------- criterion 7

bool c7_ssgan_stability(std::string& detail) {
  const std::size_t side = 8, fdim = side * side;
  std::ostringstream os;
  double slowest = 0.0;

  // part A: T=4 training stays finite for 20k steps, every seed
  int finite = 0;
  {
    VideoDataset video = make_bouncing_dot(4, 1000, 99, side);
    SsganConfig sc = bench_ssgan(4, fdim);
    TrainerConfig cfg;
    cfg.batch = 32;
    cfg.adam.lr = 1e-4;
    cfg.adam.beta1 = 0.5;
    cfg.steps = 20000;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double t0 = now_s();
      TrainerState state;
      state.rng.seed(seed);
      cfg.seed = seed;
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
      SsganBundle bundle = build_ssgan(sc, state.store, rng);
      Dataset ds{&video.clips};
      bool ok = true;
      try {
        auto trace = train(state, cfg, bundle.core, ds,
                           [&](const Tensor& b) { return split_clip(b, 4, fdim); });
        for (auto& r : trace) ok = ok && std::isfinite(r.objective);
      } catch (const GganError&) {
        ok = false;
      }
      slowest = std::max(slowest, now_s() - t0);
      if (ok) ++finite;
    }
  }

  // part B: trained T=16 model rolled out 200 steps keeps ||v_t|| within
  // 10x the training-horizon 95th-percentile norm
  int bounded = 0;
  {
    const std::size_t T = 16;
    VideoDataset video = make_bouncing_dot(T, 1000, 99, side);
    SsganConfig sc = bench_ssgan(T, fdim);
    TrainerConfig cfg;
    cfg.batch = 32;
    cfg.adam.lr = 1e-4;
    cfg.adam.beta1 = 0.5;
    cfg.steps = 1500;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double t0 = now_s();
      TrainerState state;
      state.rng.seed(seed);
      cfg.seed = seed;
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
      SsganBundle bundle = build_ssgan(sc, state.store, rng);
      Dataset ds{&video.clips};
      bool ok = true;
      try {
        train(state, cfg, bundle.core, ds,
              [&](const Tensor& b) { return split_clip(b, T, fdim); });
      } catch (const GganError&) {
        ok = false;
      }
      if (ok) {
        std::mt19937_64 nr(seed * 131 + 7);
        std::normal_distribution<double> g(0.0, 1.0);
        auto draw = [&](std::size_t dim) {
          Tensor z = Tensor::zeros({1, dim});
          for (auto& v : z.data) v = g(nr);
          return z;
        };
        std::vector<double> norms;
        for (int rep = 0; rep < 64; ++rep) {
          Rollout r = ssgan_rollout(bundle, state.store, draw(sc.dim_h), draw(sc.dim_v), T,
                                    seed * 1000 + std::uint64_t(rep));
          for (std::size_t t = 0; t < T; ++t) norms.push_back(vnorm_row(r.vpath, t));
        }
        std::sort(norms.begin(), norms.end());
        const double p95 = norms[std::size_t(0.95 * double(norms.size() - 1))];
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
          Rollout r = ssgan_rollout(bundle, state.store, draw(sc.dim_h), draw(sc.dim_v), 200,
                                    seed * 5000 + std::uint64_t(rep));
          for (std::size_t t = 0; t < 200; ++t) worst = std::max(worst, vnorm_row(r.vpath, t));
        }
        ok = worst <= 10.0 * p95;
      }
      slowest = std::max(slowest, now_s() - t0);
      if (ok) ++bounded;
    }
  }
  os << "T=4 finite " << finite << "/10; T=16 200-step rollout bounded " << bounded
     << "/10; slowest seed " << slowest << "s";
  detail = os.str();
  return finite == 10 && bounded >= 8 && slowest <= 900.0;
}

// ------------------------------------------------------------- criterion 8

bool c8_motion_analogy(std::string& detail) {
  const double t0 = now_s();
  const std::size_t side = 8, fdim = side * side, T = 4;
  SsganConfig sc = bench_ssgan(T, fdim);
  ParamStore store;
  std::mt19937_64 rng(5);
  SsganBundle bundle = build_ssgan(sc, store, rng);

  VideoDataset video = make_bouncing_dot(T, 1, 11, side);
  Tensor driving = Tensor::zeros({T, fdim});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < fdim; ++c) driving.at(t, c) = video.clips.at(0, t * fdim + c);

  Tensor h1 = gaussian_init({1, sc.dim_h}, 1.0, rng);
  Tensor h2 = gaussian_init({1, sc.dim_h}, 1.0, rng);
  Rollout r1 = motion_analogy(bundle, store, h1, driving);
  Rollout r2 = motion_analogy(bundle, store, h2, driving);
  bool vpaths_identical = r1.vpath.shape == r2.vpath.shape && r1.vpath.data == r2.vpath.data;
  bool clips_differ = r1.frames.data != r2.frames.data;
  const double el = now_s() - t0;
  std::ostringstream os;
  os << "v-paths bitwise equal: " << (vpaths_identical ? "yes" : "no")
     << ", clips differ: " << (clips_differ ? "yes" : "no") << ", " << el << "s";
  detail = os.str();
  return vpaths_identical && clips_differ && el < 60.0;
}

// ------------------------------------------------------------- criterion 9

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool c9_determinism(std::string& detail) {
  bool ok = true;
  MixtureDataset data = make_mixture(3, 8, 512, 6.0, 5);
  GmganConfig gc;
  gc.K = 3; gc.dim_h = 4; gc.dim_x = 8;
  gc.g_hidden = {16}; gc.e_hidden = {16}; gc.d_hidden = {16};
  TrainerConfig cfg = bench_trainer(0);
  cfg.batch = 32;

  auto fresh = [&](TrainerState& state) {
    state.rng.seed(21);
    std::mt19937_64 rng(21);
    return build_gmgan(gc, state.store, rng);
  };

  // unbroken 2k steps
  TrainerState full;
  GmganBundle bf = fresh(full);
  Dataset ds{&data.samples};
  cfg.steps = 2000;
  cfg.seed = 21;
  std::vector<MetricsRow> trace_full = train(full, cfg, bf.core, ds, split_x);

  // 1k steps, checkpoint, resume in a fresh state for 1k more
  TrainerState first;
  GmganBundle b1 = fresh(first);
  cfg.steps = 1000;
  std::vector<MetricsRow> trace_a = train(first, cfg, b1.core, ds, split_x);
  save_checkpoint("acceptance-ckpt.json", first, {{"instance", "gmgan"}});

  TrainerState second;
  GmganBundle b2 = fresh(second);
  load_checkpoint("acceptance-ckpt.json", second);
  std::vector<MetricsRow> trace_b = train(second, cfg, b2.core, ds, split_x);

  ok = ok && trace_full.size() == trace_a.size() + trace_b.size();
  for (std::size_t i = 0; ok && i < trace_full.size(); ++i) {
    const MetricsRow& want = trace_full[i];
    const MetricsRow& got = i < trace_a.size() ? trace_a[i] : trace_b[i - trace_a.size()];
    ok = want.objective == got.objective && want.per_factor == got.per_factor;
  }
  for (auto& [name, p] : full.store.items())
    ok = ok && p.value.data == second.store.get(name).value.data;
  std::remove("acceptance-ckpt.json");
  std::remove("acceptance-ckpt.json.bin");

  // PGM golden: fixed frames must serialize to these exact bytes everywhere
  Tensor f1({2, 2}, {-1.0, 0.0, 0.5, 1.0});
  Tensor f2({2, 2}, {1.0, 1.0, -1.0, -1.0});
  write_pgm_grid({f1, f2}, 1, 2, "acceptance-golden.pgm");
  std::string want = "P5\n5 2\n255\n";
  const unsigned char px[10] = {0, 128, 0, 255, 255, 191, 255, 0, 0, 0};
  want.append(reinterpret_cast<const char*>(px), 10);
  std::string got = slurp("acceptance-golden.pgm");
  bool pgm_ok = got == want;
  std::remove("acceptance-golden.pgm");

  detail = std::string("split-run trace and parameters ") + (ok ? "identical" : "DIVERGED") +
           ", PGM golden " + (pgm_ok ? "byte-identical" : "MISMATCH");
  return ok && pgm_ok;
}

}  // namespace

int main(int argc, char** argv) {
  const Criterion criteria[] = {
      {1, "recognition structure compilation", c1_structure},
      {2, "tabular factor oracle", c2_factor_oracle},
      {3, "gradient suite", c3_gradient_suite},
      {4, "gumbel/reparam contracts", c4_stochastics},
      {5, "mixture clustering at desk scale", c5_gmgan_clustering},
      {6, "local beats global", c6_local_beats_global},
      {7, "video model structure and stability", c7_ssgan_stability},
      {8, "motion analogy contract", c8_motion_analogy},
      {9, "determinism and persistence", c9_determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::string detail;
    bool pass = false;
    try {
      pass = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.title,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures;
}
