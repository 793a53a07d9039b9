// Batch entry points: train / sample / eval / infer / oracle / gradcheck.
// Exit codes: 0 success, 1 usage, 2 runtime failure, 3 failed verification
// gate. GGAN_OUT overrides the output directory.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ggan/checkpoint.hpp"
#include "ggan/data.hpp"
#include "ggan/eval.hpp"
#include "ggan/graph_io.hpp"
#include "ggan/instances.hpp"
#include "ggan/tabular.hpp"

using namespace ggan;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ------------------------------------------------------------ selectors

std::map<std::string, std::string> parse_kv(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw GganError(Err::BadParameter, "bad dataset parameter '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

struct DataSelector {
  std::string kind;  // "mixture" | "dots" | "idx"
  std::map<std::string, std::string> kv;

  std::size_t get(const std::string& key, std::size_t dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : std::size_t(std::stoull(it->second));
  }
  double getd(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : std::stod(it->second);
  }
  std::string gets(const std::string& key) const {
    auto it = kv.find(key);
    return it == kv.end() ? std::string() : it->second;
  }
};

DataSelector parse_selector(const std::string& s) {
  auto colon = s.find(':');
  DataSelector sel;
  sel.kind = s.substr(0, colon);
  if (colon != std::string::npos && colon + 1 < s.size()) sel.kv = parse_kv(s.substr(colon + 1));
  if (sel.kind != "mixture" && sel.kind != "dots" && sel.kind != "idx")
    throw GganError(Err::BadParameter, "unknown dataset kind '" + sel.kind + "'");
  return sel;
}

MixtureDataset mixture_of(const DataSelector& sel) {
  return make_mixture(sel.get("K", 5), sel.get("dim", 32), sel.get("N", 5000),
                      sel.getd("sep", 8.0), sel.get("seed", 1234));
}

VideoDataset dots_of(const DataSelector& sel) {
  return make_bouncing_dot(sel.get("T", 4), sel.get("N", 1000), sel.get("seed", 99),
                           sel.get("side", 8));
}

// --------------------------------------------------------------- RunConfig

struct RunConfig {
  std::string instance = "gmgan";  // gmgan | ssgan | custom
  std::string graph_path;          // for custom
  std::string mode = "local";
  std::string dataset = "mixture:K=5,dim=32,N=5000,sep=8,seed=1234";
  std::string out = "run";
  long steps = 20000;
  std::size_t batch = 100;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::uint64_t seed = 1;
  long eval_every = 1000;
  long checkpoint_every = 0;  // 0 = final only
  std::size_t dim_h = 8;
  std::size_t dim_v = 4;
  double tau = 0.1;
  bool gaussian_head = true;
};

TrainerConfig trainer_of(const RunConfig& rc) {
  TrainerConfig tc;
  if (rc.mode == "local") tc.mode = Mode::local;
  else if (rc.mode == "global") tc.mode = Mode::global;
  else throw CLI::ValidationError("--mode", "mode must be 'local' or 'global'");
  tc.batch = rc.batch;
  tc.adam.lr = rc.lr;
  tc.adam.beta1 = rc.beta1;
  tc.adam.beta2 = rc.beta2;
  tc.steps = rc.steps;
  tc.seed = rc.seed;
  tc.eval_every = rc.eval_every;
  tc.checkpoint_every = rc.checkpoint_every;
  return tc;
}

std::string out_dir(const RunConfig& rc) {
  const char* env = std::getenv("GGAN_OUT");
  return env && *env ? std::string(env) : rc.out;
}

// Flags win over --config file values: only keys whose flag was not passed
// on the command line are read from the file.
void apply_config_file(const std::string& path, CLI::App* cmd, RunConfig& rc) {
  std::ifstream f(path);
  if (!f) throw GganError(Err::IoError, "cannot open config '" + path + "'");
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw GganError(Err::BadParameter, "config '" + path + "' is not JSON");
  auto take = [&](const char* flag, const char* key, auto& field) {
    if (cmd->count(flag) == 0 && j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  take("--instance", "instance", rc.instance);
  take("--graph", "graph", rc.graph_path);
  take("--mode", "mode", rc.mode);
  take("--dataset", "dataset", rc.dataset);
  take("--out", "out", rc.out);
  take("--steps", "steps", rc.steps);
  take("--batch", "batch", rc.batch);
  take("--lr", "lr", rc.lr);
  take("--beta1", "beta1", rc.beta1);
  take("--beta2", "beta2", rc.beta2);
  take("--seed", "seed", rc.seed);
  take("--eval-every", "eval_every", rc.eval_every);
  take("--checkpoint-every", "checkpoint_every", rc.checkpoint_every);
  take("--dim-h", "dim_h", rc.dim_h);
  take("--dim-v", "dim_v", rc.dim_v);
  take("--tau", "tau", rc.tau);
  take("--gaussian-head", "gaussian_head", rc.gaussian_head);
}

// --------------------------------------------------------- model plumbing

struct LoadedModel {
  std::string instance;
  std::optional<GmganBundle> gmgan;
  std::optional<SsganBundle> ssgan;
  std::size_t side = 0;  // ssgan frame side
  TrainerState state;
  ModelBundle* core() {
    if (gmgan) return &gmgan->core;
    if (ssgan) return &ssgan->core;
    throw GganError(Err::BadParameter, "no model loaded");
  }
};

json gmgan_meta(const GmganConfig& c) {
  return json{{"K", c.K},         {"dim_h", c.dim_h},
              {"dim_x", c.dim_x}, {"g_hidden", c.g_hidden},
              {"e_hidden", c.e_hidden}, {"d_hidden", c.d_hidden},
              {"tau", c.tau},     {"mu_scale", c.mu_scale},
              {"gaussian_head", c.gaussian_head}};
}

json ssgan_meta(const SsganConfig& c, std::size_t side) {
  return json{{"T", c.T},           {"dim_h", c.dim_h},   {"dim_v", c.dim_v},
              {"dim_x", c.dim_x},   {"o_hidden", c.o_hidden}, {"g_hidden", c.g_hidden},
              {"e1_hidden", c.e1_hidden}, {"e2_hidden", c.e2_hidden},
              {"d_hidden", c.d_hidden}, {"shared_epsilon", c.shared_epsilon}, {"side", side}};
}

LoadedModel load_model(const std::string& ckpt) {
  LoadedModel m;
  // first pass just for the meta; params restore after the bundle registers them
  TrainerState probe;
  auto meta = load_checkpoint(ckpt, probe);
  auto it = meta.find("instance");
  if (it == meta.end()) throw GganError(Err::CorruptManifest, "checkpoint lacks 'instance' meta");
  m.instance = it->second;
  json cfg = json::parse(meta.at("config"));
  std::mt19937_64 rng(0);
  if (m.instance == "gmgan") {
    GmganConfig c;
    c.K = cfg.at("K"); c.dim_h = cfg.at("dim_h"); c.dim_x = cfg.at("dim_x");
    c.g_hidden = cfg.at("g_hidden").get<std::vector<std::size_t>>();
    c.e_hidden = cfg.at("e_hidden").get<std::vector<std::size_t>>();
    c.d_hidden = cfg.at("d_hidden").get<std::vector<std::size_t>>();
    c.tau = cfg.at("tau"); c.mu_scale = cfg.at("mu_scale");
    c.gaussian_head = cfg.at("gaussian_head");
    m.gmgan = build_gmgan(c, m.state.store, rng);
  } else if (m.instance == "ssgan") {
    SsganConfig c;
    c.T = cfg.at("T"); c.dim_h = cfg.at("dim_h"); c.dim_v = cfg.at("dim_v");
    c.dim_x = cfg.at("dim_x");
    c.o_hidden = cfg.at("o_hidden").get<std::vector<std::size_t>>();
    c.g_hidden = cfg.at("g_hidden").get<std::vector<std::size_t>>();
    c.e1_hidden = cfg.at("e1_hidden").get<std::vector<std::size_t>>();
    c.e2_hidden = cfg.at("e2_hidden").get<std::vector<std::size_t>>();
    c.d_hidden = cfg.at("d_hidden").get<std::vector<std::size_t>>();
    c.shared_epsilon = cfg.at("shared_epsilon");
    m.side = cfg.at("side");
    m.ssgan = build_ssgan(c, m.state.store, rng);
  } else {
    throw GganError(Err::BadParameter, "cannot rebuild instance '" + m.instance + "'");
  }
  load_checkpoint(ckpt, m.state);  // restores params, step, adam state, rng
  return m;
}

Tensor frame_of(const Tensor& flat, std::size_t row, std::size_t start, std::size_t h,
                std::size_t w) {
  Tensor f = Tensor::zeros({h, w});
  for (std::size_t i = 0; i < h * w; ++i) f.data[i] = flat.at(row, start + i);
  return f;
}

// GMGAN grid: K columns, k fixed per column, n rows. Non-square data rows
// render as 1-pixel-tall strips.
void write_gmgan_grid(GmganBundle& b, ParamStore& store, std::size_t n, std::uint64_t seed,
                      const std::string& path) {
  if (n == 0) throw GganError(Err::BadParameter, "sample count must be positive");
  const std::size_t K = b.cfg.K;
  std::vector<Tensor> columns;
  for (std::size_t k = 0; k < K; ++k) columns.push_back(gmgan_sample_x(b, store, k, n, seed + k));
  std::vector<Tensor> frames;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < K; ++k)
      frames.push_back(frame_of(columns[k], r, 0, 1, b.cfg.dim_x));
  write_pgm_grid(frames, n, K, path);
}

// SSGAN grid: one row per clip, frames left to right.
void write_ssgan_grid(SsganBundle& b, ParamStore& store, std::size_t n, std::size_t length,
                      std::size_t side, std::uint64_t seed, const std::string& path) {
  if (n == 0) throw GganError(Err::BadParameter, "sample count must be positive");
  if (length == 0) length = b.cfg.T;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&](std::size_t dim) {
    Tensor z = Tensor::zeros({1, dim});
    for (auto& v : z.data) v = g(rng);
    return z;
  };
  std::vector<Tensor> frames;
  for (std::size_t i = 0; i < n; ++i) {
    Rollout r = ssgan_rollout(b, store, draw(b.cfg.dim_h), draw(b.cfg.dim_v), length,
                              seed * 977 + i);
    for (std::size_t t = 0; t < length; ++t) frames.push_back(frame_of(r.frames, t, 0, side, side));
  }
  write_pgm_grid(frames, n, length, path);
}

void write_samples(LoadedModel& m, std::size_t n, std::size_t rollout, std::uint64_t seed,
                   const std::string& path) {
  if (m.gmgan) write_gmgan_grid(*m.gmgan, m.state.store, n, seed, path);
  else write_ssgan_grid(*m.ssgan, m.state.store, n, rollout, m.side, seed, path);
}

// -------------------------------------------------------------- commands

int cmd_train(const RunConfig& rc) {
  TrainerConfig tc = trainer_of(rc);
  tc.validate();
  const std::string dir = out_dir(rc);
  fs::create_directories(dir);
  DataSelector sel = parse_selector(rc.dataset);

  LoadedModel m;
  m.instance = rc.instance;
  m.state.rng.seed(rc.seed);
  std::mt19937_64 init_rng(rc.seed ^ 0x9e3779b97f4a7c15ULL);
  std::map<std::string, std::string> meta{{"instance", rc.instance}, {"dataset", rc.dataset}};

  Tensor samples;
  std::vector<int> labels;
  std::function<std::map<std::string, Tensor>(const Tensor&)> split;
  EvalHook eval_hook;

  if (rc.instance == "gmgan") {
    if (sel.kind != "mixture")
      throw GganError(Err::BadParameter, "gmgan trains on 'mixture:' datasets");
    MixtureDataset data = mixture_of(sel);
    samples = data.samples;
    labels = data.labels;
    GmganConfig gc;
    gc.K = data.K_true;
    gc.dim_h = rc.dim_h;
    gc.dim_x = samples.cols();
    gc.tau = rc.tau;
    gc.gaussian_head = rc.gaussian_head;
    m.gmgan = build_gmgan(gc, m.state.store, init_rng);
    meta["config"] = gmgan_meta(gc).dump();
    split = [](const Tensor& b) { return std::map<std::string, Tensor>{{"x", b}}; };
    eval_hook = [&, labels](TrainerState& st) {
      auto [acc, rep] = gmgan_eval_acc(*m.gmgan, st.store, samples, labels);
      double mse = gmgan_eval_mse(*m.gmgan, st.store, samples);
      return std::vector<std::pair<std::string, double>>{{"acc", acc}, {"mse", mse}};
    };
  } else if (rc.instance == "ssgan") {
    if (sel.kind != "dots")
      throw GganError(Err::BadParameter, "ssgan trains on 'dots:' datasets");
    VideoDataset data = dots_of(sel);
    samples = data.clips;
    const std::size_t T = data.T, fdim = data.side * data.side;
    SsganConfig sc;
    sc.T = T;
    sc.dim_h = rc.dim_h;
    sc.dim_v = rc.dim_v;
    sc.dim_x = fdim;
    sc.o_hidden = {32};
    m.ssgan = build_ssgan(sc, m.state.store, init_rng);
    m.side = data.side;
    meta["config"] = ssgan_meta(sc, data.side).dump();
    split = [T, fdim](const Tensor& b) {
      std::map<std::string, Tensor> obs;
      for (std::size_t t = 1; t <= T; ++t) {
        Tensor f = Tensor::zeros({b.rows(), fdim});
        for (std::size_t r = 0; r < b.rows(); ++r)
          for (std::size_t c = 0; c < fdim; ++c) f.at(r, c) = b.at(r, (t - 1) * fdim + c);
        obs["x" + std::to_string(t)] = f;
      }
      return obs;
    };
    eval_hook = [&](TrainerState& st) {
      Tensor rec = ssgan_reconstruct(*m.ssgan, st.store, samples);
      return std::vector<std::pair<std::string, double>>{
          {"mse", reconstruction_mse(samples, rec)}};
    };
  } else if (rc.instance == "custom") {
    if (rc.graph_path.empty())
      throw GganError(Err::BadParameter, "custom instance needs --graph");
    GraphDescription desc = load_graph(rc.graph_path);
    if (sel.kind != "mixture")
      throw GganError(Err::BadParameter, "custom instances train on 'mixture:' datasets");
    MixtureDataset data = mixture_of(sel);
    samples = data.samples;
    CustomConfig cc;
    cc.tau = rc.tau;
    cc.mean_field = desc.recognition_mode == "mean_field";
    cc.overrides = desc.overrides;
    ModelBundle core = build_custom(desc.dag, cc, m.state.store, init_rng);
    // one observed continuous variable consumes the whole sample row;
    // several split it by declared dims, in declaration order
    std::vector<std::pair<std::string, std::size_t>> obs_dims;
    std::size_t total = 0;
    for (auto& name : core.dag.observed()) {
      obs_dims.push_back({name, core.dag.var(name).domain.dim});
      total += obs_dims.back().second;
    }
    if (total != samples.cols())
      throw GganError(Err::ShapeMismatch, "graph observes " + std::to_string(total) +
                                              " dims, dataset rows have " +
                                              std::to_string(samples.cols()));
    split = [obs_dims](const Tensor& b) {
      std::map<std::string, Tensor> obs;
      std::size_t start = 0;
      for (auto& [name, dim] : obs_dims) {
        Tensor f = Tensor::zeros({b.rows(), dim});
        for (std::size_t r = 0; r < b.rows(); ++r)
          for (std::size_t c = 0; c < dim; ++c) f.at(r, c) = b.at(r, start + c);
        obs[name] = f;
        start += dim;
      }
      return obs;
    };
    meta["config"] = json{{"graph", graph_to_json(desc)}}.dump();
    // train against the generic bundle; no sample grids for custom graphs
    Dataset ds{&samples};
    std::ofstream csv(dir + "/metrics.csv");
    write_metrics_header(csv);
    train(m.state, tc, core, ds, split, {}, &csv);
    save_checkpoint(dir + "/ckpt-" + std::to_string(m.state.step), m.state, meta);
    return 0;
  } else {
    throw CLI::ValidationError("--instance", "unknown instance '" + rc.instance + "'");
  }

  Dataset ds{&samples};
  std::ofstream csv(dir + "/metrics.csv");
  write_metrics_header(csv);
  StepHook hook;
  if (tc.checkpoint_every > 0) {
    hook = [&](TrainerState& st) {
      if (st.step % tc.checkpoint_every != 0) return;
      save_checkpoint(dir + "/ckpt-" + std::to_string(st.step), st, meta);
      write_samples(m, 8, 0, rc.seed, dir + "/samples-" + std::to_string(st.step) + ".pgm");
    };
  }
  train(m.state, tc, *m.core(), ds, split, eval_hook, &csv, hook);
  save_checkpoint(dir + "/ckpt-" + std::to_string(m.state.step), m.state, meta);
  write_samples(m, 8, 0, rc.seed, dir + "/samples-" + std::to_string(m.state.step) + ".pgm");
  return 0;
}

int cmd_sample(const std::string& ckpt, std::size_t n, std::size_t rollout, std::uint64_t seed,
               std::string out) {
  LoadedModel m = load_model(ckpt);
  if (out.empty()) out = "samples.pgm";
  write_samples(m, n, rollout, seed, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_eval(const std::string& ckpt, const std::string& dataset, const std::string& out) {
  LoadedModel m = load_model(ckpt);
  DataSelector sel = parse_selector(dataset);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    file.open(out);
    os = &file;
  }
  if (m.gmgan) {
    MixtureDataset data = mixture_of(sel);
    auto [acc, rep] = gmgan_eval_acc(*m.gmgan, m.state.store, data.samples, data.labels);
    double mse = gmgan_eval_mse(*m.gmgan, m.state.store, data.samples);
    *os << "metric,value\nacc," << acc << "\nmse," << mse << "\n";
    *os << "cluster,label,size\n";
    for (std::size_t k = 0; k < rep.cluster_label.size(); ++k)
      *os << k << "," << rep.cluster_label[k] << "," << rep.cluster_size[k] << "\n";
  } else {
    VideoDataset data = dots_of(sel);
    Tensor rec = ssgan_reconstruct(*m.ssgan, m.state.store, data.clips);
    *os << "metric,value\nmse," << reconstruction_mse(data.clips, rec) << "\n";
  }
  return 0;
}

int cmd_infer(const std::string& ckpt, const std::string& dataset, std::size_t limit,
              const std::string& out) {
  LoadedModel m = load_model(ckpt);
  DataSelector sel = parse_selector(dataset);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    file.open(out);
    os = &file;
  }
  if (m.gmgan) {
    MixtureDataset data = mixture_of(sel);
    std::size_t n = std::min(limit, data.samples.rows());
    Tensor x = Tensor::zeros({n, data.samples.cols()});
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) x.at(r, c) = data.samples.at(r, c);
    Tensor h = gmgan_extract_h(*m.gmgan, m.state.store, x);
    Tensor post = gmgan_posterior_k(h, m.state.store.get("prior.mu").value);
    Tensor rec = gmgan_reconstruct(*m.gmgan, m.state.store, x);
    *os << "row";
    for (std::size_t j = 0; j < h.cols(); ++j) *os << ",h" << j;
    for (std::size_t k = 0; k < post.cols(); ++k) *os << ",q_k" << k;
    *os << ",recon_mse\n";
    for (std::size_t r = 0; r < n; ++r) {
      *os << r;
      for (std::size_t j = 0; j < h.cols(); ++j) *os << "," << h.at(r, j);
      for (std::size_t k = 0; k < post.cols(); ++k) *os << "," << post.at(r, k);
      double mse = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        double d = x.at(r, c) - rec.at(r, c);
        mse += d * d;
      }
      *os << "," << mse / double(x.cols()) << "\n";
    }
  } else {
    VideoDataset data = dots_of(sel);
    std::size_t n = std::min(limit, data.clips.rows());
    Tensor clips = Tensor::zeros({n, data.clips.cols()});
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < clips.cols(); ++c) clips.at(r, c) = data.clips.at(r, c);
    Tensor h = ssgan_extract_h(*m.ssgan, m.state.store, clips);
    *os << "clip";
    for (std::size_t j = 0; j < h.cols(); ++j) *os << ",h" << j;
    *os << "\n";
    for (std::size_t r = 0; r < n; ++r) {
      *os << r;
      for (std::size_t j = 0; j < h.cols(); ++j) *os << "," << h.at(r, j);
      *os << "\n";
    }
  }
  return 0;
}

int cmd_oracle() {
  // built-in 2x2x2 chain fixture plus random tables; the two enumeration
  // routes and the closed-form optimal discriminator must agree
  const double log4 = 2.0 * std::log(2.0);
  double worst_route = 0.0, worst_opt = 0.0;
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  bool ok = true;
  for (int trial = 0; trial < 6; ++trial) {
    std::size_t n = 3 + std::size_t(trial % 3);
    Dag dag;
    TabularModel tab;
    for (std::size_t i = 0; i < n; ++i) {
      std::string name = "z" + std::to_string(i + 1);
      dag.nodes.push_back({name, i + 1 == n ? VarKind::observed : VarKind::latent,
                           Domain::categorical(2), {}});
      if (i > 0) dag.edges.push_back({"z" + std::to_string(i), name});
      tab.names.push_back(name);
      tab.card.push_back(2);
    }
    auto fill = [&](std::vector<double>& dist) {
      dist.resize(std::size_t(1) << n);
      double z = 0.0;
      for (auto& w : dist) z += (w = u(rng));
      for (auto& w : dist) w /= z;
    };
    fill(tab.p);
    fill(tab.q);
    FactorSet fs = extract_factors(dag);
    LocalJsResult a = exact_local_js(tab, fs);
    LocalJsResult b = exact_local_js_joint(tab, fs);
    LocalJsResult o = optimal_disc_objective(tab, fs);
    std::cout << "chain n=" << n << " joint_js=" << exact_joint_js(tab)
              << " local_js=" << a.total << " per-factor:";
    for (std::size_t i = 0; i < a.per_factor.size(); ++i) {
      std::cout << " " << a.per_factor[i];
      worst_route = std::max(worst_route, std::fabs(a.per_factor[i] - b.per_factor[i]));
      worst_opt = std::max(worst_opt, std::fabs(o.per_factor[i] - (a.per_factor[i] - log4)));
    }
    worst_route = std::max(worst_route, std::fabs(a.total - b.total));
    std::cout << "\n";
  }
  std::cout << "route gap " << worst_route << " (tol 1e-12), optimal-D gap " << worst_opt
            << " (tol 1e-9)\n";
  ok = worst_route <= 1e-12 && worst_opt <= 1e-9;
  std::cout << (ok ? "ORACLE OK" : "ORACLE FAILED") << "\n";
  return ok ? 0 : 3;
}

int cmd_gradcheck(const std::string& instance, std::uint64_t seed) {
  ParamStore store;
  std::mt19937_64 rng(seed);
  ModelBundle* core = nullptr;
  std::optional<GmganBundle> gb;
  std::optional<SsganBundle> sb;
  std::map<std::string, Tensor> observed;
  if (instance == "gmgan") {
    GmganConfig gc;
    gc.K = 2; gc.dim_h = 2; gc.dim_x = 3;
    gc.g_hidden = {4}; gc.e_hidden = {4}; gc.d_hidden = {4};
    gc.gaussian_head = true;
    gb = build_gmgan(gc, store, rng);
    core = &gb->core;
    observed["x"] = gaussian_init({2, 3}, 0.5, rng);
  } else if (instance == "ssgan") {
    SsganConfig sc;
    sc.T = 2; sc.dim_h = 2; sc.dim_v = 2; sc.dim_x = 4;
    sc.o_hidden = {3}; sc.g_hidden = {4}; sc.e1_hidden = {4}; sc.e2_hidden = {4};
    sc.d_hidden = {4};
    sb = build_ssgan(sc, store, rng);
    core = &sb->core;
    observed["x1"] = gaussian_init({2, 4}, 0.5, rng);
    observed["x2"] = gaussian_init({2, 4}, 0.5, rng);
  } else {
    throw CLI::ValidationError("instance", "gradcheck expects 'gmgan' or 'ssgan'");
  }

  // group parameters by component so every dependency function and
  // discriminator reports its own line
  std::map<std::string, std::vector<std::string>> groups;
  for (auto& [name, p] : store.items()) {
    auto second_dot = name.find('.', name.find('.') + 1);
    groups[name.substr(0, second_dot)].push_back(name);
  }
  auto loss = [&](Tape& t) {
    SampleTable tp = core->sample_p(t, 2, seed * 7);
    SampleTable tq = core->sample_q(t, observed, seed * 7 + 1);
    Objective lo = local_objective(t, *core, tp, tq);
    Objective go = global_objective(t, *core, tp, tq);
    return t.add(lo.value, go.value);
  };
  bool ok = true;
  for (auto& [group, names] : groups) {
    GradReport rep = grad_check(loss, store, names, 1e-4);
    std::cout << (rep.pass ? "pass" : "FAIL") << "  " << group
              << "  max_rel_err=" << rep.max_rel_err << " (" << rep.worst_param << ")\n";
    ok = ok && rep.pass;
  }
  std::cout << (ok ? "GRADCHECK OK" : "GRADCHECK FAILED") << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphical adversarial model toolkit"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string config_path;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model, writing checkpoints and metrics");
  train_cmd->add_option("--instance", rc.instance, "gmgan | ssgan | custom");
  train_cmd->add_option("--graph", rc.graph_path, "graph description JSON (custom instance)");
  train_cmd->add_option("--mode", rc.mode, "local | global");
  train_cmd->add_option("--dataset", rc.dataset, "selector, e.g. mixture:K=5,dim=32,N=5000 or dots:T=4,side=8");
  train_cmd->add_option("--out", rc.out, "output directory (GGAN_OUT overrides)");
  train_cmd->add_option("--steps", rc.steps);
  train_cmd->add_option("--batch", rc.batch);
  train_cmd->add_option("--lr", rc.lr);
  train_cmd->add_option("--beta1", rc.beta1);
  train_cmd->add_option("--beta2", rc.beta2);
  train_cmd->add_option("--seed", rc.seed);
  train_cmd->add_option("--eval-every", rc.eval_every);
  train_cmd->add_option("--checkpoint-every", rc.checkpoint_every);
  train_cmd->add_option("--dim-h", rc.dim_h);
  train_cmd->add_option("--dim-v", rc.dim_v);
  train_cmd->add_option("--tau", rc.tau);
  train_cmd->add_flag("--gaussian-head,!--no-gaussian-head", rc.gaussian_head);
  train_cmd->add_option("--config", config_path, "JSON config; explicit flags win");

  std::string ckpt, dataset, out_file;
  std::size_t n = 8, rollout = 0, limit = 16;
  std::uint64_t seed = 1;
  CLI::App* sample_cmd = app.add_subcommand("sample", "write a PGM sample grid from a checkpoint");
  sample_cmd->add_option("--ckpt", ckpt)->required();
  sample_cmd->add_option("--n", n, "rows (clips for video models)");
  sample_cmd->add_option("--rollout", rollout, "video rollout length (default: training horizon)");
  sample_cmd->add_option("--seed", seed);
  sample_cmd->add_option("--out", out_file);

  CLI::App* eval_cmd = app.add_subcommand("eval", "clustering accuracy / reconstruction error");
  eval_cmd->add_option("--ckpt", ckpt)->required();
  eval_cmd->add_option("--dataset", dataset)->required();
  eval_cmd->add_option("--out", out_file);

  CLI::App* infer_cmd = app.add_subcommand("infer", "latents and posteriors for dataset rows");
  infer_cmd->add_option("--ckpt", ckpt)->required();
  infer_cmd->add_option("--dataset", dataset)->required();
  infer_cmd->add_option("--n", limit, "rows to read");
  infer_cmd->add_option("--out", out_file);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "tabular enumeration self-consistency gate");

  std::string gc_instance = "gmgan";
  CLI::App* gradcheck_cmd = app.add_subcommand("gradcheck", "finite-difference gradient gate");
  gradcheck_cmd->add_option("instance", gc_instance, "gmgan | ssgan");
  gradcheck_cmd->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train_cmd->parsed()) {
      if (!config_path.empty()) apply_config_file(config_path, train_cmd, rc);
      return cmd_train(rc);
    }
    if (sample_cmd->parsed()) return cmd_sample(ckpt, n, rollout, seed, out_file);
    if (eval_cmd->parsed()) return cmd_eval(ckpt, dataset, out_file);
    if (infer_cmd->parsed()) return cmd_infer(ckpt, dataset, limit, out_file);
    if (oracle_cmd->parsed()) return cmd_oracle();
    if (gradcheck_cmd->parsed()) return cmd_gradcheck(gc_instance, seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
