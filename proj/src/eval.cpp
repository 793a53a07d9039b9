#include "ggan/eval.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "ggan/data.hpp"

namespace ggan {

ClusterReport cluster_accuracy(const Tensor& h, const std::vector<int>& assignments,
                               const std::vector<int>& labels, std::size_t K) {
  const std::size_t n = h.rows();
  if (n == 0) throw GganError(Err::EmptyInput, "cluster_accuracy: no samples");
  if (assignments.size() != n || labels.size() != n)
    throw GganError(Err::ShapeMismatch, "cluster_accuracy: length mismatch");
  const std::size_t d = h.cols();

  ClusterReport rep;
  rep.assignments = assignments;
  rep.cluster_label.assign(K, -1);
  rep.cluster_size.assign(K, 0);

  std::vector<std::vector<double>> centroid(K, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const int k = assignments[i];
    if (k < 0 || std::size_t(k) >= K)
      throw GganError(Err::BadParameter, "cluster_accuracy: assignment out of range");
    rep.cluster_size[std::size_t(k)] += 1;
    for (std::size_t j = 0; j < d; ++j) centroid[std::size_t(k)][j] += h.at(i, j);
  }
  for (std::size_t k = 0; k < K; ++k)
    if (rep.cluster_size[k] > 0)
      for (std::size_t j = 0; j < d; ++j) centroid[k][j] /= double(rep.cluster_size[k]);

  // Nearest member to each centroid donates its true label; ties go to the
  // lower sample index.
  std::vector<double> best(K, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = std::size_t(assignments[i]);
    double dist = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = h.at(i, j) - centroid[k][j];
      dist += diff * diff;
    }
    if (dist < best[k]) {
      best[k] = dist;
      rep.cluster_label[k] = labels[i];
    }
  }

  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (labels[i] == rep.cluster_label[std::size_t(assignments[i])]) ++correct;
  rep.accuracy = double(correct) / double(n);
  return rep;
}

double reconstruction_mse(const Tensor& x, const Tensor& x_rec) {
  if (!x.same_shape(x_rec)) throw GganError(Err::ShapeMismatch, "reconstruction_mse: shape mismatch");
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.data[i] - x_rec.data[i];
    s += d * d;
  }
  return s / double(x.size());
}

std::pair<double, ClusterReport> gmgan_eval_acc(const GmganBundle& bundle, ParamStore& store,
                                                const Tensor& samples, const std::vector<int>& labels) {
  Tensor h = gmgan_extract_h(bundle, store, samples);
  Tensor post = gmgan_posterior_k(h, store.get("prior.mu").value);
  std::vector<int> assign(samples.rows());
  const std::size_t K = bundle.cfg.K;
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < K; ++k)
      if (post.at(i, k) > post.at(i, best)) best = k;
    assign[i] = int(best);
  }
  ClusterReport rep = cluster_accuracy(h, assign, labels, K);
  return {rep.accuracy, std::move(rep)};
}

double gmgan_eval_mse(const GmganBundle& bundle, ParamStore& store, const Tensor& samples) {
  return reconstruction_mse(samples, gmgan_reconstruct(bundle, store, samples));
}

SeedOutcome run_gmgan_seed(const GmganConfig& proto, TrainerConfig cfg, const MixtureDataset& dataset,
                           std::uint64_t seed) {
  SeedOutcome out;
  out.seed = seed;
  try {
    cfg.seed = seed;
    TrainerState state;
    state.rng.seed(seed);
    std::mt19937_64 init_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    GmganBundle bundle = build_gmgan(proto, state.store, init_rng);

    Dataset data;
    data.samples = &dataset.samples;
    auto split = [](const Tensor& batch) { return std::map<std::string, Tensor>{{"x", batch}}; };
    train(state, cfg, bundle.core, data, split);

    out.acc = gmgan_eval_acc(bundle, state.store, dataset.samples, dataset.labels).first;
    out.mse = gmgan_eval_mse(bundle, state.store, dataset.samples);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

static ModeColumn summarize(std::vector<SeedOutcome> runs) {
  ModeColumn col;
  col.runs = std::move(runs);
  double sa = 0, sm = 0;
  std::size_t n = 0;
  for (auto& r : col.runs)
    if (r.ok) {
      sa += r.acc;
      sm += r.mse;
      ++n;
    }
  if (n > 0) {
    col.mean_acc = sa / double(n);
    col.mean_mse = sm / double(n);
  }
  if (n > 1) {
    double va = 0, vm = 0;
    for (auto& r : col.runs)
      if (r.ok) {
        va += (r.acc - col.mean_acc) * (r.acc - col.mean_acc);
        vm += (r.mse - col.mean_mse) * (r.mse - col.mean_mse);
      }
    col.std_acc = std::sqrt(va / double(n - 1));
    col.std_mse = std::sqrt(vm / double(n - 1));
  }
  return col;
}

ModeComparison compare_modes(const GmganConfig& proto, const TrainerConfig& config_local,
                             const TrainerConfig& config_global, const MixtureDataset& dataset,
                             const std::vector<std::uint64_t>& seeds) {
  if (config_local.steps != config_global.steps || config_local.batch != config_global.batch ||
      config_local.adam.lr != config_global.adam.lr)
    throw GganError(Err::BadParameter, "compare_modes requires identical budgets");
  ModeComparison cmp;
  std::vector<SeedOutcome> lo, gl;
  for (auto s : seeds) {
    lo.push_back(run_gmgan_seed(proto, config_local, dataset, s));
    gl.push_back(run_gmgan_seed(proto, config_global, dataset, s));
  }
  cmp.local = summarize(std::move(lo));
  cmp.global = summarize(std::move(gl));
  return cmp;
}

void write_comparison_csv(std::ostream& os, const ModeComparison& cmp) {
  os << "mode,seed,ok,acc,mse,error\n";
  auto dump = [&](const char* mode, const ModeColumn& col) {
    for (auto& r : col.runs)
      os << mode << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',' << r.acc << ',' << r.mse << ','
         << r.error << '\n';
  };
  dump("local", cmp.local);
  dump("global", cmp.global);
}

void write_comparison_text(std::ostream& os, const ModeComparison& cmp) {
  auto line = [&](const char* mode, const ModeColumn& col) {
    os << mode << ": mean ACC " << col.mean_acc;
    if (col.std_acc) os << " (+/- " << *col.std_acc << ")";
    os << ", mean MSE " << col.mean_mse;
    if (col.std_mse) os << " (+/- " << *col.std_mse << ")";
    os << " over " << col.runs.size() << " seeds\n";
  };
  line("local ", cmp.local);
  line("global", cmp.global);
}

}  // namespace ggan
