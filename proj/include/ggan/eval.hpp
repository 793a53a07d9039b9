#pragma once

#include <iosfwd>
#include <optional>

#include "ggan/instances.hpp"

namespace ggan {

struct ClusterReport {
  std::vector<int> cluster_label;      // predicted class per cluster; -1 for empty clusters
  std::vector<std::size_t> cluster_size;
  std::vector<int> assignments;
  double accuracy = 0.0;
};

// The centroid protocol: label each nonempty cluster with the true class of
// the member nearest (Euclidean) to the cluster centroid of h, distance ties
// broken by sample index; score every member against its cluster's label.
ClusterReport cluster_accuracy(const Tensor& h, const std::vector<int>& assignments,
                               const std::vector<int>& labels, std::size_t K);

double reconstruction_mse(const Tensor& x, const Tensor& x_rec);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  double acc = 0.0;
  double mse = 0.0;
  std::string error;
};

struct ModeColumn {
  std::vector<SeedOutcome> runs;
  double mean_acc = 0.0;
  double mean_mse = 0.0;
  std::optional<double> std_acc;
  std::optional<double> std_mse;
};

struct ModeComparison {
  ModeColumn local;
  ModeColumn global;
};

struct MixtureDataset;  // data.hpp

// Trains a GMGAN per (mode, seed) under identical budgets and reports paired
// ACC/MSE columns. Per-seed failures are recorded, not fatal.
ModeComparison compare_modes(const GmganConfig& proto, const TrainerConfig& config_local,
                             const TrainerConfig& config_global, const MixtureDataset& dataset,
                             const std::vector<std::uint64_t>& seeds);

// One full GMGAN training run; returns final ACC and reconstruction MSE.
SeedOutcome run_gmgan_seed(const GmganConfig& proto, TrainerConfig cfg, const MixtureDataset& dataset,
                           std::uint64_t seed);

void write_comparison_csv(std::ostream& os, const ModeComparison& cmp);
void write_comparison_text(std::ostream& os, const ModeComparison& cmp);

// ACC/MSE of the current parameters on a dataset.
std::pair<double, ClusterReport> gmgan_eval_acc(const GmganBundle& bundle, ParamStore& store,
                                                const Tensor& samples, const std::vector<int>& labels);
double gmgan_eval_mse(const GmganBundle& bundle, ParamStore& store, const Tensor& samples);

}  // namespace ggan
