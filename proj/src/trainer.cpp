#include "ggan/trainer.hpp"

#include <cmath>
#include <ostream>

namespace ggan {

void TrainerConfig::validate() const {
  if (batch < 1) throw GganError(Err::BadParameter, "batch must be >= 1");
  if (adam.lr <= 0.0) throw GganError(Err::BadParameter, "learning rate must be > 0");
  if (steps < 0) throw GganError(Err::BadParameter, "steps must be >= 0");
  if (disc_steps_per_model_step < 1)
    throw GganError(Err::BadParameter, "disc_steps_per_model_step must be >= 1");
}

SampleTable ModelBundle::sample_p(Tape& t, std::size_t batch, std::uint64_t noise_seed) const {
  NoiseBundle nb = NoiseBundle::make(dag, batch, noise_seed, noise_share);
  return ancestral_sample(t, dag, p_fns, nb);
}

SampleTable ModelBundle::sample_q(Tape& t, const std::map<std::string, Tensor>& observed,
                                  std::uint64_t noise_seed) const {
  std::size_t batch = observed.empty() ? 0 : observed.begin()->second.rows();
  NoiseBundle nb = NoiseBundle::make(dag, batch, noise_seed, {});
  return ancestral_sample(t, dag, rec, q_fns, nb, observed);
}

// Runs one tied discriminator on an instance tuple pulled from a table.
static Var disc_logit(Tape& t, const FactorDiscriminator& d, const std::vector<std::string>& instance,
                      const SampleTable& table) {
  std::vector<Var> parts;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    Var v = table.at(instance[i]);
    if (i < d.features.size() && d.features[i])
      v = mlp_forward(t, d.prefix + ".f" + std::to_string(i), *d.features[i], v);
    parts.push_back(v);
  }
  Var in = parts.size() == 1 ? parts[0] : t.concat_cols(parts);
  return mlp_forward(t, d.prefix, d.trunk, in);
}

// mean log D   (from logits):  -softplus(-l)
// mean log 1-D (from logits):  -softplus(l)
static Var mean_log_d(Tape& t, Var logit) { return t.scale(t.mean_all(t.softplus(t.scale(logit, -1.0))), -1.0); }
static Var mean_log_1md(Tape& t, Var logit) { return t.scale(t.mean_all(t.softplus(logit)), -1.0); }

namespace {

// Both objectives share the same discriminator passes:
//   estimate  = E_q log D + E_p log(1-D)   (the divergence estimate)
//   surrogate = E_p log D + E_q log(1-D)   (non-saturating model target)
struct Phase {
  Var estimate = -1;
  Var surrogate = -1;
  std::vector<double> per_factor;
};

Phase build_phase(Tape& t, Mode mode, const ModelBundle& bundle, const SampleTable& tp,
                  const SampleTable& tq) {
  Phase ph;
  Var est = -1, sur = -1;
  auto accumulate = [&](Var lq, Var lp) {
    Var e = t.add(mean_log_d(t, lq), mean_log_1md(t, lp));
    Var s = t.add(mean_log_d(t, lp), mean_log_1md(t, lq));
    ph.per_factor.push_back(t.val(e).data[0]);
    est = est < 0 ? e : t.add(est, e);
    sur = sur < 0 ? s : t.add(sur, s);
  };

  if (mode == Mode::local) {
    const std::size_t count = bundle.factors.instance_count();
    if (count == 0) throw GganError(Err::MissingVariable, "factor set is empty");
    for (auto& d : bundle.discs) {
      const Factor& f = bundle.factors.factors[d.factor_index];
      for (auto& inst : f.instances)
        accumulate(disc_logit(t, d, inst, tq), disc_logit(t, d, inst, tp));
    }
    est = t.scale(est, 1.0 / double(count));
    sur = t.scale(sur, 1.0 / double(count));
  } else {
    std::vector<Var> parts_p, parts_q;
    for (auto& name : bundle.global_order) {
      parts_p.push_back(tp.at(name));
      parts_q.push_back(tq.at(name));
    }
    accumulate(mlp_forward(t, bundle.global_prefix, bundle.global_disc, t.concat_cols(parts_q)),
               mlp_forward(t, bundle.global_prefix, bundle.global_disc, t.concat_cols(parts_p)));
  }
  ph.estimate = est;
  ph.surrogate = sur;
  return ph;
}

}  // namespace

Objective local_objective(Tape& t, const ModelBundle& bundle, const SampleTable& table_p,
                          const SampleTable& table_q) {
  Phase ph = build_phase(t, Mode::local, bundle, table_p, table_q);
  return {ph.estimate, std::move(ph.per_factor)};
}

Objective global_objective(Tape& t, const ModelBundle& bundle, const SampleTable& table_p,
                           const SampleTable& table_q) {
  Phase ph = build_phase(t, Mode::global, bundle, table_p, table_q);
  return {ph.estimate, std::move(ph.per_factor)};
}

double disc_step(TrainerState& state, const TrainerConfig& cfg, const ModelBundle& bundle,
                 const std::map<std::string, Tensor>& observed_batch, std::uint64_t seed_p,
                 std::uint64_t seed_q, std::vector<double>* per_factor) {
  Tape t(&state.store);
  SampleTable tp = bundle.sample_p(t, cfg.batch, seed_p);
  SampleTable tq = bundle.sample_q(t, observed_batch, seed_q);
  Phase ph = build_phase(t, cfg.mode, bundle, tp, tq);
  const double estimate = t.val(ph.estimate).data[0];
  if (!std::isfinite(estimate)) throw GganError(Err::NonFiniteLoss, "divergence estimate is not finite");
  if (per_factor) *per_factor = ph.per_factor;
  t.backward(ph.estimate);
  state.store.adam_step(t.param_grads(), {Owner::discriminators}, cfg.adam, +1);
  return estimate;
}

double model_step(TrainerState& state, const TrainerConfig& cfg, const ModelBundle& bundle,
                  const std::map<std::string, Tensor>& observed_batch, std::uint64_t seed_p,
                  std::uint64_t seed_q, std::vector<double>* per_factor) {
  Tape t(&state.store);
  SampleTable tp = bundle.sample_p(t, cfg.batch, seed_p);
  SampleTable tq = bundle.sample_q(t, observed_batch, seed_q);
  Phase ph = build_phase(t, cfg.mode, bundle, tp, tq);
  const double estimate = t.val(ph.estimate).data[0];
  if (!std::isfinite(estimate)) throw GganError(Err::NonFiniteLoss, "model objective is not finite");
  if (per_factor) *per_factor = ph.per_factor;

  const std::set<Owner> model_groups{Owner::generative, Owner::recognition, Owner::prior};
  if (cfg.gen_loss == GenLoss::minimax) {
    t.backward(ph.estimate);
    state.store.adam_step(t.param_grads(), model_groups, cfg.adam, -1);  // descend the estimate
  } else {
    t.backward(ph.surrogate);
    state.store.adam_step(t.param_grads(), model_groups, cfg.adam, +1);  // ascend the surrogate
  }
  return estimate;
}

static std::vector<std::size_t> draw_indices(std::mt19937_64& rng, std::size_t n, std::size_t batch) {
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  std::vector<std::size_t> idx(batch);
  for (auto& i : idx) i = d(rng);
  return idx;
}

Tensor Dataset::gather(const std::vector<std::size_t>& idx) const {
  if (!samples || samples->rows() == 0) throw GganError(Err::EmptyInput, "dataset is empty");
  const std::size_t d = samples->cols();
  Tensor out = Tensor::zeros({idx.size(), d});
  for (std::size_t r = 0; r < idx.size(); ++r)
    std::copy_n(samples->data.data() + idx[r] * d, d, out.data.data() + r * d);
  return out;
}

std::vector<MetricsRow> train(TrainerState& state, const TrainerConfig& cfg, const ModelBundle& bundle,
                              const Dataset& data,
                              const std::function<std::map<std::string, Tensor>(const Tensor&)>& split_observed,
                              const EvalHook& eval_hook, std::ostream* csv, const StepHook& step_hook) {
  cfg.validate();
  std::vector<MetricsRow> trace;
  const char* mode_name = cfg.mode == Mode::local ? "local" : "global";

  for (long s = 0; s < cfg.steps; ++s) {
    MetricsRow row;
    for (int k = 0; k < cfg.disc_steps_per_model_step; ++k) {
      auto batch = data.gather(draw_indices(state.rng, data.size(), cfg.batch));
      const std::uint64_t sp = state.rng(), sq = state.rng();
      disc_step(state, cfg, bundle, split_observed(batch), sp, sq, nullptr);
    }
    {
      auto batch = data.gather(draw_indices(state.rng, data.size(), cfg.batch));
      const std::uint64_t sp = state.rng(), sq = state.rng();
      row.objective =
          model_step(state, cfg, bundle, split_observed(batch), sp, sq, &row.per_factor);
    }
    state.step += 1;
    row.step = state.step;
    row.mode = mode_name;
    if (eval_hook && ((cfg.eval_every > 0 && state.step % cfg.eval_every == 0) || s + 1 == cfg.steps))
      row.evals = eval_hook(state);
    if (csv) write_metrics_row(*csv, row);
    trace.push_back(std::move(row));
    if (step_hook) step_hook(state);
  }
  return trace;
}

void write_metrics_header(std::ostream& os) {
  os << "step,mode,objective,per_factor_terms,evals\n";
}

void write_metrics_row(std::ostream& os, const MetricsRow& row) {
  os << row.step << ',' << row.mode << ',' << row.objective << ',';
  for (std::size_t i = 0; i < row.per_factor.size(); ++i)
    os << (i ? ";" : "") << row.per_factor[i];
  os << ',';
  for (std::size_t i = 0; i < row.evals.size(); ++i)
    os << (i ? ";" : "") << row.evals[i].first << '=' << row.evals[i].second;
  os << '\n';
}

}  // namespace ggan
