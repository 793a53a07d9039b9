#include "ggan/tabular.hpp"

#include <cmath>

namespace ggan {

std::size_t TabularModel::states() const {
  std::size_t n = 1;
  for (auto c : card) n *= c;
  return n;
}

void TabularModel::validate() const {
  if (names.size() != card.size())
    throw GganError(Err::BadParameter, "tabular: names/card length mismatch");
  if (p.size() != states() || q.size() != states())
    throw GganError(Err::BadParameter, "tabular: table size mismatch");
  for (auto* tbl : {&p, &q}) {
    double sum = 0;
    for (double v : *tbl) {
      if (v < 0) throw GganError(Err::BadParameter, "tabular: negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw GganError(Err::BadParameter, "tabular: table does not sum to 1");
  }
}

std::size_t TabularModel::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw GganError(Err::UnknownVariable, "tabular: no variable '" + name + "'");
}

// xlog(x/y) with the 0 log 0 = 0 convention.
static double xlogxy(double x, double y) { return x > 0 ? x * std::log(x / y) : 0.0; }

double exact_joint_js(const TabularModel& tab) {
  tab.validate();
  double js = 0;
  for (std::size_t s = 0; s < tab.states(); ++s) {
    const double m = 0.5 * (tab.p[s] + tab.q[s]);
    js += 0.5 * xlogxy(tab.q[s], m) + 0.5 * xlogxy(tab.p[s], m);
  }
  return js;
}

// Decodes joint state s into the digits of the factor's variable positions.
static std::size_t project(std::size_t s, const std::vector<std::size_t>& card,
                           const std::vector<std::size_t>& positions,
                           const std::vector<std::size_t>& factor_card) {
  std::vector<std::size_t> digits(card.size());
  for (std::size_t i = card.size(); i-- > 0;) {
    digits[i] = s % card[i];
    s /= card[i];
  }
  std::size_t idx = 0;
  for (std::size_t j = 0; j < positions.size(); ++j) idx = idx * factor_card[j] + digits[positions[j]];
  return idx;
}

struct FactorView {
  std::vector<std::size_t> positions;
  std::vector<std::size_t> factor_card;
  std::size_t states;
};

static FactorView view_of(const TabularModel& tab, const std::vector<std::string>& vars) {
  FactorView v;
  v.states = 1;
  for (auto& name : vars) {
    const std::size_t i = tab.var_index(name);
    v.positions.push_back(i);
    v.factor_card.push_back(tab.card[i]);
    v.states *= tab.card[i];
  }
  return v;
}

LocalJsResult exact_local_js(const TabularModel& tab, const FactorSet& factors) {
  tab.validate();
  LocalJsResult res;
  for (auto& f : factors.factors) {
    for (auto& inst : f.instances) {
      const FactorView v = view_of(tab, inst);
      std::vector<double> pm(v.states, 0.0), qm(v.states, 0.0);
      for (std::size_t s = 0; s < tab.states(); ++s) {
        const std::size_t a = project(s, tab.card, v.positions, v.factor_card);
        pm[a] += tab.p[s];
        qm[a] += tab.q[s];
      }
      double term = 0;
      for (std::size_t a = 0; a < v.states; ++a) {
        const double m = 0.5 * (pm[a] + qm[a]);
        term += xlogxy(qm[a], m) + xlogxy(pm[a], m);
      }
      res.per_factor.push_back(term);
      res.total += term;
    }
  }
  if (!res.per_factor.empty()) res.total /= double(res.per_factor.size());
  return res;
}

LocalJsResult exact_local_js_joint(const TabularModel& tab, const FactorSet& factors) {
  tab.validate();
  LocalJsResult res;
  for (auto& f : factors.factors) {
    for (auto& inst : f.instances) {
      const FactorView v = view_of(tab, inst);
      // Marginals via a different accumulation: sweep assignments in factor
      // space, summing the joint over the complement explicitly.
      std::vector<double> pm(v.states, 0.0), qm(v.states, 0.0);
      std::vector<std::size_t> digits(tab.card.size(), 0);
      for (std::size_t s = 0; s < tab.states(); ++s) {
        std::size_t rem = s;
        for (std::size_t i = tab.card.size(); i-- > 0;) {
          digits[i] = rem % tab.card[i];
          rem /= tab.card[i];
        }
        std::size_t a = 0;
        for (std::size_t j = 0; j < v.positions.size(); ++j)
          a = a * v.factor_card[j] + digits[v.positions[j]];
        pm[a] += tab.p[s];
        qm[a] += tab.q[s];
      }
      // Expectation under the full joints, ratio looked up per assignment.
      double term = 0;
      for (std::size_t s = 0; s < tab.states(); ++s) {
        const std::size_t a = project(s, tab.card, v.positions, v.factor_card);
        const double m = 0.5 * (pm[a] + qm[a]);
        if (tab.q[s] > 0) term += tab.q[s] * std::log(qm[a] / m);
        if (tab.p[s] > 0) term += tab.p[s] * std::log(pm[a] / m);
      }
      res.per_factor.push_back(term);
      res.total += term;
    }
  }
  if (!res.per_factor.empty()) res.total /= double(res.per_factor.size());
  return res;
}

LocalJsResult optimal_disc_objective(const TabularModel& tab, const FactorSet& factors) {
  tab.validate();
  LocalJsResult res;
  for (auto& f : factors.factors) {
    for (auto& inst : f.instances) {
      const FactorView v = view_of(tab, inst);
      std::vector<double> pm(v.states, 0.0), qm(v.states, 0.0);
      for (std::size_t s = 0; s < tab.states(); ++s) {
        const std::size_t a = project(s, tab.card, v.positions, v.factor_card);
        pm[a] += tab.p[s];
        qm[a] += tab.q[s];
      }
      double term = 0;
      for (std::size_t a = 0; a < v.states; ++a) {
        const double denom = pm[a] + qm[a];
        if (denom <= 0) continue;
        const double dstar = qm[a] / denom;
        if (qm[a] > 0) term += qm[a] * std::log(dstar);
        if (pm[a] > 0) term += pm[a] * std::log(1.0 - dstar);
      }
      res.per_factor.push_back(term);
      res.total += term;
    }
  }
  if (!res.per_factor.empty()) res.total /= double(res.per_factor.size());
  return res;
}

TabularModel swap_pq(const TabularModel& tab) {
  TabularModel out = tab;
  std::swap(out.p, out.q);
  return out;
}

}  // namespace ggan
