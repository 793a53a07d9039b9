#pragma once

#include <string>
#include <vector>

#include "ggan/graph.hpp"

namespace ggan {

// Explicit joint tables over small finite spaces; the test fixture behind the
// local-divergence oracles. Assignments are mixed-radix indices, last
// variable fastest.
struct TabularModel {
  std::vector<std::string> names;
  std::vector<std::size_t> card;
  std::vector<double> p;
  std::vector<double> q;

  std::size_t states() const;
  void validate() const;  // nonnegative, sums to 1 within 1e-12
  std::size_t var_index(const std::string& name) const;
};

struct LocalJsResult {
  double total = 0.0;               // averaged over factor instances
  std::vector<double> per_factor;   // one term per instance, in factor order
};

// Jensen-Shannon divergence JS(q||p) in nats, 1/2-weighted convention
// (maximum log 2), by full enumeration.
double exact_joint_js(const TabularModel& tab);

// (1/|F|) sum over factor instances of  E_q log(q(A)/m(A)) + E_p log(p(A)/m(A)),
// m = (p+q)/2. Route A: factor marginals enumerated directly, expectation as
// a sum over factor assignments.
LocalJsResult exact_local_js(const TabularModel& tab, const FactorSet& factors);

// Route B: independent computation path. Marginals accumulated by a sweep
// over full joint assignments; expectations taken under the full joints with
// the log-ratio looked up per assignment.
LocalJsResult exact_local_js_joint(const TabularModel& tab, const FactorSet& factors);

// The adversarial objective with the closed-form optimal discriminator
// D*(A) = q(A)/(q(A)+p(A)) substituted per factor:
// (1/|F|) sum_A [ E_q log D*(A) + E_p log(1-D*(A)) ].
// Equals exact_local_js minus 2 log 2 per factor.
LocalJsResult optimal_disc_objective(const TabularModel& tab, const FactorSet& factors);

// p and q swapped; both exact divergences are symmetric under this.
TabularModel swap_pq(const TabularModel& tab);

}  // namespace ggan
