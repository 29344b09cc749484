#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rjmix/chain.hpp"
#include "rjmix/diagnostics.hpp"
#include "rjmix/model.hpp"

namespace rjmix {

enum class SamplerMode { FixedK, RJ };

// Per-parameter frequentist aggregates of a replication study, in the
// Table-2-style layout (rows = parameters).
struct ParamMetrics {
  std::string name;  // w1.., mu1.., sigma2_1..
  double srmse = 0.0;
  double mae = 0.0;
  double coverage_pct = 0.0;
  double mean_width = 0.0;
};

struct MetricsTable {
  std::vector<ParamMetrics> params;
  double k_recovery_rate = 0.0;  // rj mode; 1 for fixed-k
  int replications = 0;          // requested R
  int excluded = 0;              // numeric failures, dropped
  int scored = 0;                // replications entering the parameter rows
};

// One replication's scoring input: posterior point estimate and 95%
// interval per true parameter, in block order w, mu, sigma2.
struct RepScore {
  int rep = 0;
  bool excluded = false;   // numeric failure
  bool recovered = false;  // modal k equals the true k
  std::vector<double> est, lo, hi;
};

// Order-independent aggregation: scores are sorted by replication
// index before any reduction, so a shuffled input yields a
// bit-identical table.
MetricsTable aggregate_metrics(std::vector<RepScore> scores,
                               const Scenario& truth, int R,
                               double max_exclusion_fraction = 0.05);

std::vector<std::string> parameter_names(int k);

struct StudyOptions {
  int workers = 0;  // 0 = all hardware threads
  double max_exclusion_fraction = 0.05;
};

using SamplerFn =
    std::function<Chain(const Dataset&, const PriorSpec&, const McmcConfig&)>;

// Monte-Carlo study: for r = 1..R simulate a dataset from the
// scenario, run the sampler, summarize, and score against the truth.
// Replication seeds derive from cfg.seed (the master seed), so the
// study is a pure function of its arguments; replications may run on
// parallel workers without changing the result. In RJ mode the
// summaries condition on the modal k and only replications that
// recover the true k enter the parameter rows. Replications that fail
// numerically are excluded; more than max_exclusion_fraction of them
// aborts the study (study_failure).
MetricsTable run_replication_study(const Scenario& scenario, const PriorOptions& prior,
                                   const McmcConfig& cfg, int R, SamplerMode mode,
                                   const StudyOptions& opts = {});

// Same harness with an injected sampler (test oracles use stubs).
MetricsTable run_replication_study_with(const Scenario& scenario,
                                        const PriorOptions& prior,
                                        const McmcConfig& cfg, int R,
                                        SamplerMode mode, const SamplerFn& sampler,
                                        const StudyOptions& opts = {});

// The named generating mixtures of the simulation studies:
// "heterogeneous", "homogeneous", "k3", "k5".
std::vector<Scenario> builtin_scenarios();
Scenario find_scenario(const std::string& label);

}  // namespace rjmix
