#include "rjmix/replication.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rjmix/errors.hpp"
#include "rjmix/gibbs.hpp"
#include "rjmix/rjmcmc.hpp"
#include "rjmix/rng.hpp"

namespace rjmix {

std::vector<std::string> parameter_names(int k) {
  std::vector<std::string> names;
  for (int j = 1; j <= k; ++j) names.push_back("w" + std::to_string(j));
  for (int j = 1; j <= k; ++j) names.push_back("mu" + std::to_string(j));
  for (int j = 1; j <= k; ++j) names.push_back("sigma2_" + std::to_string(j));
  return names;
}

MetricsTable aggregate_metrics(std::vector<RepScore> scores, const Scenario& truth,
                               int R, double max_exclusion_fraction) {
  std::sort(scores.begin(), scores.end(),
            [](const RepScore& a, const RepScore& b) { return a.rep < b.rep; });

  MetricsTable table;
  table.replications = R;
  for (const auto& s : scores)
    if (s.excluded) ++table.excluded;
  if (table.excluded > max_exclusion_fraction * R)
    throw study_failure("replication study excluded " + std::to_string(table.excluded) +
                        " of " + std::to_string(R) + " runs");

  const int included = R - table.excluded;
  long recovered = 0;
  for (const auto& s : scores)
    if (!s.excluded && s.recovered) ++recovered;
  table.k_recovery_rate = included > 0 ? static_cast<double>(recovered) / included : 0.0;

  std::vector<double> flat_truth;
  for (double v : truth.true_w) flat_truth.push_back(v);
  for (double v : truth.true_mu) flat_truth.push_back(v);
  for (double v : truth.true_sigma2) flat_truth.push_back(v);
  const auto names = parameter_names(truth.true_k);

  // Only replications with a truth-comparable summary (recovered k)
  // enter the parameter rows.
  std::vector<const RepScore*> scored;
  for (const auto& s : scores)
    if (!s.excluded && s.recovered && s.est.size() == flat_truth.size())
      scored.push_back(&s);
  table.scored = static_cast<int>(scored.size());
  if (scored.empty()) return table;

  for (std::size_t p = 0; p < flat_truth.size(); ++p) {
    ParamMetrics m;
    m.name = names[p];
    const double t = flat_truth[p];
    double sq = 0.0, abs = 0.0, wid = 0.0;
    long cover = 0;
    for (const RepScore* s : scored) {
      const double e = s->est[p] - t;
      sq += e * e;
      abs += std::abs(e);
      wid += s->hi[p] - s->lo[p];
      if (s->lo[p] <= t && t <= s->hi[p]) ++cover;
    }
    const double n = static_cast<double>(scored.size());
    m.srmse = std::sqrt(sq / n);
    m.mae = abs / n;
    m.coverage_pct = 100.0 * cover / n;
    m.mean_width = wid / n;
    table.params.push_back(m);
  }
  return table;
}

namespace {

RepScore score_one(const Scenario& scenario, const PriorOptions& prior_opts,
                   const McmcConfig& cfg, SamplerMode mode, const SamplerFn& sampler,
                   int rep) {
  RepScore score;
  score.rep = rep;
  try {
    const auto sim = simulate_dataset(scenario, derive_seed(cfg.seed, 2ULL * rep));
    const PriorSpec prior = prior_opts.resolve(sim.data);
    McmcConfig rep_cfg = cfg;
    rep_cfg.seed = derive_seed(cfg.seed, 2ULL * rep + 1);
    Chain chain = sampler(sim.data, prior, rep_cfg);

    Chain fixed_dim;
    if (mode == SamplerMode::RJ) {
      const auto kp = k_posterior(chain);
      score.recovered = kp.modal_k == scenario.true_k;
      if (!score.recovered) return score;
      fixed_dim = condition_on_modal_k(chain);
    } else {
      score.recovered = true;
      fixed_dim = std::move(chain);
    }

    const PosteriorSummary s = posterior_summary(fixed_dim);
    auto push = [&](const std::vector<IntervalSummary>& block) {
      for (const auto& iv : block) {
        score.est.push_back(iv.mean);
        score.lo.push_back(iv.lo95);
        score.hi.push_back(iv.hi95);
      }
    };
    push(s.w);
    push(s.mu);
    push(s.sigma2);
  } catch (const numeric_failure&) {
    score.excluded = true;
  }
  return score;
}

}  // namespace

MetricsTable run_replication_study_with(const Scenario& scenario,
                                        const PriorOptions& prior,
                                        const McmcConfig& cfg, int R,
                                        SamplerMode mode, const SamplerFn& sampler,
                                        const StudyOptions& opts) {
  if (R < 1) throw invalid_input("replication study: R must be at least 1");
  scenario.validate();

  int workers = opts.workers > 0 ? opts.workers
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, R);

  std::vector<RepScore> scores(static_cast<std::size_t>(R));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto work = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= R) return;
      try {
        scores[r] = score_one(scenario, prior, cfg, mode, sampler, r);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return aggregate_metrics(std::move(scores), scenario, R, opts.max_exclusion_fraction);
}

MetricsTable run_replication_study(const Scenario& scenario, const PriorOptions& prior,
                                   const McmcConfig& cfg, int R, SamplerMode mode,
                                   const StudyOptions& opts) {
  SamplerFn sampler;
  if (mode == SamplerMode::FixedK) {
    const int k = scenario.true_k;
    sampler = [k](const Dataset& d, const PriorSpec& p, const McmcConfig& c) {
      return run_fixed_k(d, p, k, c);
    };
  } else {
    sampler = [](const Dataset& d, const PriorSpec& p, const McmcConfig& c) {
      return run_rj(d, p, c);
    };
  }
  return run_replication_study_with(scenario, prior, cfg, R, mode, sampler, opts);
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;

  Scenario het;
  het.label = "heterogeneous";
  het.true_k = 5;
  het.true_w = {0.17, 0.21, 0.34, 0.12, 0.16};
  het.true_mu = {-3.0, 0.0, 4.0, 11.0, 16.0};
  het.true_sigma2 = {0.22, 1.95, 0.92, 0.74, 1.13};
  het.n = 100;
  out.push_back(het);

  Scenario hom = het;
  hom.label = "homogeneous";
  hom.true_mu = {0.0, 2.0, 4.0, 6.0, 8.0};
  out.push_back(hom);

  Scenario k3;
  k3.label = "k3";
  k3.true_k = 3;
  k3.true_w = {0.3, 0.4, 0.3};
  k3.true_mu = {-4.0, 0.0, 4.0};
  k3.true_sigma2 = {1.0, 1.0, 1.0};
  k3.n = 100;
  out.push_back(k3);

  Scenario k5;
  k5.label = "k5";
  k5.true_k = 5;
  k5.true_w = {0.15, 0.2, 0.3, 0.2, 0.15};
  k5.true_mu = {-8.0, -4.0, 0.0, 4.0, 8.0};
  k5.true_sigma2 = {1.0, 1.0, 1.0, 1.0, 1.0};
  k5.n = 100;
  out.push_back(k5);

  for (const auto& s : out) s.validate();
  return out;
}

Scenario find_scenario(const std::string& label) {
  for (auto& s : builtin_scenarios())
    if (s.label == label) return s;
  throw invalid_input("unknown scenario '" + label +
                      "' (known: heterogeneous, homogeneous, k3, k5)");
}

}  // namespace rjmix
