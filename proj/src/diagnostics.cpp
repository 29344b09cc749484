#include "rjmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rjmix/errors.hpp"

namespace rjmix {

KPosterior k_posterior(const Chain& chain) {
  if (chain.records.empty()) throw invalid_input("k_posterior: empty chain");
  KPosterior out;
  std::map<int, long> counts;
  for (const auto& s : chain.records) ++counts[s.k];
  const double m = static_cast<double>(chain.records.size());
  long best = -1;
  for (const auto& [k, c] : counts) {
    out.pmf[k] = c / m;
    if (c > best) {  // map iterates k ascending, so ties keep the smaller k
      best = c;
      out.modal_k = k;
    }
  }
  return out;
}

Chain condition_on_modal_k(const Chain& chain) {
  const int mode = k_posterior(chain).modal_k;
  Chain sub;
  sub.config = chain.config;
  sub.move_stats = chain.move_stats;
  sub.fixed_k = true;
  sub.fixed_k_value = mode;
  for (std::size_t i = 0; i < chain.records.size(); ++i) {
    if (chain.records[i].k != mode) continue;
    sub.records.push_back(chain.records[i]);
    sub.sweeps.push_back(i < chain.sweeps.size() ? chain.sweeps[i] : 0);
    sub.log_liks.push_back(i < chain.log_liks.size() ? chain.log_liks[i] : 0.0);
  }
  return sub;
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw invalid_input("empirical_quantile: no values");
  std::sort(values.begin(), values.end());
  const double h = p * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

IntervalSummary summarize(const std::vector<double>& draws) {
  IntervalSummary s;
  double sum = 0.0;
  for (double v : draws) sum += v;
  s.mean = sum / static_cast<double>(draws.size());
  s.lo95 = empirical_quantile(draws, 0.025);
  s.hi95 = empirical_quantile(draws, 0.975);
  return s;
}

}  // namespace

PosteriorSummary posterior_summary(const Chain& chain) {
  if (chain.records.empty()) throw invalid_input("posterior_summary: empty chain");
  if (!chain.all_same_k())
    throw invalid_input("posterior_summary: mixed-dimension chain; condition on k first");

  const int k = chain.records.front().k;
  const std::size_t m = chain.records.size();
  PosteriorSummary out;
  out.k = k;

  std::vector<double> draws(m);
  for (int j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) draws[i] = chain.records[i].w[j];
    out.w.push_back(summarize(draws));
    for (std::size_t i = 0; i < m; ++i) draws[i] = chain.records[i].mu[j];
    out.mu.push_back(summarize(draws));
    for (std::size_t i = 0; i < m; ++i) draws[i] = chain.records[i].sigma2[j];
    out.sigma2.push_back(summarize(draws));
  }
  for (std::size_t i = 0; i < m; ++i) draws[i] = chain.records[i].beta;
  out.beta = summarize(draws);
  return out;
}

std::vector<double> predictive_density(const Chain& chain,
                                       std::span<const double> grid) {
  if (chain.records.empty()) throw invalid_input("predictive_density: empty chain");
  std::vector<double> density(grid.size(), 0.0);
  for (const auto& rec : chain.records) {
    // Canonical component order makes the sum independent of how the
    // record happens to be labeled.
    const MixtureState state = enforce_ordering(rec).state;
    for (std::size_t g = 0; g < grid.size(); ++g)
      density[g] += std::exp(log_mixture_density(grid[g], state));
  }
  const double m = static_cast<double>(chain.records.size());
  for (double& d : density) d /= m;
  return density;
}

std::vector<double> default_grid(const Dataset& data, int points, double pad) {
  if (data.empty()) throw invalid_input("default_grid: empty dataset");
  if (points < 2) throw invalid_input("default_grid: need at least 2 points");
  double r = data.range();
  if (r <= 0.0) r = 1.0;
  const double lo = data.range_min - pad * r;
  const double hi = data.range_max + pad * r;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * i / static_cast<double>(points - 1);
  return grid;
}

MixtureState posterior_mean_state(const Chain& chain) {
  if (chain.records.empty()) throw invalid_input("posterior_mean_state: empty chain");
  if (!chain.all_same_k())
    throw invalid_input("posterior_mean_state: mixed-dimension chain");

  const int k = chain.records.front().k;
  MixtureState mean;
  mean.k = k;
  mean.w.assign(static_cast<std::size_t>(k), 0.0);
  mean.mu.assign(static_cast<std::size_t>(k), 0.0);
  mean.sigma2.assign(static_cast<std::size_t>(k), 0.0);
  mean.beta = 0.0;
  for (const auto& rec : chain.records) {
    const MixtureState s = enforce_ordering(rec).state;
    for (int j = 0; j < k; ++j) {
      mean.w[j] += s.w[j];
      mean.mu[j] += s.mu[j];
      mean.sigma2[j] += s.sigma2[j];
    }
    mean.beta += s.beta;
  }
  const double m = static_cast<double>(chain.records.size());
  double wsum = 0.0;
  for (int j = 0; j < k; ++j) {
    mean.w[j] /= m;
    wsum += mean.w[j];
    mean.mu[j] /= m;
    mean.sigma2[j] /= m;
  }
  mean.beta /= m;
  for (double& wj : mean.w) wj /= wsum;
  return enforce_ordering(std::move(mean)).state;
}

DicResult dic(const Chain& chain, const Dataset& data, DicPlugIn plug_in) {
  if (chain.records.empty()) throw invalid_input("dic: empty chain");
  if (!chain.all_same_k())
    throw invalid_input("dic: mixed-dimension chain; condition on the modal k first");

  double d_bar = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (const auto& rec : chain.records) {
    const MixtureState s = enforce_ordering(rec).state;
    const double ll = log_likelihood(data, s);
    d_bar += -2.0 * ll;
    best_ll = std::max(best_ll, ll);
  }
  d_bar /= static_cast<double>(chain.records.size());

  const double d_hat = plug_in == DicPlugIn::MaxLikRecord
                           ? -2.0 * best_ll
                           : -2.0 * log_likelihood(data, posterior_mean_state(chain));

  DicResult out;
  out.d_bar = d_bar;
  out.p_d = d_bar - d_hat;
  out.dic = d_bar + out.p_d;
  return out;
}

}  // namespace rjmix
