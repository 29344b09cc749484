#include "rjmix/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rjmix/errors.hpp"

namespace rjmix {

namespace {
const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

void check_finite(const MixtureState& state, long sweep) {
  auto bad = [&](double v) { return !std::isfinite(v); };
  bool broken = bad(state.beta);
  for (int j = 0; j < state.k && !broken; ++j)
    broken = bad(state.w[j]) || bad(state.mu[j]) || bad(state.sigma2[j]) ||
             state.sigma2[j] <= 0.0 || state.w[j] <= 0.0;
  if (broken)
    throw numeric_failure("non-finite state at sweep " + std::to_string(sweep));
}

}  // namespace

// ------------------------------------------------------------- kernels

std::vector<double> weight_posterior_params(const MixtureState& state,
                                            const PriorSpec& prior) {
  std::vector<double> a(static_cast<std::size_t>(state.k), prior.gamma);
  for (int zi : state.z) a[zi] += 1.0;
  return a;
}

NormalParams mean_posterior_params(const MixtureState& state, const Dataset& data,
                                   const PriorSpec& prior, int j) {
  long nj = 0;
  double sum = 0.0;
  for (int i = 0; i < data.n(); ++i)
    if (state.z[i] == j) {
      ++nj;
      sum += data.values[i];
    }
  const double prior_prec = 1.0 / prior.sigma_a2;
  const double prec = prior_prec + nj / state.sigma2[j];
  const double v = 1.0 / prec;
  const double m = v * (prior_prec * prior.mu_a + sum / state.sigma2[j]);
  return {m, v};
}

GammaParams precision_posterior_params(const MixtureState& state, const Dataset& data,
                                       const PriorSpec& prior, int j) {
  long nj = 0;
  double sse = 0.0;
  for (int i = 0; i < data.n(); ++i)
    if (state.z[i] == j) {
      ++nj;
      const double d = data.values[i] - state.mu[j];
      sse += d * d;
    }
  return {prior.alpha + 0.5 * nj, state.beta + 0.5 * sse};
}

GammaParams beta_posterior_params(const MixtureState& state, const PriorSpec& prior) {
  double prec_sum = 0.0;
  for (double s2 : state.sigma2) prec_sum += 1.0 / s2;
  return {prior.g + state.k * prior.alpha, prior.h + prec_sum};
}

std::vector<double> allocation_logits(const MixtureState& state, double y) {
  std::vector<double> l(static_cast<std::size_t>(state.k));
  for (int j = 0; j < state.k; ++j)
    l[j] = std::log(state.w[j]) + log_normal_pdf(y, state.mu[j], state.sigma2[j]);
  return l;
}

MixtureState update_weights(MixtureState state, const PriorSpec& prior, RngStream& rng) {
  state.w = rng.dirichlet(weight_posterior_params(state, prior));
  return state;
}

MixtureState update_means(MixtureState state, const Dataset& data, const PriorSpec& prior,
                          RngStream& rng) {
  for (int j = 0; j < state.k; ++j) {
    const auto p = mean_posterior_params(state, data, prior, j);
    state.mu[j] = rng.normal(p.mean, std::sqrt(p.variance));
  }
  return enforce_ordering(std::move(state)).state;
}

MixtureState update_variances(MixtureState state, const Dataset& data,
                              const PriorSpec& prior, RngStream& rng) {
  for (int j = 0; j < state.k; ++j) {
    const auto p = precision_posterior_params(state, data, prior, j);
    state.sigma2[j] = 1.0 / rng.gamma(p.shape, p.rate);
  }
  return state;
}

MixtureState update_beta(MixtureState state, const PriorSpec& prior, RngStream& rng) {
  const auto p = beta_posterior_params(state, prior);
  state.beta = rng.gamma(p.shape, p.rate);
  return state;
}

MixtureState update_allocations(MixtureState state, const Dataset& data, RngStream& rng) {
  const int k = state.k;
  std::vector<double> cst(static_cast<std::size_t>(k)), half_inv(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    cst[j] = std::log(state.w[j]) - 0.5 * (kLogTwoPi + std::log(state.sigma2[j]));
    half_inv[j] = 0.5 / state.sigma2[j];
  }
  std::vector<double> logits(static_cast<std::size_t>(k));
  for (int i = 0; i < data.n(); ++i) {
    const double y = data.values[i];
    for (int j = 0; j < k; ++j) {
      const double d = y - state.mu[j];
      logits[j] = cst[j] - d * d * half_inv[j];
    }
    state.z[i] = rng.categorical_from_logits(logits);
  }
  return state;
}

MixtureState gibbs_sweep(MixtureState state, const Dataset& data, const PriorSpec& prior,
                         RngStream& rng) {
  if (!data.empty()) state = update_allocations(std::move(state), data, rng);
  state = update_weights(std::move(state), prior, rng);
  state = update_means(std::move(state), data, prior, rng);
  state = update_variances(std::move(state), data, prior, rng);
  state = update_beta(std::move(state), prior, rng);
  return state;
}

// ------------------------------------------------------------- driver

MixtureState initial_state(const Dataset& data, const PriorSpec& prior, int k,
                           RngStream& rng) {
  MixtureState s;
  s.k = k;
  s.beta = prior.g / prior.h;

  if (data.empty()) {
    // Prior draw; nothing to condition on.
    s.w = rng.dirichlet_symmetric(prior.gamma, k);
    s.mu.resize(static_cast<std::size_t>(k));
    s.sigma2.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      s.mu[j] = rng.normal(prior.mu_a, std::sqrt(prior.sigma_a2));
      s.sigma2[j] = 1.0 / rng.gamma(prior.alpha, s.beta);
    }
    return enforce_ordering(std::move(s)).state;
  }

  const int n = data.n();
  std::vector<double> sorted = data.values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> rank_group(static_cast<std::size_t>(n));
  s.w.assign(static_cast<std::size_t>(k), 0.0);
  s.mu.assign(static_cast<std::size_t>(k), 0.0);
  s.sigma2.assign(static_cast<std::size_t>(k), 0.0);

  double r = data.range();
  if (r <= 0.0) r = 1.0;
  const double var_floor = 1e-4 * r * r;

  for (int j = 0; j < k; ++j) {
    const long lo = static_cast<long>(j) * n / k;
    const long hi = static_cast<long>(j + 1) * n / k;
    const long nj = hi - lo;
    double mean, var;
    if (nj > 0) {
      double sum = 0.0;
      for (long i = lo; i < hi; ++i) sum += sorted[i];
      mean = sum / nj;
      double sse = 0.0;
      for (long i = lo; i < hi; ++i) {
        const double d = sorted[i] - mean;
        sse += d * d;
      }
      var = nj > 1 ? sse / (nj - 1) : 0.0;
      for (long i = lo; i < hi; ++i) rank_group[i] = j;
    } else {
      // Empty quantile group (n < k): place the component at the data
      // quantile of its slot.
      const double q = (j + 0.5) / k;
      const double pos = q * (n - 1);
      const long i0 = static_cast<long>(pos);
      const double frac = pos - i0;
      mean = i0 + 1 < n ? sorted[i0] * (1.0 - frac) + sorted[i0 + 1] * frac : sorted[i0];
      var = 0.0;
    }
    s.mu[j] = mean;
    s.sigma2[j] = std::max(var, var_floor);
    // Smoothed group proportion keeps every weight strictly positive.
    s.w[j] = (nj + 1.0) / (n + static_cast<double>(k));
  }

  // Equal group means can happen with heavily tied data; nudge them
  // apart so the ordering invariant holds from sweep one.
  for (int j = 1; j < k; ++j)
    if (s.mu[j] <= s.mu[j - 1]) s.mu[j] = s.mu[j - 1] + 1e-9 * r;

  // Allocations follow the quantile split, mapped back through the
  // sorted order.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return data.values[a] < data.values[b];
  });
  s.z.assign(static_cast<std::size_t>(n), 0);
  for (int rank = 0; rank < n; ++rank) s.z[order[rank]] = rank_group[rank];
  return s;
}

Chain run_fixed_k(const Dataset& data, const PriorSpec& prior, int k,
                  const McmcConfig& cfg) {
  prior.validate();
  cfg.validate();
  if (k < 1 || k > prior.k_max)
    throw invalid_input("run_fixed_k: k must lie in [1, k_max]");

  RngStream rng(cfg.seed);
  MixtureState state = initial_state(data, prior, k, rng);

  Chain chain;
  chain.config = cfg;
  chain.fixed_k = true;
  chain.fixed_k_value = k;
  chain.records.reserve(static_cast<std::size_t>(cfg.retained()));

  for (long sweep = 1; sweep <= cfg.n_sweeps; ++sweep) {
    state = gibbs_sweep(std::move(state), data, prior, rng);
    check_finite(state, sweep);
    if (sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      chain.records.push_back(state);
      chain.sweeps.push_back(sweep);
      chain.log_liks.push_back(log_likelihood(data, state));
    }
  }
  return chain;
}

}  // namespace rjmix
