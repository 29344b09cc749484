#include "rjmix/rjmcmc.hpp"

#include <algorithm>
#include <cmath>

#include "rjmix/errors.hpp"

namespace rjmix {

namespace {

double log_beta_pdf(double x, double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
         (a - 1.0) * std::log(x) + (b - 1.0) * std::log(1.0 - x);
}

// Density of sigma2 induced by sigma^-2 ~ Gamma(alpha, beta).
double log_inv_gamma_pdf(double s2, double alpha, double beta) {
  return alpha * std::log(beta) - std::lgamma(alpha) - (alpha + 1.0) * std::log(s2) -
         beta / s2;
}

// Density of the split auxiliaries: u1, u2 ~ Beta(2,2), u3 ~ Beta(1,1).
double log_u_density(const SplitRandoms& u) {
  return log_beta_pdf(u.u1, 2.0, 2.0) + log_beta_pdf(u.u2, 2.0, 2.0);
}

std::vector<int> empty_components(const MixtureState& state, int n) {
  std::vector<long> counts(static_cast<std::size_t>(state.k), 0);
  for (int i = 0; i < n; ++i) ++counts[state.z[i]];
  std::vector<int> empties;
  for (int j = 0; j < state.k; ++j)
    if (counts[j] == 0) empties.push_back(j);
  return empties;
}

bool accept(double log_a, RngStream& rng) {
  log_a = std::clamp(log_a, -700.0, 700.0);
  return std::log(rng.uniform_pos()) < log_a;
}

}  // namespace

void SplitRandoms::validate() const {
  for (double v : {u1, u2, u3})
    if (!(v > 0.0) || !(v < 1.0))
      throw invalid_input("SplitRandoms: auxiliaries must lie strictly in (0,1)");
}

double move_up_probability(int k, int k_max) {
  if (k >= k_max) return 0.0;
  if (k == 1) return 1.0;
  return 0.5;
}

SplitProposal propose_split(const MixtureState& state, int j, const SplitRandoms& u) {
  if (j < 0 || j >= state.k) throw invalid_input("propose_split: bad component index");
  u.validate();

  const double w = state.w[j];
  const double mu = state.mu[j];
  const double s2 = state.sigma2[j];
  const double sd = std::sqrt(s2);

  const double w1 = w * u.u1;
  const double w2 = w * (1.0 - u.u1);
  const double mu1 = mu - u.u2 * sd * std::sqrt(w2 / w1);
  const double mu2 = mu + u.u2 * sd * std::sqrt(w1 / w2);
  const double om_u2sq = 1.0 - u.u2 * u.u2;
  const double s2_1 = u.u3 * om_u2sq * s2 * w / w1;
  const double s2_2 = (1.0 - u.u3) * om_u2sq * s2 * w / w2;

  SplitProposal prop;
  prop.log_jacobian = std::log(w) + std::log(mu2 - mu1) + std::log(s2_1) +
                      std::log(s2_2) - std::log(u.u2) - std::log(om_u2sq) -
                      std::log(u.u3) - std::log(1.0 - u.u3) - std::log(s2);
  prop.order_compatible = (j == 0 || state.mu[j - 1] < mu1) &&
                          (j == state.k - 1 || mu2 < state.mu[j + 1]);
  prop.child1 = j;
  prop.child2 = j + 1;

  MixtureState cand = state;
  cand.k = state.k + 1;
  cand.w[j] = w1;
  cand.w.insert(cand.w.begin() + j + 1, w2);
  cand.mu[j] = mu1;
  cand.mu.insert(cand.mu.begin() + j + 1, mu2);
  cand.sigma2[j] = s2_1;
  cand.sigma2.insert(cand.sigma2.begin() + j + 1, s2_2);
  for (int& zi : cand.z)
    if (zi > j) ++zi;  // parent's observations sit on child1 until reallocated
  prop.candidate = std::move(cand);
  return prop;
}

CombineProposal propose_combine(const MixtureState& state, int j1, int j2) {
  if (j2 != j1 + 1 || j1 < 0 || j2 >= state.k)
    throw invalid_input("propose_combine: pair must be adjacent in the mean ordering");

  const double w1 = state.w[j1], w2 = state.w[j2];
  const double mu1 = state.mu[j1], mu2 = state.mu[j2];
  const double s2_1 = state.sigma2[j1], s2_2 = state.sigma2[j2];

  const double w = w1 + w2;
  const double mu = (w1 * mu1 + w2 * mu2) / w;
  const double d = mu2 - mu1;
  // Grouped so the second moment stays positive under cancellation.
  const double within = (w1 * s2_1 + w2 * s2_2) / w;
  const double s2 = (w1 * w2 / (w * w)) * d * d + within;

  CombineProposal prop;
  prop.u.u1 = w1 / w;
  prop.u.u2 = (mu - mu1) * std::sqrt(w1 / w2) / std::sqrt(s2);
  prop.u.u3 = w1 * s2_1 / (w1 * s2_1 + w2 * s2_2);
  prop.merged_index = j1;

  const double om_u2sq = 1.0 - prop.u.u2 * prop.u.u2;
  prop.log_jacobian = std::log(w) + std::log(d) + std::log(s2_1) + std::log(s2_2) -
                      std::log(prop.u.u2) - std::log(om_u2sq) - std::log(prop.u.u3) -
                      std::log(1.0 - prop.u.u3) - std::log(s2);

  MixtureState cand = state;
  cand.k = state.k - 1;
  cand.w[j1] = w;
  cand.w.erase(cand.w.begin() + j2);
  cand.mu[j1] = mu;
  cand.mu.erase(cand.mu.begin() + j2);
  cand.sigma2[j1] = s2;
  cand.sigma2.erase(cand.sigma2.begin() + j2);
  for (int& zi : cand.z) {
    if (zi == j2)
      zi = j1;
    else if (zi > j2)
      --zi;
  }
  prop.candidate = std::move(cand);
  return prop;
}

double split_log_accept(const MixtureState& lower, const MixtureState& upper,
                        const SplitRandoms& u, double log_jacobian,
                        double log_alloc_prob, const Dataset& data,
                        const PriorSpec& prior) {
  const int k = lower.k;
  const double b_k = move_up_probability(k, prior.k_max);
  const double d_up = 1.0 - move_up_probability(k + 1, prior.k_max);
  // The component/pair selection probabilities (1/k forward, 1/k
  // reverse) cancel exactly and are omitted.
  double log_a = complete_data_log_likelihood(data, upper) -
                 complete_data_log_likelihood(data, lower);
  log_a += log_prior_density(upper, prior) - log_prior_density(lower, prior);
  log_a += std::log(d_up) - std::log(b_k);
  log_a -= log_alloc_prob;
  log_a -= log_u_density(u);
  log_a += log_jacobian;
  return log_a;
}

double birth_log_accept(const MixtureState& lower, const MixtureState& upper,
                        double w_star, int born_index, int empty_in_upper,
                        const Dataset& data, const PriorSpec& prior) {
  const int k = lower.k;
  const double b_k = move_up_probability(k, prior.k_max);
  const double d_up = 1.0 - move_up_probability(k + 1, prior.k_max);
  double log_a = complete_data_log_likelihood(data, upper) -
                 complete_data_log_likelihood(data, lower);
  log_a += log_prior_density(upper, prior) - log_prior_density(lower, prior);
  log_a += std::log(d_up) - std::log(b_k) - std::log(static_cast<double>(empty_in_upper));
  // Proposal densities of the born component; the mean and precision
  // come from their priors, so these cancel the matching prior factors.
  log_a -= log_beta_pdf(w_star, 1.0, static_cast<double>(k));
  log_a -= log_normal_pdf(upper.mu[born_index], prior.mu_a, prior.sigma_a2);
  log_a -= log_inv_gamma_pdf(upper.sigma2[born_index], prior.alpha, lower.beta);
  // Jacobian of rescaling the k surviving weights by (1 - w_star).
  log_a += (k - 1) * std::log(1.0 - w_star);
  return log_a;
}

StepResult split_combine_step(MixtureState state, const Dataset& data,
                              const PriorSpec& prior, RngStream& rng) {
  StepResult res;
  const int k = state.k;
  if (prior.k_max == 1) {
    res.state = std::move(state);
    return res;
  }
  const double b_k = move_up_probability(k, prior.k_max);
  const bool do_split = rng.uniform() < b_k;

  if (do_split) {
    ++res.delta.split_attempted;
    const int j = rng.uniform_int(0, k - 1);
    SplitRandoms u{rng.beta(2.0, 2.0), rng.beta(2.0, 2.0), rng.beta(1.0, 1.0)};
    SplitProposal prop = propose_split(state, j, u);
    if (prop.order_compatible) {
      // Reallocate the parent's observations between the children with
      // probability proportional to w* N(y; mu*, s*^2).
      double log_alloc = 0.0;
      const auto& cand = prop.candidate;
      double logits[2];
      for (int i = 0; i < data.n(); ++i) {
        if (cand.z[i] != prop.child1) continue;
        const double y = data.values[i];
        logits[0] = std::log(cand.w[prop.child1]) +
                    log_normal_pdf(y, cand.mu[prop.child1], cand.sigma2[prop.child1]);
        logits[1] = std::log(cand.w[prop.child2]) +
                    log_normal_pdf(y, cand.mu[prop.child2], cand.sigma2[prop.child2]);
        double lp = 0.0;
        const int pick = rng.categorical_from_logits(logits, &lp);
        prop.candidate.z[i] = pick == 0 ? prop.child1 : prop.child2;
        log_alloc += lp;
      }
      const double log_a = split_log_accept(state, prop.candidate, u,
                                            prop.log_jacobian, log_alloc, data, prior);
      if (accept(log_a, rng)) {
        ++res.delta.split_accepted;
        state = std::move(prop.candidate);
      }
    }
  } else {
    ++res.delta.combine_attempted;
    const int j1 = rng.uniform_int(0, k - 2);
    CombineProposal prop = propose_combine(state, j1, j1 + 1);
    // Probability that the reverse split reproduces the current
    // allocation of the merged pair.
    double log_alloc = 0.0;
    double logits[2];
    for (int i = 0; i < data.n(); ++i) {
      const int zi = state.z[i];
      if (zi != j1 && zi != j1 + 1) continue;
      const double y = data.values[i];
      logits[0] = std::log(state.w[j1]) + log_normal_pdf(y, state.mu[j1], state.sigma2[j1]);
      logits[1] =
          std::log(state.w[j1 + 1]) + log_normal_pdf(y, state.mu[j1 + 1], state.sigma2[j1 + 1]);
      const double lse = log_sum_exp(logits);
      log_alloc += (zi == j1 ? logits[0] : logits[1]) - lse;
    }
    const double log_a = -split_log_accept(prop.candidate, state, prop.u,
                                           prop.log_jacobian, log_alloc, data, prior);
    if (accept(log_a, rng)) {
      ++res.delta.combine_accepted;
      state = std::move(prop.candidate);
    }
  }
  res.state = std::move(state);
  return res;
}

StepResult birth_death_step(MixtureState state, const Dataset& data,
                            const PriorSpec& prior, RngStream& rng) {
  StepResult res;
  const int k = state.k;
  if (prior.k_max == 1) {
    res.state = std::move(state);
    return res;
  }
  const double b_k = move_up_probability(k, prior.k_max);
  const bool do_birth = rng.uniform() < b_k;

  if (do_birth) {
    ++res.delta.birth_attempted;
    const double w_star = rng.beta(1.0, static_cast<double>(k));
    const double mu_star = rng.normal(prior.mu_a, std::sqrt(prior.sigma_a2));
    const double s2_star = 1.0 / rng.gamma(prior.alpha, state.beta);

    int pos = 0;
    while (pos < k && state.mu[pos] < mu_star) ++pos;

    MixtureState upper = state;
    upper.k = k + 1;
    for (double& wj : upper.w) wj *= 1.0 - w_star;
    upper.w.insert(upper.w.begin() + pos, w_star);
    upper.mu.insert(upper.mu.begin() + pos, mu_star);
    upper.sigma2.insert(upper.sigma2.begin() + pos, s2_star);
    for (int& zi : upper.z)
      if (zi >= pos) ++zi;

    const int empties = static_cast<int>(empty_components(upper, data.n()).size());
    const double log_a =
        birth_log_accept(state, upper, w_star, pos, empties, data, prior);
    if (accept(log_a, rng)) {
      ++res.delta.birth_accepted;
      state = std::move(upper);
    }
  } else {
    ++res.delta.death_attempted;
    const auto empties = empty_components(state, data.n());
    if (!empties.empty()) {
      const int pick = empties[rng.uniform_int(0, static_cast<int>(empties.size()) - 1)];
      const double w_star = state.w[pick];

      MixtureState lower = state;
      lower.k = k - 1;
      lower.w.erase(lower.w.begin() + pick);
      for (double& wj : lower.w) wj /= 1.0 - w_star;
      lower.mu.erase(lower.mu.begin() + pick);
      lower.sigma2.erase(lower.sigma2.begin() + pick);
      for (int& zi : lower.z)
        if (zi > pick) --zi;

      const double log_a = -birth_log_accept(
          lower, state, w_star, pick, static_cast<int>(empties.size()), data, prior);
      if (accept(log_a, rng)) {
        ++res.delta.death_accepted;
        state = std::move(lower);
      }
    }
  }
  res.state = std::move(state);
  return res;
}

Chain run_rj(const Dataset& data, const PriorSpec& prior, const McmcConfig& cfg) {
  prior.validate();
  cfg.validate();

  RngStream rng(cfg.seed);
  const int k0 = rng.uniform_int(1, prior.k_max);
  MixtureState state = initial_state(data, prior, k0, rng);

  Chain chain;
  chain.config = cfg;
  chain.fixed_k = false;
  chain.records.reserve(static_cast<std::size_t>(cfg.retained()));

  for (long sweep = 1; sweep <= cfg.n_sweeps; ++sweep) {
    state = gibbs_sweep(std::move(state), data, prior, rng);
    {
      StepResult r = split_combine_step(std::move(state), data, prior, rng);
      state = std::move(r.state);
      chain.move_stats += r.delta;
    }
    {
      StepResult r = birth_death_step(std::move(state), data, prior, rng);
      state = std::move(r.state);
      chain.move_stats += r.delta;
    }
    bool broken = !std::isfinite(state.beta);
    for (int j = 0; j < state.k && !broken; ++j)
      broken = !std::isfinite(state.w[j]) || !std::isfinite(state.mu[j]) ||
               !std::isfinite(state.sigma2[j]);
    if (broken)
      throw numeric_failure("non-finite state at sweep " + std::to_string(sweep));
    if (sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      chain.records.push_back(state);
      chain.sweeps.push_back(sweep);
      chain.log_liks.push_back(log_likelihood(data, state));
    }
  }
  return chain;
}

}  // namespace rjmix
