#pragma once

#include "rjmix/chain.hpp"
#include "rjmix/model.hpp"
#include "rjmix/rng.hpp"

namespace rjmix {

// Fixed-k Gibbs sweep. Every full conditional below follows by
// conjugacy from the normal mixture hierarchy; the *_posterior_params
// helpers expose the conditional's parameters so tests can check the
// conjugate algebra without touching the RNG.

// Dirichlet(gamma + n_1, ..., gamma + n_k); empty components keep
// their prior coordinate.
std::vector<double> weight_posterior_params(const MixtureState& state,
                                            const PriorSpec& prior);

// Normal(m, v) for component j:
//   v = 1 / (1/sigma_a2 + n_j/sigma2_j),  m = v (mu_a/sigma_a2 + sum_j y_i / sigma2_j)
struct NormalParams {
  double mean;
  double variance;
};
NormalParams mean_posterior_params(const MixtureState& state, const Dataset& data,
                                   const PriorSpec& prior, int j);

// Gamma(alpha + n_j/2, beta + SSE_j/2) for the precision of component j.
struct GammaParams {
  double shape;
  double rate;
};
GammaParams precision_posterior_params(const MixtureState& state, const Dataset& data,
                                       const PriorSpec& prior, int j);

// Gamma(g + k alpha, h + sum_j sigma2_j^-1) for beta.
GammaParams beta_posterior_params(const MixtureState& state, const PriorSpec& prior);

// Unnormalized log conditional P(z_i = j | ...) = log w_j + log N(y_i; mu_j, sigma2_j).
std::vector<double> allocation_logits(const MixtureState& state, double y);

// One-block updates. Each takes the state by value and returns the
// updated state; update_means re-enforces the mean ordering after the
// joint draw (sorted-draw kernel).
MixtureState update_weights(MixtureState state, const PriorSpec& prior, RngStream& rng);
MixtureState update_means(MixtureState state, const Dataset& data, const PriorSpec& prior,
                          RngStream& rng);
MixtureState update_variances(MixtureState state, const Dataset& data,
                              const PriorSpec& prior, RngStream& rng);
MixtureState update_beta(MixtureState state, const PriorSpec& prior, RngStream& rng);
MixtureState update_allocations(MixtureState state, const Dataset& data, RngStream& rng);

// Full systematic sweep in the fixed order z, w, mu, sigma^-2, beta.
// On an empty dataset the allocation update is skipped.
MixtureState gibbs_sweep(MixtureState state, const Dataset& data, const PriorSpec& prior,
                         RngStream& rng);

// Deterministic initial state: k-quantile split of the sorted data
// (prior draw when the dataset is empty).
MixtureState initial_state(const Dataset& data, const PriorSpec& prior, int k,
                           RngStream& rng);

// Fixed-k sampler driver. Runs cfg.n_sweeps systematic sweeps from the
// deterministic initialization and records every thin-th post-burn-in
// state. Throws invalid_input for k outside [1, k_max] and
// numeric_failure (with the sweep index) if the state goes non-finite.
Chain run_fixed_k(const Dataset& data, const PriorSpec& prior, int k,
                  const McmcConfig& cfg);

}  // namespace rjmix
