#pragma once

#include "rjmix/chain.hpp"
#include "rjmix/gibbs.hpp"
#include "rjmix/model.hpp"
#include "rjmix/rng.hpp"

namespace rjmix {

// Auxiliary variables of the split move's dimension-matching bijection.
struct SplitRandoms {
  double u1 = 0.5;
  double u2 = 0.5;
  double u3 = 0.5;

  void validate() const;  // all strictly inside (0,1)
};

// Probability of proposing the dimension-increasing move of a pair at
// the current k: 1 at k=1, 0 at k=k_max, 1/2 in between. The
// complementary move gets 1 minus this. Used by both the
// split/combine and the birth/death pair.
double move_up_probability(int k, int k_max);

// Split of component j into an adjacent pair by moment matching:
//   w1 = w u1,  w2 = w (1-u1)
//   mu1 = mu - u2 s sqrt(w2/w1),  mu2 = mu + u2 s sqrt(w1/w2)
//   s1^2 = u3 (1-u2^2) s^2 w/w1,  s2^2 = (1-u3)(1-u2^2) s^2 w/w2
// which preserves the zeroth, first and second weighted moments
// exactly. log_jacobian is log|det| of the 6-dim map
// (w, mu, sigma2, u1, u2, u3) -> (w1, mu1, s1^2, w2, mu2, s2^2).
//
// The candidate has the pair inserted at positions j, j+1 with the
// parent's observations provisionally on the first child; the step
// reallocates them. order_compatible is false when another mean lands
// strictly between mu1 and mu2, which makes the proposal
// rejectable-by-construction (the reverse combine only merges
// adjacent pairs).
struct SplitProposal {
  MixtureState candidate;
  int child1 = 0;
  int child2 = 0;
  double log_jacobian = 0.0;
  bool order_compatible = false;
};
SplitProposal propose_split(const MixtureState& state, int j, const SplitRandoms& u);

// Exact inverse of propose_split for a mean-adjacent pair: merges
// (j1, j2 = j1+1) into the moment-matched single component, recovers
// the unique u the split would need, and reports the reverse split's
// log-Jacobian at the merged state so the caller forms the acceptance
// ratio with a single convention.
struct CombineProposal {
  MixtureState candidate;
  int merged_index = 0;
  SplitRandoms u;
  double log_jacobian = 0.0;
};
CombineProposal propose_combine(const MixtureState& state, int j1, int j2);

// Log acceptance ratio of the split move lower -> upper, with
// log_alloc_prob the log probability of the proposed reallocation of
// the parent's observations and log_jacobian from propose_split. The
// combine direction is the exact negation at the matching pair, so
// both moves share this single function.
double split_log_accept(const MixtureState& lower, const MixtureState& upper,
                        const SplitRandoms& u, double log_jacobian,
                        double log_alloc_prob, const Dataset& data,
                        const PriorSpec& prior);

// Log acceptance ratio of the birth move lower -> upper. w_star is the
// born component's weight, born_index its position in upper, and
// empty_in_upper the number of empty components of the upper state
// (the reverse death picks uniformly among those). Death negates this.
double birth_log_accept(const MixtureState& lower, const MixtureState& upper,
                        double w_star, int born_index, int empty_in_upper,
                        const Dataset& data, const PriorSpec& prior);

struct StepResult {
  MixtureState state;
  MoveStats delta;
};

// One split-or-combine attempt: split with probability b_k (auxiliary
// u1,u2 ~ Beta(2,2), u3 ~ Beta(1,1)), combine otherwise, Metropolis
// acceptance in log space with the log ratio clamped at +-700.
StepResult split_combine_step(MixtureState state, const Dataset& data,
                              const PriorSpec& prior, RngStream& rng);

// One birth-or-death attempt. Birth draws w* ~ Beta(1, k), a mean and
// a precision from their priors, and inserts an empty component;
// death deletes a uniformly chosen empty component and rescales the
// surviving weights. A death attempt with no empty component is a
// no-op counted as attempted-rejected.
StepResult birth_death_step(MixtureState state, const Dataset& data,
                            const PriorSpec& prior, RngStream& rng);

// Unknown-k sampler: per sweep one full Gibbs sweep at the current k,
// then one split/combine and one birth/death attempt. k starts at a
// uniform draw on {1..k_max}. The empty-dataset mode runs the same
// loop with the allocation update skipped, which must reproduce the
// prior (the standard exactness check for trans-dimensional samplers).
Chain run_rj(const Dataset& data, const PriorSpec& prior, const McmcConfig& cfg);

}  // namespace rjmix
