#pragma once

#include <map>

#include "rjmix/chain.hpp"
#include "rjmix/model.hpp"

namespace rjmix {

// Relative frequencies of k across the chain records and the modal
// value; ties break toward the smaller k.
struct KPosterior {
  std::map<int, double> pmf;
  int modal_k = 0;
};
KPosterior k_posterior(const Chain& chain);

// Sub-chain of records at the modal k, order preserved, so the
// componentwise summaries below are well-defined.
Chain condition_on_modal_k(const Chain& chain);

// Empirical quantile with linear interpolation between order
// statistics (R type 7). values need not be sorted.
double empirical_quantile(std::vector<double> values, double p);

struct IntervalSummary {
  double mean = 0.0;
  double lo95 = 0.0;
  double hi95 = 0.0;
};

// Posterior means and central 95% credible intervals per component and
// parameter family. Requires a fixed-dimension chain; condition first.
struct PosteriorSummary {
  int k = 0;
  std::vector<IntervalSummary> w;
  std::vector<IntervalSummary> mu;
  std::vector<IntervalSummary> sigma2;
  IntervalSummary beta;
};
PosteriorSummary posterior_summary(const Chain& chain);

// Posterior-averaged mixture density at each grid point:
// (1/M) sum_m exp(log_mixture_density(y, state_m)). Each record is
// canonicalized through enforce_ordering first, so the output is
// bit-identical under per-record label permutations.
std::vector<double> predictive_density(const Chain& chain,
                                       std::span<const double> grid);

// Uniform grid of `points` values spanning [min - pad*R, max + pad*R].
std::vector<double> default_grid(const Dataset& data, int points = 512,
                                 double pad = 0.5);

// Deviance information criterion on a fixed-dimension chain:
//   D(state) = -2 log_likelihood (marginal, allocations integrated out)
//   D_bar    = mean of D over records
//   p_D      = D_bar - D(plug-in state)
//
// Two plug-in conventions are surfaced. MaxLikRecord plugs in the
// retained state with the highest marginal likelihood; it is immune to
// label-role mixing and keeps p_D non-negative, so it is the default.
// ComponentMeans plugs in the componentwise posterior means (weights
// renormalized, means re-sorted); with a wandering near-empty
// component the roles blur across records and p_D can go far negative,
// which is reported as-is.
enum class DicPlugIn { MaxLikRecord, ComponentMeans };

struct DicResult {
  double d_bar = 0.0;
  double p_d = 0.0;
  double dic = 0.0;
};
DicResult dic(const Chain& chain, const Dataset& data,
              DicPlugIn plug_in = DicPlugIn::MaxLikRecord);

// The plug-in state used by dic(); exposed for tests and summaries.
MixtureState posterior_mean_state(const Chain& chain);

}  // namespace rjmix
