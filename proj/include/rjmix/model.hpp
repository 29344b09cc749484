#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rjmix/rng.hpp"

namespace rjmix {

// ---------------------------------------------------------------- types

// Observed univariate sample with cached range statistics.
struct Dataset {
  std::vector<double> values;
  double range_min = 0.0;
  double range_max = 0.0;

  Dataset() = default;  // empty dataset, used only for prior-recovery runs
  explicit Dataset(std::vector<double> vals);

  int n() const { return static_cast<int>(values.size()); }
  bool empty() const { return values.empty(); }
  double range() const { return range_max - range_min; }
  double midpoint() const { return 0.5 * (range_min + range_max); }
};

// Hyperparameters of the hierarchical prior:
//   w ~ Dirichlet(gamma), mu_j ~ Normal(mu_a, sigma_a2),
//   sigma_j^-2 ~ Gamma(alpha, beta), beta ~ Gamma(g, h),
//   k ~ Uniform{1..k_max}.
struct PriorSpec {
  double gamma = 1.0;
  double mu_a = 0.0;
  double sigma_a2 = 1.0;
  double alpha = 2.0;
  double g = 0.2;
  double h = 1.0;
  int k_max = 10;

  // Weakly informative data-dependent defaults: mu_a at the data
  // midpoint, sigma_a2 = 2R^2, alpha = 2, g = 0.2, h = 10/R^2.
  static PriorSpec weakly_informative(const Dataset& data, double gamma = 1.0,
                                      int k_max = 10);

  void validate() const;  // throws invalid_input
};

// User-facing prior configuration: gamma and k_max plus optional
// overrides of the data-dependent defaults.
struct PriorOptions {
  double gamma = 1.0;
  int k_max = 10;
  std::optional<double> mu_a, sigma_a2, alpha, g, h;

  PriorSpec resolve(const Dataset& data) const;
};

// One point of the variable-dimension parameter space. Components are
// kept in strictly increasing mean order (the identifiability
// constraint); z holds 0-based component labels (file formats are
// 1-based).
struct MixtureState {
  int k = 0;
  std::vector<double> w;
  std::vector<double> mu;
  std::vector<double> sigma2;
  double beta = 1.0;
  std::vector<int> z;

  // Throws invalid_input on any violated invariant. n < 0 skips the
  // allocation-length check (parameter-only states parsed from chain
  // files carry no z).
  void validate(int k_max, int n = -1) const;
};

// Ground-truth generating mixture for simulation studies.
struct Scenario {
  int true_k = 0;
  std::vector<double> true_w;
  std::vector<double> true_mu;
  std::vector<double> true_sigma2;
  int n = 0;
  std::string label;

  void validate() const;
};

// -------------------------------------------------------------- density

// log N(y; mu, sigma2)
double log_normal_pdf(double y, double mu, double sigma2);

// log sum_j w_j N(y; mu_j, sigma2_j), via log-sum-exp. Finite for all
// finite y; non-finite y is a contract violation.
double log_mixture_density(double y, const MixtureState& state);

// Marginal log likelihood, allocations integrated out:
// sum_i log_mixture_density(y_i). This is the quantity used by DIC and
// recorded per chain state.
double log_likelihood(const Dataset& data, const MixtureState& state);

// sum_i [ log w_{z_i} + log N(y_i; mu_{z_i}, sigma2_{z_i}) ].
double complete_data_log_likelihood(const Dataset& data, const MixtureState& state);

// Log prior density of (k, w, mu, sigma2, beta) in the ordered
// parametrization: the k! ordering normalizer times the joint density
// of the state coordinates. The sigma2 factor is the density induced
// by sigma^-2 ~ Gamma(alpha, beta), i.e. inverse-gamma in sigma2, so
// that the value composes directly with the split move's Jacobian,
// which is taken in (w, mu, sigma2) coordinates. States violating the
// mean ordering are reported as invalid_input: the samplers maintain
// the ordering by construction, so an off-region state is a bug.
double log_prior_density(const MixtureState& state, const PriorSpec& prior);

// --------------------------------------------------------------- tools

struct SimulatedData {
  Dataset data;
  std::vector<int> true_z;  // 0-based
};

// z_i ~ Categorical(true_w), y_i ~ N(mu_{z_i}, sigma2_{z_i}).
// Deterministic given seed.
SimulatedData simulate_dataset(const Scenario& scenario, std::uint64_t seed);

// Permutes components so mu is strictly increasing; w and sigma2
// follow, z is relabeled. Exact mean ties break by ascending w, then
// ascending sigma2, then original index. perm[old_label] = new_label.
struct OrderingResult {
  MixtureState state;
  std::vector<int> perm;
  bool already_ordered = false;
};
OrderingResult enforce_ordering(MixtureState state);

}  // namespace rjmix
