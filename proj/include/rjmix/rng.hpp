#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rjmix {

// Derives a stream seed from a master seed and a stream index
// (splitmix64 finalizer). Used to give each replication its own
// independent, replayable RNG stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// One private random stream. A sampler run owns exactly one RngStream;
// nothing is shared across threads.
//
// All variate generators are implemented on top of the raw mt19937_64
// output so that a given seed reproduces the same sequence everywhere.
// Gamma uses the Marsaglia-Tsang rejection scheme; Dirichlet is
// normalized gammas; Beta is a gamma ratio.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform();
  // Uniform on (0, 1]; safe as a log/root argument.
  double uniform_pos();
  // Uniform integer on {lo, ..., hi} inclusive.
  int uniform_int(int lo, int hi);

  double normal();  // standard normal, Box-Muller with cached spare
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, rate): mean shape/rate, variance shape/rate^2.
  double gamma(double shape, double rate);
  // Beta(a, b) as X/(X+Y) with X~Gamma(a,1), Y~Gamma(b,1).
  double beta(double a, double b);
  // Symmetric or general Dirichlet via normalized gamma draws.
  std::vector<double> dirichlet(std::span<const double> alpha);
  std::vector<double> dirichlet_symmetric(double alpha, int k);

  // Draws an index from the categorical distribution with the given
  // unnormalized log probabilities. If log_prob_out is non-null it
  // receives the normalized log probability of the drawn index.
  int categorical_from_logits(std::span<const double> logits,
                              double* log_prob_out = nullptr);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Normalized probabilities exp(l_i) / sum_j exp(l_j), computed through
// a max shift. Shared by the allocation kernel and the test oracles'
// counterpart checks.
std::vector<double> probs_from_logits(std::span<const double> logits);

// log sum_i exp(v_i), -inf for an empty span.
double log_sum_exp(std::span<const double> v);

}  // namespace rjmix
