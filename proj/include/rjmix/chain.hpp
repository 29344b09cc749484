#pragma once

#include <cstdint>
#include <vector>

#include "rjmix/model.hpp"

namespace rjmix {

// Sweep budget of one sampler run. Sweeps are numbered 1..n_sweeps;
// sweep s is retained when s > burn_in and (s - burn_in) is divisible
// by thin, so the retained count is (n_sweeps - burn_in) / thin.
struct McmcConfig {
  long n_sweeps = 0;
  long burn_in = 0;
  long thin = 1;
  std::uint64_t seed = 0;

  long retained() const { return (n_sweeps - burn_in) / thin; }
  void validate() const;  // throws invalid_input
};

// Attempt/acceptance tallies for the trans-dimensional moves.
struct MoveStats {
  long split_attempted = 0, split_accepted = 0;
  long combine_attempted = 0, combine_accepted = 0;
  long birth_attempted = 0, birth_accepted = 0;
  long death_attempted = 0, death_accepted = 0;

  MoveStats& operator+=(const MoveStats& o);
};

// Ordered, thinned record of sampler states plus the metadata needed
// to replay the run. For fixed-k runs move_stats stays zero.
struct Chain {
  std::vector<MixtureState> records;
  std::vector<long> sweeps;          // original sweep index per record
  std::vector<double> log_liks;      // marginal log likelihood per record
  McmcConfig config;
  MoveStats move_stats;
  bool fixed_k = false;
  int fixed_k_value = 0;

  std::size_t size() const { return records.size(); }
  bool all_same_k() const;
};

}  // namespace rjmix
