#include "rjmix/chain.hpp"

#include "rjmix/errors.hpp"

namespace rjmix {

void McmcConfig::validate() const {
  if (n_sweeps < 1) throw invalid_input("McmcConfig: n_sweeps must be positive");
  if (burn_in < 0 || burn_in >= n_sweeps)
    throw invalid_input("McmcConfig: burn_in must lie in [0, n_sweeps)");
  if (thin < 1) throw invalid_input("McmcConfig: thin must be positive");
  if (retained() < 1)
    throw invalid_input("McmcConfig: budget retains no samples");
}

MoveStats& MoveStats::operator+=(const MoveStats& o) {
  split_attempted += o.split_attempted;
  split_accepted += o.split_accepted;
  combine_attempted += o.combine_attempted;
  combine_accepted += o.combine_accepted;
  birth_attempted += o.birth_attempted;
  birth_accepted += o.birth_accepted;
  death_attempted += o.death_attempted;
  death_accepted += o.death_accepted;
  return *this;
}

bool Chain::all_same_k() const {
  for (const auto& s : records)
    if (s.k != records.front().k) return false;
  return true;
}

}  // namespace rjmix
