#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rjmix/model.hpp"

namespace rjmix::cli {

// Shared sampler/prior/output knobs of the fit-like commands. Exactly
// one of data_path / scenario may be set; a scenario is simulated
// first (data from derive_seed(seed, 0), chain from derive_seed(seed, 1)).
struct FitOptions {
  std::string data_path;
  std::string scenario;
  std::string mode = "rj";  // "rj" or "fixed"
  int k = 0;                // required in fixed mode
  long sweeps = 10000;
  long burn_in = 1000;
  long thin = 1;
  std::uint64_t seed = 1;
  PriorOptions prior;
  int grid_points = 512;
  double grid_pad = 0.5;
  bool predictive_unconditioned = false;
  std::string out_dir;
};

struct SimulateOptions {
  std::string scenario;  // builtin name, or empty with the inline fields set
  int k = 0;
  std::string w_csv, mu_csv, sigma2_csv;  // comma-separated inline scenario
  int n = 0;                              // overrides the scenario's n when > 0
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct ReplicateOptions {
  FitOptions fit;  // scenario + sampler settings; data_path unused
  int replications = 0;
  int workers = 0;
};

struct DicCompareOptions {
  FitOptions fit;  // data/scenario + budgets; mode ignored
  std::vector<int> k_list;
  bool with_rj = false;
};

struct SummarizeOptions {
  std::string chain_path;
  std::string data_path;
  int grid_points = 512;
  double grid_pad = 0.5;
  std::string out_dir;
};

int cmd_simulate(const SimulateOptions& opt);
int cmd_fit(const FitOptions& opt);
int cmd_replicate(const ReplicateOptions& opt);
int cmd_dic_compare(const DicCompareOptions& opt);
int cmd_summarize(const SummarizeOptions& opt);

// Full command-line surface. args = argv[1..]; returns the process
// exit code (0 ok, 1 validation, 2 runtime/numeric failure, 3 study
// failure past the exclusion threshold).
int run(std::vector<std::string> args);

}  // namespace rjmix::cli
