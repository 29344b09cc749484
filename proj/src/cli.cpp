#include "rjmix/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "rjmix/errors.hpp"
#include "rjmix/gibbs.hpp"
#include "rjmix/io.hpp"
#include "rjmix/replication.hpp"
#include "rjmix/rjmcmc.hpp"

namespace rjmix::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<double> parse_double_list(const std::string& csv, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw invalid_input(what + ": cannot parse '" + tok + "' as a number");
    }
  }
  return out;
}

void require_all(const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw invalid_input(msg);
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw invalid_input("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw invalid_input("cannot create output directory " + dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

McmcConfig mcmc_of(const FitOptions& opt, std::uint64_t seed) {
  McmcConfig cfg;
  cfg.n_sweeps = opt.sweeps;
  cfg.burn_in = opt.burn_in;
  cfg.thin = opt.thin;
  cfg.seed = seed;
  return cfg;
}

void validate_fit(const FitOptions& opt, std::vector<std::string>& problems,
                  bool needs_input = true) {
  if (needs_input) {
    if (opt.data_path.empty() == opt.scenario.empty())
      problems.push_back("exactly one of --data and --scenario must be given");
  }
  if (opt.mode != "rj" && opt.mode != "fixed")
    problems.push_back("--mode must be 'rj' or 'fixed'");
  if (opt.mode == "fixed" && opt.k < 1)
    problems.push_back("--k is required (>= 1) in fixed mode");
  if (opt.mode == "fixed" && opt.k > opt.prior.k_max)
    problems.push_back("--k must not exceed --k-max");
  if (opt.sweeps < 1) problems.push_back("--sweeps must be positive");
  if (opt.burn_in < 0 || opt.burn_in >= opt.sweeps)
    problems.push_back("--burn-in must lie in [0, sweeps)");
  if (opt.thin < 1) problems.push_back("--thin must be positive");
  if (opt.sweeps >= 1 && opt.burn_in >= 0 && opt.burn_in < opt.sweeps && opt.thin >= 1 &&
      (opt.sweeps - opt.burn_in) / opt.thin < 1)
    problems.push_back("budget retains no samples: (sweeps - burn_in)/thin < 1");
  if (!(opt.prior.gamma > 0.0)) problems.push_back("--gamma must be positive");
  if (opt.prior.k_max < 1) problems.push_back("--k-max must be at least 1");
  if (opt.prior.sigma_a2 && !(*opt.prior.sigma_a2 > 0.0))
    problems.push_back("--sigma-a2 must be positive");
  if (opt.prior.alpha && !(*opt.prior.alpha > 0.0))
    problems.push_back("--alpha must be positive");
  if (opt.prior.g && !(*opt.prior.g > 0.0)) problems.push_back("--g must be positive");
  if (opt.prior.h && !(*opt.prior.h > 0.0)) problems.push_back("--h must be positive");
  if (opt.grid_points < 2) problems.push_back("--grid-points must be at least 2");
  if (!(opt.grid_pad >= 0.0)) problems.push_back("--grid-pad must be non-negative");
  if (opt.out_dir.empty()) problems.push_back("--out is required");
}

ordered_json prior_echo(const PriorSpec& prior) {
  ordered_json j;
  j["gamma"] = prior.gamma;
  j["mu_a"] = prior.mu_a;
  j["sigma_a2"] = prior.sigma_a2;
  j["alpha"] = prior.alpha;
  j["g"] = prior.g;
  j["h"] = prior.h;
  j["k_max"] = prior.k_max;
  return j;
}

ordered_json fit_echo(const FitOptions& opt, const PriorSpec& prior) {
  ordered_json j;
  if (!opt.data_path.empty()) j["data"] = opt.data_path;
  if (!opt.scenario.empty()) j["scenario"] = opt.scenario;
  j["mode"] = opt.mode;
  if (opt.mode == "fixed") j["k"] = opt.k;
  j["sweeps"] = opt.sweeps;
  j["burn_in"] = opt.burn_in;
  j["thin"] = opt.thin;
  j["seed"] = opt.seed;
  j["prior"] = prior_echo(prior);
  j["grid_points"] = opt.grid_points;
  j["grid_pad"] = opt.grid_pad;
  j["predictive_unconditioned"] = opt.predictive_unconditioned;
  return j;
}

ordered_json interval_json(const IntervalSummary& s) {
  return ordered_json{{"mean", s.mean}, {"lo95", s.lo95}, {"hi95", s.hi95}};
}

ordered_json summary_json(const PosteriorSummary& s) {
  ordered_json j;
  j["k"] = s.k;
  for (const char* fam : {"w", "mu", "sigma2"}) {
    const auto& block = std::string(fam) == "w" ? s.w
                        : std::string(fam) == "mu" ? s.mu
                                                   : s.sigma2;
    ordered_json arr = ordered_json::array();
    for (std::size_t c = 0; c < block.size(); ++c) {
      ordered_json e = interval_json(block[c]);
      e["component"] = static_cast<int>(c + 1);
      arr.push_back(e);
    }
    j[fam] = arr;
  }
  j["beta"] = interval_json(s.beta);
  return j;
}

ordered_json move_stats_json(const MoveStats& m) {
  auto pair = [](long att, long acc) {
    return ordered_json{{"attempted", att}, {"accepted", acc}};
  };
  ordered_json j;
  j["split"] = pair(m.split_attempted, m.split_accepted);
  j["combine"] = pair(m.combine_attempted, m.combine_accepted);
  j["birth"] = pair(m.birth_attempted, m.birth_accepted);
  j["death"] = pair(m.death_attempted, m.death_accepted);
  return j;
}

ordered_json k_pmf_json(const KPosterior& kp) {
  ordered_json j;
  for (const auto& [k, p] : kp.pmf) j[std::to_string(k)] = p;
  return j;
}

void write_json(const std::string& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// Loads the dataset (from file or by simulating the named scenario)
// and reports the sampler seed to use.
struct FitInput {
  Dataset data;
  std::uint64_t chain_seed = 0;
  std::string simulated_truth_json;  // empty when reading a file
};

FitInput load_fit_input(const FitOptions& opt) {
  FitInput in;
  if (!opt.data_path.empty()) {
    in.data = read_dataset_csv(opt.data_path);
    in.chain_seed = opt.seed;
    return in;
  }
  const Scenario sc = find_scenario(opt.scenario);
  const auto sim = simulate_dataset(sc, derive_seed(opt.seed, 0));
  in.data = sim.data;
  in.chain_seed = derive_seed(opt.seed, 1);
  ordered_json truth;
  truth["label"] = sc.label;
  truth["true_k"] = sc.true_k;
  truth["true_w"] = sc.true_w;
  truth["true_mu"] = sc.true_mu;
  truth["true_sigma2"] = sc.true_sigma2;
  truth["n"] = sc.n;
  truth["seed"] = opt.seed;
  std::vector<int> z1(sim.true_z.size());
  for (std::size_t i = 0; i < sim.true_z.size(); ++i) z1[i] = sim.true_z[i] + 1;
  truth["true_z"] = z1;
  in.simulated_truth_json = truth.dump(2) + "\n";
  return in;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt) {
  std::vector<std::string> problems;
  const bool inline_scenario = opt.k > 0 || !opt.w_csv.empty() || !opt.mu_csv.empty() ||
                               !opt.sigma2_csv.empty();
  if (opt.scenario.empty() == !inline_scenario)
    problems.push_back("give either --scenario or the inline --k/--w/--mu/--sigma2 set");
  if (opt.out_dir.empty()) problems.push_back("--out is required");
  if (opt.n < 0) problems.push_back("--n must not be negative");
  require_all(problems);

  Scenario sc;
  if (!opt.scenario.empty()) {
    sc = find_scenario(opt.scenario);
  } else {
    sc.label = "custom";
    sc.true_k = opt.k;
    sc.true_w = parse_double_list(opt.w_csv, "--w");
    sc.true_mu = parse_double_list(opt.mu_csv, "--mu");
    sc.true_sigma2 = parse_double_list(opt.sigma2_csv, "--sigma2");
    sc.n = opt.n > 0 ? opt.n : 100;
  }
  if (opt.n > 0) sc.n = opt.n;
  sc.validate();

  ensure_out_dir(opt.out_dir);
  const auto sim = simulate_dataset(sc, opt.seed);
  write_dataset_csv(join_path(opt.out_dir, "data.csv"), sim.data);

  ordered_json truth;
  truth["label"] = sc.label;
  truth["true_k"] = sc.true_k;
  truth["true_w"] = sc.true_w;
  truth["true_mu"] = sc.true_mu;
  truth["true_sigma2"] = sc.true_sigma2;
  truth["n"] = sc.n;
  truth["seed"] = opt.seed;
  std::vector<int> z1(sim.true_z.size());
  for (std::size_t i = 0; i < sim.true_z.size(); ++i) z1[i] = sim.true_z[i] + 1;
  truth["true_z"] = z1;
  write_json(join_path(opt.out_dir, "truth.json"), truth);
  return 0;
}

int cmd_fit(const FitOptions& opt) {
  std::vector<std::string> problems;
  validate_fit(opt, problems);
  require_all(problems);
  ensure_out_dir(opt.out_dir);

  const FitInput in = load_fit_input(opt);
  const PriorSpec prior = opt.prior.resolve(in.data);
  const McmcConfig cfg = mcmc_of(opt, in.chain_seed);

  if (!in.simulated_truth_json.empty()) {
    write_dataset_csv(join_path(opt.out_dir, "data.csv"), in.data);
    write_text_file(join_path(opt.out_dir, "truth.json"), in.simulated_truth_json);
  }

  const bool rj = opt.mode == "rj";
  const Chain chain = rj ? run_rj(in.data, prior, cfg)
                         : run_fixed_k(in.data, prior, opt.k, cfg);
  write_chain_csv(join_path(opt.out_dir, "chain.csv"), chain);

  const KPosterior kp = k_posterior(chain);
  const Chain conditioned = rj ? condition_on_modal_k(chain) : chain;
  const PosteriorSummary summary = posterior_summary(conditioned);
  const DicResult d = dic(conditioned, in.data);

  const auto grid = default_grid(in.data, opt.grid_points, opt.grid_pad);
  const Chain& pred_chain =
      rj && !opt.predictive_unconditioned ? conditioned : chain;
  const auto density = predictive_density(pred_chain, grid);
  write_xy_csv(join_path(opt.out_dir, "predictive.csv"), "y,density", grid, density);

  ordered_json j;
  j["command"] = "fit";
  j["config"] = fit_echo(opt, prior);
  j["n"] = in.data.n();
  j["data_range"] = {in.data.range_min, in.data.range_max};
  j["retained_records"] = chain.records.size();
  j["k_pmf"] = k_pmf_json(kp);
  j["modal_k"] = kp.modal_k;
  j["conditioned_records"] = conditioned.records.size();
  j["posterior"] = summary_json(summary);
  j["dic"] = ordered_json{{"d_bar", d.d_bar}, {"p_d", d.p_d}, {"dic", d.dic}};
  if (rj) j["move_stats"] = move_stats_json(chain.move_stats);
  write_json(join_path(opt.out_dir, "summary.json"), j);
  return 0;
}

int cmd_replicate(const ReplicateOptions& opt) {
  std::vector<std::string> problems;
  if (opt.fit.scenario.empty())
    problems.push_back("--scenario is required for replicate");
  if (!opt.fit.data_path.empty())
    problems.push_back("replicate runs on a scenario, not a data file");
  if (opt.replications < 1) problems.push_back("--replications must be at least 1");
  FitOptions probe = opt.fit;
  if (probe.mode == "fixed" && probe.k == 0) probe.k = 1;  // k comes from the scenario
  validate_fit(probe, problems, /*needs_input=*/false);
  require_all(problems);
  ensure_out_dir(opt.fit.out_dir);

  const Scenario sc = find_scenario(opt.fit.scenario);
  const SamplerMode mode =
      opt.fit.mode == "rj" ? SamplerMode::RJ : SamplerMode::FixedK;
  StudyOptions sopts;
  sopts.workers = opt.workers;
  const McmcConfig cfg = mcmc_of(opt.fit, opt.fit.seed);
  const MetricsTable table =
      run_replication_study(sc, opt.fit.prior, cfg, opt.replications, mode, sopts);

  std::ostringstream csv;
  csv << "param,srmse,mae,cov_pct,width\n";
  for (const auto& p : table.params)
    csv << p.name << "," << format_double(p.srmse) << "," << format_double(p.mae) << ","
        << format_double(p.coverage_pct) << "," << format_double(p.mean_width) << "\n";
  write_text_file(join_path(opt.fit.out_dir, "metrics.csv"), csv.str());

  ordered_json j;
  j["command"] = "replicate";
  ordered_json cfg_echo;
  cfg_echo["scenario"] = opt.fit.scenario;
  cfg_echo["mode"] = opt.fit.mode;
  cfg_echo["replications"] = opt.replications;
  cfg_echo["sweeps"] = opt.fit.sweeps;
  cfg_echo["burn_in"] = opt.fit.burn_in;
  cfg_echo["thin"] = opt.fit.thin;
  cfg_echo["master_seed"] = opt.fit.seed;
  cfg_echo["gamma"] = opt.fit.prior.gamma;
  cfg_echo["k_max"] = opt.fit.prior.k_max;
  j["config"] = cfg_echo;
  j["R"] = table.replications;
  j["excluded"] = table.excluded;
  j["scored"] = table.scored;
  j["k_recovery_rate"] = table.k_recovery_rate;
  write_json(join_path(opt.fit.out_dir, "metrics.json"), j);
  return 0;
}

int cmd_dic_compare(const DicCompareOptions& opt) {
  std::vector<std::string> problems;
  FitOptions probe = opt.fit;
  probe.mode = "rj";  // mode is implied by the k list / --rj flag here
  validate_fit(probe, problems);
  if (opt.k_list.empty() && !opt.with_rj)
    problems.push_back("give --k-list and/or --rj");
  for (int k : opt.k_list)
    if (k < 1 || k > opt.fit.prior.k_max)
      problems.push_back("k=" + std::to_string(k) + " outside [1, k_max]");
  require_all(problems);
  ensure_out_dir(opt.fit.out_dir);

  const FitInput in = load_fit_input(opt.fit);
  const PriorSpec prior = opt.fit.prior.resolve(in.data);

  std::ostringstream csv;
  csv << "model,k,d_bar,p_d,dic\n";
  for (int k : opt.k_list) {
    McmcConfig cfg = mcmc_of(opt.fit, derive_seed(in.chain_seed, 100 + k));
    const Chain chain = run_fixed_k(in.data, prior, k, cfg);
    const DicResult d = dic(chain, in.data);
    csv << "fixed_k" << k << "," << k << "," << format_double(d.d_bar) << ","
        << format_double(d.p_d) << "," << format_double(d.dic) << "\n";
  }
  if (opt.with_rj) {
    McmcConfig cfg = mcmc_of(opt.fit, derive_seed(in.chain_seed, 99));
    const Chain chain = run_rj(in.data, prior, cfg);
    const Chain conditioned = condition_on_modal_k(chain);
    const DicResult d = dic(conditioned, in.data);
    csv << "rj," << conditioned.records.front().k << "," << format_double(d.d_bar) << ","
        << format_double(d.p_d) << "," << format_double(d.dic) << "\n";
  }
  write_text_file(join_path(opt.fit.out_dir, "dic_compare.csv"), csv.str());

  ordered_json j;
  j["command"] = "dic-compare";
  j["config"] = fit_echo(opt.fit, prior);
  j["config"].erase("mode");
  j["k_list"] = opt.k_list;
  j["rj"] = opt.with_rj;
  write_json(join_path(opt.fit.out_dir, "dic_compare.json"), j);
  return 0;
}

int cmd_summarize(const SummarizeOptions& opt) {
  std::vector<std::string> problems;
  if (opt.chain_path.empty()) problems.push_back("--chain is required");
  if (opt.data_path.empty()) problems.push_back("--data is required");
  if (opt.out_dir.empty()) problems.push_back("--out is required");
  if (opt.grid_points < 2) problems.push_back("--grid-points must be at least 2");
  require_all(problems);
  ensure_out_dir(opt.out_dir);

  const Chain chain = read_chain_csv(opt.chain_path);
  const Dataset data = read_dataset_csv(opt.data_path);

  const KPosterior kp = k_posterior(chain);
  const Chain conditioned = chain.fixed_k ? chain : condition_on_modal_k(chain);
  const PosteriorSummary summary = posterior_summary(conditioned);
  const DicResult d = dic(conditioned, data);
  const auto grid = default_grid(data, opt.grid_points, opt.grid_pad);
  const auto density = predictive_density(conditioned, grid);
  write_xy_csv(join_path(opt.out_dir, "predictive.csv"), "y,density", grid, density);

  ordered_json j;
  j["command"] = "summarize";
  ordered_json cfg_echo;
  cfg_echo["chain"] = opt.chain_path;
  cfg_echo["data"] = opt.data_path;
  cfg_echo["grid_points"] = opt.grid_points;
  cfg_echo["grid_pad"] = opt.grid_pad;
  j["config"] = cfg_echo;
  j["n"] = data.n();
  j["k_pmf"] = k_pmf_json(kp);
  j["modal_k"] = kp.modal_k;
  j["conditioned_records"] = conditioned.records.size();
  j["posterior"] = summary_json(summary);
  j["dic"] = ordered_json{{"d_bar", d.d_bar}, {"p_d", d.p_d}, {"dic", d.dic}};
  write_json(join_path(opt.out_dir, "summary.json"), j);
  return 0;
}

namespace {

// Flat key=value config support. CLI11's own config reader does not
// reach subcommand options, so the file's pairs are spliced into the
// argument list right after the subcommand token; explicit flags come
// later and win under the take-last policy.
std::vector<std::string> config_file_args(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(read_text_file(path));
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw invalid_input(path + " line " + std::to_string(line_no) +
                          ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
      value.erase(value.begin());
    out.push_back("--" + key);
    if (!value.empty() && (value == "true" || value == "false") &&
        (key == "rj" || key == "unconditioned-predictive")) {
      out.back() += "=" + value;  // flags take inline values only
    } else {
      out.push_back(value);
    }
  }
  return out;
}

std::vector<std::string> splice_config(std::vector<std::string> args) {
  if (args.empty()) return args;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t erase_count = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      erase_count = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      erase_count = 1;
    }
    if (erase_count == 0) continue;
    const auto inserted = config_file_args(path);
    args.erase(args.begin() + i, args.begin() + i + erase_count);
    args.insert(args.begin() + 1, inserted.begin(), inserted.end());
    break;
  }
  return args;
}

void add_prior_options(CLI::App* sub, FitOptions& f) {
  sub->add_option("--gamma", f.prior.gamma, "Dirichlet prior parameter");
  sub->add_option("--k-max", f.prior.k_max, "upper bound of the uniform prior on k");
  sub->add_option("--mu-a", f.prior.mu_a, "mean-prior center (default: data midpoint)");
  sub->add_option("--sigma-a2", f.prior.sigma_a2, "mean-prior variance (default: R^2)");
  sub->add_option("--alpha", f.prior.alpha, "precision-prior shape (default: 2)");
  sub->add_option("--g", f.prior.g, "beta-prior shape (default: 0.2)");
  sub->add_option("--h", f.prior.h, "beta-prior rate (default: 10/R^2)");
}

void add_mcmc_options(CLI::App* sub, FitOptions& f) {
  sub->add_option("--sweeps", f.sweeps, "total sweeps");
  sub->add_option("--burn-in", f.burn_in, "sweeps discarded before recording");
  sub->add_option("--thin", f.thin, "record every thin-th post-burn-in sweep");
  sub->add_option("--seed", f.seed, "master seed");
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"Bayesian univariate normal mixtures: fixed-k Gibbs and "
               "reversible-jump samplers with replication diagnostics"};
  app.require_subcommand(1);
  // the prior's rate parameter takes the short name -h would shadow
  app.set_help_flag("--help", "print help and exit");

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "draw a dataset from a scenario");
  c_sim->set_help_flag("--help", "print help and exit");
  c_sim->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_sim->add_option("--config", "flat key=value config file (flags override it)");
  c_sim->add_option("--scenario", sim.scenario, "builtin scenario name");
  c_sim->add_option("--k", sim.k, "inline scenario: number of components");
  c_sim->add_option("--w", sim.w_csv, "inline scenario: comma-separated weights");
  c_sim->add_option("--mu", sim.mu_csv, "inline scenario: comma-separated means");
  c_sim->add_option("--sigma2", sim.sigma2_csv, "inline scenario: comma-separated variances");
  c_sim->add_option("--n", sim.n, "sample size");
  c_sim->add_option("--seed", sim.seed, "simulation seed");
  c_sim->add_option("--out", sim.out_dir, "output directory");

  FitOptions fit;
  auto* c_fit = app.add_subcommand("fit", "run a sampler on a dataset or scenario");
  c_fit->set_help_flag("--help", "print help and exit");
  c_fit->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_fit->add_option("--config", "flat key=value config file (flags override it)");
  c_fit->add_option("--data", fit.data_path, "single-column CSV of observations");
  c_fit->add_option("--scenario", fit.scenario, "builtin scenario to simulate and fit");
  c_fit->add_option("--mode", fit.mode, "'rj' (unknown k) or 'fixed'");
  c_fit->add_option("--k", fit.k, "number of components (fixed mode)");
  add_mcmc_options(c_fit, fit);
  add_prior_options(c_fit, fit);
  c_fit->add_option("--grid-points", fit.grid_points, "predictive grid size");
  c_fit->add_option("--grid-pad", fit.grid_pad, "grid padding in units of the data range");
  c_fit->add_flag("--unconditioned-predictive", fit.predictive_unconditioned,
                  "average the predictive over all records instead of the modal-k ones");
  c_fit->add_option("--out", fit.out_dir, "output directory");

  ReplicateOptions rep;
  auto* c_rep = app.add_subcommand("replicate", "many-seed frequentist study");
  c_rep->set_help_flag("--help", "print help and exit");
  c_rep->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_rep->add_option("--config", "flat key=value config file (flags override it)");
  c_rep->add_option("--scenario", rep.fit.scenario, "builtin scenario name");
  c_rep->add_option("--mode", rep.fit.mode, "'rj' or 'fixed' (fixed uses the true k)");
  c_rep->add_option("--replications,-R", rep.replications, "number of replications");
  c_rep->add_option("--workers", rep.workers, "parallel workers (default: all cores)");
  add_mcmc_options(c_rep, rep.fit);
  add_prior_options(c_rep, rep.fit);
  c_rep->add_option("--out", rep.fit.out_dir, "output directory");

  DicCompareOptions dicc;
  auto* c_dic = app.add_subcommand("dic-compare", "DIC table across fixed k and RJ");
  c_dic->set_help_flag("--help", "print help and exit");
  c_dic->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_dic->add_option("--config", "flat key=value config file (flags override it)");
  c_dic->add_option("--data", dicc.fit.data_path, "single-column CSV of observations");
  c_dic->add_option("--scenario", dicc.fit.scenario, "builtin scenario to simulate");
  c_dic->add_option("--k-list", dicc.k_list, "fixed k values to fit")->delimiter(',');
  c_dic->add_flag("--rj", dicc.with_rj, "also fit with unknown k");
  add_mcmc_options(c_dic, dicc.fit);
  add_prior_options(c_dic, dicc.fit);
  c_dic->add_option("--out", dicc.fit.out_dir, "output directory");

  SummarizeOptions summ;
  auto* c_sum = app.add_subcommand("summarize", "re-derive summaries from a chain CSV");
  c_sum->set_help_flag("--help", "print help and exit");
  c_sum->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_sum->add_option("--config", "flat key=value config file (flags override it)");
  c_sum->add_option("--chain", summ.chain_path, "chain CSV produced by fit");
  c_sum->add_option("--data", summ.data_path, "the dataset the chain was fit to");
  c_sum->add_option("--grid-points", summ.grid_points, "predictive grid size");
  c_sum->add_option("--grid-pad", summ.grid_pad, "grid padding in units of the data range");
  c_sum->add_option("--out", summ.out_dir, "output directory");

  try {
    args = splice_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim);
    if (c_fit->parsed()) return cmd_fit(fit);
    if (c_rep->parsed()) return cmd_replicate(rep);
    if (c_dic->parsed()) return cmd_dic_compare(dicc);
    if (c_sum->parsed()) return cmd_summarize(summ);
    return 1;
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const study_failure& e) {
    std::cerr << "study failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rjmix::cli
