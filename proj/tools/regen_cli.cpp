#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regen/regen.h"

namespace {

struct Key {
  const char* name;
  const char* help;
};

const std::vector<Key> kModelKeys{
    {"model", "two-state | imh | drift-bd | file:<path> (default two-state)"},
    {"beta", "two-state minorization constant (default 0.5)"},
    {"size", "drift-bd state count (default 30)"},
    {"up", "drift-bd upward move probability (default 0.3)"},
    {"v", "drift-bd geometric drift base, V(x) = v^x (default 1.3)"},
    {"target", "imh target, comma-separated probabilities"},
    {"proposal", "imh proposal, comma-separated probabilities (default uniform)"},
    {"f", "default | identity | indicator:<k> | values:<v0>,<v1>,..."},
};

const std::vector<Key> kSimKeys{
    {"seed", "master seed (falls back to REGEN_SEED, then 1)"},
    {"mode", "explicit | mykland (default explicit)"},
    {"tour-cap", "abort when a tour exceeds this many steps"},
    {"jobs", "worker threads; output does not depend on it"},
};

const std::vector<Key> kPlanKeys{
    {"eps", "target precision"},
    {"alpha", "target failure probability (< 0.5)"},
    {"a-star", "per-run failure level of the median trick (default 0.11969)"},
    {"sigma-as", "upper bound on sigma_as^2 (with c0 it replaces the model-derived inputs)"},
    {"c0", "upper bound on C0 = sigma_tau^2 + m"},
    {"inputs", "auto | doeblin | drift | exact: where the planner takes sigma_as^2 and C0 from"},
};

struct Subcommand {
  const char* name;
  const char* description;
  const char* footer;
  std::vector<std::vector<Key>> groups;
};

std::vector<Subcommand> subcommands() {
  return {
      {"estimate", "Run replicated estimates of pi(f)",
       "CSV columns: replicate,estimator,value,tours,steps,seed. A 'mean' row follows, and an\n"
       "'mse' row when --theta is given. seed is the replicate's stream key.",
       {kModelKeys,
        kSimKeys,
        {{"estimator", "fixed | reg | unbiased | reg-seq | perfect (default reg-seq)"},
         {"n", "chain length (fixed, reg-seq)"},
         {"r", "tour or draw count (reg, unbiased, perfect)"},
         {"t", "burn-in for fixed"},
         {"reps", "replicates (default 100)"},
         {"m", "exact mean tour length for unbiased (defaults to 1/beta when J = X)"},
         {"theta", "true value; adds an mse row"}}}},
      {"plan", "Size a median-of-runs experiment for (eps, alpha)",
       "Prints key=value lines: inputs, sigma_as_bound, C0_bound, n, l, a_star, c1, c2,\n"
       "chernoff_failure, expected_cost, asymptotic_cost, l_asymptotic, clt_n, and for\n"
       "whole-space small sets klm_n, perfect_r, perfect_cost.",
       {kModelKeys, kPlanKeys, {{"f-sup", "sup |f| for the exponential inequality"}}}},
      {"bounds", "Evaluate every bound at the model's exact tour moments",
       "CSV columns: name,value,capped,source,inputs. capped is min(value, 1) for probabilities.",
       {kModelKeys,
        {{"eps", "precision"},
         {"alpha", "failure probability"},
         {"r", "tour count for the fixed-tour bounds"},
         {"n", "length for the sequential bounds"},
         {"delta", "split point of the ratio tail bound (default optimal)"},
         {"f-sup", "sup |f| for the exponential inequality"}}}},
      {"coverage", "Meta-replicate the median trick and measure coverage",
       "CSV columns: inputs,eps,alpha,n,l,metas,covered,coverage,target,binomial_se,guarantee,\n"
       "mean_steps,planned_cost. With --details 1 a per-meta table follows:\n"
       "meta,median,abs_error,covered,steps.",
       {kModelKeys,
        kSimKeys,
        kPlanKeys,
        {{"metas", "meta-replicates (default 200)"},
         {"theta", "true value (default exact pi(f))"},
         {"details", "1 to append the per-meta table"}}}},
      {"compare", "Planned costs of the fixed-precision schemes over a beta grid",
       "CSV columns: beta,general_n,general_l,general_cost,reversible_n,reversible_l,\n"
       "reversible_cost,perfect_r,perfect_cost,klm_n,ratio_general,ratio_reversible,\n"
       "ratio_general_per_40beta,ratio_reversible_per_20beta.",
       {{{"betas", "comma-separated beta grid"},
         {"sigma-sq", "stationary variance (default 0.25)"},
         {"f-sup", "sup |f| (default 1)"},
         {"eps", "precision (default 0.01)"},
         {"alpha", "failure probability (default 0.01)"},
         {"a-star", "per-run failure level"}}}},
      {"verify", "Run the self-check suite",
       "CSV columns: check,anchor,gating,result,detail. Exit status 1 when a gating check fails.",
       {{{"tier", "quick | full"},
         {"seed", "master seed (falls back to REGEN_SEED, then 1)"},
         {"fault", "perturb residual kernels by this mass before the mode check"},
         {"jobs", "worker threads"}}}},
  };
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool sets_key(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string k = line.substr(0, eq);
    k.erase(0, k.find_first_not_of(" \t"));
    k.erase(k.find_last_not_of(" \t\r") + 1);
    if (k == key) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerative Monte Carlo estimation with fixed-precision planning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("regen ") + regen_version());

  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override it");

  std::map<std::string, std::string> flags;
  std::string chosen;
  for (const auto& sub : subcommands()) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.description);
    cmd->footer(sub.footer);
    cmd->add_option("--config", config_path, "key=value file; flags override it");
    for (const auto& group : sub.groups) {
      for (const auto& key : group) {
        const std::string name = key.name;
        if (cmd->get_option_no_throw("--" + name) != nullptr) continue;
        cmd->add_option_function<std::string>(
            "--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, key.help);
      }
    }
    cmd->callback([&chosen, name = std::string(sub.name)] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string text;
  try {
    if (!config_path.empty()) text = read_file(config_path) + "\n";
  } catch (const CLI::Error& e) {
    std::cerr << "regen: " << e.what() << "\n";
    return 2;
  }
  for (const auto& [k, v] : flags) text += k + "=" + v + "\n";
  const bool uses_seed = chosen == "estimate" || chosen == "coverage" || chosen == "verify";
  if (uses_seed && !sets_key(text, "seed")) {
    if (const char* env = std::getenv("REGEN_SEED"); env != nullptr && *env != '\0') {
      text += std::string("seed=") + env + "\n";
    }
  }

  char* output = nullptr;
  int status = 0;
  const regen_status rc = regen_run_command(chosen.c_str(), text.c_str(), &output, &status);
  if (rc != REGEN_OK) {
    std::cerr << "regen " << chosen << ": " << regen_status_name(rc) << ": " << regen_last_error()
              << "\n";
    return regen_is_config_error(rc) ? 2 : 1;
  }
  std::fputs(output, stdout);
  regen_string_free(output);
  return status;
}
