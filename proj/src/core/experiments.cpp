#include "regen/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "regen/bounds.hpp"
#include "regen/error.hpp"
#include "regen/estimators.hpp"
#include "regen/median_trick.hpp"
#include "regen/model_file.hpp"
#include "regen/oracle.hpp"
#include "regen/parallel.hpp"
#include "regen/perfect.hpp"
#include "regen/verify.hpp"

#ifndef REGEN_VERSION
#define REGEN_VERSION "0.0.0"
#endif

namespace regen::cmd {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ErrorCode::ConfigError, key + ": not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec == std::errc() && ptr != end) {
    // Accept integral scientific notation such as 1e6.
    const double d = parse_real(key, text);
    if (d >= 0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  }
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::ConfigError, key + ": not a nonnegative integer: '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_real(key, trim(item)));
  if (out.empty()) fail(ErrorCode::ConfigError, key + ": empty list");
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_number(xs[i]);
  return out;
}

std::string header(std::string_view command, const Config& config) {
  std::string out = "# regen " REGEN_VERSION "\n# command=" + std::string(command) + "\n";
  for (const auto& [k, v] : config.echo()) out += "# " + k + "=" + v + "\n";
  return out;
}

SimulationOptions simulation_options(const Config& config) {
  SimulationOptions opts;
  const std::string mode = config.text("mode", "explicit");
  if (mode == "explicit") {
    opts.mode = SimulationMode::ExplicitSplit;
  } else if (mode == "mykland") {
    opts.mode = SimulationMode::MyklandRetrospective;
  } else {
    fail(ErrorCode::ConfigError, "mode must be 'explicit' or 'mykland'");
  }
  opts.tour_cap = config.count("tour-cap", kDefaultTourCap);
  if (opts.tour_cap == 0) fail(ErrorCode::ConfigError, "tour-cap must be positive");
  return opts;
}

unsigned jobs_of(const Config& config) {
  const auto j = config.count("jobs", 1);
  return static_cast<unsigned>(std::clamp<std::uint64_t>(j, 1, 256));
}

double sup_abs(std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s = std::max(s, std::abs(v));
  return s;
}

bool detailed_balance(const FiniteKernel& kernel) {
  const Vector pi = oracle::stationary(kernel);
  const auto s = static_cast<Eigen::Index>(kernel.states());
  for (Eigen::Index x = 0; x < s; ++x) {
    for (Eigen::Index y = x + 1; y < s; ++y) {
      if (std::abs(pi[x] * kernel.matrix()(x, y) - pi[y] * kernel.matrix()(y, x)) > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

// sigma_as^2 and C0 inputs of the planner, and where they came from.
struct PlanInputs {
  std::string source;
  double sigma_as = 0.0;
  double C0 = 0.0;
};

PlanInputs plan_inputs(const Config& config, const zoo::ZooModel* model, std::span<const double> f) {
  if (config.has("sigma-as")) {
    if (!config.has("c0")) fail(ErrorCode::ConfigError, "sigma-as needs c0 as well");
    return {"given", config.real("sigma-as", 0.0), config.real("c0", 0.0)};
  }
  if (model == nullptr) fail(ErrorCode::ConfigError, "give a model or sigma-as and c0");
  std::string source = config.text("inputs", "auto");
  if (source == "auto") {
    source = model->model.is_doeblin() ? "doeblin" : model->V ? "drift" : "exact";
  }
  const double beta = model->model.small_set().beta();
  if (source == "doeblin") {
    if (!model->model.is_doeblin()) {
      fail(ErrorCode::NotDoeblin, "Doeblin inputs need a small set equal to the whole space");
    }
    const double var = oracle::stationary_variance(model->model.kernel(), f);
    return {source, doeblin_variance_bound(var, beta, model->reversible).value,
            doeblin_moments(beta).C0};
  }
  if (source == "drift") {
    if (!model->V) fail(ErrorCode::ConfigError, "drift inputs need a model with a drift function");
    const auto d = oracle::drift_inputs_exact(model->model, *model->V);
    const auto b = drift_bounds({d.lambda_hat, d.K_hat, beta, d.pi_V, d.pi_sqrtV,
                                 oracle::v_half_norm(model->model.kernel(), f, *model->V)});
    return {source, b.sigma_as_bound, b.C0_bound};
  }
  if (source == "exact") {
    const auto t = oracle::tour_moments_exact(model->model, f);
    return {source, t.sigma_as_sq, t.C0};
  }
  fail(ErrorCode::ConfigError, "inputs must be auto, doeblin, drift or exact");
}

Plan plan_from(const Config& config, const PlanInputs& in) {
  return make_plan(in.sigma_as, in.C0, config.real("eps", 0.1), config.real("alpha", 0.05),
                   config.real("a-star", kAStar));
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    first = false;
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    out += '"';
  }
  return out + '\n';
}

std::string u64(std::uint64_t v) { return std::to_string(v); }

}  // namespace

Config Config::parse(std::string_view text) {
  Config config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::ConfigError, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    config.set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return config;
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    fail(ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
  }
  given_[key] = value;
}

const std::string* Config::lookup(const std::string& key, const std::string& fallback) const {
  const auto it = given_.find(key);
  const std::string& value = it == given_.end() ? fallback : it->second;
  used_[key] = value;
  return &used_[key];
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  return *lookup(key, fallback);
}

double Config::real(const std::string& key, double fallback) const {
  return parse_real(key, *lookup(key, format_number(fallback)));
}

std::uint64_t Config::count(const std::string& key, std::uint64_t fallback) const {
  return parse_count(key, *lookup(key, std::to_string(fallback)));
}

std::optional<double> Config::maybe_real(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return real(key, 0.0);
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
  return parse_list(key, *lookup(key, join(fallback)));
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
  std::map<std::string, std::string> all = given_;
  for (const auto& [k, v] : used_) all[k] = v;
  all.erase("jobs");
  return {all.begin(), all.end()};
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "model", "beta",  "size",   "up",       "v",      "target",   "proposal", "f",
      "estimator", "n", "r",      "t",        "reps",   "seed",     "m",        "theta",
      "eps",   "alpha", "a-star", "mode",     "tour-cap", "jobs",   "tier",     "fault",
      "metas", "sigma-as", "c0",  "sigma-sq", "f-sup",  "betas",    "delta",    "inputs",
      "details"};
  return keys;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

zoo::ZooModel resolve_model(const Config& config) {
  const std::string ref = config.text("model", "two-state");
  if (ref == "two-state") return zoo::two_state_example(config.real("beta", 0.5));
  if (ref == "imh") {
    const auto target = config.reals("target", zoo::default_imh_target());
    const std::vector<double> uniform(target.size(), 1.0 / static_cast<double>(target.size()));
    return zoo::independence_mh(target, config.reals("proposal", uniform));
  }
  if (ref == "drift-bd") {
    const auto size = config.count("size", 30);
    return zoo::drift_chain(static_cast<std::size_t>(size), config.real("up", 0.3),
                            config.real("v", 1.3));
  }
  if (ref.rfind("file:", 0) == 0) {
    ModelFile file = load_model_file(ref.substr(5));
    if (!file.small_set) {
      fail(ErrorCode::ConfigError, "model file has no J/beta/nu lines; a small set is required");
    }
    StateFunction identity(file.kernel.states());
    for (std::size_t x = 0; x < identity.size(); ++x) identity[x] = static_cast<double>(x);
    const bool reversible = oracle::is_irreducible(file.kernel) && detailed_balance(file.kernel);
    return zoo::ZooModel{ref, SplitModel(std::move(file.kernel), std::move(*file.small_set)),
                         std::move(identity), reversible, std::nullopt, {}};
  }
  fail(ErrorCode::ConfigError, "unknown model '" + ref + "' (two-state, imh, drift-bd, file:<path>)");
}

StateFunction resolve_function(const Config& config, const zoo::ZooModel& model) {
  const std::string spec = config.text("f", "default");
  const std::size_t s = model.model.states();
  if (spec == "default") return model.f;
  if (spec == "identity") {
    StateFunction f(s);
    for (std::size_t x = 0; x < s; ++x) f[x] = static_cast<double>(x);
    return f;
  }
  if (spec.rfind("indicator:", 0) == 0) {
    const auto k = parse_count("f", spec.substr(10));
    if (k >= s) fail(ErrorCode::ConfigError, "f: indicator state out of range");
    StateFunction f(s, 0.0);
    f[k] = 1.0;
    return f;
  }
  if (spec.rfind("values:", 0) == 0) {
    auto f = parse_list("f", spec.substr(7));
    if (f.size() != s) fail(ErrorCode::ConfigError, "f: need one value per state");
    return f;
  }
  fail(ErrorCode::ConfigError, "f must be default, identity, indicator:<k> or values:<list>");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"estimate", "plan", "bounds", "coverage", "compare",
                                              "verify"};
  return names;
}

CommandOutput run_estimate(const Config& config) {
  const auto model = resolve_model(config);
  const auto f = resolve_function(config, model);
  const std::string est_name = config.text("estimator", "reg-seq");
  const auto kind = parse_estimator(est_name);
  if (!kind) {
    fail(ErrorCode::ConfigError, "estimator must be fixed, reg, unbiased, reg-seq or perfect");
  }
  const std::uint64_t seed = config.count("seed", kDefaultSeed);
  const std::uint64_t reps = config.count("reps", 100);
  if (reps == 0) fail(ErrorCode::ConfigError, "reps must be positive");
  const SimulationOptions opts = simulation_options(config);
  const std::optional<double> theta = config.maybe_real("theta");

  std::uint64_t n = 0;
  std::uint64_t r = 0;
  std::uint64_t t = 0;
  double m = 0.0;
  StreamRole role = StreamRole::Tours;
  switch (*kind) {
    case EstimatorKind::Fixed:
      n = config.count("n", 1000);
      t = config.count("t", 0);
      role = StreamRole::Trajectory;
      break;
    case EstimatorKind::RegSeq:
      n = config.count("n", 1000);
      break;
    case EstimatorKind::Unbiased:
      if (config.has("m")) {
        m = config.real("m", 0.0);
      } else if (model.model.is_doeblin()) {
        m = 1.0 / model.model.small_set().beta();
      } else {
        fail(ErrorCode::ConfigError,
             "the unbiased estimator divides by the exact mean tour length m, which is only "
             "1/beta when the small set is the whole space; pass m explicitly");
      }
      if (!(m > 0.0)) fail(ErrorCode::NonpositiveM, "m must be positive");
      r = config.count("r", 1000);
      break;
    case EstimatorKind::Reg:
      r = config.count("r", 1000);
      break;
    case EstimatorKind::Perfect:
      if (!model.model.is_doeblin()) {
        fail(ErrorCode::NotDoeblin, "perfect sampling needs a small set equal to the whole space");
      }
      r = config.count("r", 1000);
      role = StreamRole::Perfect;
      break;
  }
  if ((*kind == EstimatorKind::Fixed || *kind == EstimatorKind::RegSeq) && n == 0) {
    fail(ErrorCode::ConfigError, "n must be positive");
  }
  if (r == 0 && *kind != EstimatorKind::Fixed && *kind != EstimatorKind::RegSeq) {
    fail(ErrorCode::ConfigError, "r must be positive");
  }

  std::vector<EstimateReport> reports(reps);
  std::vector<std::uint64_t> keys(reps);
  const std::vector<double> initial(model.model.small_set().nu().data(),
                                    model.model.small_set().nu().data() + model.model.states());
  parallel_for(reps, jobs_of(config), [&](std::uint64_t j) {
    keys[j] = stream_key(seed, j, role);
    RandomStream rng(keys[j]);
    switch (*kind) {
      case EstimatorKind::Fixed: {
        const auto traj = simulate_trajectory(model.model.kernel(), initial, t + n, rng);
        reports[j] = estimate_fixed(traj, f, t, n);
        break;
      }
      case EstimatorKind::Reg:
        reports[j] = estimate_reg(simulate_tours(model.model, f, r, rng, opts));
        break;
      case EstimatorKind::Unbiased:
        reports[j] = estimate_unbiased(simulate_tours(model.model, f, r, rng, opts), m);
        break;
      case EstimatorKind::RegSeq:
        reports[j] = estimate_reg_seq(simulate_until(model.model, f, n, rng, opts).tours, n);
        break;
      case EstimatorKind::Perfect:
        reports[j] = estimate_perfect(perfect_samples(model.model, r, rng, opts), f);
        break;
    }
  });

  std::string body = "replicate,estimator,value,tours,steps,seed\n";
  double sum = 0.0;
  double sq = 0.0;
  std::uint64_t tours = 0;
  std::uint64_t steps = 0;
  for (std::uint64_t j = 0; j < reps; ++j) {
    const auto& rep = reports[j];
    body += csv_row({u64(j), est_name, format_number(rep.value), u64(rep.tours_used),
                     u64(rep.samples_used), u64(keys[j])});
    sum += rep.value;
    if (theta) sq += (rep.value - *theta) * (rep.value - *theta);
    tours += rep.tours_used;
    steps += rep.samples_used;
  }
  const double count = static_cast<double>(reps);
  body += csv_row({"mean", est_name, format_number(sum / count), u64(tours), u64(steps), u64(seed)});
  if (theta) {
    body += csv_row({"mse", est_name, format_number(sq / count), u64(tours), u64(steps), u64(seed)});
  }
  std::string out = header("estimate", config);
  for (const auto& w : model.warnings) out += "# warning: " + w + "\n";
  return {out + body, 0};
}

CommandOutput run_plan(const Config& config) {
  std::optional<zoo::ZooModel> model;
  StateFunction f;
  if (!config.has("sigma-as") || config.has("model")) {
    model = resolve_model(config);
    f = resolve_function(config, *model);
  }
  const PlanInputs in = plan_inputs(config, model ? &*model : nullptr, f);
  const Plan plan = plan_from(config, in);
  const double alpha = plan.target_alpha;
  const double eps = plan.target_eps;

  std::vector<std::pair<std::string, std::string>> kv{
      {"inputs", in.source},
      {"sigma_as_bound", format_number(in.sigma_as)},
      {"C0_bound", format_number(in.C0)},
      {"n", u64(plan.n)},
      {"l", u64(plan.l)},
      {"a_star", format_number(plan.a_star)},
      {"c1", format_number(median_c1(plan.a_star))},
      {"c2", format_number(median_c2(plan.a_star))},
      {"chernoff_failure", format_number(chernoff_failure(plan.a_star, plan.l))},
      {"expected_cost", format_number(plan.expected_cost)},
      {"asymptotic_cost", format_number(plan.asymptotic_cost)},
      {"l_asymptotic", format_number(plan.l_asymptotic)},
      {"clt_n", format_number(clt_sample_size(in.sigma_as, eps, alpha))},
  };
  if (model && model->model.is_doeblin()) {
    const double beta = model->model.small_set().beta();
    const double var = oracle::stationary_variance(model->model.kernel(), f);
    const double f_sup = config.real("f-sup", sup_abs(f));
    kv.emplace_back("klm_n", u64(klm_sample_size(f_sup, beta, eps, alpha)));
    const auto perfect_r =
        static_cast<std::uint64_t>(std::ceil(median_c1(plan.a_star) * var / (eps * eps)));
    kv.emplace_back("perfect_r", u64(perfect_r));
    kv.emplace_back("perfect_cost",
                    format_number(static_cast<double>(plan.l) * static_cast<double>(perfect_r) / beta));
  }
  std::string out = header("plan", config);
  if (model) {
    for (const auto& w : model->warnings) out += "# warning: " + w + "\n";
  }
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return {out, 0};
}

CommandOutput run_bounds(const Config& config) {
  const auto model = resolve_model(config);
  const auto f = resolve_function(config, model);
  const double eps = config.real("eps", 0.1);
  const double alpha = config.real("alpha", 0.05);
  const std::uint64_t r = config.count("r", 1000);
  const std::uint64_t n = config.count("n", 1000);
  const auto t = oracle::tour_moments_exact(model.model, f);
  const double beta = model.model.small_set().beta();

  std::vector<BoundReport> rows;
  const auto exact = [&](const char* name, double v) {
    rows.push_back(make_report(name, v, false, "exact tour moments", {}));
  };
  exact("theta", t.theta);
  exact("m", t.m);
  exact("sigma_tau_sq", t.sigma_tau_sq);
  exact("sigma_as_sq", t.sigma_as_sq);
  exact("sigma_unb_sq", t.sigma_unb_sq);
  exact("rho_f1", t.rho_f1);
  exact("C0", t.C0);

  const double delta = config.has("delta")
                           ? config.real("delta", 0.5)
                           : optimal_delta(t.sigma_as_sq, t.sigma_tau_sq, eps, t.m);
  rows.push_back(make_report("optimal_delta", optimal_delta(t.sigma_as_sq, t.sigma_tau_sq, eps, t.m),
                             false, "minimizer of the ratio tail bound",
                             {{"eps", eps}, {"m", t.m}}));
  const double tail =
      config.has("delta") ? reg_tail_bound(r, t.m, t.sigma_as_sq, t.sigma_tau_sq, eps, delta)
                          : reg_tail_bound_optimal(r, t.m, t.sigma_as_sq, t.sigma_tau_sq, eps);
  rows.push_back(make_report("reg_tail", tail, true, "ratio estimator Chebyshev split",
                             {{"r", double(r)}, {"eps", eps}, {"delta", delta}}));
  const auto ub = unbiased_bounds(r, t.m, t.sigma_unb_sq, eps);
  rows.push_back(make_report("unbiased_mse", ub.mse, false, "unbiased estimator variance",
                             {{"r", double(r)}}));
  rows.push_back(make_report("unbiased_tail", ub.tail, true, "unbiased estimator Chebyshev",
                             {{"r", double(r)}, {"eps", eps}}));
  const auto rs = regseq_bounds(n, t.sigma_as_sq, t.C0, eps);
  rows.push_back(make_report("regseq_mse", rs.mse, false, "sequential ratio estimator MSE",
                             {{"n", double(n)}}));
  rows.push_back(make_report("regseq_tail", rs.tail, true, "sequential ratio estimator Chebyshev",
                             {{"n", double(n)}, {"eps", eps}}));
  rows.push_back(make_report("regseq_expected_T", rs.expected_T, false, "expected total length",
                             {{"n", double(n)}}));
  rows.push_back(make_report("m_lower_bound", m_lower_bound(beta), false, "m >= 1/beta",
                             {{"beta", beta}}));
  rows.push_back(make_report("clt_n", clt_sample_size(t.sigma_as_sq, eps, alpha), false,
                             "normal approximation sample size", {{"eps", eps}, {"alpha", alpha}}));
  if (model.model.is_doeblin()) {
    const double var = oracle::stationary_variance(model.model.kernel(), f);
    const auto dv = doeblin_variance_bound(var, beta, model.reversible);
    rows.push_back(make_report("doeblin_sigma_as", dv.value, false,
                               model.reversible ? "reversible Doeblin variance bound"
                                                : "Doeblin variance bound",
                               {{"sigma_sq", var}, {"beta", beta}}));
    rows.push_back(make_report("doeblin_sigma_as_loose", dv.loose, false,
                               model.reversible ? "2 sigma^2 / beta" : "4 sigma^2 / beta",
                               {{"sigma_sq", var}, {"beta", beta}}));
    const double f_sup = config.real("f-sup", sup_abs(f));
    if (n >= 2) {
      rows.push_back(make_report("klm_tail", klm_exponential_tail(n, f_sup, beta, eps), true,
                                 "exponential inequality, uniformly ergodic",
                                 {{"n", double(n)}, {"f_sup", f_sup}, {"eps", eps}}));
    }
    rows.push_back(make_report("klm_n", double(klm_sample_size(f_sup, beta, eps, alpha)), false,
                               "exponential inequality sample size",
                               {{"f_sup", f_sup}, {"eps", eps}, {"alpha", alpha}}));
  }
  if (model.V) {
    const auto d = oracle::drift_inputs_exact(model.model, *model.V);
    const double f_norm = oracle::v_half_norm(model.model.kernel(), f, *model.V);
    const auto db = drift_bounds({d.lambda_hat, d.K_hat, beta, d.pi_V, d.pi_sqrtV, f_norm});
    const std::vector<std::pair<std::string, double>> inputs{
        {"lambda", d.lambda_hat}, {"K", d.K_hat},          {"beta", beta},
        {"pi_V", d.pi_V},         {"pi_sqrtV", d.pi_sqrtV}, {"f_norm", f_norm}};
    rows.push_back(make_report("drift_sigma_as", db.sigma_as_bound, false, "drift condition bound", inputs));
    rows.push_back(make_report("drift_C0", db.C0_bound, false, "drift condition bound", inputs));
    rows.push_back(make_report("drift_sigma_tau", db.sigma_tau_bound, false, "C0 bound minus 1", inputs));
  }

  std::string out = header("bounds", config);
  for (const auto& w : model.warnings) out += "# warning: " + w + "\n";
  out += "name,value,capped,source,inputs\n";
  for (const auto& b : rows) {
    std::string inputs;
    for (std::size_t i = 0; i < b.inputs.size(); ++i) {
      inputs += (i ? ";" : "") + b.inputs[i].first + "=" + format_number(b.inputs[i].second);
    }
    out += csv_row({b.name, format_number(b.value), format_number(b.capped), b.source, inputs});
  }
  return {out, 0};
}

CommandOutput run_coverage(const Config& config) {
  const auto model = resolve_model(config);
  const auto f = resolve_function(config, model);
  const PlanInputs in = plan_inputs(config, &model, f);
  const Plan plan = plan_from(config, in);
  const std::uint64_t seed = config.count("seed", kDefaultSeed);
  const std::uint64_t metas = config.count("metas", 200);
  if (metas == 0) fail(ErrorCode::ConfigError, "metas must be positive");
  const double theta = config.real("theta", oracle::stationary_mean(model.model.kernel(), f));
  const bool details = config.count("details", 0) != 0;
  const SimulationOptions opts = simulation_options(config);

  std::vector<MedianResult> results(metas);
  parallel_for(metas, jobs_of(config), [&](std::uint64_t k) {
    results[k] = run_median(plan, model.model, f, stream_key(seed, k, StreamRole::Median), opts, 1);
  });

  std::uint64_t covered = 0;
  double steps = 0.0;
  std::string table = "meta,median,abs_error,covered,steps\n";
  for (std::uint64_t k = 0; k < metas; ++k) {
    const double err = std::abs(results[k].median - theta);
    const bool ok = err <= plan.target_eps;
    covered += ok;
    steps += static_cast<double>(results[k].total_steps);
    table += csv_row({u64(k), format_number(results[k].median), format_number(err), ok ? "1" : "0",
                      u64(results[k].total_steps)});
  }
  const double p = static_cast<double>(covered) / static_cast<double>(metas);
  const double se = std::sqrt((1 - plan.target_alpha) * plan.target_alpha / static_cast<double>(metas));
  std::string out = header("coverage", config);
  for (const auto& w : model.warnings) out += "# warning: " + w + "\n";
  out += "inputs,eps,alpha,n,l,metas,covered,coverage,target,binomial_se,guarantee,mean_steps,planned_cost\n";
  out += csv_row({in.source, format_number(plan.target_eps), format_number(plan.target_alpha),
                  u64(plan.n), u64(plan.l), u64(metas), u64(covered), format_number(p),
                  format_number(1 - plan.target_alpha), format_number(se),
                  format_number(1 - chernoff_failure(plan.a_star, plan.l)),
                  format_number(steps / static_cast<double>(metas)),
                  format_number(plan.expected_cost)});
  if (details) out += table;
  return {out, 0};
}

CommandOutput run_compare(const Config& config) {
  const auto betas = config.reals("betas", {0.01, 0.02, 0.03, 0.04, 0.05});
  const double sigma_sq = config.real("sigma-sq", 0.25);
  const double f_sup = config.real("f-sup", 1.0);
  const double eps = config.real("eps", 0.01);
  const double alpha = config.real("alpha", 0.01);
  const double a = config.real("a-star", kAStar);
  std::string out = header("compare", config);
  out += "beta,general_n,general_l,general_cost,reversible_n,reversible_l,reversible_cost,"
         "perfect_r,perfect_cost,klm_n,ratio_general,ratio_reversible,ratio_general_per_40beta,"
         "ratio_reversible_per_20beta\n";
  for (double beta : betas) {
    const auto c = compare_costs(beta, sigma_sq, f_sup, eps, alpha, a);
    out += csv_row({format_number(beta), u64(c.general.n), u64(c.general.l),
                    format_number(c.general.expected_cost), u64(c.reversible.n),
                    u64(c.reversible.l), format_number(c.reversible.expected_cost),
                    u64(c.perfect_r), format_number(c.perfect_cost), u64(c.klm_n),
                    format_number(c.ratio_general), format_number(c.ratio_reversible),
                    format_number(c.ratio_general / (40 * beta)),
                    format_number(c.ratio_reversible / (20 * beta))});
  }
  return {out, 0};
}

CommandOutput run_verify(const Config& config) {
  VerifyOptions opts;
  const std::string tier = config.text("tier", "quick");
  if (tier == "quick") {
    opts.tier = VerifyTier::Quick;
  } else if (tier == "full") {
    opts.tier = VerifyTier::Full;
  } else {
    fail(ErrorCode::ConfigError, "tier must be quick or full");
  }
  opts.seed = config.count("seed", kDefaultSeed);
  opts.fault = config.real("fault", 0.0);
  if (opts.fault < 0.0 || opts.fault >= 1.0) fail(ErrorCode::ConfigError, "fault must lie in [0, 1)");
  opts.jobs = jobs_of(config);
  const auto checks = run_checks(opts);
  std::string out = header("verify", config);
  out += "check,anchor,gating,result,detail\n";
  int status = 0;
  for (const auto& c : checks) {
    out += csv_row({c.name, c.anchor, c.gating ? "yes" : "no", c.passed ? "pass" : "FAIL", c.detail});
    if (c.gating && !c.passed) status = 1;
  }
  return {out, status};
}

CommandOutput run_command(std::string_view command, const Config& config) {
  if (command == "estimate") return run_estimate(config);
  if (command == "plan") return run_plan(config);
  if (command == "bounds") return run_bounds(config);
  if (command == "coverage") return run_coverage(config);
  if (command == "compare") return run_compare(config);
  if (command == "verify") return run_verify(config);
  fail(ErrorCode::ConfigError, "unknown command '" + std::string(command) + "'");
}

}  // namespace regen::cmd
