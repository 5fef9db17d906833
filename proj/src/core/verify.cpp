#include "regen/verify.hpp"

#include <cmath>
#include <sstream>

#include "regen/bounds.hpp"
#include "regen/estimators.hpp"
#include "regen/median_trick.hpp"
#include "regen/oracle.hpp"
#include "regen/parallel.hpp"
#include "regen/perfect.hpp"
#include "regen/stats.hpp"
#include "regen/zoo.hpp"

namespace regen {

namespace {

struct Scale {
  std::uint64_t ks_tours;
  std::uint64_t reps;
  std::uint64_t metas;
  std::uint64_t perfect_draws;
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

class Checker {
 public:
  explicit Checker(const VerifyOptions& options) : options_(options) {}

  RandomStream stream(std::uint64_t check, std::uint64_t j) const {
    return RandomStream(stream_key(stream_key(options_.seed, check, StreamRole::Verify), j,
                                   StreamRole::Tours));
  }

  void add(std::string name, std::string anchor, bool passed, std::string detail, bool gating = true) {
    results_.push_back({std::move(name), std::move(anchor), passed, gating, std::move(detail)});
  }

  std::vector<CheckResult> take() { return std::move(results_); }
  const VerifyOptions& options() const { return options_; }

 private:
  VerifyOptions options_;
  std::vector<CheckResult> results_;
};

std::string label(const zoo::ZooModel& z) {
  if (z.name != "two-state") return z.name;
  return z.name + "(beta=" + num(z.model.small_set().beta()) + ")";
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void exact_checks(Checker& c, const std::vector<zoo::ZooModel>& models) {
  double worst = 0.0;
  for (double beta : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto z = zoo::two_state_example(beta);
    const auto t = oracle::tour_moments_exact(z.model, z.f);
    const double sas = oracle::asymptotic_variance_exact(z.model.kernel(), z.f);
    worst = std::max({worst, std::abs(sas - (2 - beta) / beta * 0.25),
                      std::abs(t.sigma_as_sq - (2 - beta) / beta * 0.25),
                      std::abs(t.sigma_unb_sq - (3 - 2 * beta) / beta * 0.25)});
  }
  c.add("closed-forms", "two-state sigma_as^2 = (2-b)/b s^2 and sigma_unb^2 = (3-2b)/b s^2",
        worst <= 1e-12, "max error " + num(worst));

  double dual = 0.0;
  double decomposition = 0.0;
  double kac = 0.0;
  double square = 0.0;
  for (const auto& z : models) {
    const auto t = oracle::tour_moments_exact(z.model, z.f);
    dual = std::max(dual, rel_gap(t.sigma_as_sq, oracle::asymptotic_variance_exact(z.model.kernel(), z.f)));
    decomposition = std::max(
        decomposition,
        rel_gap(t.sigma_unb_sq,
                t.sigma_as_sq + t.theta * t.theta * t.sigma_tau_sq + 2 * t.theta * t.rho_f1));
    const Vector pi = oracle::stationary(z.model.kernel());
    double pi_j = 0.0;
    for (std::size_t x = 0; x < z.model.states(); ++x) {
      if (z.model.small_set().contains(x)) pi_j += pi[static_cast<Eigen::Index>(x)];
    }
    kac = std::max(kac, rel_gap(t.m, 1.0 / (z.model.small_set().beta() * pi_j)));
    std::vector<double> g;
    for (double v : z.f) g.push_back(std::abs(v - t.theta));
    square = std::max(square, rel_gap(oracle::square_block_series(z.model, g),
                                      oracle::square_block_direct(z.model, g)));
  }
  c.add("dual-route", "tour-moment sigma_as^2 equals the Poisson-equation value", dual <= 1e-9,
        "max relative gap " + num(dual));
  c.add("unb-decomposition", "sigma_unb^2 = sigma_as^2 + theta^2 sigma_tau^2 + 2 theta rho",
        decomposition <= 1e-9, "max relative gap " + num(decomposition));
  c.add("kac-mean", "m = 1/(beta pi(J))", kac <= 1e-10, "max relative gap " + num(kac));
  c.add("square-block", "E Xi(|fbar|)^2 / m by series equals the direct system", square <= 1e-8,
        "max relative gap " + num(square));

  bool dominated = true;
  double sharp = 0.0;
  for (const auto& z : models) {
    if (!z.model.is_doeblin()) continue;
    const double var = oracle::stationary_variance(z.model.kernel(), z.f);
    const double sas = oracle::asymptotic_variance_exact(z.model.kernel(), z.f);
    const auto b = doeblin_variance_bound(var, z.model.small_set().beta(), z.reversible);
    dominated = dominated && b.value >= sas * (1 - 1e-12) && b.loose >= b.value;
    if (z.name == "two-state") sharp = std::max(sharp, std::abs(b.value - sas));
  }
  c.add("doeblin-dominance", "Doeblin variance bound >= exact sigma_as^2 and sharp on two-state",
        dominated && sharp <= 1e-9, "two-state gap " + num(sharp));

  for (const auto& z : models) {
    if (!z.V) continue;
    const auto d = oracle::drift_inputs_exact(z.model, *z.V);
    const auto t = oracle::tour_moments_exact(z.model, z.f);
    const auto b = drift_bounds({d.lambda_hat, d.K_hat, z.model.small_set().beta(), d.pi_V,
                                 d.pi_sqrtV, oracle::v_half_norm(z.model.kernel(), z.f, *z.V)});
    c.add("drift-sigma-as", "drift bound on sigma_as^2 >= exact", b.sigma_as_bound >= t.sigma_as_sq,
          "bound " + num(b.sigma_as_bound) + " exact " + num(t.sigma_as_sq));
    c.add("drift-c0", "drift bound on C0 >= exact", b.C0_bound >= t.C0,
          "bound " + num(b.C0_bound) + " exact " + num(t.C0), false);
  }

  bool beats = true;
  for (double m : {1.0, 2.0, 5.0}) {
    const double star = reg_tail_bound_optimal(1, m, 0.75, 1.0, 0.1);
    for (int i = 1; i <= 999; ++i) beats = beats && star <= reg_tail_bound(1, m, 0.75, 1.0, 0.1, i / 1000.0);
  }
  c.add("delta-grid", "optimal delta beats a 999-point grid", beats, "m in {1; 2; 5}");
}

void simulation_checks(Checker& c, const std::vector<zoo::ZooModel>& models, const Scale& scale) {
  const unsigned jobs = c.options().jobs;
  {
    const auto z = zoo::two_state_example(0.5);
    RandomStream rng = c.stream(1, 0);
    std::vector<double> tau;
    for (const auto& t : simulate_tours(z.model, z.f, scale.ks_tours, rng)) {
      tau.push_back(static_cast<double>(t.tau));
    }
    const auto s = stats::mean_se(tau);
    // Var of the sample variance of Geometric(1/2): (mu4 - sigma^4) / N with mu4 = 38.
    const double var_se = std::sqrt(34.0 / static_cast<double>(tau.size()));
    c.add("geometric-tours", "two-state tour length mean 1/b and variance (1-b)/b^2",
          std::abs(s.mean - 2) <= 3 * s.se && std::abs(s.variance - 2) <= 3 * var_se,
          "mean " + num(s.mean) + " var " + num(s.variance));
  }

  std::uint64_t index = 0;
  for (const auto& z : models) {
    const SplitModel model = c.options().fault > 0 ? z.model.with_residual_fault(c.options().fault)
                                                   : z.model;
    RandomStream a = c.stream(2, 2 * index);
    RandomStream b = c.stream(2, 2 * index + 1);
    ++index;
    const auto ex = simulate_tours(model, z.f, scale.ks_tours, a, {SimulationMode::ExplicitSplit});
    const auto my = simulate_tours(model, z.f, scale.ks_tours, b, {SimulationMode::MyklandRetrospective});
    std::vector<double> ta, tb, xa, xb;
    for (const auto& t : ex) {
      ta.push_back(static_cast<double>(t.tau));
      xa.push_back(t.xi_f);
    }
    for (const auto& t : my) {
      tb.push_back(static_cast<double>(t.tau));
      xb.push_back(t.xi_f);
    }
    const double p_tau = stats::ks_two_sample(ta, tb).p_value;
    const double p_xi = stats::ks_two_sample(xa, xb).p_value;
    c.add("mode-equivalence:" + label(z), "explicit split and retrospective tours agree (KS 0.001)",
          p_tau > 0.001 && p_xi > 0.001, "p(tau) " + num(p_tau) + " p(xi) " + num(p_xi));
  }

  index = 0;
  for (const auto& z : models) {
    if (!z.model.is_doeblin()) continue;
    RandomStream rng = c.stream(3, index++);
    const auto draws = perfect_samples(z.model, scale.perfect_draws, rng);
    const Vector pi = oracle::stationary(z.model.kernel());
    std::vector<std::uint64_t> counts(z.model.states(), 0);
    for (auto s : draws.states) ++counts[s];
    const double p = stats::chi_square_gof(counts, std::span<const double>(pi.data(), pi.size())).p_value;
    c.add("perfect-chi-square:" + label(z), "pre-regeneration states are distributed as pi",
          p > 0.001, "p " + num(p));
  }

  const auto z = zoo::two_state_example(0.5);
  const auto moments = oracle::tour_moments_exact(z.model, z.f);
  {
    const std::uint64_t n = 1000;
    std::vector<double> sq(scale.reps);
    std::vector<double> total(scale.reps);
    parallel_for(scale.reps, jobs, [&](std::uint64_t j) {
      RandomStream rng = c.stream(4, j);
      const auto out = simulate_until(z.model, z.f, n, rng);
      const double e = estimate_reg_seq(out.tours, n).value - moments.theta;
      sq[j] = e * e;
      total[j] = static_cast<double>(out.total_steps);
    });
    const auto b = regseq_bounds(n, moments.sigma_as_sq, moments.C0, 0.1);
    const auto mse = stats::mean_se(sq);
    const auto t = stats::mean_se(total);
    c.add("regseq-mse", "E T <= n + C0 and MSE <= (sigma_as^2/n)(1 + C0/n)",
          t.mean <= b.expected_T + 3 * t.se && mse.mean <= b.mse + 3 * mse.se,
          "E T " + num(t.mean) + " MSE " + num(mse.mean) + " bound " + num(b.mse));
  }
  {
    const std::uint64_t r = 1000;
    std::vector<double> values(scale.reps);
    parallel_for(scale.reps, jobs, [&](std::uint64_t j) {
      RandomStream rng = c.stream(5, j);
      values[j] = estimate_reg(simulate_tours(z.model, z.f, r, rng)).value;
    });
    bool ok = true;
    std::string detail;
    for (double eps : {0.05, 0.1, 0.2}) {
      double hits = 0;
      for (double v : values) hits += std::abs(v - moments.theta) > eps;
      const double freq = hits / static_cast<double>(values.size());
      const double bound =
          reg_tail_bound_optimal(r, moments.m, moments.sigma_as_sq, moments.sigma_tau_sq, eps);
      const double p = std::min(bound, 1.0);
      ok = ok && freq <= bound + 3 * std::sqrt(p * (1 - p) / static_cast<double>(values.size()));
      detail += (detail.empty() ? "" : "; ") + ("eps " + num(eps) + " freq " + num(freq) + " bound " + num(bound));
    }
    c.add("reg-tail", "ratio estimator tail frequency <= bound at optimal delta", ok, detail);
  }
  {
    std::vector<double> values(scale.reps);
    parallel_for(scale.reps, jobs, [&](std::uint64_t j) {
      RandomStream rng = c.stream(6, j);
      values[j] = estimate_unbiased(simulate_tours(z.model, z.f, 1000, rng), moments.m).value;
    });
    const auto s = stats::mean_se(values);
    c.add("unbiased-mean", "unbiased estimator grand mean within 3 SE of theta",
          std::abs(s.mean - moments.theta) <= 3 * s.se, "mean " + num(s.mean));
  }
  {
    const Plan plan = make_plan(0.75, 3.0, 0.1, 0.05);
    std::vector<double> errors(scale.metas);
    parallel_for(scale.metas, jobs, [&](std::uint64_t k) {
      const auto key = stream_key(stream_key(c.options().seed, 7, StreamRole::Verify), k, StreamRole::Median);
      errors[k] = std::abs(run_median(plan, z.model, z.f, key).median - moments.theta);
    });
    double covered = 0;
    for (double e : errors) covered += e <= 0.1;
    const double metas = static_cast<double>(scale.metas);
    const double freq = covered / metas;
    c.add("median-coverage", "median of l reg-seq runs covers theta with probability >= 1 - alpha",
          freq >= 0.95 - 3 * std::sqrt(0.95 * 0.05 / metas),
          "coverage " + num(freq) + " over " + std::to_string(scale.metas));
  }
}

}  // namespace

std::vector<CheckResult> run_checks(const VerifyOptions& options) {
  const Scale scale = options.tier == VerifyTier::Full ? Scale{100000, 10000, 200, 100000}
                                                       : Scale{20000, 1000, 60, 20000};
  Checker c(options);
  const auto models = zoo::all_models();
  exact_checks(c, models);
  simulation_checks(c, models, scale);
  return c.take();
}

}  // namespace regen
