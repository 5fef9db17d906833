#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "regen/random.hpp"

namespace regen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// f: X -> R on a finite state space, stored by state index.
using StateFunction = std::vector<double>;

inline constexpr double kStochasticTolerance = 1e-12;
inline constexpr double kResidualTolerance = 1e-10;
inline constexpr std::uint64_t kDefaultTourCap = 1'000'000'000ULL;
// Tours longer than this switch block-sum accumulation to compensated summation.
inline constexpr std::uint64_t kCompensatedSumThreshold = 1'000'000ULL;

/// Dense row-stochastic transition matrix over states 0..S-1.
class FiniteKernel {
 public:
  explicit FiniteKernel(Matrix p, std::vector<std::string> labels = {});

  std::size_t states() const noexcept { return static_cast<std::size_t>(p_.rows()); }
  const Matrix& matrix() const noexcept { return p_; }
  double operator()(std::size_t x, std::size_t y) const { return p_(x, y); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  Matrix p_;
  std::vector<std::string> labels_;
};

/// Minorization triple (J, beta, nu): P(x, .) >= beta nu(.) for x in J.
/// Construction checks the triple itself; the inequality against a kernel is checked by
/// build_split_model.
class SmallSet {
 public:
  SmallSet(std::vector<bool> members, double beta, Vector nu);
  static SmallSet whole_space(std::size_t states, double beta, Vector nu);

  bool contains(std::size_t x) const { return members_[x]; }
  const std::vector<bool>& members() const noexcept { return members_; }
  double beta() const noexcept { return beta_; }
  const Vector& nu() const noexcept { return nu_; }
  std::size_t states() const noexcept { return members_.size(); }
  std::size_t count() const noexcept;
  bool is_whole_space() const noexcept { return count() == states(); }

 private:
  std::vector<bool> members_;
  double beta_;
  Vector nu_;
};

struct Step {
  std::size_t next;
  bool regenerated;
};

/// Kernel + small set + residual kernel Q, with samplers for P, Q and nu.
///
/// Q(x, .) = (P(x, .) - beta nu) / (1 - beta) for x in J, and P(x, .) otherwise.
/// When beta = 1 the Q rows of J are never sampled (regeneration from J is certain)
/// and are stored as zeros.
class SplitModel {
 public:
  SplitModel(FiniteKernel kernel, SmallSet small_set);

  const FiniteKernel& kernel() const noexcept { return kernel_; }
  const SmallSet& small_set() const noexcept { return small_set_; }
  const Matrix& residual() const noexcept { return q_; }
  bool residual_row_used(std::size_t x) const { return q_used_[x]; }
  std::size_t states() const noexcept { return kernel_.states(); }
  bool is_doeblin() const noexcept { return small_set_.is_whole_space(); }

  std::size_t draw_initial(RandomStream& rng) const { return nu_table_.sample(rng); }

  // Explicit split transition: Gamma ~ Bernoulli(beta I(x in J)), then nu or Q(x, .).
  Step step_explicit(std::size_t x, RandomStream& rng) const;
  // Retrospective transition: y ~ P(x, .), then Gamma ~ Bernoulli(regeneration_probability(x, y)).
  Step step_mykland(std::size_t x, RandomStream& rng) const;
  // I(x in J) beta nu(y) / P(x, y). Throws DensityRatioUndefined when P(x, y) = 0.
  double regeneration_probability(std::size_t x, std::size_t y) const;

  // Fault injection for self-checks: shifts `amount` of probability mass in every used Q row
  // from its largest entry to the next state. Breaks the reconstruction identity on purpose,
  // so explicit and retrospective simulation no longer agree.
  SplitModel with_residual_fault(double amount) const;

 private:
  void build_samplers();

  FiniteKernel kernel_;
  SmallSet small_set_;
  Matrix q_;
  std::vector<bool> q_used_;
  std::vector<AliasTable> p_rows_;
  std::vector<AliasTable> q_rows_;
  AliasTable nu_table_;
};

SplitModel build_split_model(FiniteKernel kernel, SmallSet small_set);

inline Step step_explicit(const SplitModel& model, std::size_t x, RandomStream& rng) {
  return model.step_explicit(x, rng);
}
inline Step step_mykland(const SplitModel& model, std::size_t x, RandomStream& rng) {
  return model.step_mykland(x, rng);
}

/// One excursion between regenerations: block sum of f, length, and the state at T_k - 1.
struct Tour {
  double xi_f = 0.0;
  std::uint64_t tau = 0;
  std::size_t last_state = 0;
};

enum class SimulationMode { ExplicitSplit, MyklandRetrospective };

const char* mode_name(SimulationMode mode) noexcept;

struct SimulationOptions {
  SimulationMode mode = SimulationMode::ExplicitSplit;
  std::uint64_t tour_cap = kDefaultTourCap;
};

/// Sequential tour generator for a split chain started at X_0 ~ nu (T_0 = 0).
class TourStream {
 public:
  TourStream(const SplitModel& model, std::span<const double> f, RandomStream& rng,
             SimulationOptions options = {});

  Tour next();
  std::uint64_t steps() const noexcept { return steps_; }

 private:
  const SplitModel& model_;
  std::span<const double> f_;
  RandomStream& rng_;
  SimulationOptions options_;
  std::size_t current_;
  std::uint64_t steps_ = 0;
};

std::vector<Tour> simulate_tours(const SplitModel& model, std::span<const double> f,
                                 std::uint64_t count, RandomStream& rng,
                                 SimulationOptions options = {});

struct StoppedTours {
  std::vector<Tour> tours;
  std::uint64_t tour_count = 0;   // R(n)
  std::uint64_t total_steps = 0;  // T_{R(n)}
};

// Tours up to and including the first whose end time exceeds n.
StoppedTours simulate_until(const SplitModel& model, std::span<const double> f, std::uint64_t n,
                            RandomStream& rng, SimulationOptions options = {});

/// Raw split-chain trajectory: states[i] = X_i and regenerated[i] = Gamma_i.
struct SplitPath {
  std::vector<std::size_t> states;
  std::vector<bool> regenerated;
};

SplitPath simulate_path(const SplitModel& model, std::uint64_t steps, RandomStream& rng,
                        SimulationMode mode = SimulationMode::ExplicitSplit);

// Cuts a path into its complete tours; a trailing unfinished tour is dropped.
std::vector<Tour> tours_from_path(const SplitPath& path, std::span<const double> f);

// Plain P-chain trajectory X_0..X_{length-1} with X_0 drawn from `initial`.
std::vector<std::size_t> simulate_trajectory(const FiniteKernel& kernel,
                                             std::span<const double> initial,
                                             std::uint64_t length, RandomStream& rng);

void check_function(const FiniteKernel& kernel, std::span<const double> f);

}  // namespace regen
