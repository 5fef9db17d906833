#include "regen/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regen/error.hpp"

namespace regen {

namespace {

// Plain summation up to kCompensatedSumThreshold terms, Neumaier summation afterwards.
class BlockSum {
 public:
  void add(double v) noexcept {
    if (count_++ < kCompensatedSumThreshold) {
      sum_ += v;
      return;
    }
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
  std::uint64_t count_ = 0;
};

std::vector<double> row_of(const Matrix& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

}  // namespace

FiniteKernel::FiniteKernel(Matrix p, std::vector<std::string> labels)
    : p_(std::move(p)), labels_(std::move(labels)) {
  if (p_.rows() < 1 || p_.rows() != p_.cols()) {
    fail(ErrorCode::InvalidStochasticMatrix, "transition matrix must be square with S >= 1");
  }
  if (!labels_.empty() && labels_.size() != states()) {
    fail(ErrorCode::InvalidStochasticMatrix, "label count does not match state count");
  }
  for (Eigen::Index x = 0; x < p_.rows(); ++x) {
    double sum = 0.0;
    for (Eigen::Index y = 0; y < p_.cols(); ++y) {
      const double v = p_(x, y);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream msg;
        msg << "entry P(" << x << "," << y << ") = " << v << " is not in [0, 1]";
        fail(ErrorCode::InvalidStochasticMatrix, msg.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row " << x << " sums to " << sum;
      fail(ErrorCode::InvalidStochasticMatrix, msg.str());
    }
  }
}

SmallSet::SmallSet(std::vector<bool> members, double beta, Vector nu)
    : members_(std::move(members)), beta_(beta), nu_(std::move(nu)) {
  if (members_.empty() || static_cast<Eigen::Index>(members_.size()) != nu_.size()) {
    fail(ErrorCode::InvalidSmallSet, "small set mask and nu must have the state-space length");
  }
  if (count() == 0) fail(ErrorCode::InvalidSmallSet, "small set J is empty");
  if (!(beta_ > 0.0 && beta_ <= 1.0)) {
    fail(ErrorCode::InvalidSmallSet, "beta must lie in (0, 1]");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < nu_.size(); ++i) {
    if (!std::isfinite(nu_[i]) || nu_[i] < 0.0) {
      fail(ErrorCode::InvalidSmallSet, "nu has a negative or non-finite entry");
    }
    sum += nu_[i];
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) {
    fail(ErrorCode::InvalidSmallSet, "nu does not sum to 1");
  }
}

SmallSet SmallSet::whole_space(std::size_t states, double beta, Vector nu) {
  return SmallSet(std::vector<bool>(states, true), beta, std::move(nu));
}

std::size_t SmallSet::count() const noexcept {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

SplitModel::SplitModel(FiniteKernel kernel, SmallSet small_set)
    : kernel_(std::move(kernel)), small_set_(std::move(small_set)) {
  const std::size_t s = kernel_.states();
  if (small_set_.states() != s) {
    fail(ErrorCode::InvalidSmallSet, "small set and kernel disagree on the state count");
  }
  const Matrix& p = kernel_.matrix();
  const double beta = small_set_.beta();
  const Vector& nu = small_set_.nu();

  double worst = 0.0;
  std::size_t worst_x = 0;
  std::size_t worst_y = 0;
  for (std::size_t x = 0; x < s; ++x) {
    if (!small_set_.contains(x)) continue;
    for (std::size_t y = 0; y < s; ++y) {
      const double deficit = beta * nu[y] - p(x, y);
      if (deficit > worst) {
        worst = deficit;
        worst_x = x;
        worst_y = y;
      }
    }
  }
  if (worst > kStochasticTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "minorization P(x,y) >= beta nu(y) fails at (" << worst_x << "," << worst_y
        << ") by " << worst;
    fail(ErrorCode::MinorizationViolated, msg.str());
  }

  q_ = Matrix::Zero(s, s);
  q_used_.assign(s, true);
  for (std::size_t x = 0; x < s; ++x) {
    if (!small_set_.contains(x)) {
      q_.row(x) = p.row(x);
      continue;
    }
    if (beta == 1.0) {
      q_used_[x] = false;
      continue;
    }
    double sum = 0.0;
    for (std::size_t y = 0; y < s; ++y) {
      q_(x, y) = std::max(0.0, (p(x, y) - beta * nu[y]) / (1.0 - beta));
      sum += q_(x, y);
    }
    if (!(sum > 0.0)) fail(ErrorCode::MinorizationViolated, "residual row has no mass");
    q_.row(x) /= sum;
    for (std::size_t y = 0; y < s; ++y) {
      const double rebuilt = beta * nu[y] + (1.0 - beta) * q_(x, y);
      if (std::abs(rebuilt - p(x, y)) > kResidualTolerance) {
        std::ostringstream msg;
        msg << "residual kernel does not reconstruct P at (" << x << "," << y << ")";
        fail(ErrorCode::MinorizationViolated, msg.str());
      }
    }
  }
  build_samplers();
}

void SplitModel::build_samplers() {
  const std::size_t s = kernel_.states();
  p_rows_.clear();
  q_rows_.clear();
  p_rows_.reserve(s);
  q_rows_.resize(s);
  for (std::size_t x = 0; x < s; ++x) {
    p_rows_.emplace_back(row_of(kernel_.matrix(), static_cast<Eigen::Index>(x)));
    if (q_used_[x]) q_rows_[x] = AliasTable(row_of(q_, static_cast<Eigen::Index>(x)));
  }
  const Vector& nu = small_set_.nu();
  nu_table_ = AliasTable(std::span<const double>(nu.data(), static_cast<std::size_t>(nu.size())));
}

Step SplitModel::step_explicit(std::size_t x, RandomStream& rng) const {
  if (small_set_.contains(x) && rng.bernoulli(small_set_.beta())) {
    return {nu_table_.sample(rng), true};
  }
  return {q_rows_[x].sample(rng), false};
}

Step SplitModel::step_mykland(std::size_t x, RandomStream& rng) const {
  const std::size_t y = p_rows_[x].sample(rng);
  if (!small_set_.contains(x)) return {y, false};
  return {y, rng.bernoulli(regeneration_probability(x, y))};
}

double SplitModel::regeneration_probability(std::size_t x, std::size_t y) const {
  if (!small_set_.contains(x)) return 0.0;
  const double pxy = kernel_(x, y);
  if (!(pxy > 0.0)) {
    fail(ErrorCode::DensityRatioUndefined, "regeneration ratio at a zero-probability transition");
  }
  return std::min(1.0, small_set_.beta() * small_set_.nu()[y] / pxy);
}

SplitModel SplitModel::with_residual_fault(double amount) const {
  SplitModel faulty = *this;
  const Eigen::Index s = faulty.q_.cols();
  for (Eigen::Index x = 0; x < faulty.q_.rows(); ++x) {
    if (!faulty.q_used_[x]) continue;
    Eigen::Index top = 0;
    faulty.q_.row(x).maxCoeff(&top);
    const double moved = std::min(amount, faulty.q_(x, top));
    faulty.q_(x, top) -= moved;
    faulty.q_(x, (top + 1) % s) += moved;
  }
  faulty.build_samplers();
  return faulty;
}

SplitModel build_split_model(FiniteKernel kernel, SmallSet small_set) {
  return SplitModel(std::move(kernel), std::move(small_set));
}

const char* mode_name(SimulationMode mode) noexcept {
  return mode == SimulationMode::ExplicitSplit ? "explicit" : "mykland";
}

void check_function(const FiniteKernel& kernel, std::span<const double> f) {
  if (f.size() != kernel.states()) {
    fail(ErrorCode::DomainError, "function length does not match the state count");
  }
  for (double v : f) {
    if (!std::isfinite(v)) fail(ErrorCode::DomainError, "function has a non-finite value");
  }
}

TourStream::TourStream(const SplitModel& model, std::span<const double> f, RandomStream& rng,
                       SimulationOptions options)
    : model_(model), f_(f), rng_(rng), options_(options) {
  check_function(model.kernel(), f);
  current_ = model_.draw_initial(rng_);
}

Tour TourStream::next() {
  BlockSum sum;
  std::uint64_t tau = 0;
  const bool explicit_mode = options_.mode == SimulationMode::ExplicitSplit;
  for (;;) {
    const std::size_t x = current_;
    sum.add(f_[x]);
    ++tau;
    ++steps_;
    if (tau > options_.tour_cap) {
      fail(ErrorCode::TourLengthOverflow,
           "tour exceeded " + std::to_string(options_.tour_cap) +
               " steps; check the minorization (beta pi(J) may be ~0)");
    }
    const Step step = explicit_mode ? model_.step_explicit(x, rng_) : model_.step_mykland(x, rng_);
    current_ = step.next;
    if (step.regenerated) return {sum.value(), tau, x};
  }
}

std::vector<Tour> simulate_tours(const SplitModel& model, std::span<const double> f,
                                 std::uint64_t count, RandomStream& rng,
                                 SimulationOptions options) {
  if (count < 1) fail(ErrorCode::DomainError, "tour count must be positive");
  TourStream stream(model, f, rng, options);
  std::vector<Tour> tours;
  tours.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) tours.push_back(stream.next());
  return tours;
}

StoppedTours simulate_until(const SplitModel& model, std::span<const double> f, std::uint64_t n,
                            RandomStream& rng, SimulationOptions options) {
  if (n < 1) fail(ErrorCode::DomainError, "budget n must be positive");
  TourStream stream(model, f, rng, options);
  StoppedTours out;
  while (out.total_steps <= n) {
    const Tour tour = stream.next();
    out.total_steps += tour.tau;
    out.tours.push_back(tour);
  }
  out.tour_count = out.tours.size();
  return out;
}

SplitPath simulate_path(const SplitModel& model, std::uint64_t steps, RandomStream& rng,
                        SimulationMode mode) {
  SplitPath path;
  path.states.reserve(steps);
  path.regenerated.reserve(steps);
  if (steps == 0) return path;
  std::size_t x = model.draw_initial(rng);
  for (std::uint64_t i = 0; i < steps; ++i) {
    path.states.push_back(x);
    const Step step = mode == SimulationMode::ExplicitSplit ? model.step_explicit(x, rng)
                                                             : model.step_mykland(x, rng);
    path.regenerated.push_back(step.regenerated);
    x = step.next;
  }
  return path;
}

std::vector<Tour> tours_from_path(const SplitPath& path, std::span<const double> f) {
  std::vector<Tour> tours;
  BlockSum sum;
  std::uint64_t tau = 0;
  for (std::size_t i = 0; i < path.states.size(); ++i) {
    sum.add(f[path.states[i]]);
    ++tau;
    if (path.regenerated[i]) {
      tours.push_back({sum.value(), tau, path.states[i]});
      sum = BlockSum{};
      tau = 0;
    }
  }
  return tours;
}

std::vector<std::size_t> simulate_trajectory(const FiniteKernel& kernel,
                                             std::span<const double> initial,
                                             std::uint64_t length, RandomStream& rng) {
  if (initial.size() != kernel.states()) {
    fail(ErrorCode::DomainError, "initial distribution length does not match the state count");
  }
  std::vector<AliasTable> rows;
  rows.reserve(kernel.states());
  for (std::size_t x = 0; x < kernel.states(); ++x) {
    rows.emplace_back(row_of(kernel.matrix(), static_cast<Eigen::Index>(x)));
  }
  std::vector<std::size_t> out;
  out.reserve(length);
  if (length == 0) return out;
  std::size_t x = AliasTable(initial).sample(rng);
  for (std::uint64_t i = 0; i < length; ++i) {
    out.push_back(x);
    x = rows[x].sample(rng);
  }
  return out;
}

}  // namespace regen
