#include "regen/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regen/error.hpp"
#include "regen/oracle.hpp"

namespace regen::zoo {

ZooModel two_state_example(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) fail(ErrorCode::DomainError, "beta must lie in (0, 1]");
  Matrix p(2, 2);
  p << 1.0 - beta / 2.0, beta / 2.0, beta / 2.0, 1.0 - beta / 2.0;
  Vector half(2);
  half << 0.5, 0.5;
  ZooModel out{"two-state",
               SplitModel(FiniteKernel(std::move(p)), SmallSet::whole_space(2, beta, half)),
               {0.0, 1.0},
               true,
               std::nullopt,
               {}};
  if (beta > 0.5) {
    out.warnings.push_back("two-state example is stated for beta <= 1/2; got beta = " +
                           std::to_string(beta));
  }
  return out;
}

ZooModel independence_mh(const std::vector<double>& target, const std::vector<double>& proposal) {
  const std::size_t s = target.size();
  if (s == 0 || proposal.size() != s) {
    fail(ErrorCode::UnsupportedTarget, "target and proposal must be nonempty and of equal length");
  }
  auto check_prob = [](const std::vector<double>& v, const char* name) {
    double sum = 0.0;
    for (double x : v) {
      if (!std::isfinite(x) || x < 0.0) {
        fail(ErrorCode::UnsupportedTarget, std::string(name) + " has a negative entry");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      fail(ErrorCode::UnsupportedTarget, std::string(name) + " does not sum to 1");
    }
  };
  check_prob(target, "target");
  check_prob(proposal, "proposal");

  double beta = 1.0;
  for (std::size_t x = 0; x < s; ++x) {
    if (!(target[x] > 0.0)) {
      fail(ErrorCode::UnsupportedTarget, "target must be positive on every state");
    }
    if (!(proposal[x] > 0.0)) {
      fail(ErrorCode::UnsupportedTarget, "proposal vanishes where the target is positive");
    }
    beta = std::min(beta, proposal[x] / target[x]);
  }

  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t x = 0; x < s; ++x) {
    double moved = 0.0;
    for (std::size_t y = 0; y < s; ++y) {
      if (y == x) continue;
      const double accept =
          std::min(1.0, target[y] * proposal[x] / (target[x] * proposal[y]));
      p(x, y) = proposal[y] * accept;
      moved += p(x, y);
    }
    p(x, x) = std::max(0.0, 1.0 - moved);
  }

  const Vector nu = Eigen::Map<const Vector>(target.data(), static_cast<Eigen::Index>(s));
  const std::size_t mode = static_cast<std::size_t>(
      std::max_element(target.begin(), target.end()) - target.begin());
  StateFunction f(s, 0.0);
  f[mode] = 1.0;
  return {"imh", SplitModel(FiniteKernel(std::move(p)), SmallSet::whole_space(s, beta, nu)),
          std::move(f), true, std::nullopt, {}};
}

ZooModel drift_chain(std::size_t size, double up, double v) {
  if (size < 3) fail(ErrorCode::DomainError, "drift chain needs at least 3 states");
  if (!(up > 0.0 && up < 1.0)) fail(ErrorCode::DomainError, "up must lie in (0, 1)");
  if (!(v >= 1.0) || !std::isfinite(v)) fail(ErrorCode::DomainError, "v must be >= 1");
  const auto n = static_cast<Eigen::Index>(size);
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    p(x, std::min(x + 1, n - 1)) += up;
    p(x, std::max<Eigen::Index>(x - 1, 0)) += 1.0 - up;
  }
  std::vector<bool> members(size, false);
  members[0] = true;
  const Vector nu = p.row(0).transpose();
  SplitModel model(FiniteKernel(std::move(p)), SmallSet(std::move(members), 1.0, nu));

  StateFunction V(size);
  StateFunction f(size);
  for (std::size_t x = 0; x < size; ++x) {
    V[x] = std::pow(v, static_cast<double>(x));
    f[x] = static_cast<double>(x);
  }
  const auto drift = oracle::drift_inputs_exact(model, V);
  if (!drift.satisfies_drift()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "drift condition fails off J: lambda_hat = " << drift.lambda_hat << " >= 1";
    fail(ErrorCode::DriftNotSatisfied, msg.str());
  }
  return {"drift-bd", std::move(model), std::move(f), true, std::move(V), {}};
}

std::vector<double> default_imh_target() {
  // Discretized bimodal shape on 10 states, normalized.
  std::vector<double> w = {1, 3, 6, 8, 5, 2, 3, 7, 4, 1};
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

std::vector<ZooModel> all_models() {
  std::vector<ZooModel> out;
  out.push_back(two_state_example(0.5));
  out.push_back(two_state_example(0.1));
  const auto target = default_imh_target();
  out.push_back(independence_mh(target, std::vector<double>(target.size(), 1.0 / target.size())));
  out.push_back(drift_chain(30, 0.3, 1.3));
  return out;
}

}  // namespace regen::zoo
