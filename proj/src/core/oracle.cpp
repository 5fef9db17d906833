#include "regen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "regen/error.hpp"

namespace regen::oracle {

namespace {

Vector as_vector(std::span<const double> v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_size(const FiniteKernel& kernel) {
  if (kernel.states() > kMaxStates) {
    fail(ErrorCode::StateSpaceTooLarge,
         "exact computations are limited to " + std::to_string(kMaxStates) + " states");
  }
}

std::vector<std::size_t> bfs_levels(const Matrix& p, bool reverse) {
  const auto s = static_cast<std::size_t>(p.rows());
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(s, unseen);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < s; ++v) {
      const double w = reverse ? p(v, u) : p(u, v);
      if (w > 0.0 && level[v] == unseen) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  return level;
}

void require_irreducible(const FiniteKernel& kernel) {
  check_size(kernel);
  if (!is_irreducible(kernel)) fail(ErrorCode::NotIrreducible, "kernel is not irreducible");
}

// Linear systems of the pre-regeneration operator Qt = P - beta 1_J nu^T.
class TourSystem {
 public:
  explicit TourSystem(const SplitModel& model) : nu_(model.small_set().nu()) {
    check_size(model.kernel());
    const auto s = static_cast<Eigen::Index>(model.states());
    qt_ = model.kernel().matrix();
    for (Eigen::Index x = 0; x < s; ++x) {
      if (model.small_set().contains(static_cast<std::size_t>(x))) {
        qt_.row(x) -= model.small_set().beta() * nu_.transpose();
      }
    }
    a_ = Matrix::Identity(s, s) - qt_;
    lu_.compute(a_);
  }

  Vector solve(const Vector& rhs) const {
    Vector h = lu_.solve(rhs);
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (!h.allFinite() || (a_ * h - rhs).cwiseAbs().maxCoeff() > 1e-8 * scale) {
      fail(ErrorCode::SingularSystem,
           "regeneration is not certain from every state (I - Qt is singular)");
    }
    return h;
  }

  // E_x sum_{i<tau} g(X_i) for every start x.
  Vector first_moment(const Vector& g) const { return solve(g); }

  // E_x [sum g][sum h] given the first moments ag, ah.
  Vector cross_moment(const Vector& g, const Vector& ag, const Vector& h, const Vector& ah) const {
    const Vector rhs = g.cwiseProduct(h) + g.cwiseProduct(qt_ * ah) + h.cwiseProduct(qt_ * ag);
    return solve(rhs);
  }

  double from_nu(const Vector& v) const { return nu_.dot(v); }
  const Matrix& qt() const { return qt_; }

 private:
  Vector nu_;
  Matrix qt_;
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
};

}  // namespace

bool is_irreducible(const FiniteKernel& kernel) {
  const auto unseen = static_cast<std::size_t>(-1);
  for (bool reverse : {false, true}) {
    const auto level = bfs_levels(kernel.matrix(), reverse);
    if (std::find(level.begin(), level.end(), unseen) != level.end()) return false;
  }
  return true;
}

std::size_t period(const FiniteKernel& kernel) {
  require_irreducible(kernel);
  const auto level = bfs_levels(kernel.matrix(), false);
  const std::size_t s = kernel.states();
  std::size_t g = 0;
  for (std::size_t u = 0; u < s; ++u) {
    for (std::size_t v = 0; v < s; ++v) {
      if (kernel(u, v) > 0.0) {
        const auto d = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        g = std::gcd(g, static_cast<std::size_t>(d < 0 ? -d : d));
      }
    }
  }
  return g;
}

Vector stationary(const FiniteKernel& kernel) {
  require_irreducible(kernel);
  const auto s = static_cast<Eigen::Index>(kernel.states());
  Matrix a = kernel.matrix().transpose() - Matrix::Identity(s, s);
  a.row(s - 1).setOnes();
  Vector rhs = Vector::Zero(s);
  rhs[s - 1] = 1.0;
  Vector pi = a.partialPivLu().solve(rhs);
  const double residual = (kernel.matrix().transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (!pi.allFinite() || residual > 1e-10 || std::abs(pi.sum() - 1.0) > 1e-10) {
    fail(ErrorCode::SingularSystem, "stationary solve did not converge");
  }
  return pi;
}

double stationary_mean(const FiniteKernel& kernel, std::span<const double> f) {
  check_function(kernel, f);
  return stationary(kernel).dot(as_vector(f));
}

double stationary_variance(const FiniteKernel& kernel, std::span<const double> f) {
  check_function(kernel, f);
  const Vector pi = stationary(kernel);
  const Vector fv = as_vector(f);
  const Vector fbar = fv.array() - pi.dot(fv);
  return pi.dot(fbar.cwiseProduct(fbar));
}

double asymptotic_variance_exact(const FiniteKernel& kernel, std::span<const double> f) {
  check_function(kernel, f);
  if (period(kernel) != 1) fail(ErrorCode::Periodic, "kernel is periodic");
  const Vector pi = stationary(kernel);
  const auto s = static_cast<Eigen::Index>(kernel.states());
  const Vector fv = as_vector(f);
  const Vector fbar = fv.array() - pi.dot(fv);
  // I - P + 1 pi^T is invertible for an ergodic chain; its solution g has pi g = 0.
  const Matrix z = Matrix::Identity(s, s) - kernel.matrix() + Vector::Ones(s) * pi.transpose();
  const Vector g = z.partialPivLu().solve(fbar);
  return pi.dot((2.0 * fbar.cwiseProduct(g) - fbar.cwiseProduct(fbar)));
}

TourMoments tour_moments_exact(const SplitModel& model, std::span<const double> f) {
  check_function(model.kernel(), f);
  const TourSystem sys(model);
  const auto s = static_cast<Eigen::Index>(model.states());
  const Vector one = Vector::Ones(s);
  const Vector fv = as_vector(f);

  const Vector a1 = sys.first_moment(one);
  const Vector af = sys.first_moment(fv);
  const double m = sys.from_nu(a1);
  const double mean_xi = sys.from_nu(af);
  const double theta = mean_xi / m;

  const Vector fbar = fv.array() - theta;
  const Vector afbar = af - theta * a1;

  const double tau_sq = sys.from_nu(sys.cross_moment(one, a1, one, a1));
  const double xi_fbar_sq = sys.from_nu(sys.cross_moment(fbar, afbar, fbar, afbar));
  const double xi_fbar_tau = sys.from_nu(sys.cross_moment(fbar, afbar, one, a1));
  const double xi_f_sq = sys.from_nu(sys.cross_moment(fv, af, fv, af));

  TourMoments out;
  out.m = m;
  out.theta = theta;
  out.tau_second_moment = tau_sq;
  out.sigma_tau_sq = (tau_sq - m * m) / m;
  out.sigma_as_sq = xi_fbar_sq / m;
  out.rho_f1 = (xi_fbar_tau - sys.from_nu(afbar) * m) / m;
  out.sigma_unb_sq = (xi_f_sq - mean_xi * mean_xi) / m;
  out.C0 = out.sigma_tau_sq + out.m;
  return out;
}

double square_block_series(const SplitModel& model, std::span<const double> g) {
  check_function(model.kernel(), g);
  if (std::any_of(g.begin(), g.end(), [](double v) { return v < 0.0; })) {
    fail(ErrorCode::DomainError, "g must be nonnegative");
  }
  const Vector pi = stationary(model.kernel());
  const TourSystem sys(model);
  const Vector gv = as_vector(g);
  const Vector tail = sys.solve(gv) - gv;  // sum_{i>=1} Qt^i g
  const Vector weight = pi.cwiseProduct(gv);
  return weight.dot(gv) + 2.0 * weight.dot(tail);
}

double square_block_direct(const SplitModel& model, std::span<const double> g) {
  check_function(model.kernel(), g);
  const TourSystem sys(model);
  const auto s = static_cast<Eigen::Index>(model.states());
  const Vector gv = as_vector(g);
  const Vector ag = sys.first_moment(gv);
  const double m = sys.from_nu(sys.first_moment(Vector::Ones(s)));
  return sys.from_nu(sys.cross_moment(gv, ag, gv, ag)) / m;
}

DriftInputs drift_inputs_exact(const SplitModel& model, std::span<const double> V) {
  const FiniteKernel& kernel = model.kernel();
  check_function(kernel, V);
  if (std::any_of(V.begin(), V.end(), [](double v) { return v < 1.0; })) {
    fail(ErrorCode::VNotBoundedBelowByOne, "drift function V must satisfy V >= 1");
  }
  const Vector pi = stationary(kernel);
  const Vector vv = as_vector(V);
  const Vector pv = kernel.matrix() * vv;
  DriftInputs out{pi.dot(vv), pi.dot(vv.cwiseSqrt()), 0.0, 0.0};
  for (Eigen::Index x = 0; x < vv.size(); ++x) {
    if (model.small_set().contains(static_cast<std::size_t>(x))) {
      out.K_hat = std::max(out.K_hat, pv[x]);
    } else {
      out.lambda_hat = std::max(out.lambda_hat, pv[x] / vv[x]);
    }
  }
  return out;
}

double v_half_norm(const FiniteKernel& kernel, std::span<const double> f,
                   std::span<const double> V) {
  check_function(kernel, f);
  check_function(kernel, V);
  const double theta = stationary_mean(kernel, f);
  double out = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (V[x] <= 0.0) fail(ErrorCode::DomainError, "V must be positive");
    out = std::max(out, std::abs(f[x] - theta) / std::sqrt(V[x]));
  }
  return out;
}

}  // namespace regen::oracle
