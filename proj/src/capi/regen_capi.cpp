#include "regen/regen.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "regen/bounds.hpp"
#include "regen/error.hpp"
#include "regen/estimators.hpp"
#include "regen/experiments.hpp"
#include "regen/median_trick.hpp"
#include "regen/oracle.hpp"
#include "regen/zoo.hpp"

#ifndef REGEN_VERSION
#define REGEN_VERSION "0.0.0"
#endif

struct regen_model {
  regen::zoo::ZooModel zoo;
};

namespace {

thread_local std::string last_error;

regen_status record(regen::ErrorCode code, const char* what) {
  last_error = what;
  return static_cast<regen_status>(code);
}

template <typename Fn>
regen_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return REGEN_OK;
  } catch (const regen::Error& e) {
    return record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return record(regen::ErrorCode::Internal, "out of memory");
  } catch (const std::exception& e) {
    return record(regen::ErrorCode::Internal, e.what());
  } catch (...) {
    return record(regen::ErrorCode::Internal, "unknown failure");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) regen::fail(regen::ErrorCode::DomainError, std::string(name) + " is NULL");
}

std::span<const double> function_of(const regen_model* model, const double* f) {
  need(model, "model");
  need(f, "f");
  return {f, model->zoo.model.states()};
}

regen::SimulationOptions options_of(regen_mode mode) {
  regen::SimulationOptions opts;
  opts.mode = mode == REGEN_MODE_MYKLAND ? regen::SimulationMode::MyklandRetrospective
                                         : regen::SimulationMode::ExplicitSplit;
  return opts;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* regen_version(void) { return REGEN_VERSION; }

const char* regen_status_name(regen_status status) {
  return regen::error_code_name(static_cast<regen::ErrorCode>(status));
}

const char* regen_last_error(void) { return last_error.c_str(); }

int regen_is_config_error(regen_status status) {
  return regen::is_config_error(static_cast<regen::ErrorCode>(status)) ? 1 : 0;
}

regen_status regen_model_open(const char* config_text, regen_model** out) {
  return guarded([&] {
    need(config_text, "config_text");
    need(out, "out");
    *out = nullptr;
    const auto config = regen::cmd::Config::parse(config_text);
    *out = new regen_model{regen::cmd::resolve_model(config)};
  });
}

regen_status regen_model_from_matrix(size_t states, const double* matrix,
                                     const unsigned char* members, double beta, const double* nu,
                                     regen_model** out) {
  return guarded([&] {
    need(matrix, "matrix");
    need(members, "members");
    need(nu, "nu");
    need(out, "out");
    *out = nullptr;
    const auto s = static_cast<Eigen::Index>(states);
    regen::Matrix p(s, s);
    for (Eigen::Index x = 0; x < s; ++x) {
      for (Eigen::Index y = 0; y < s; ++y) p(x, y) = matrix[x * s + y];
    }
    std::vector<bool> j(states);
    for (size_t x = 0; x < states; ++x) j[x] = members[x] != 0;
    const regen::Vector nu_vec = Eigen::Map<const regen::Vector>(nu, s);
    regen::StateFunction identity(states);
    for (size_t x = 0; x < states; ++x) identity[x] = static_cast<double>(x);
    regen::SplitModel model(regen::FiniteKernel(std::move(p)),
                            regen::SmallSet(std::move(j), beta, nu_vec));
    *out = new regen_model{regen::zoo::ZooModel{"matrix", std::move(model), std::move(identity),
                                                false, std::nullopt, {}}};
  });
}

void regen_model_free(regen_model* model) { delete model; }

size_t regen_model_states(const regen_model* model) {
  return model == nullptr ? 0 : model->zoo.model.states();
}

int regen_model_is_doeblin(const regen_model* model) {
  return model != nullptr && model->zoo.model.is_doeblin() ? 1 : 0;
}

double regen_model_beta(const regen_model* model) {
  return model == nullptr ? 0.0 : model->zoo.model.small_set().beta();
}

regen_status regen_model_default_function(const regen_model* model, double* f) {
  return guarded([&] {
    need(model, "model");
    need(f, "f");
    std::copy(model->zoo.f.begin(), model->zoo.f.end(), f);
  });
}

regen_status regen_stationary(const regen_model* model, double* pi) {
  return guarded([&] {
    need(model, "model");
    need(pi, "pi");
    const regen::Vector v = regen::oracle::stationary(model->zoo.model.kernel());
    std::copy(v.data(), v.data() + v.size(), pi);
  });
}

regen_status regen_asymptotic_variance(const regen_model* model, const double* f, double* out) {
  return guarded([&] {
    need(out, "out");
    const auto fn = function_of(model, f);
    *out = regen::oracle::asymptotic_variance_exact(model->zoo.model.kernel(), fn);
  });
}

regen_status regen_tour_moments_exact(const regen_model* model, const double* f,
                                      regen_tour_moments* out) {
  return guarded([&] {
    need(out, "out");
    const auto fn = function_of(model, f);
    const auto t = regen::oracle::tour_moments_exact(model->zoo.model, fn);
    *out = {t.m, t.sigma_tau_sq, t.sigma_as_sq, t.sigma_unb_sq, t.rho_f1, t.C0, t.theta};
  });
}

regen_status regen_simulate_tours(const regen_model* model, const double* f, uint64_t count,
                                  uint64_t seed, uint64_t replicate, regen_mode mode, double* xi,
                                  uint64_t* tau, size_t* last_state) {
  return guarded([&] {
    const auto fn = function_of(model, f);
    regen::RandomStream rng(seed, replicate, regen::StreamRole::Tours);
    regen::TourStream stream(model->zoo.model, fn, rng, options_of(mode));
    for (uint64_t k = 0; k < count; ++k) {
      const regen::Tour t = stream.next();
      if (xi != nullptr) xi[k] = t.xi_f;
      if (tau != nullptr) tau[k] = t.tau;
      if (last_state != nullptr) last_state[k] = t.last_state;
    }
  });
}

regen_status regen_estimate_reg_seq(const regen_model* model, const double* f, uint64_t n,
                                    uint64_t seed, uint64_t replicate, regen_mode mode,
                                    double* value, uint64_t* steps) {
  return guarded([&] {
    need(value, "value");
    const auto fn = function_of(model, f);
    regen::RandomStream rng(seed, replicate, regen::StreamRole::Tours);
    const auto out = regen::simulate_until(model->zoo.model, fn, n, rng, options_of(mode));
    *value = regen::estimate_reg_seq(out.tours, n).value;
    if (steps != nullptr) *steps = out.total_steps;
  });
}

regen_status regen_make_plan(double sigma_as_bound, double c0_bound, double eps, double alpha,
                             regen_plan* out) {
  return guarded([&] {
    need(out, "out");
    const auto p = regen::make_plan(sigma_as_bound, c0_bound, eps, alpha);
    *out = {p.n, p.l, p.a_star, p.expected_cost, p.asymptotic_cost};
  });
}

double regen_chernoff_failure(double a, uint64_t l) {
  double v = -1.0;
  if (guarded([&] { v = regen::chernoff_failure(a, l); }) != REGEN_OK) return -1.0;
  return v;
}

regen_status regen_reg_tail_bound(uint64_t r, double m, double sigma_as_sq, double sigma_tau_sq,
                                  double eps, double delta, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = regen::reg_tail_bound(r, m, sigma_as_sq, sigma_tau_sq, eps, delta);
  });
}

regen_status regen_optimal_delta(double sigma_as_sq, double sigma_tau_sq, double eps, double m,
                                 double* out) {
  return guarded([&] {
    need(out, "out");
    *out = regen::optimal_delta(sigma_as_sq, sigma_tau_sq, eps, m);
  });
}

regen_status regen_drift_bounds(double lambda, double k, double beta, double pi_v,
                                double pi_sqrt_v, double f_norm, double* sigma_as_bound,
                                double* c0_bound) {
  return guarded([&] {
    need(sigma_as_bound, "sigma_as_bound");
    need(c0_bound, "c0_bound");
    const auto b = regen::drift_bounds({lambda, k, beta, pi_v, pi_sqrt_v, f_norm});
    *sigma_as_bound = b.sigma_as_bound;
    *c0_bound = b.C0_bound;
  });
}

regen_status regen_run_command(const char* command, const char* config_text, char** output,
                               int* exit_status) {
  return guarded([&] {
    need(command, "command");
    need(output, "output");
    *output = nullptr;
    const auto config = regen::cmd::Config::parse(config_text == nullptr ? "" : config_text);
    const auto result = regen::cmd::run_command(command, config);
    *output = copy_string(result.text);
    if (exit_status != nullptr) *exit_status = result.status;
  });
}

void regen_string_free(char* text) { std::free(text); }

}  // extern "C"
