#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regen/chain.hpp"

namespace regen::zoo {

/// A ready-made split model with its default target function.
struct ZooModel {
  std::string name;
  SplitModel model;
  StateFunction f;
  bool reversible = false;
  std::optional<StateFunction> V;  // drift function, when the model comes with one
  std::vector<std::string> warnings;
};

// P = beta pi + (1 - beta) I on {0, 1}, pi = nu = [1/2, 1/2], J = X, f(x) = x.
// The natural range is 0 < beta <= 1/2; (1/2, 1] is accepted with a warning.
ZooModel two_state_example(double beta);

// Independence Metropolis-Hastings with the exact Doeblin constant
// beta = min_x proposal(x) / target(x), J = X, nu = target. f = indicator of the mode.
ZooModel independence_mh(const std::vector<double>& target, const std::vector<double>& proposal);

// Reflecting birth-death chain on {0..size-1} with holding at the ends, J = {0},
// nu = P(0, .), beta = 1, V(x) = v^x, f(x) = x. Throws DriftNotSatisfied unless
// max_{x>0} PV(x)/V(x) < 1.
ZooModel drift_chain(std::size_t size, double up, double v);

// Default 10-state target used by the "imh" model reference.
std::vector<double> default_imh_target();

// Every model with its default parameters; used by the self-checks.
std::vector<ZooModel> all_models();

}  // namespace regen::zoo
