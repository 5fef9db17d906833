#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace regen {

enum class VerifyTier { Quick, Full };

struct VerifyOptions {
  VerifyTier tier = VerifyTier::Quick;
  std::uint64_t seed = 1;
  double fault = 0.0;  // > 0 perturbs every residual kernel before the mode-equivalence check
  unsigned jobs = 1;
};

struct CheckResult {
  std::string name;
  std::string anchor;  // the property being checked
  bool passed = false;
  bool gating = true;  // informational checks are reported but do not fail the run
  std::string detail;
};

std::vector<CheckResult> run_checks(const VerifyOptions& options);

}  // namespace regen
