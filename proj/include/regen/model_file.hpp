#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "regen/chain.hpp"

namespace regen {

// Plain-text kernel format:
//
//   # comment
//   3
//   0.5 0.25 0.25
//   ...                 (S rows of S probabilities)
//   J: 0 2
//   beta: 0.25
//   nu: 0.5 0.25 0.25
//
// The J/beta/nu lines are optional but come as a group.
struct ModelFile {
  FiniteKernel kernel;
  std::optional<SmallSet> small_set;
};

ModelFile parse_model_text(std::string_view text);
ModelFile load_model_file(const std::filesystem::path& path);
std::string format_model_text(const FiniteKernel& kernel, const SmallSet* small_set = nullptr);

}  // namespace regen
