#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regen/zoo.hpp"

namespace regen::cmd {

inline constexpr std::uint64_t kDefaultSeed = 1;

/// Flat key=value configuration. Every lookup records the effective value (given or default)
/// so that the output header can echo exactly what a run used.
class Config {
 public:
  Config() = default;
  // One key=value per line; '#' starts a comment. Later lines override earlier ones.
  static Config parse(std::string_view text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return given_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  std::optional<double> maybe_real(const std::string& key) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;

  // Keys that were given or read, with effective values, excluding `jobs`.
  std::vector<std::pair<std::string, std::string>> echo() const;
  const std::map<std::string, std::string>& given() const noexcept { return given_; }

 private:
  const std::string* lookup(const std::string& key, const std::string& fallback) const;

  std::map<std::string, std::string> given_;
  mutable std::map<std::string, std::string> used_;
};

// Every key any subcommand understands. Anything else is a config error.
const std::vector<std::string>& known_keys();

// Shortest decimal representation that round-trips.
std::string format_number(double value);

// model = two-state | imh | drift-bd | file:<path>, with the parameters each one reads.
zoo::ZooModel resolve_model(const Config& config);
// f = default | identity | indicator:<k> | values:<v0>,<v1>,...
StateFunction resolve_function(const Config& config, const zoo::ZooModel& model);

struct CommandOutput {
  std::string text;
  int status = 0;  // 1 when a self-check failed; errors are thrown instead
};

const std::vector<std::string>& command_names();

CommandOutput run_estimate(const Config& config);
CommandOutput run_plan(const Config& config);
CommandOutput run_bounds(const Config& config);
CommandOutput run_coverage(const Config& config);
CommandOutput run_compare(const Config& config);
CommandOutput run_verify(const Config& config);

// Dispatch by name; unknown names and unknown keys throw ConfigError.
CommandOutput run_command(std::string_view command, const Config& config);

}  // namespace regen::cmd
