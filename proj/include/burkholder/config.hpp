#pragma once

// Flat `key = value` configuration files: one key per line, `#` starts a
// comment, blank lines are ignored.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "burkholder/error.hpp"
#include "burkholder/harness.hpp"
#include "burkholder/online.hpp"

namespace burkholder {

/// Malformed or inconsistent configuration; the CLI maps it to a usage error.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

class Config {
 public:
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> number(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;

  /// Throws ConfigError naming the first key that no getter has read.
  void reject_unused() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class ComparatorKind { nuclear_ball, l2_ball, linf_ball, grid };

/// Everything `run` and `compare` need, built and validated from a Config.
struct Experiment {
  std::string family;
  PotentialPtr potential;
  Loss loss;
  harness::SequenceSpec sequence;
  RunOptions options;
  ComparatorKind comparator = ComparatorKind::nuclear_ball;
  double comparator_radius = 1.0;
  harness::OracleOptions oracle;
  std::size_t grid_points = 50;
  std::size_t repetitions = 20;
  double tolerance = 1e-6;
};

/// Throws ConfigError (or the family's DomainError, whose message names the
/// violated invariant) when the configuration is invalid.
Experiment build_experiment(const Config& config);

}  // namespace burkholder
