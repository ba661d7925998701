#pragma once

// Command implementations behind the `burkholder` executable. Each returns
// the process exit code: 0 pass, 1 check failure, 2 usage or config error.

#include <iosfwd>
#include <string>
#include <vector>

#include "burkholder/config.hpp"
#include "burkholder/suites.hpp"

namespace burkholder::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Plays the configured strategy, writes the regret report CSV to `csv` and a
/// summary to `log`. Fails when the certificate V(zeta_n) exceeds the
/// configured tolerance.
int cmd_run(const Experiment& e, std::ostream& csv, std::ostream& log);

/// Writes the CheckReport CSV block to `csv` and one line per check to `log`.
int cmd_verify(const std::string& suite, const suites::SuiteOptions& options, std::ostream& csv, std::ostream& log);

struct CompareSummary {
  std::vector<StrategyKind> strategies;
  std::vector<std::vector<double>> regrets;  ///< [rep][strategy]
  std::vector<double> slack;                 ///< per rep: eps1 sum K_t + eps2 n
  double mean_gap = 0.0;                     ///< randomized minus the first deterministic strategy
  double mean_slack = 0.0;
  bool checked = false;
  bool passed = true;
};

/// Runs every strategy on the identical sequence for e.repetitions seeds of
/// the strategies' internal randomness.
CompareSummary compare(const Experiment& e, const std::vector<StrategyKind>& strategies);
int cmd_compare(const Experiment& e, const std::vector<StrategyKind>& strategies, std::ostream& csv,
                std::ostream& log);

/// Comma-separated strategy names.
std::vector<StrategyKind> parse_strategies(const std::string& list);

}  // namespace burkholder::cli
