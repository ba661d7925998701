#include "burkholder/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder::cli {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

harness::ComparatorClass oracle_class(ComparatorKind kind) {
  switch (kind) {
    case ComparatorKind::nuclear_ball: return harness::ComparatorClass::nuclear_ball;
    case ComparatorKind::l2_ball: return harness::ComparatorClass::l2_ball;
    case ComparatorKind::linf_ball: return harness::ComparatorClass::linf_ball;
    case ComparatorKind::grid: break;
  }
  throw StructuralError("comparator grid has no oracle class");
}

struct ChosenComparator {
  Mat w;
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t grid_size = 0;
};

// Grid families report against the grid point with the largest regret minus
// budget; ball families against the oracle comparator.
ChosenComparator choose_comparator(const Experiment& e, const harness::Generated& g, const Trajectory& traj) {
  ChosenComparator out;
  if (e.comparator != ComparatorKind::grid) {
    out.w = harness::comparator_oracle(oracle_class(e.comparator), e.comparator_radius, g.sequence, e.loss, e.oracle,
                                       {g.planted})
                .w;
    return out;
  }
  std::vector<harness::GridPoint> grid;
  if (const auto* pf = dynamic_cast<const ParamFreePotential*>(e.potential.get()))
    grid = harness::param_free_grid(*pf, traj, e.loss, e.grid_points);
  else if (const auto* v = dynamic_cast<const VawPotential*>(e.potential.get()))
    grid = harness::vaw_grid(*v, traj, e.loss, e.grid_points, e.options.seed);
  else
    throw StructuralError("no comparator grid for family " + e.family);
  out.grid_size = grid.size();
  for (const auto& point : grid)
    if (point.excess() > out.worst_excess) {
      out.worst_excess = point.excess();
      out.w = point.w;
    }
  return out;
}

}  // namespace

int cmd_run(const Experiment& e, std::ostream& csv, std::ostream& log) {
  const harness::Generated g = harness::generate_planted(e.sequence);
  const Trajectory traj = run_online(*e.potential, g.sequence, e.loss, e.options);
  const ChosenComparator chosen = choose_comparator(e, g, traj);
  const auto bound = harness::bound_function(*e.potential);
  if (!bound) throw StructuralError("no regret budget for family " + e.family);
  const harness::RegretReport rep = harness::report(*e.potential, traj, e.loss, chosen.w, *bound);
  harness::write_csv(csv, rep);

  log << "family " << e.family << " (" << e.potential->describe() << "), strategy " << to_string(e.options.strategy)
      << ", n = " << g.sequence.size() << "\n";
  log << "final regret " << g17(rep.final_regret) << ", bound " << g17(rep.final_bound) << ", certificate V "
      << g17(rep.certificate) << "\n";
  if (chosen.grid_size > 0)
    log << "max regret - bound over " << chosen.grid_size << " grid comparators: " << g17(chosen.worst_excess) << "\n";
  if (!traj.descent_excess.empty())
    log << "max descent excess " << g17(*std::max_element(traj.descent_excess.begin(), traj.descent_excess.end()))
        << "\n";
  if (rep.certificate > e.tolerance) {
    log << "FAIL: certificate " << g17(rep.certificate) << " exceeds tolerance " << g17(e.tolerance) << "\n";
    return kFail;
  }
  log << "PASS\n";
  return kPass;
}

int cmd_verify(const std::string& suite, const suites::SuiteOptions& options, std::ostream& csv, std::ostream& log) {
  if (!suites::is_suite(suite)) throw ConfigError("unknown suite '" + suite + "'");
  const auto reports = suites::run_suite(suite, options);
  csv << verify::to_csv(reports);
  bool all = true;
  for (const auto& r : reports) {
    const bool ok = r.passed();
    all = all && ok;
    log << (ok ? (r.asserted ? "PASS " : "OBSERVED ") : "FAIL ") << r.check << " [" << r.subject << "] checks "
        << r.checks << " max_violation " << g17(r.max_violation) << " tol " << r.tolerance;
    if (r.worst_ratio) log << " worst_ratio " << g17(*r.worst_ratio);
    log << "\n";
    for (const auto& note : r.notes) log << "    " << note << "\n";
    if (!ok && r.witness)
      log << "    witness seed " << r.witness->seed << " trial " << r.witness->trial << ": " << r.witness->detail
          << "\n";
  }
  return all ? kPass : kFail;
}

std::vector<StrategyKind> parse_strategies(const std::string& list) {
  std::vector<StrategyKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const StrategyKind kind = strategy_by_name(item);
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
  }
  if (out.empty()) throw ConfigError("--strategies: expected at least one strategy");
  return out;
}

CompareSummary compare(const Experiment& e, const std::vector<StrategyKind>& strategies) {
  for (StrategyKind s : strategies)
    if (s == StrategyKind::linearized && !e.potential->decomposes())
      throw ConfigError("strategy linearized is not applicable to family " + e.family);
  const Sequence seq = harness::generate(e.sequence);
  CompareSummary out;
  out.strategies = strategies;
  out.regrets.assign(e.repetitions, std::vector<double>(strategies.size(), 0.0));
  out.slack.assign(e.repetitions, 0.0);

  // The regret gap between strategies does not depend on the comparator, so
  // regrets are reported against the zero comparator.
  const double comp = harness::comparator_loss(seq, e.loss, seq.empty() ? Mat() : Mat(seq[0].x.rows(), seq[0].x.cols()));
  const long long reps = static_cast<long long>(e.repetitions);
#pragma omp parallel for schedule(dynamic)
  for (long long rep = 0; rep < reps; ++rep) {
    const auto r = static_cast<std::size_t>(rep);
    for (std::size_t k = 0; k < strategies.size(); ++k) {
      RunOptions options = e.options;
      options.strategy = strategies[k];
      options.seed = stream_seed(e.options.seed, r);
      const Trajectory traj = run_online(*e.potential, seq, e.loss, options);
      out.regrets[r][k] = traj.cumulative_loss() - comp;
      if (strategies[k] == StrategyKind::randomized) {
        double slack = 0.0;
        for (double v : traj.slack_budget) slack += v;
        out.slack[r] = slack;
      }
    }
  }

  const auto rand_it = std::find(strategies.begin(), strategies.end(), StrategyKind::randomized);
  const auto det_it = std::find_if(strategies.begin(), strategies.end(),
                                   [](StrategyKind s) { return s != StrategyKind::randomized; });
  if (rand_it != strategies.end() && det_it != strategies.end() && e.repetitions > 0) {
    const std::size_t ri = static_cast<std::size_t>(rand_it - strategies.begin());
    const std::size_t di = static_cast<std::size_t>(det_it - strategies.begin());
    for (std::size_t r = 0; r < e.repetitions; ++r) {
      out.mean_gap += (out.regrets[r][ri] - out.regrets[r][di]) / static_cast<double>(e.repetitions);
      out.mean_slack += out.slack[r] / static_cast<double>(e.repetitions);
    }
    out.checked = true;
    out.passed = out.mean_gap <= out.mean_slack;
  }
  return out;
}

int cmd_compare(const Experiment& e, const std::vector<StrategyKind>& strategies, std::ostream& csv,
                std::ostream& log) {
  const CompareSummary s = compare(e, strategies);
  csv << "rep";
  for (StrategyKind k : s.strategies) csv << ",regret_" << to_string(k);
  const bool has_random =
      std::find(s.strategies.begin(), s.strategies.end(), StrategyKind::randomized) != s.strategies.end();
  if (has_random) csv << ",slack_budget";
  csv << "\n";
  for (std::size_t r = 0; r < s.regrets.size(); ++r) {
    csv << r;
    for (double v : s.regrets[r]) csv << "," << g17(v);
    if (has_random) csv << "," << g17(s.slack[r]);
    csv << "\n";
  }
  log << "compare " << e.family << " over " << s.regrets.size() << " repetitions\n";
  for (std::size_t k = 0; k < s.strategies.size(); ++k) {
    double mean = 0.0;
    for (const auto& row : s.regrets) mean += row[k] / static_cast<double>(s.regrets.size());
    log << "  mean regret " << to_string(s.strategies[k]) << " " << g17(mean) << "\n";
  }
  if (!s.checked) return kPass;
  log << "mean gap " << g17(s.mean_gap) << " vs slack eps1*sum K_t + eps2*n = " << g17(s.mean_slack) << "\n";
  log << (s.passed ? "PASS\n" : "FAIL\n");
  return s.passed ? kPass : kFail;
}

}  // namespace burkholder::cli
