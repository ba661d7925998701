#pragma once

// Exhaustive enumeration of Rademacher sign paths over predictable trees.
// The depth-first kernel shares prefix work between paths and splits the top
// levels across OpenMP threads; the bitmask kernel recomputes every path from
// the root and is kept as the serial reference.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include "burkholder/error.hpp"

namespace burkholder::verify {

enum class Exec { serial, parallel };

/// Depth-n binary tree; the value at `level` t (0-based) is the one played in
/// round t + 1 and may depend only on the first t signs, encoded in `prefix`
/// with bit k set iff epsilon_{k+1} = +1.
template <class T>
class PredictableTree {
 public:
  PredictableTree() = default;
  PredictableTree(std::size_t depth, const T& fill) : depth_(depth), nodes_((std::size_t{1} << depth) - 1, fill) {}

  /// gen(level, prefix) -> T for every node.
  template <class Gen>
  static PredictableTree generate(std::size_t depth, Gen&& gen) {
    PredictableTree tree;
    tree.depth_ = depth;
    tree.nodes_.reserve((std::size_t{1} << depth) - 1);
    for (std::size_t level = 0; level < depth; ++level)
      for (std::uint64_t prefix = 0; prefix < (std::uint64_t{1} << level); ++prefix)
        tree.nodes_.push_back(gen(level, prefix));
    return tree;
  }

  std::size_t depth() const { return depth_; }
  std::size_t size() const { return nodes_.size(); }

  const T& at(std::size_t level, std::uint64_t prefix) const { return nodes_[index(level, prefix)]; }
  T& at(std::size_t level, std::uint64_t prefix) { return nodes_[index(level, prefix)]; }

  /// Node at `level` along the path `mask`.
  const T& along(std::size_t level, std::uint64_t mask) const {
    return at(level, mask & ((std::uint64_t{1} << level) - 1));
  }

 private:
  static std::size_t index(std::size_t level, std::uint64_t prefix) {
    return (std::size_t{1} << level) - 1 + static_cast<std::size_t>(prefix);
  }

  std::size_t depth_ = 0;
  std::vector<T> nodes_;
};

/// Mean (exact, each path weighted 2^-n) and max of a per-path or per-node
/// quantity, with the mask attaining the max. Ties go to the smaller mask so
/// that merges are order-independent.
struct PathStats {
  double mean = 0.0;
  double max = -std::numeric_limits<double>::infinity();
  std::uint64_t argmax = 0;
  std::uint64_t count = 0;

  void observe(double v, std::uint64_t mask) {
    if (v > max || (v == max && mask < argmax)) {
      max = v;
      argmax = mask;
    }
    ++count;
  }
};

inline constexpr std::size_t kMaxDepth = 20;

namespace detail {

inline void check_depth(std::size_t n) {
  if (n > kMaxDepth) throw DomainError("path enumeration: depth exceeds the supported maximum");
}

template <class State, class Step, class Leaf, class Visit>
void dfs(std::size_t n, std::size_t level, std::uint64_t prefix, const State& state, const Step& step,
         const Leaf& leaf, const Visit& visit, double& sum, PathStats& stats) {
  if (level == n) {
    if constexpr (!std::is_same_v<Leaf, std::nullptr_t>) {
      const double v = leaf(state, prefix);
      sum += v;
      stats.observe(v, prefix);
    }
    return;
  }
  if constexpr (!std::is_same_v<Visit, std::nullptr_t>) stats.observe(visit(state, level, prefix), prefix);
  for (int sign : {-1, 1}) {
    const std::uint64_t next = sign > 0 ? prefix | (std::uint64_t{1} << level) : prefix;
    dfs(n, level + 1, next, step(state, level, prefix, sign), step, leaf, visit, sum, stats);
  }
}

template <class State, class Step, class Leaf, class Visit>
PathStats run(std::size_t n, const State& root, const Step& step, const Leaf& leaf, const Visit& visit, Exec exec) {
  check_depth(n);
  const std::size_t split = exec == Exec::parallel ? std::min<std::size_t>(n, 6) : 0;

  // Expand the top `split` levels serially.
  PathStats top;
  std::vector<std::pair<std::uint64_t, State>> frontier{{0, root}};
  for (std::size_t level = 0; level < split; ++level) {
    std::vector<std::pair<std::uint64_t, State>> next;
    next.reserve(frontier.size() * 2);
    for (const auto& [prefix, state] : frontier) {
      if constexpr (!std::is_same_v<Visit, std::nullptr_t>) top.observe(visit(state, level, prefix), prefix);
      next.emplace_back(prefix, step(state, level, prefix, -1));
      next.emplace_back(prefix | (std::uint64_t{1} << level), step(state, level, prefix, 1));
    }
    frontier = std::move(next);
  }

  std::vector<double> sums(frontier.size(), 0.0);
  std::vector<PathStats> parts(frontier.size());
  const long long count = static_cast<long long>(frontier.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long long i = 0; i < count; ++i) {
    const auto& [prefix, state] = frontier[static_cast<std::size_t>(i)];
    dfs(n, split, prefix, state, step, leaf, visit, sums[static_cast<std::size_t>(i)],
        parts[static_cast<std::size_t>(i)]);
  }

  PathStats out = top;
  double sum = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    sum += sums[i];
    out.count += parts[i].count;
    if (parts[i].count > 0 && (parts[i].max > out.max || (parts[i].max == out.max && parts[i].argmax < out.argmax))) {
      out.max = parts[i].max;
      out.argmax = parts[i].argmax;
    }
  }
  out.mean = std::ldexp(sum, -static_cast<int>(n));
  return out;
}

}  // namespace detail

/// Expectation and max over all 2^n sign paths of leaf(state_n, mask), where
/// state_{t+1} = step(state_t, t, prefix_t, sign).
template <class State, class Step, class Leaf>
PathStats enumerate_paths(std::size_t n, const State& root, const Step& step, const Leaf& leaf,
                          Exec exec = Exec::parallel) {
  return detail::run(n, root, step, leaf, nullptr, exec);
}

/// Max over all internal nodes of visit(state_t, t, prefix_t).
template <class State, class Step, class Visit>
PathStats visit_nodes(std::size_t n, const State& root, const Step& step, const Visit& visit,
                      Exec exec = Exec::parallel) {
  return detail::run(n, root, step, nullptr, visit, exec);
}

/// Reference: each of the 2^n paths is rebuilt from the root.
template <class State, class Step, class Leaf>
PathStats enumerate_paths_reference(std::size_t n, const State& root, const Step& step, const Leaf& leaf) {
  detail::check_depth(n);
  PathStats out;
  double sum = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    State state = root;
    for (std::size_t level = 0; level < n; ++level) {
      const std::uint64_t prefix = mask & ((std::uint64_t{1} << level) - 1);
      state = step(state, level, prefix, (mask >> level) & 1 ? 1 : -1);
    }
    const double v = leaf(state, mask);
    sum += v;
    out.observe(v, mask);
  }
  out.mean = std::ldexp(sum, -static_cast<int>(n));
  return out;
}

}  // namespace burkholder::verify
