#pragma once

// Sequence generation, offline comparator oracles and regret reports.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "burkholder/losses.hpp"
#include "burkholder/online.hpp"
#include "burkholder/potentials.hpp"

namespace burkholder::harness {

enum class SequenceKind { matrix_completion, random_vectors, adversarial_gradient };

SequenceKind sequence_kind_by_name(const std::string& name);
std::string to_string(SequenceKind kind);

struct SequenceSpec {
  SequenceKind kind = SequenceKind::matrix_completion;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double radius = 1.0;  ///< outcomes are clipped to [-B, B]
  double noise = 0.0;   ///< standard deviation of Gaussian outcome noise

  // matrix_completion
  std::size_t d1 = 10;
  std::size_t d2 = 10;
  std::size_t rank = 1;
  double nuclear_radius = 1.0;  ///< ||W*||_Sigma
  double zipf = 0.0;            ///< row/column skew exponent; 0 is uniform

  // random_vectors and adversarial_gradient
  std::size_t d = 10;
  double norm_bound = 1.0;  ///< ||x||_p of every instance
  double p = 2.0;
  double comparator_norm = 1.0;  ///< dual norm of the planted w*

  // adversarial_gradient: rounds per block of repeated instance and sign
  std::size_t steps = 1;

  /// Throws DomainError on an infeasible spec.
  void validate() const;
};

struct Generated {
  Sequence sequence;
  Mat planted;  ///< W* (d1 x d2) or w* (d x 1)
};

/// Deterministic given the spec (including its seed).
Generated generate_planted(const SequenceSpec& spec);
Sequence generate(const SequenceSpec& spec);

enum class ComparatorClass { nuclear_ball, l2_ball, linf_ball };

struct OracleOptions {
  std::size_t iterations = 2000;
  double step_scale = 0.5;  ///< step step_scale * r / sqrt(k)
};

struct Comparator {
  Mat w;
  double loss = 0.0;
};

/// sum_t loss(<w, x_t>, y_t).
double comparator_loss(const Sequence& seq, const Loss& loss, const Mat& w);

/// Projected subgradient descent on the averaged loss over the ball of
/// radius r, returning the best iterate; extra candidates (projected onto the
/// ball) compete with the iterates. The returned loss is that of a feasible
/// comparator, so it is at least the true infimum: a regret computed against
/// it is a valid instance of any per-comparator regret inequality, and a
/// better oracle only makes such a check harder to pass.
Comparator comparator_oracle(ComparatorClass cls, double r, const Sequence& seq, const Loss& loss,
                             const OracleOptions& options = {}, const std::vector<Mat>& candidates = {});

/// Exact minimizer over |w| <= r for scalar instances: the objective is
/// convex and piecewise smooth, so for absolute and hinge loss it is
/// minimized at a breakpoint or an endpoint, and for squared loss at the
/// clipped least-squares point.
Comparator scan_1d(const Sequence& seq, const Loss& loss, double r);

/// Regret of a trajectory against w, and the bound at w.
struct GridPoint {
  Mat w;
  double norm = 0.0;
  double regret = 0.0;
  double bound = 0.0;
  double excess() const { return regret - bound; }
};

/// `points` log-spaced comparator norms in [lo, hi] along the direction that
/// maximizes <w, -sum delta_t x_t> for the comparator norm dual to the
/// instance norm.
std::vector<GridPoint> param_free_grid(const ParamFreePotential& p, const Trajectory& traj, const Loss& loss,
                                       std::size_t points = 50, double lo = 1e-2, double hi = 1e2);

/// `points` Gaussian comparators with log-uniform scale in [0.1, 3].
std::vector<GridPoint> vaw_grid(const VawPotential& p, const Trajectory& traj, const Loss& loss,
                                std::size_t points, std::uint64_t seed);

/// Comparator-dependent regret budget A(tau, w) of a potential family;
/// nullopt for families without a closed form.
using BoundFn = std::function<double(const Statistic& tau, const Mat& w)>;
std::optional<BoundFn> bound_function(const Potential& p);

struct RegretRow {
  std::size_t round = 0;
  double loss = 0.0;
  double cum_loss = 0.0;
  double comp_loss = 0.0;
  double regret = 0.0;
  double bound = 0.0;
  double potential = 0.0;
};

struct RegretReport {
  std::vector<RegretRow> rows;  ///< round 0..n
  double final_regret = 0.0;
  double final_bound = 0.0;
  double certificate = 0.0;     ///< V(zeta_n)
};

/// Rows for rounds 0..n. Throws StructuralError when the comparator shape or
/// the trajectory length is inconsistent.
RegretReport report(const Potential& p, const Trajectory& traj, const Loss& loss, const Mat& comparator,
                    const BoundFn& bound);

inline constexpr const char* kRegretHeader = "round,loss,cum_loss,comp_loss,regret,bound,potential";

void write_csv(std::ostream& out, const RegretReport& r);

/// Sequence CSV: header then rows t,x_1..x_k,y with x in row-major order.
void write_sequence_csv(std::ostream& out, const Sequence& seq);
/// Reads a sequence CSV; instances get shape rows x cols, which must match
/// the payload width. A header line is skipped if its first field is not a
/// number.
Sequence read_sequence_csv(std::istream& in, std::size_t rows, std::size_t cols);

}  // namespace burkholder::harness
