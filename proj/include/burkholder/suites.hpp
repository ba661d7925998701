#pragma once

// The shipped potentials and the named verification suites run by
// `burkholder verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "burkholder/potentials.hpp"
#include "burkholder/verify/checks.hpp"

namespace burkholder::suites {

struct Shipped {
  PotentialPtr potential;
  /// 1e-8 for closed-form families, 1e-6 where eigensolves participate.
  double tolerance = 1e-8;
};

/// Param-free l2 and l4, matrix, AdaGrad l2 and linf, VAW, the meta
/// potential over {matrix, AdaGrad-l2}, and the min and convex combinations
/// of two matrix potentials with different eta.
std::vector<Shipped> shipped_potentials(std::uint64_t seed = 1);

/// Matrix potential with c halved and the variance weight halved to 1/4.
/// The first breaks U(0) <= 0; c cancels in property 3, so the second is what
/// breaks restricted concavity.
Shipped negative_control();

/// Meta potential over a d1 x d2 matrix potential and an AdaGrad-l2 potential
/// on vec(X) with R = sqrt(min(d1, d2)) * R_matrix.
PotentialPtr make_meta(const MatrixConfig& matrix, double eta, std::size_t horizon, std::uint64_t seed);

inline const std::vector<std::string> kSuiteNames = {"p1",  "p2",  "p3",        "khintchine", "mgf",
                                                     "supermartingale", "necessity", "all"};

bool is_suite(const std::string& name);

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Overrides the per-suite default count (trials, or trees for tree suites).
  std::optional<std::size_t> trials;
  bool negative_control = false;
  verify::Exec exec = verify::Exec::parallel;
};

/// Throws DomainError for an unknown suite name.
std::vector<verify::CheckReport> run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace burkholder::suites
