#pragma once

// Additive sufficient statistics. A Statistic is a tagged element of one of a
// few vector spaces; sums only ever combine values with the same tag and
// shape.

#include <string>
#include <variant>
#include <vector>

#include "burkholder/symlin.hpp"

namespace burkholder {

using linalg::Mat;
using linalg::SymMat;
using linalg::Vec;

/// Instances are matrices; vector-valued side information is a d x 1 column.
using Instance = Mat;

class Statistic;

struct ScalarVec {
  double b = 0.0;
  Vec x;
};

/// (a, H, M) with M positive semidefinite.
struct ScalarSymPsd {
  double a = 0.0;
  SymMat h;
  SymMat m;
};

struct VecSym {
  Vec x;
  SymMat a;
};

struct ScalarVecScalar {
  double b = 0.0;
  Vec x;
  double s = 0.0;
};

struct Product {
  std::vector<Statistic> parts;
};

enum class StatTag { scalar_vec, scalar_sym_psd, vec_sym, scalar_vec_scalar, product };

std::string to_string(StatTag tag);

class Statistic {
 public:
  using Storage = std::variant<ScalarVec, ScalarSymPsd, VecSym, ScalarVecScalar, Product>;

  Statistic() : value_(ScalarVec{}) {}
  Statistic(ScalarVec v) : value_(std::move(v)) {}
  Statistic(ScalarSymPsd v) : value_(std::move(v)) {}
  Statistic(VecSym v) : value_(std::move(v)) {}
  Statistic(ScalarVecScalar v) : value_(std::move(v)) {}
  Statistic(Product v) : value_(std::move(v)) {}

  StatTag tag() const { return static_cast<StatTag>(value_.index()); }

  template <class T>
  const T& as() const {
    if (const T* p = std::get_if<T>(&value_)) return *p;
    throw_wrong_tag();
  }
  template <class T>
  T& as() {
    if (T* p = std::get_if<T>(&value_)) return *p;
    throw_wrong_tag();
  }

  const Storage& storage() const { return value_; }

  /// Throws StructuralError on tag or shape mismatch.
  Statistic& operator+=(const Statistic& other);
  Statistic& operator*=(double scale);

  /// Zero of the same tag and shape.
  Statistic zero_like() const;
  bool same_shape(const Statistic& other) const;

  /// All scalar coordinates, flattened in a fixed order.
  Vec flatten() const;

  /// Max absolute coordinate difference; throws on shape mismatch.
  double max_abs_diff(const Statistic& other) const;

  bool operator==(const Statistic& other) const;

  std::string describe() const;

 private:
  [[noreturn]] void throw_wrong_tag() const;

  Storage value_;
};

Statistic operator+(Statistic lhs, const Statistic& rhs);
Statistic operator*(double scale, Statistic s);

}  // namespace burkholder
