#include "burkholder/statistic.hpp"

#include <cmath>
#include <sstream>

#include "burkholder/error.hpp"

namespace burkholder {

std::string to_string(StatTag tag) {
  switch (tag) {
    case StatTag::scalar_vec: return "ScalarVec";
    case StatTag::scalar_sym_psd: return "ScalarSymPsd";
    case StatTag::vec_sym: return "VecSym";
    case StatTag::scalar_vec_scalar: return "ScalarVecScalar";
    case StatTag::product: return "Product";
  }
  return "?";
}

namespace {

void add_vec(Vec& lhs, const Vec& rhs) {
  if (lhs.size() != rhs.size()) throw StructuralError("Statistic: vector length mismatch");
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += rhs[i];
}

void append(Vec& out, std::span<const double> values) { out.insert(out.end(), values.begin(), values.end()); }

}  // namespace

void Statistic::throw_wrong_tag() const {
  throw StructuralError("Statistic: unexpected tag " + to_string(tag()));
}

Statistic& Statistic::operator+=(const Statistic& other) {
  if (tag() != other.tag())
    throw StructuralError("Statistic: cannot combine " + to_string(tag()) + " with " + to_string(other.tag()));
  std::visit(
      [&](auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        const T& rhs = std::get<T>(other.value_);
        if constexpr (std::is_same_v<T, ScalarVec>) {
          lhs.b += rhs.b;
          add_vec(lhs.x, rhs.x);
        } else if constexpr (std::is_same_v<T, ScalarSymPsd>) {
          lhs.a += rhs.a;
          lhs.h += rhs.h;
          lhs.m += rhs.m;
        } else if constexpr (std::is_same_v<T, VecSym>) {
          add_vec(lhs.x, rhs.x);
          lhs.a += rhs.a;
        } else if constexpr (std::is_same_v<T, ScalarVecScalar>) {
          lhs.b += rhs.b;
          add_vec(lhs.x, rhs.x);
          lhs.s += rhs.s;
        } else {
          if (lhs.parts.size() != rhs.parts.size()) throw StructuralError("Statistic: product arity mismatch");
          for (std::size_t i = 0; i < lhs.parts.size(); ++i) lhs.parts[i] += rhs.parts[i];
        }
      },
      value_);
  return *this;
}

Statistic& Statistic::operator*=(double scale) {
  std::visit(
      [&](auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScalarVec>) {
          v.b *= scale;
          for (double& e : v.x) e *= scale;
        } else if constexpr (std::is_same_v<T, ScalarSymPsd>) {
          v.a *= scale;
          v.h *= scale;
          v.m *= scale;
        } else if constexpr (std::is_same_v<T, VecSym>) {
          for (double& e : v.x) e *= scale;
          v.a *= scale;
        } else if constexpr (std::is_same_v<T, ScalarVecScalar>) {
          v.b *= scale;
          for (double& e : v.x) e *= scale;
          v.s *= scale;
        } else {
          for (auto& p : v.parts) p *= scale;
        }
      },
      value_);
  return *this;
}

Statistic Statistic::zero_like() const {
  Statistic z = *this;
  z *= 0.0;
  return z;
}

bool Statistic::same_shape(const Statistic& other) const {
  if (tag() != other.tag()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const T& rhs = std::get<T>(other.value_);
        if constexpr (std::is_same_v<T, ScalarVec> || std::is_same_v<T, ScalarVecScalar>) {
          return lhs.x.size() == rhs.x.size();
        } else if constexpr (std::is_same_v<T, ScalarSymPsd>) {
          return lhs.h.dim() == rhs.h.dim() && lhs.m.dim() == rhs.m.dim();
        } else if constexpr (std::is_same_v<T, VecSym>) {
          return lhs.x.size() == rhs.x.size() && lhs.a.dim() == rhs.a.dim();
        } else {
          if (lhs.parts.size() != rhs.parts.size()) return false;
          for (std::size_t i = 0; i < lhs.parts.size(); ++i)
            if (!lhs.parts[i].same_shape(rhs.parts[i])) return false;
          return true;
        }
      },
      value_);
}

Vec Statistic::flatten() const {
  Vec out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScalarVec>) {
          out.push_back(v.b);
          append(out, v.x);
        } else if constexpr (std::is_same_v<T, ScalarSymPsd>) {
          out.push_back(v.a);
          append(out, v.h.data());
          append(out, v.m.data());
        } else if constexpr (std::is_same_v<T, VecSym>) {
          append(out, v.x);
          append(out, v.a.data());
        } else if constexpr (std::is_same_v<T, ScalarVecScalar>) {
          out.push_back(v.b);
          append(out, v.x);
          out.push_back(v.s);
        } else {
          for (const auto& p : v.parts) append(out, p.flatten());
        }
      },
      value_);
  return out;
}

double Statistic::max_abs_diff(const Statistic& other) const {
  if (!same_shape(other)) throw StructuralError("Statistic: shape mismatch");
  const Vec a = flatten(), b = other.flatten();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool Statistic::operator==(const Statistic& other) const {
  return same_shape(other) && flatten() == other.flatten();
}

std::string Statistic::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(tag()) << "(";
  const Vec v = flatten();
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  out << ")";
  return out.str();
}

Statistic operator+(Statistic lhs, const Statistic& rhs) { return lhs += rhs; }
Statistic operator*(double scale, Statistic s) { return s *= scale; }

}  // namespace burkholder
