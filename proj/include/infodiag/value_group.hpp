#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <string>

namespace infodiag {

/// Zero test for real-valued diagrams: |v| <= absolute + relative * scale.
struct Tolerance {
  double absolute = 1e-9;
  double relative = 1e-9;
};

/// The abelian group a diagram takes values in.
///
/// Values are plain data; the group object supplies the operations. The
/// monoid action itself lives in the backend (conditioning re-evaluates).
template <class G>
concept ValueGroup = requires(const G& g, const typename G::value_type& v, double scale) {
  typename G::value_type;
  { g.zero() } -> std::same_as<typename G::value_type>;
  { g.add(v, v) } -> std::same_as<typename G::value_type>;
  { g.negate(v) } -> std::same_as<typename G::value_type>;
  { g.is_zero(v, scale) } -> std::same_as<bool>;
  { g.magnitude(v) } -> std::convertible_to<double>;
  { g.format(v) } -> std::same_as<std::string>;
  { G::exact } -> std::convertible_to<bool>;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Real numbers with a tolerance-based zero test.
class RealValues {
 public:
  using value_type = double;
  static constexpr bool exact = false;

  RealValues() = default;
  explicit RealValues(Tolerance tol) : tol_(tol) {}

  double zero() const { return 0.0; }
  double add(double a, double b) const { return a + b; }
  double negate(double a) const { return -a; }
  bool is_zero(double v, double scale) const { return std::abs(v) <= tol_.absolute + tol_.relative * scale; }
  double magnitude(double v) const { return std::abs(v); }
  std::string format(double v) const;

  const Tolerance& tolerance() const { return tol_; }

 private:
  Tolerance tol_;
};

/// Sums values in the given order; compensated for reals.
template <ValueGroup G>
typename G::value_type sum_values(const G& group, std::span<const typename G::value_type> values) {
  if constexpr (std::same_as<typename G::value_type, double>) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
  } else {
    auto acc = group.zero();
    for (const auto& v : values) acc = group.add(acc, v);
    return acc;
  }
}

/// Scale used by the relative part of the zero test: the largest magnitude,
/// or 1 when everything is smaller than 1.
template <ValueGroup G>
double zero_test_scale(const G& group, std::span<const typename G::value_type> values) {
  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, group.magnitude(v));
  return scale;
}

}  // namespace infodiag
