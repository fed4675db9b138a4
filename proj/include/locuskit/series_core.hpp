#pragma once

// Power series with an eventually constant coefficient tail,
//   f(x) = c_0 + c_1 x + ... + c_{L-1} x^{L-1} + t x^L / (1 - x),
// evaluated in closed form, plus positive-zero isolation on (0, 1).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "locuskit/errors.hpp"

namespace locuskit {

/// Value with first and second derivatives at one point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

namespace detail {

template <class Coeffs>
Jet tail_series_jet(const Coeffs& coeffs, double tail, double x) {
  // Horner with derivatives; d2 accumulates p''/2.
  double p = 0.0, d1 = 0.0, d2 = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    d2 = d2 * x + d1;
    d1 = d1 * x + p;
    p = p * x + static_cast<double>(*it);
  }
  Jet j{p, d1, 2.0 * d2};
  if (tail != 0.0) {
    const auto len = static_cast<int>(coeffs.size());
    const double q = 1.0 / (1.0 - x);
    const double xl = std::pow(x, len);
    const double xl1 = len >= 1 ? std::pow(x, len - 1) : 0.0;
    const double xl2 = len >= 2 ? std::pow(x, len - 2) : 0.0;
    const double g = xl * q;
    const double g1 = len * xl1 * q + xl * q * q;
    const double g2 = static_cast<double>(len) * (len - 1) * xl2 * q + 2.0 * len * xl1 * q * q +
                      2.0 * xl * q * q * q;
    j.value += tail * g;
    j.d1 += tail * g1;
    j.d2 += tail * g2;
  }
  return j;
}

inline void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0,1), got " + std::to_string(x));
  }
}

}  // namespace detail

/// Anything that can report its value and two derivatives on [0, 1).
template <class F>
concept Evaluable = requires(const F& f, double x) {
  { f.jet(x) } -> std::same_as<Jet>;
};

/// Evaluables that also expose their coefficient signs (prefix, then one tail
/// entry), which makes the Descartes bound checkable.
template <class F>
concept HasSignPattern = Evaluable<F> && requires(const F& f) {
  { f.sign_pattern() } -> std::convertible_to<std::vector<double>>;
};

/// Power series with real prefix coefficients and a constant real tail.
struct RealTailSeries {
  std::vector<double> prefix;
  double tail = 0.0;

  Jet jet(double x) const { return detail::tail_series_jet(prefix, tail, x); }
  double value(double x) const { return jet(x).value; }

  std::vector<double> sign_pattern() const {
    auto s = prefix;
    if (tail != 0.0) s.push_back(tail);
    return s;
  }
};

/// Digits in {-1, 0, 1}: a finite prefix followed by a repeated tail digit.
/// No constraint on the constant term; see TernarySeries for class B members.
class DigitSeries {
 public:
  DigitSeries(std::vector<int> prefix, int tail) : prefix_(std::move(prefix)), tail_(tail) {
    if (prefix_.empty()) throw DomainError("digit series needs a nonempty prefix");
    for (int d : prefix_) check_digit(d);
    check_digit(tail_);
  }

  const std::vector<int>& prefix() const noexcept { return prefix_; }
  int tail() const noexcept { return tail_; }

  int coefficient(std::size_t n) const { return n < prefix_.size() ? prefix_[n] : tail_; }

  bool is_zero() const {
    return tail_ == 0 && std::all_of(prefix_.begin(), prefix_.end(), [](int d) { return d == 0; });
  }

  Jet jet(double x) const { return detail::tail_series_jet(prefix_, static_cast<double>(tail_), x); }
  double value(double x) const { return jet(x).value; }

  std::vector<double> sign_pattern() const {
    std::vector<double> s(prefix_.begin(), prefix_.end());
    if (tail_ != 0) s.push_back(tail_);
    return s;
  }

  /// Coefficients c_0..c_n of the polynomial obtained by cutting the series
  /// after x^n.
  std::vector<double> truncated(std::size_t n) const {
    std::vector<double> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) c[i] = coefficient(i);
    return c;
  }

  bool operator==(const DigitSeries&) const = default;

 private:
  static void check_digit(int d) {
    if (d < -1 || d > 1) throw DomainError("digit outside {-1,0,1}: " + std::to_string(d));
  }

  std::vector<int> prefix_;
  int tail_;
};

/// A member of class B with eventually constant coefficients: the constant
/// term is +1 and every other coefficient is in {-1, 0, 1}.
class TernarySeries {
 public:
  TernarySeries(std::vector<int> prefix, int tail) : digits_(std::move(prefix), tail) {
    if (digits_.prefix().front() != 1) throw DomainError("constant term of a ternary series must be +1");
  }

  const std::vector<int>& prefix() const noexcept { return digits_.prefix(); }
  int tail() const noexcept { return digits_.tail(); }
  int coefficient(std::size_t n) const { return digits_.coefficient(n); }
  const DigitSeries& digits() const noexcept { return digits_; }

  Jet jet(double x) const { return digits_.jet(x); }
  double value(double x) const { return digits_.value(x); }
  std::vector<double> sign_pattern() const { return digits_.sign_pattern(); }
  std::vector<double> truncated(std::size_t n) const { return digits_.truncated(n); }

  bool operator==(const TernarySeries&) const = default;

 private:
  DigitSeries digits_;
};

template <Evaluable F>
double eval(const F& f, double x) {
  detail::require_open_unit(x, "x");
  return f.jet(x).value;
}

template <Evaluable F>
double eval_d1(const F& f, double x) {
  detail::require_open_unit(x, "x");
  return f.jet(x).d1;
}

template <Evaluable F>
double eval_d2(const F& f, double x) {
  detail::require_open_unit(x, "x");
  return f.jet(x).d2;
}

/// Strict sign alternations in a coefficient sequence, zeros skipped.
inline int sign_changes(std::span<const double> coeffs) {
  int changes = 0;
  int last = 0;
  for (double c : coeffs) {
    const int s = (c > 0.0) - (c < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

inline int sign_changes(const std::vector<double>& coeffs) {
  return sign_changes(std::span<const double>(coeffs));
}

/// Lower bound for |a_1 ... a_k| over any k roots (with multiplicity) in the
/// unit disk of a series in B.
inline double root_product_bound(int k) {
  if (k < 1) throw DomainError("root_product_bound needs k >= 1");
  const double kd = k;
  return std::pow(1.0 + 1.0 / kd, -kd / 2.0) / std::sqrt(kd + 1.0);
}

struct Zero {
  double location = 0.0;
  int multiplicity = 1;

  bool operator==(const Zero&) const = default;
};

/// Positive zeros in increasing order, found exhaustively on
/// (0, exhaustive_up_to].
struct ZeroList {
  std::vector<Zero> zeros;
  double exhaustive_up_to = 1.0;

  int count() const {
    int n = 0;
    for (const auto& z : zeros) n += z.multiplicity;
    return n;
  }

  /// k-th positive zero counted with multiplicity (k >= 1); 1 when there are
  /// fewer than k zeros.
  double xi(int k) const {
    for (const auto& z : zeros) {
      if (k <= z.multiplicity) return z.location;
      k -= z.multiplicity;
    }
    return 1.0;
  }

  bool operator==(const ZeroList&) const = default;
};

inline constexpr double kDefaultRightEnd = 1.0 - 1e-6;
inline constexpr double kDefaultZeroTol = 1e-12;
inline constexpr double kZeroGridStep = 1e-3;

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Typical rounding level of a series value with coefficients bounded by 1.
inline double value_noise(double x) { return 8.0 * kEps / (1.0 - x); }
inline double d1_noise(double x) { return 8.0 * kEps / ((1.0 - x) * (1.0 - x)); }
inline double d2_noise(double x) { return 8.0 * kEps / ((1.0 - x) * (1.0 - x) * (1.0 - x)); }

inline int sgn(double v) { return v < 0.0 ? -1 : 1; }

/// Bisection on a scalar function given a sign change over [lo, hi]; runs to
/// the floating-point limit or to `width`.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double width = 1e-14) {
  const int slo = sgn(fn(lo));
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sgn(fn(mid)) == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <Evaluable F>
double newton_polish(const F& f, double z, double lo, double hi) {
  for (int it = 0; it < 3; ++it) {
    const Jet j = f.jet(z);
    if (j.d1 == 0.0) break;
    const double next = z - j.value / j.d1;
    if (!(next >= lo && next <= hi)) break;
    if (std::abs(f.jet(next).value) > std::abs(j.value)) break;
    z = next;
  }
  return z;
}

}  // namespace detail

/// All zeros of `f` in (0, right_end], to within `tol`.
///
/// The interval is sampled on a grid of step 1e-3; sign changes of f are
/// bracketed and bisected, sign changes of f' locate critical points where a
/// double zero (f and f' vanishing at rounding level, f'' not) is reported with
/// multiplicity 2. A zero whose location cannot be pinned to `tol` at double
/// precision raises UnresolvedCluster with its bracket. When the function
/// exposes its coefficient signs, the Descartes bound is enforced.
template <Evaluable F>
ZeroList positive_zeros(const F& f, double right_end = kDefaultRightEnd, double tol = kDefaultZeroTol) {
  using detail::sgn;
  if (!(right_end > 0.0 && right_end < 1.0)) throw DomainError("right_end must lie in (0,1)");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");

  std::vector<Zero> simple;
  std::vector<Zero> multiple;
  std::vector<double> cluster_radius;

  auto value_at = [&](double x) { return f.jet(x).value; };
  auto slope_at = [&](double x) { return f.jet(x).d1; };
  auto curvature_at = [&](double x) { return f.jet(x).d2; };

  auto add_simple = [&](double lo, double hi) {
    double z = detail::bisect(value_at, lo, hi);
    z = detail::newton_polish(f, z, lo, hi);
    const Jet j = f.jet(z);
    if (std::abs(j.d1) * tol >= detail::value_noise(z)) {
      simple.push_back({z, 1});
      return;
    }
    // Flat crossing: only an inflection point with f and f' both at rounding
    // level qualifies, as a triple zero.
    const double a = std::max(lo - kZeroGridStep, 0.0);
    const double b = std::min(hi + kZeroGridStep, right_end);
    if (sgn(curvature_at(a)) != sgn(curvature_at(b))) {
      const double m = detail::bisect(curvature_at, a, b);
      const Jet jm = f.jet(m);
      if (std::abs(jm.value) <= 8.0 * detail::value_noise(m) &&
          std::abs(jm.d1) <= 8.0 * detail::d1_noise(m)) {
        multiple.push_back({m, 3});
        cluster_radius.push_back(b - a);
        return;
      }
    }
    throw UnresolvedCluster(lo, hi);
  };

  const auto cells = static_cast<std::size_t>(std::ceil(right_end / kZeroGridStep));
  double lo = 0.0;
  Jet jlo = f.jet(lo);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double hi = std::min(static_cast<double>(i) * kZeroGridStep, right_end);
    if (hi <= lo) break;
    const Jet jhi = f.jet(hi);
    const int s0 = sgn(jlo.value), s1 = sgn(jhi.value);
    if (sgn(jlo.d1) != sgn(jhi.d1)) {
      const double m = detail::bisect(slope_at, lo, hi);
      const Jet jm = f.jet(m);
      if (std::abs(jm.value) <= 8.0 * detail::value_noise(m)) {
        if (std::abs(jm.d2) <= 8.0 * detail::d2_noise(m)) throw UnresolvedCluster(lo, hi);
        multiple.push_back({m, 2});
        // Crossings produced by rounding inside the dip are absorbed below.
        cluster_radius.push_back(4.0 * std::sqrt(16.0 * detail::value_noise(m) / std::abs(jm.d2)) + 1e-12);
      } else {
        const int sm = sgn(jm.value);
        if (s0 != sm) add_simple(lo, m);
        if (sm != s1) add_simple(m, hi);
      }
    } else if (s0 != s1) {
      add_simple(lo, hi);
    }
    lo = hi;
    jlo = jhi;
  }

  ZeroList out;
  out.exhaustive_up_to = right_end;
  for (const auto& z : simple) {
    bool absorbed = false;
    for (std::size_t m = 0; m < multiple.size(); ++m) {
      if (std::abs(z.location - multiple[m].location) <= cluster_radius[m]) absorbed = true;
    }
    if (!absorbed) out.zeros.push_back(z);
  }
  for (const auto& z : multiple) out.zeros.push_back(z);
  std::sort(out.zeros.begin(), out.zeros.end(),
            [](const Zero& a, const Zero& b) { return a.location < b.location; });
  // Several cells can see the same higher-order zero.
  out.zeros.erase(std::unique(out.zeros.begin(), out.zeros.end(),
                              [](const Zero& a, const Zero& b) {
                                return a.multiplicity > 1 && b.multiplicity > 1 &&
                                       std::abs(a.location - b.location) <= 1e-9;
                              }),
                  out.zeros.end());

  if constexpr (HasSignPattern<F>) {
    const auto pattern = f.sign_pattern();
    if (out.count() > sign_changes(pattern)) {
      throw std::logic_error("positive zero count exceeds the Descartes bound");
    }
  }
  return out;
}

}  // namespace locuskit
