#pragma once

// (*)- and (**)-functions and the boundary functions built from them:
//   phi(g): least second positive zero over [-1,1]-coefficient series vanishing at g,
//   psi(g): least third positive zero, obtained by inverting lambda -> gamma.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locuskit/errors.hpp"
#include "locuskit/series_core.hpp"

namespace locuskit {

/// h_k^(a)(x) = 1 - x - ... - x^{k-1} + a x^k + x^{k+1}/(1-x).
class StarFn {
 public:
  StarFn(int k, double a) : k_(k), a_(a) {
    if (k < 1) throw DomainError("star function needs k >= 1");
    if (!(a >= -1.0 && a <= 1.0)) throw DomainError("star function parameter outside [-1,1]: " + std::to_string(a));
    series_.prefix.assign(static_cast<std::size_t>(k) + 1, -1.0);
    series_.prefix[0] = 1.0;
    series_.prefix[k] = a;
    series_.tail = 1.0;
  }

  int k() const noexcept { return k_; }
  double a() const noexcept { return a_; }
  const RealTailSeries& series() const noexcept { return series_; }

  Jet jet(double x) const { return series_.jet(x); }
  double value(double x) const { return series_.value(x); }
  std::vector<double> sign_pattern() const { return series_.sign_pattern(); }

 private:
  int k_;
  double a_;
  RealTailSeries series_;
};

/// H_{k,l}^(a,b)(x) = 1 - sum_{i<k} x^i + a x^k + sum_{k<i<l} x^i + b x^l - x^{l+1}/(1-x).
class DoubleStarFn {
 public:
  DoubleStarFn(int k, int l, double a, double b) : k_(k), l_(l), a_(a), b_(b) {
    if (k < 1 || l <= k) throw DomainError("double star function needs 1 <= k < l");
    if (!(a >= -1.0 && a <= 1.0) || !(b >= -1.0 && b <= 1.0)) {
      throw DomainError("double star parameters outside [-1,1]");
    }
    series_ = base_series(k, l);
    series_.prefix[k] = a;
    series_.prefix[l] = b;
  }

  /// Coefficient pattern with a = b = 0.
  static RealTailSeries base_series(int k, int l) {
    RealTailSeries s;
    s.prefix.assign(static_cast<std::size_t>(l) + 1, 0.0);
    s.prefix[0] = 1.0;
    for (int i = 1; i < k; ++i) s.prefix[i] = -1.0;
    for (int i = k + 1; i < l; ++i) s.prefix[i] = 1.0;
    s.tail = -1.0;
    return s;
  }

  int k() const noexcept { return k_; }
  int l() const noexcept { return l_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const RealTailSeries& series() const noexcept { return series_; }

  Jet jet(double x) const { return series_.jet(x); }
  double value(double x) const { return series_.value(x); }
  std::vector<double> sign_pattern() const { return series_.sign_pattern(); }

 private:
  int k_, l_;
  double a_, b_;
  RealTailSeries series_;
};

struct PhiResult {
  double gamma = 0.0;
  double lambda = 0.0;
  StarFn witness{1, 0.0};
  int k_used = 0;
};

struct PsiResult {
  double gamma = 0.0;
  double lambda = 0.0;
  DoubleStarFn witness{1, 2, 0.0, 0.0};
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Endpoint guard for the open domains of phi and psi.
inline constexpr double kDomainGuard = 1e-9;
inline constexpr int kMaxStarK = 200;
inline constexpr int kPsiMaxK = 32;
inline constexpr int kPsiMaxL = 64;

/// The a making h_k^(a)(gamma) = 0 (any real; callers check |a| <= 1).
inline double solve_a(int k, double gamma) {
  if (k < 1) throw DomainError("solve_a needs k >= 1");
  detail::require_open_unit(gamma, "gamma");
  const double gk = std::pow(gamma, k);
  return (2.0 * gamma - 1.0 - gk - gk * gamma) / ((1.0 - gamma) * gk);
}

/// The larger of the two positive zeros of a star function, given the smaller.
inline double second_zero(const StarFn& h, double gamma) {
  detail::require_open_unit(gamma, "gamma");
  if (std::abs(h.value(gamma)) > 1e-9) throw DomainError("star function does not vanish at gamma");
  const double right = kDefaultRightEnd;
  // h' has one coefficient sign change, hence a single critical point.
  if (!(h.jet(0.0).d1 < 0.0) || !(h.jet(right).d1 > 0.0)) {
    throw NoSecondZero("star function has no interior minimum");
  }
  const double m = detail::bisect([&](double x) { return h.jet(x).d1; }, 0.0, right, 0.0);
  if (!(h.value(m) < 0.0)) throw NoSecondZero("star function does not dip below zero");
  if (!(h.value(right) > 0.0)) throw NoSecondZero("star function stays negative up to the right end");
  double lambda = detail::bisect([&](double x) { return h.value(x); }, m, right, 0.0);
  lambda = detail::newton_polish(h, lambda, m, right);
  return lambda;
}

/// Smallest double zero over [-1,1]-coefficient series: the root of
/// 2x^5 - 8x^2 + 11x - 4 in (0.5, 0.7).
inline double alpha2() {
  static const double value = detail::bisect(
      [](double x) { return ((2.0 * x * x * x - 8.0) * x + 11.0) * x - 4.0; }, 0.5, 0.7, 0.0);
  return value;
}

inline PhiResult phi(double gamma) {
  if (!(gamma > 0.5 + kDomainGuard && gamma < alpha2() - kDomainGuard)) {
    throw DomainError("phi is defined on (0.5, alpha2); got " + std::to_string(gamma));
  }
  for (int k = 1; k <= kMaxStarK; ++k) {
    const double a = solve_a(k, gamma);
    if (a >= -1.0 && a <= 1.0) {
      StarFn h(k, a);
      return PhiResult{gamma, second_zero(h, gamma), h, k};
    }
  }
  throw WindowExhausted("no star function with k <= " + std::to_string(kMaxStarK) + " vanishes at " +
                        std::to_string(gamma));
}

/// The (a, b) making H_{k,l}^(a,b) vanish to second order at lambda.
inline std::pair<double, double> solve_ab(int k, int l, double lambda) {
  if (k < 1 || l <= k) throw DomainError("solve_ab needs 1 <= k < l");
  detail::require_open_unit(lambda, "lambda");
  const Jet base = DoubleStarFn::base_series(k, l).jet(lambda);
  const double lb1 = lambda * base.d1;
  const double span = static_cast<double>(l - k);
  const double a = (lb1 - l * base.value) / (span * std::pow(lambda, k));
  const double b = (k * base.value - lb1) / (span * std::pow(lambda, l));
  return {a, b};
}

namespace detail {

enum class PsiInverseFailure { kNoAdmissiblePair, kMerged };

struct PsiInverseAttempt {
  std::optional<PsiResult> result;
  PsiInverseFailure failure = PsiInverseFailure::kNoAdmissiblePair;
};

/// First admissible (k, l) in scan order, if any.
inline std::optional<DoubleStarFn> admissible_double_star(double lambda) {
  for (int k = 1; k <= kPsiMaxK; ++k) {
    for (int l = k + 1; l <= kPsiMaxL; ++l) {
      const auto [a, b] = solve_ab(k, l, lambda);
      if (a >= -1.0 && a <= 1.0 && b >= -1.0 && b <= 1.0) return DoubleStarFn(k, l, a, b);
    }
  }
  return std::nullopt;
}

inline PsiInverseAttempt try_psi_inverse(double lambda) {
  PsiInverseAttempt attempt;
  bool any_admissible = false;
  for (int k = 1; k <= kPsiMaxK; ++k) {
    for (int l = k + 1; l <= kPsiMaxL; ++l) {
      const auto [a, b] = solve_ab(k, l, lambda);
      if (!(a >= -1.0 && a <= 1.0 && b >= -1.0 && b <= 1.0)) continue;
      any_admissible = true;
      DoubleStarFn h(k, l, a, b);
      // On (0, lambda) H' has one zero: the minimum between gamma and lambda.
      if (!(h.jet(0.0).d1 < 0.0)) continue;
      double lo = 0.0, hi = lambda;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (h.jet(mid).d1 < 0.0 ? lo : hi) = mid;
      }
      const double m = 0.5 * (lo + hi);
      if (!(h.value(m) < 0.0)) continue;
      double gamma = bisect([&](double x) { return h.value(x); }, 0.0, m, 0.0);
      gamma = newton_polish(h, gamma, 0.0, m);
      attempt.result = PsiResult{gamma, lambda, h};
      return attempt;
    }
  }
  attempt.failure = any_admissible ? PsiInverseFailure::kMerged : PsiInverseFailure::kNoAdmissiblePair;
  return attempt;
}

}  // namespace detail

/// Smallest triple zero over [-1,1]-coefficient series: the lambda at which
/// the simple zero of the optimal (**)-function merges into its double zero.
inline double alpha3() {
  static const double value = [] {
    // Left of the merge the double zero is a local minimum (H'' > 0), right of
    // it a local maximum.
    auto curvature = [](double lambda) {
      const auto h = detail::admissible_double_star(lambda);
      if (!h) throw BracketFailure("no admissible (**)-function near the triple zero");
      return h->jet(lambda).d2;
    };
    return detail::bisect(curvature, 0.70, 0.76, 0.0);
  }();
  return value;
}

struct AlphaConstants {
  double alpha2;
  double alpha3;
};

inline AlphaConstants alpha_constants() { return {alpha2(), alpha3()}; }

inline PsiResult psi_inverse(double lambda) {
  if (!(lambda > alpha3() + kDomainGuard && lambda < 1.0 - kDomainGuard)) {
    throw DomainError("psi_inverse is defined on (alpha3, 1); got " + std::to_string(lambda));
  }
  auto attempt = detail::try_psi_inverse(lambda);
  if (attempt.result) return *attempt.result;
  if (attempt.failure == detail::PsiInverseFailure::kNoAdmissiblePair) {
    throw WindowExhausted("no admissible (k,l) with k <= " + std::to_string(kPsiMaxK) + ", l <= " +
                          std::to_string(kPsiMaxL) + " at lambda " + std::to_string(lambda));
  }
  throw NoSecondZero("(**)-function at lambda " + std::to_string(lambda) + " has no simple zero below it");
}

inline PsiResult psi(double gamma) {
  const double a3 = alpha3();
  if (!(gamma > 0.5 + kDomainGuard && gamma < a3 - kDomainGuard)) {
    throw DomainError("psi is defined on (0.5, alpha3); got " + std::to_string(gamma));
  }
  // psi^{-1} decreases from alpha3 to 1/2 as lambda runs over (alpha3, 1).
  double lo = a3, hi = kDefaultRightEnd;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto attempt = detail::try_psi_inverse(mid);
    if (attempt.result) {
      (attempt.result->gamma > gamma ? lo : hi) = mid;
    } else if (attempt.failure == detail::PsiInverseFailure::kMerged) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  for (double lambda : {0.5 * (lo + hi), hi, lo}) {
    auto attempt = detail::try_psi_inverse(lambda);
    if (attempt.result && std::abs(attempt.result->gamma - gamma) <= 1e-8) {
      attempt.result->gamma = gamma;
      return *attempt.result;
    }
  }
  throw BracketFailure("psi bisection failed in bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

/// Maximal subintervals of (lo, hi) on which |coeff| <= 1, endpoints refined by
/// bisection.
inline std::vector<Interval> unit_coefficient_ranges(const std::function<double(double)>& coeff, double lo,
                                                     double hi, double step = 1e-3) {
  std::vector<Interval> out;
  auto inside = [&](double x) { return std::abs(coeff(x)) <= 1.0; };
  auto excess = [&](double x) { return std::abs(coeff(x)) - 1.0; };
  double prev = lo;
  bool prev_in = inside(prev);
  double start = prev;  // left end of the open range while prev_in
  for (double x = lo + step;; x += step) {
    const double cur = std::min(x, hi);
    const bool cur_in = inside(cur);
    if (cur_in != prev_in) {
      const double edge = detail::bisect(excess, prev, cur, 0.0);
      if (cur_in) {
        start = edge;
      } else {
        out.push_back({start, edge});
      }
    }
    prev = cur;
    prev_in = cur_in;
    if (cur >= hi) break;
  }
  if (prev_in) out.push_back({start, hi});
  return out;
}

/// gamma-ranges on which h_k^(a) with a = solve_a(k, gamma) has |a| <= 1.
inline std::vector<Interval> star_parameter_ranges(int k) {
  return unit_coefficient_ranges([k](double g) { return solve_a(k, g); }, 0.5 + kDomainGuard, kDefaultRightEnd);
}

/// lambda-ranges on which the a (resp. b) of solve_ab(k, l, lambda) lies in [-1,1].
inline std::vector<Interval> double_star_a_ranges(int k, int l) {
  return unit_coefficient_ranges([k, l](double x) { return solve_ab(k, l, x).first; }, 0.5 + kDomainGuard,
                                 kDefaultRightEnd);
}

inline std::vector<Interval> double_star_b_ranges(int k, int l) {
  return unit_coefficient_ranges([k, l](double x) { return solve_ab(k, l, x).second; }, 0.5 + kDomainGuard,
                                 kDefaultRightEnd);
}

}  // namespace locuskit
