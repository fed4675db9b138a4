#pragma once

// Cusp corners of the locus: a witness h in class B with tail +1 and simple
// zeros gamma0 < lambda0 (h' < 0 at gamma0, h' > 0 at lambda0). Locus points
// near (gamma0, lambda0) come from perturbations f = h - x^N R, R with
// coefficients in {0,1}, whose zeros move to gamma~ < gamma0 and
// lambda~ > lambda0 and satisfy
//   c1 (gamma0 - gamma~)^alpha <= lambda~ - lambda0 <= c2 (gamma0 - gamma~)^alpha,
// alpha = log(lambda0) / log(gamma0).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locuskit/errors.hpp"
#include "locuskit/io.hpp"
#include "locuskit/parallel.hpp"
#include "locuskit/series_core.hpp"
#include "locuskit/star_functions.hpp"

namespace locuskit {

struct CornerEnvelope {
  double gamma0 = 0.0;
  double lambda0 = 0.0;
  double alpha = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  TernarySeries h{{1}, 1};
  /// True when h has the shape 1 - x - ... - x^{k-1} + a x^k + x^{k+1}/(1-x);
  /// for other witnesses uniqueness is assumed, not checked.
  bool star_witness = false;
};

/// h has the (*)-shape with an integer middle coefficient.
inline bool is_star_shaped(const TernarySeries& h) {
  if (h.tail() != 1) return false;
  const auto& p = h.prefix();
  std::size_t i = 1;
  while (i < p.size() && p[i] == -1) ++i;
  if (i == 1) return false;
  // p[i] is the free coefficient (any digit); everything after it is +1.
  for (std::size_t j = i + 1; j < p.size(); ++j) {
    if (p[j] != 1) return false;
  }
  return true;
}

namespace detail {

inline double refine_zero(const TernarySeries& h, Interval bracket, const char* which) {
  if (!(bracket.lo > 0.0 && bracket.hi < 1.0 && bracket.lo < bracket.hi)) {
    throw DomainError(std::string(which) + " bracket must be an increasing interval inside (0,1)");
  }
  const double flo = h.value(bracket.lo), fhi = h.value(bracket.hi);
  if (!((flo < 0.0) != (fhi < 0.0))) {
    throw NotCornerWitness(std::string("no sign change of h in the ") + which + " bracket");
  }
  const double z = bisect([&](double x) { return h.value(x); }, bracket.lo, bracket.hi, 0.0);
  return newton_polish(h, z, bracket.lo, bracket.hi);
}

}  // namespace detail

/// Envelope from caller-supplied brackets around gamma0 and lambda0.
inline CornerEnvelope corner_envelope(const TernarySeries& h, Interval bracket_gamma, Interval bracket_lambda) {
  if (h.tail() != 1) throw DomainError("corner witness must have tail digit +1");
  CornerEnvelope env;
  env.h = h;
  env.gamma0 = detail::refine_zero(h, bracket_gamma, "gamma");
  env.lambda0 = detail::refine_zero(h, bracket_lambda, "lambda");
  const double dg = h.jet(env.gamma0).d1;
  const double dl = h.jet(env.lambda0).d1;
  if (!(env.gamma0 < env.lambda0) || !(dg < 0.0) || !(dl > 0.0)) {
    throw NotCornerWitness("not a corner witness: need gamma0 < lambda0, h'(gamma0) < 0 < h'(lambda0)");
  }
  const double g0 = env.gamma0, l0 = env.lambda0, a = std::log(l0) / std::log(g0);
  env.alpha = a;
  const double lead = 2.0 * std::pow(std::abs(dg), a) / std::pow(2.0, a);
  env.c1 = lead * std::pow(1.0 - g0, a) / (3.0 * dl);
  env.c2 = std::pow(3.0, a) * lead / ((1.0 - l0) * dl);
  env.star_witness = is_star_shaped(h);
  return env;
}

/// Envelope with brackets taken from the first two positive zeros of h.
inline CornerEnvelope corner_envelope(const TernarySeries& h) {
  if (h.tail() != 1) throw DomainError("corner witness must have tail digit +1");
  const auto zl = positive_zeros(h);
  if (zl.zeros.size() < 2 || zl.zeros[0].multiplicity != 1 || zl.zeros[1].multiplicity != 1) {
    throw NotCornerWitness("not a corner witness: h needs two simple positive zeros");
  }
  constexpr double w = 5e-3;
  const double g = zl.zeros[0].location, l = zl.zeros[1].location;
  const double mid = 0.5 * (g + l);
  return corner_envelope(h, {std::max(g - w, 0.5 * g), std::min(g + w, mid)},
                         {std::max(l - w, mid), std::min(l + w, 0.5 * (l + 1.0))});
}

/// h - x^N R as a real-coefficient series.
inline RealTailSeries perturbed_series(const TernarySeries& h, int N, const DigitSeries& R) {
  const auto hp = h.prefix().size(), rp = R.prefix().size();
  const std::size_t len = std::max(hp, static_cast<std::size_t>(N) + rp);
  RealTailSeries f;
  f.prefix.resize(len);
  for (std::size_t n = 0; n < len; ++n) {
    double c = h.coefficient(n);
    if (n >= static_cast<std::size_t>(N)) c -= R.coefficient(n - static_cast<std::size_t>(N));
    f.prefix[n] = c;
  }
  f.tail = static_cast<double>(h.tail() - R.tail());
  return f;
}

/// Upper bounds on gamma0 - gamma~ and lambda~ - lambda0 for the
/// perturbation (N, R): 2 x0^N R(x0) / |h'(x0)| at each zero.
inline std::pair<double, double> displacement_upper_bounds(const CornerEnvelope& env, int N, const DigitSeries& R) {
  const double rg = R.value(env.gamma0), rl = R.value(env.lambda0);
  const double dg = std::abs(env.h.jet(env.gamma0).d1), dl = env.h.jet(env.lambda0).d1;
  return {2.0 * std::pow(env.gamma0, N) * rg / dg, 2.0 * std::pow(env.lambda0, N) * rl / dl};
}

inline std::pair<double, double> displacement_lower_bounds(const CornerEnvelope& env, int N, const DigitSeries& R) {
  const auto [ug, ul] = displacement_upper_bounds(env, N, R);
  return {ug / 3.0, ul / 3.0};
}

/// Zeros (gamma~, lambda~) of h - x^N R next to the corner, searched in
/// [gamma0 - 2u, gamma0) and (lambda0, lambda0 + 2u] with u the displacement
/// upper bound at each zero.
inline std::pair<double, double> perturbed_zeros(const CornerEnvelope& env, int N, const DigitSeries& R) {
  if (N < 1) throw DomainError("perturbation exponent must be >= 1");
  if (R.is_zero()) throw DomainError("perturbation R must not vanish identically");
  for (int d : R.prefix()) {
    if (d < 0) throw DomainError("perturbation digits must lie in {0,1}");
  }
  if (R.tail() < 0) throw DomainError("perturbation digits must lie in {0,1}");

  const auto f = perturbed_series(env.h, N, R);
  const auto fval = [&](double x) { return f.value(x); };
  const auto [ug, ul] = displacement_upper_bounds(env, N, R);
  const std::string where = "N too small: N = " + std::to_string(N);

  const double glo = env.gamma0 - 2.0 * ug;
  if (!(glo > 0.0) || !(fval(glo) > 0.0) || !(fval(env.gamma0) < 0.0)) {
    throw PerturbationTooSmall(where + ", no zero left of gamma0");
  }
  const double lhi = env.lambda0 + 2.0 * ul;
  if (!(lhi < 1.0) || !(fval(lhi) > 0.0) || !(fval(env.lambda0) < 0.0)) {
    throw PerturbationTooSmall(where + ", no zero right of lambda0");
  }
  double g = detail::bisect(fval, glo, env.gamma0, 0.0);
  double l = detail::bisect(fval, env.lambda0, lhi, 0.0);
  g = detail::newton_polish(f, g, glo, env.gamma0);
  l = detail::newton_polish(f, l, env.lambda0, lhi);
  return {g, l};
}

inline std::pair<double, double> perturbed_zeros(const TernarySeries& h, int N, const DigitSeries& R) {
  return perturbed_zeros(corner_envelope(h), N, R);
}

struct RSample {
  std::string id;
  DigitSeries series;
};

/// 1/(1-x), 1 and 1+x.
inline std::vector<RSample> standard_r_samples() {
  return {{"geometric", DigitSeries({1}, 1)}, {"one", DigitSeries({1}, 0)}, {"one_plus_x", DigitSeries({1, 1}, 0)}};
}

struct CornerCheckRow {
  int N = 0;
  std::string r_id;
  double gamma_tilde = 0.0;
  double lambda_tilde = 0.0;
  double ratio = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool pass = false;
};

struct CornerReport {
  std::vector<CornerCheckRow> rows;

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
  }

  /// "(N, R_id)" for every failing row, comma separated.
  std::string failures() const {
    std::string out;
    for (const auto& r : rows) {
      if (r.pass) continue;
      if (!out.empty()) out += ", ";
      out += "(" + std::to_string(r.N) + ", " + r.r_id + ")";
    }
    return out;
  }

  std::string csv() const {
    CsvWriter w({"N", "R_id", "gamma_tilde", "lambda_tilde", "ratio", "c1", "c2", "pass"});
    for (const auto& r : rows) w.row(r.N, r.r_id, r.gamma_tilde, r.lambda_tilde, r.ratio, r.c1, r.c2, r.pass);
    return w.str();
  }
};

/// Ratio (lambda~ - lambda0) / (gamma0 - gamma~)^alpha for every N in
/// [n_lo, n_hi] and every sample, rows ordered by (N, sample index).
/// PerturbationTooSmall propagates.
inline CornerReport corner_membership_check(const CornerEnvelope& env, int n_lo, int n_hi,
                                            const std::vector<RSample>& samples,
                                            unsigned threads = default_thread_count()) {
  if (n_lo > n_hi) throw DomainError("empty N range");
  CornerReport report;
  if (samples.empty()) return report;
  const auto per_n = samples.size();
  report.rows.resize(static_cast<std::size_t>(n_hi - n_lo + 1) * per_n);
  parallel_for(report.rows.size(), threads, [&](std::size_t i) {
    const int N = n_lo + static_cast<int>(i / per_n);
    const auto& s = samples[i % per_n];
    const auto [g, l] = perturbed_zeros(env, N, s.series);
    CornerCheckRow row;
    row.N = N;
    row.r_id = s.id;
    row.gamma_tilde = g;
    row.lambda_tilde = l;
    row.ratio = (l - env.lambda0) / std::pow(env.gamma0 - g, env.alpha);
    row.c1 = env.c1;
    row.c2 = env.c2;
    row.pass = env.c1 <= row.ratio && row.ratio <= env.c2;
    report.rows[i] = std::move(row);
  });
  return report;
}

}  // namespace locuskit
