#pragma once

// Certified exclusion of parameter pairs (gamma, lambda) from the
// connectedness locus, and bitmap rendering of the parameter plane.
//
// A pair is in the locus iff some f = 1 + sum b_n x^n with b_n in {-1,0,1}
// vanishes at both gamma and lambda. For a prefix polynomial P_n the tail of
// any continuation is bounded by x^{n+1}/(1-x), so a prefix with
// |P_n(x)| > x^{n+1}/(1-x) at either point has no vanishing continuation.
// Breadth-first search over prefixes: an empty level certifies exclusion.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locuskit/errors.hpp"
#include "locuskit/io.hpp"
#include "locuskit/parallel.hpp"

namespace locuskit {

enum class VerdictKind { kTrivialInside, kCertifiedOutside, kUndecided };

inline std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kTrivialInside:
      return "TrivialInside";
    case VerdictKind::kCertifiedOutside:
      return "CertifiedOutside";
    case VerdictKind::kUndecided:
      return "Undecided";
  }
  return "?";
}

struct MembershipVerdict {
  VerdictKind kind = VerdictKind::kUndecided;
  int depth = 0;            // level at which the search stopped
  std::size_t surviving = 0;  // prefixes alive at that level
  bool frontier_overflow = false;

  bool operator==(const MembershipVerdict&) const = default;
};

struct SearchLimits {
  /// Prefixes kept per level after merging; beyond this the search stops
  /// undecided.
  std::size_t frontier_limit = std::size_t{1} << 16;
};

/// Per-level allowance for rounding and merging, in absolute value units.
inline double level_slack(int n) { return std::ldexp(static_cast<double>(n), -40); }

/// Prefixes whose value pairs share a cell of this size are merged.
inline constexpr double kMergeQuantum = 0x1p-45;

/// Pairs with gamma * lambda >= 1/2 always lie in the locus.
inline bool trivial_inside(double gamma, double lambda) {
  if (!(gamma > 0.0 && gamma < 1.0 && lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("(gamma, lambda) must lie in (0,1)^2");
  }
  return gamma * lambda >= 0.5;
}

namespace detail {

struct Frontier {
  std::vector<double> at_gamma;
  std::vector<double> at_lambda;
  std::vector<std::uint32_t> parent;  // only filled when prefixes are tracked
  std::vector<std::int8_t> digit;

  std::size_t size() const { return at_gamma.size(); }
  void clear() {
    at_gamma.clear();
    at_lambda.clear();
    parent.clear();
    digit.clear();
  }
};

template <bool kTrack>
void merge_close_prefixes(Frontier& f) {
  const std::size_t n = f.size();
  std::vector<std::pair<long long, long long>> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    key[i] = {std::llround(f.at_gamma[i] / kMergeQuantum), std::llround(f.at_lambda[i] / kMergeQuantum)};
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key[a] < key[b]; });
  Frontier out;
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = order[j];
    if (j > 0 && key[i] == key[order[j - 1]]) continue;
    out.at_gamma.push_back(f.at_gamma[i]);
    out.at_lambda.push_back(f.at_lambda[i]);
    if constexpr (kTrack) {
      out.parent.push_back(f.parent[i]);
      out.digit.push_back(f.digit[i]);
    }
  }
  f = std::move(out);
}

struct SearchRun {
  MembershipVerdict verdict;
  std::vector<Frontier> levels;  // every level when tracked, else empty
  Frontier last;
};

/// Core search for an ordered pair gamma <= lambda outside the trivial region.
template <bool kTrack>
SearchRun run_search(double gamma, double lambda, int max_depth, const SearchLimits& limits) {
  SearchRun run;
  Frontier cur, next;
  cur.at_gamma.push_back(1.0);
  cur.at_lambda.push_back(1.0);
  if constexpr (kTrack) {
    cur.parent.push_back(0);
    cur.digit.push_back(1);
  }
  auto finish = [&](VerdictKind kind, int depth, bool overflow) {
    run.verdict = {kind, depth, kind == VerdictKind::kCertifiedOutside ? 0 : cur.size(), overflow};
    run.last = std::move(cur);
    return std::move(run);
  };
  const double rg = gamma / (1.0 - gamma), rl = lambda / (1.0 - lambda);
  if (!(1.0 <= rg && 1.0 <= rl)) {
    cur.clear();
    return finish(VerdictKind::kCertifiedOutside, 0, false);
  }
  if constexpr (kTrack) run.levels.push_back(cur);

  double gp = 1.0, lp = 1.0;
  for (int n = 1; n <= max_depth; ++n) {
    gp *= gamma;
    lp *= lambda;
    const double tg = gp * rg + level_slack(n);
    const double tl = lp * rl + level_slack(n);
    next.clear();
    const std::size_t m = cur.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double vg = cur.at_gamma[i], vl = cur.at_lambda[i];
      for (int b = -1; b <= 1; ++b) {
        const double ng = vg + b * gp;
        const double nl = vl + b * lp;
        if (std::abs(ng) <= tg && std::abs(nl) <= tl) {
          next.at_gamma.push_back(ng);
          next.at_lambda.push_back(nl);
          if constexpr (kTrack) {
            next.parent.push_back(static_cast<std::uint32_t>(i));
            next.digit.push_back(static_cast<std::int8_t>(b));
          }
        }
      }
    }
    std::swap(cur, next);
    if (cur.size() == 0) return finish(VerdictKind::kCertifiedOutside, n, false);
    if (cur.size() > limits.frontier_limit) {
      merge_close_prefixes<kTrack>(cur);
      if (cur.size() > limits.frontier_limit) return finish(VerdictKind::kUndecided, n, true);
    }
    if constexpr (kTrack) run.levels.push_back(cur);
  }
  return finish(VerdictKind::kUndecided, max_depth, false);
}

inline void check_search_args(double gamma, double lambda, int max_depth) {
  if (!(gamma > 0.0 && gamma < 1.0 && lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("(gamma, lambda) must lie in (0,1)^2");
  }
  if (max_depth < 1) throw DomainError("search depth must be >= 1");
}

}  // namespace detail

/// Tri-state verdict without throwing on frontier overflow (the verdict is
/// then Undecided with frontier_overflow set). The pair may be given in
/// either order.
inline MembershipVerdict classify_point(double gamma, double lambda, int max_depth, const SearchLimits& limits = {}) {
  detail::check_search_args(gamma, lambda, max_depth);
  if (trivial_inside(gamma, lambda)) return {VerdictKind::kTrivialInside, 0, 1, false};
  const auto [g, l] = std::minmax(gamma, lambda);
  return detail::run_search<false>(g, l, max_depth, limits).verdict;
}

/// As classify_point, but a frontier overflow raises FrontierOverflow instead
/// of returning a verdict.
inline MembershipVerdict certify_outside(double gamma, double lambda, int max_depth, const SearchLimits& limits = {}) {
  const auto v = classify_point(gamma, lambda, max_depth, limits);
  if (v.frontier_overflow) {
    throw FrontierOverflow("frontier overflow: more than " + std::to_string(limits.frontier_limit) +
                           " prefixes at level " + std::to_string(v.depth));
  }
  return v;
}

/// Surviving prefix (b_0 = 1, ..., b_depth) whose normalized values
/// |P(x)| (1-x) / x^{depth+1} have the smallest maximum over both points;
/// empty iff the pair is certified outside by `depth`.
inline std::optional<std::vector<int>> find_witness(double gamma, double lambda, int depth,
                                                    const SearchLimits& limits = {}) {
  detail::check_search_args(gamma, lambda, depth);
  const auto [g, l] = std::minmax(gamma, lambda);
  auto run = detail::run_search<true>(g, l, depth, limits);
  if (run.verdict.frontier_overflow) {
    throw FrontierOverflow("frontier overflow at level " + std::to_string(run.verdict.depth));
  }
  if (run.verdict.kind == VerdictKind::kCertifiedOutside) return std::nullopt;
  const auto& top = run.levels.back();
  const double sg = (1.0 - g) / std::pow(g, depth + 1);
  const double sl = (1.0 - l) / std::pow(l, depth + 1);
  std::size_t best = 0;
  double best_score = INFINITY;
  for (std::size_t i = 0; i < top.size(); ++i) {
    const double score = std::max(std::abs(top.at_gamma[i]) * sg, std::abs(top.at_lambda[i]) * sl);
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  std::vector<int> digits(static_cast<std::size_t>(depth) + 1);
  std::size_t idx = best;
  for (int n = depth; n >= 1; --n) {
    digits[n] = run.levels[n].digit[idx];
    idx = run.levels[n].parent[idx];
  }
  digits[0] = 1;
  return digits;
}

/// Closed rectangle of parameter pairs.
struct ParameterBox {
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

namespace detail {

// One coordinate of a box: center c, half-width r, right end c + r.
struct BoxAxis {
  double c, r, hi, curv;  // curv bounds |P''|/2 on the axis for digits in {-1,0,1}

  BoxAxis(double lo, double hi_) : c(0.5 * (lo + hi_)), r(0.5 * (hi_ - lo)), hi(hi_) {
    const double q = 1.0 / (1.0 - hi);
    curv = q * q * q;
  }

  // Lower bound of |P| over the axis interval, from P(c) and P'(c).
  bool may_vanish(double v, double d, double tail) const {
    return std::abs(v) - r * std::abs(d) - r * r * curv <= tail;
  }
};

inline MembershipVerdict run_box_search(const BoxAxis& ga, const BoxAxis& la, int max_depth,
                                        const SearchLimits& limits) {
  // Per prefix: value and slope at both centers.
  std::vector<std::array<double, 4>> cur{{1.0, 0.0, 1.0, 0.0}}, next;
  const double rg = ga.hi / (1.0 - ga.hi), rl = la.hi / (1.0 - la.hi);
  if (!(ga.may_vanish(1.0, 0.0, rg) && la.may_vanish(1.0, 0.0, rl))) return {VerdictKind::kCertifiedOutside, 0, 0, false};
  double gp = 1.0, lp = 1.0, gh = 1.0, lh = 1.0;
  for (int n = 1; n <= max_depth; ++n) {
    const double gd = n * gp, ld = n * lp;  // d/dx x^n at the centers
    gp *= ga.c;
    lp *= la.c;
    gh *= ga.hi;
    lh *= la.hi;
    const double tg = gh * rg + level_slack(n), tl = lh * rl + level_slack(n);
    next.clear();
    for (const auto& p : cur) {
      for (int b = -1; b <= 1; ++b) {
        const std::array<double, 4> q{p[0] + b * gp, p[1] + b * gd, p[2] + b * lp, p[3] + b * ld};
        if (ga.may_vanish(q[0], q[1], tg) && la.may_vanish(q[2], q[3], tl)) next.push_back(q);
      }
    }
    std::swap(cur, next);
    if (cur.empty()) return {VerdictKind::kCertifiedOutside, n, 0, false};
    // Slopes keep near-equal prefixes apart, so merging as in the point
    // search does not shrink box frontiers.
    if (cur.size() > limits.frontier_limit) return {VerdictKind::kUndecided, n, cur.size(), true};
  }
  return {VerdictKind::kUndecided, max_depth, cur.size(), false};
}

}  // namespace detail

/// Verdict for a whole box: CertifiedOutside means no pair in the box lies in
/// the locus. TrivialInside only when every pair of the box is trivial.
inline MembershipVerdict classify_box(const ParameterBox& box, int max_depth, const SearchLimits& limits = {}) {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!(in_unit(box.gamma_lo) && in_unit(box.gamma_hi) && in_unit(box.lambda_lo) && in_unit(box.lambda_hi))) {
    throw DomainError("box must lie in (0,1)^2");
  }
  if (!(box.gamma_lo <= box.gamma_hi && box.lambda_lo <= box.lambda_hi)) throw DomainError("box bounds are reversed");
  if (max_depth < 1) throw DomainError("search depth must be >= 1");
  if (box.gamma_lo * box.lambda_lo >= 0.5) return {VerdictKind::kTrivialInside, 0, 1, false};
  return detail::run_box_search({box.gamma_lo, box.gamma_hi}, {box.lambda_lo, box.lambda_hi}, max_depth, limits);
}

struct Palette {
  std::uint8_t certified_outside = 255;
  std::uint8_t undecided = 0;
  std::uint8_t trivial_inside = 128;

  std::uint8_t operator()(VerdictKind k) const {
    switch (k) {
      case VerdictKind::kCertifiedOutside:
        return certified_outside;
      case VerdictKind::kTrivialInside:
        return trivial_inside;
      case VerdictKind::kUndecided:
        break;
    }
    return undecided;
  }
};

struct GridSpec {
  double gamma_min = 0.5;
  double gamma_max = 0.999;
  double lambda_min = 0.5;
  double lambda_max = 0.999;
  int width = 256;
  int height = 256;
  int depth = 40;
  Palette palette{};
  /// Smaller than the single-point default: past 2^14 the extra white pixels
  /// are rare and the cost per undecided pixel doubles with each step.
  SearchLimits limits{std::size_t{1} << 14};

  void validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!(in_unit(gamma_min) && in_unit(gamma_max) && in_unit(lambda_min) && in_unit(lambda_max))) {
      throw DomainError("grid ranges must lie in (0,1)");
    }
    if (!(gamma_min <= gamma_max && lambda_min <= lambda_max)) throw DomainError("grid ranges are reversed");
    if (width < 1 || height < 1) throw DomainError("grid needs at least one pixel");
    if (depth < 1) throw DomainError("render depth must be >= 1");
  }

  double gamma_step() const { return (gamma_max - gamma_min) / width; }
  double lambda_step() const { return (lambda_max - lambda_min) / height; }

  /// gamma at the center of column `col` (increasing rightward).
  double gamma_at(int col) const { return gamma_min + (col + 0.5) * gamma_step(); }

  /// lambda at the center of row `row` (decreasing downward). Indexed from
  /// the bottom so that on a square grid mirrored pixels get identical values.
  double lambda_at(int row) const { return lambda_min + ((height - 1 - row) + 0.5) * lambda_step(); }

  ParameterBox pixel_box(int col, int row) const {
    const int lrow = height - 1 - row;
    return {gamma_min + col * gamma_step(), gamma_min + (col + 1) * gamma_step(), lambda_min + lrow * lambda_step(),
            lambda_min + (lrow + 1) * lambda_step()};
  }
};

struct RenderResult {
  GrayImage image;
  std::vector<MembershipVerdict> verdicts;  // row-major, same layout as the image
};

/// Grey where the pixel center is trivially inside, white where the whole
/// pixel box is certified outside, black otherwise; the black and grey pixels
/// together cover the locus. Mirror images across the diagonal share one
/// search, and the output does not depend on scheduling.
inline RenderResult render(const GridSpec& grid, unsigned threads = default_thread_count()) {
  grid.validate();
  const auto npix = static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height);
  RenderResult out{GrayImage(grid.width, grid.height), std::vector<MembershipVerdict>(npix)};

  using Key = std::array<double, 4>;
  std::map<Key, std::size_t> task_of;
  std::vector<ParameterBox> tasks;
  std::vector<std::size_t> pixel_task(npix, SIZE_MAX);
  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      const std::size_t p = static_cast<std::size_t>(row) * grid.width + col;
      if (trivial_inside(grid.gamma_at(col), grid.lambda_at(row))) {
        out.verdicts[p] = {VerdictKind::kTrivialInside, 0, 1, false};
        continue;
      }
      auto box = grid.pixel_box(col, row);
      if (box.lambda_lo < box.gamma_lo) box = {box.lambda_lo, box.lambda_hi, box.gamma_lo, box.gamma_hi};
      const Key key{box.gamma_lo, box.gamma_hi, box.lambda_lo, box.lambda_hi};
      auto [it, inserted] = task_of.try_emplace(key, tasks.size());
      if (inserted) tasks.push_back(box);
      pixel_task[p] = it->second;
    }
  }
  std::vector<MembershipVerdict> results(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    results[t] = detail::run_box_search({tasks[t].gamma_lo, tasks[t].gamma_hi},
                                        {tasks[t].lambda_lo, tasks[t].lambda_hi}, grid.depth, grid.limits);
  });
  for (std::size_t p = 0; p < npix; ++p) {
    if (pixel_task[p] != SIZE_MAX) out.verdicts[p] = results[pixel_task[p]];
    out.image.pixels[p] = grid.palette(out.verdicts[p].kind);
  }
  return out;
}

/// CSV `gamma,lambda,verdict,depth,surviving`, one row per pixel.
inline std::string verdict_csv(const GridSpec& grid, const RenderResult& r) {
  CsvWriter csv({"gamma", "lambda", "verdict", "depth", "surviving"});
  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      const auto& v = r.verdicts[static_cast<std::size_t>(row) * grid.width + col];
      csv.row(grid.gamma_at(col), grid.lambda_at(row), to_string(v.kind), v.depth, v.surviving);
    }
  }
  return csv.str();
}

}  // namespace locuskit
