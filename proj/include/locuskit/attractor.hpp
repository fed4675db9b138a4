#pragma once

// Attractor E = TE u (TE + b) of the pair of affine maps x -> Tx, x -> Tx + b,
// approximated by the partial sums sum_{n<d} a_n T^n b with a_n in {0,1}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "locuskit/errors.hpp"
#include "locuskit/io.hpp"
#include "locuskit/locus_membership.hpp"
#include "locuskit/parallel.hpp"

namespace locuskit {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

enum class NormalForm { kRotation, kDiagonal, kJordan };

class AffinePair {
 public:
  /// T = [[a, -b], [b, a]], multiplication by a + ib.
  static AffinePair rotation(double a, double b, Vec2 shift = {1.0, 0.0}) {
    if (!(a * a + b * b < 1.0)) throw DomainError("rotation form needs a^2 + b^2 < 1");
    return AffinePair(NormalForm::kRotation, {a, -b, b, a}, shift, {a, b});
  }

  /// T = diag(gamma, lambda).
  static AffinePair diagonal(double gamma, double lambda, Vec2 shift = {1.0, 1.0}) {
    if (!(std::abs(gamma) < 1.0 && std::abs(lambda) < 1.0)) throw DomainError("diagonal form needs |gamma|, |lambda| < 1");
    if (gamma == lambda) throw DomainError("diagonal form needs gamma != lambda");
    return AffinePair(NormalForm::kDiagonal, {gamma, 0.0, 0.0, lambda}, shift, {gamma, lambda});
  }

  /// T = [[lambda, 1], [0, lambda]].
  static AffinePair jordan(double lambda, Vec2 shift = {0.0, 1.0}) {
    if (!(std::abs(lambda) < 1.0)) throw DomainError("jordan form needs |lambda| < 1");
    return AffinePair(NormalForm::kJordan, {lambda, 1.0, 0.0, lambda}, shift, {lambda, 0.0});
  }

  NormalForm form() const noexcept { return form_; }
  const std::array<double, 4>& matrix() const noexcept { return t_; }
  Vec2 shift() const noexcept { return b_; }

  Vec2 apply(Vec2 v) const { return {t_[0] * v.x + t_[1] * v.y, t_[2] * v.x + t_[3] * v.y}; }

  /// Upper bound on sum_{n >= d} |T^n b| (Euclidean norm).
  double tail_radius(int d) const {
    if (d < 0) throw DomainError("tail radius needs d >= 0");
    switch (form_) {
      case NormalForm::kRotation: {
        const double r = std::hypot(p_[0], p_[1]);
        return std::pow(r, d) * std::hypot(b_.x, b_.y) / (1.0 - r);
      }
      case NormalForm::kDiagonal: {
        const double g = std::abs(p_[0]), l = std::abs(p_[1]);
        return std::pow(g, d) * std::abs(b_.x) / (1.0 - g) + std::pow(l, d) * std::abs(b_.y) / (1.0 - l);
      }
      case NormalForm::kJordan: {
        // T^n b = (l^n b1 + n l^{n-1} b2, l^n b2).
        const double l = std::abs(p_[0]);
        const double geo = std::pow(l, d) / (1.0 - l);
        const double lin = (d > 0 ? d * std::pow(l, d - 1) / (1.0 - l) : 0.0) + std::pow(l, d) / ((1.0 - l) * (1.0 - l));
        return geo * (std::abs(b_.x) + std::abs(b_.y)) + lin * std::abs(b_.y);
      }
    }
    return std::numeric_limits<double>::infinity();
  }

 private:
  AffinePair(NormalForm form, std::array<double, 4> t, Vec2 b, std::array<double, 2> params)
      : form_(form), t_(t), b_(b), p_(params) {
    const Vec2 tb = apply(b_);
    if (b_.x * tb.y - b_.y * tb.x == 0.0) throw DomainError("translation vector is not cyclic for T");
  }

  NormalForm form_;
  std::array<double, 4> t_;
  Vec2 b_;
  std::array<double, 2> p_;
};

inline constexpr int kMaxCloudDepth = 24;

struct PointCloud {
  std::vector<Vec2> points;  // index bit n is the digit a_n
  int depth = 0;
  double tail_radius = 0.0;
};

/// All 2^depth partial sums, with point i using digits a_n = bit n of i.
inline PointCloud attractor_points(const AffinePair& pair, int depth, unsigned threads = default_thread_count()) {
  if (depth < 0 || depth > kMaxCloudDepth) {
    throw DomainError("cloud depth must lie in [0, " + std::to_string(kMaxCloudDepth) + "]");
  }
  PointCloud cloud;
  cloud.depth = depth;
  cloud.tail_radius = pair.tail_radius(depth);
  std::vector<Vec2> cur{Vec2{}}, next;
  const Vec2 b = pair.shift();
  constexpr std::size_t kBlock = 1 << 12;
  for (int level = 0; level < depth; ++level) {
    next.resize(cur.size() * 2);
    const std::size_t blocks = (cur.size() + kBlock - 1) / kBlock;
    parallel_for(blocks, threads, [&](std::size_t blk) {
      const std::size_t end = std::min(cur.size(), (blk + 1) * kBlock);
      for (std::size_t j = blk * kBlock; j < end; ++j) {
        const Vec2 t = pair.apply(cur[j]);
        next[2 * j] = t;
        next[2 * j + 1] = {t.x + b.x, t.y + b.y};
      }
    });
    std::swap(cur, next);
  }
  cloud.points = std::move(cur);
  return cloud;
}

/// Lower bound on the distance between TE and TE + b, from the depth-(d+1)
/// cloud minus twice its tail radius, clamped at 0. Positive means TE and
/// TE + b are disjoint, so E is disconnected.
inline double hata_gap(const AffinePair& pair, int depth, unsigned threads = default_thread_count()) {
  if (depth < 0 || depth > kMaxCloudDepth) {
    throw DomainError("cloud depth must lie in [0, " + std::to_string(kMaxCloudDepth) + "]");
  }
  // Even points of the depth-(d+1) cloud are T * cloud(d); odd ones add b.
  auto cloud = attractor_points(pair, depth, threads);
  const double tail = pair.tail_radius(depth + 1);
  const double cell = 4.0 * tail;
  if (!(cell > 0.0) || !std::isfinite(cell)) return 0.0;
  std::vector<Vec2>& left = cloud.points;
  for (auto& p : left) p = pair.apply(p);
  const Vec2 b = pair.shift();

  auto key = [cell](double x, double y) {
    const auto cx = static_cast<std::int64_t>(std::floor(x / cell));
    const auto cy = static_cast<std::int64_t>(std::floor(y / cell));
    return std::pair{cx, cy};
  };
  auto pack = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
  };
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
  grid.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    const auto [cx, cy] = key(left[i].x, left[i].y);
    grid[pack(cx, cy)].push_back(static_cast<std::uint32_t>(i));
  }
  // Distances below `cell` are exact; larger ones are capped at `cell`.
  double best = cell;
  for (const auto& p : left) {
    const double qx = p.x + b.x, qy = p.y + b.y;
    const auto [cx, cy] = key(qx, qy);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find(pack(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (auto j : it->second) {
          const double d = std::hypot(qx - left[j].x, qy - left[j].y);
          if (d < best) {
            best = d;
            if (best <= 2.0 * tail) return 0.0;
          }
        }
      }
    }
  }
  return std::max(0.0, best - 2.0 * tail);
}

struct ConnectivityReport {
  MembershipVerdict verdict;
  double gap = 0.0;
  int hata_depth = 0;
  bool consistent = true;
};

/// Algebraic verdict and geometric gap for diag(gamma, lambda), b = (1,1).
/// A positive gap together with a TrivialInside verdict is a contradiction
/// and raises std::logic_error.
inline ConnectivityReport connectivity_cross_check(double gamma, double lambda, int depth, int hata_depth = 20,
                                                   const SearchLimits& limits = {}) {
  if (gamma == lambda) throw DomainError("cross check needs gamma != lambda");
  ConnectivityReport r;
  r.verdict = classify_point(gamma, lambda, depth, limits);
  r.hata_depth = std::min(hata_depth, kMaxCloudDepth);
  r.gap = hata_gap(AffinePair::diagonal(gamma, lambda), r.hata_depth);
  r.consistent = !(r.gap > 0.0 && r.verdict.kind == VerdictKind::kTrivialInside);
  if (!r.consistent) {
    throw std::logic_error("positive Hata gap at a trivially connected pair (" + format_number(gamma) + ", " +
                           format_number(lambda) + ")");
  }
  return r;
}

/// CSV `x,y`.
inline std::string cloud_csv(const PointCloud& cloud) {
  CsvWriter w({"x", "y"});
  for (const auto& p : cloud.points) w.row(p.x, p.y);
  return w.str();
}

/// Points drawn black (0) on white over the bounding box; row 0 is the top.
inline GrayImage rasterize(const PointCloud& cloud, int width, int height) {
  if (width < 1 || height < 1) throw DomainError("raster needs at least one pixel");
  GrayImage img(width, height, 255);
  if (cloud.points.empty()) return img;
  double x0 = cloud.points[0].x, x1 = x0, y0 = cloud.points[0].y, y1 = y0;
  for (const auto& p : cloud.points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double sx = x1 > x0 ? width / (x1 - x0) : 0.0;
  const double sy = y1 > y0 ? height / (y1 - y0) : 0.0;
  for (const auto& p : cloud.points) {
    const int col = std::clamp(static_cast<int>((p.x - x0) * sx), 0, width - 1);
    const int row = height - 1 - std::clamp(static_cast<int>((p.y - y0) * sy), 0, height - 1);
    img.at(col, row) = 0;
  }
  return img;
}

}  // namespace locuskit
