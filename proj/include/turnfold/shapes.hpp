#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "turnfold/grid.hpp"

namespace turnfold {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using PointSet = std::unordered_set<GridPoint, GridPointHash>;

namespace detail {

inline bool connected(std::span<const GridPoint> points, bool allow_w) {
  if (points.empty()) return true;
  PointSet all(points.begin(), points.end());
  PointSet seen{points.front()};
  std::vector<GridPoint> stack{points.front()};
  while (!stack.empty()) {
    auto p = stack.back();
    stack.pop_back();
    for (int k = 0; k < 6; ++k) {
      if (!allow_w && (k == 2 || k == 5)) continue;
      auto q = p + Direction(k);
      if (all.count(q) && seen.insert(q).second) stack.push_back(q);
    }
  }
  return seen.size() == all.size();
}

}  // namespace detail

// A finite connected set of grid points, stored sorted by (y, x).
class Shape {
 public:
  explicit Shape(std::vector<GridPoint> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    if (points_.empty()) throw ShapeError("a shape needs at least one point");
    if (!detail::connected(points_, true)) throw ShapeError("shape is not connected");
  }

  const std::vector<GridPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool contains(GridPoint p) const { return std::binary_search(points_.begin(), points_.end(), p); }
  PointSet set() const { return {points_.begin(), points_.end()}; }

  Shape translated(GridPoint offset) const {
    auto pts = points_;
    for (auto& p : pts) p += offset;
    return Shape(std::move(pts));
  }

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<GridPoint> points_;
};

// An ordered simple lattice path of unit steps.
class Path {
 public:
  explicit Path(std::vector<GridPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ShapeError("a path needs at least one point");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
      if (!adjacent(points_[i], points_[i + 1]))
        throw ShapeError("path step " + std::to_string(i) + " is not a unit step");
    PointSet seen;
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (!seen.insert(points_[i]).second)
        throw ShapeError("path is not simple: point " + std::to_string(i) + " repeats");
  }

  const std::vector<GridPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  GridPoint front() const { return points_.front(); }

  Direction step(std::size_t i) const {
    Direction d;
    direction_of(points_[i + 1] - points_[i], d);
    return d;
  }

  Path translated(GridPoint offset) const {
    auto pts = points_;
    for (auto& p : pts) p += offset;
    return Path(std::move(pts));
  }
  Path reversed() const { return Path({points_.rbegin(), points_.rend()}); }
  Shape shape() const { return Shape(points_); }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<GridPoint> points_;
};

// ---------------------------------------------------------------------------
// Generators

inline Shape square(std::size_t n) {
  if (n == 0) throw ShapeError("square side must be at least 1");
  std::vector<GridPoint> pts;
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) pts.push_back({std::int32_t(x), std::int32_t(y)});
  return Shape(std::move(pts));
}

// Plus sign centred on the origin with width-1 arms along x and y.
inline Shape cross(std::size_t arm_len) {
  if (arm_len < 2) throw ShapeError("cross arm length must be at least 2");
  const auto a = static_cast<std::int32_t>(arm_len);
  std::vector<GridPoint> pts;
  for (std::int32_t i = -a; i <= a; ++i) {
    pts.push_back({i, 0});
    if (i != 0) pts.push_back({0, i});
  }
  return Shape(std::move(pts));
}

// The anticlockwise k-turn 1-gap spiral: the union of the almost-rectangles R_1..R_k.
inline Shape spiral(std::size_t k) {
  if (k == 0) throw ShapeError("spiral needs at least one turn");
  std::vector<GridPoint> pts;
  for (std::int32_t r = 1; r <= static_cast<std::int32_t>(k); ++r) {
    const std::int32_t e = 2 * r;
    std::vector<GridPoint> ring;
    for (std::int32_t x = -e; x <= e - 1; ++x) {
      ring.push_back({x, e});
      ring.push_back({x, -e});
    }
    for (std::int32_t y = -e; y <= e; ++y) {
      ring.push_back({-e, y});
      ring.push_back({e - 1, y});
    }
    ring.push_back({e - 2, -e + 2});
    ring.push_back({e, -e});
    ring.push_back({e + 1, -e});
    const GridPoint removed{e - 1, -e + 1};
    for (auto p : ring)
      if (p != removed) pts.push_back(p);
  }
  return Shape(std::move(pts));
}

enum class SpiralDirection { InToOut, OutToIn };

inline const char* to_string(SpiralDirection d) {
  return d == SpiralDirection::InToOut ? "in-to-out" : "out-to-in";
}

// Traversal of spiral(k) from the centre (0,0) to the outside start point (2k+1, -2k), or
// the reverse.
inline Path spiral_traversal(std::size_t k, SpiralDirection dir) {
  if (k == 0) throw ShapeError("spiral needs at least one turn");
  std::vector<GridPoint> pts{{0, 0}};
  int turn = 0;
  for (std::size_t run = 0; run <= 4 * k; ++run) {
    if (run > 0) turn += (run % 2 == 0) ? 2 : 1;
    for (std::size_t r = 0; r <= run; ++r) pts.push_back(pts.back() + Direction(turn));
  }
  Path inside_out(std::move(pts));
  return dir == SpiralDirection::InToOut ? inside_out : inside_out.reversed();
}

inline Shape scale(const Shape& s, std::size_t k) {
  if (k == 0) throw ShapeError("scale factor must be at least 1");
  const auto f = static_cast<std::int32_t>(k);
  std::vector<GridPoint> pts;
  pts.reserve(s.size() * k * k);
  for (auto p : s.points())
    for (std::int32_t b = 0; b < f; ++b)
      for (std::int32_t a = 0; a < f; ++a) pts.push_back({f * p.x + a, f * p.y + b});
  return Shape(std::move(pts));
}

// ---------------------------------------------------------------------------
// Analysis

struct RowSpan {
  std::int32_t y;
  std::int32_t left;
  std::int32_t right;
};

// Rows bottom to top with their extreme x values. Rows need not be contiguous segments.
inline std::vector<RowSpan> row_spans(const Shape& s) {
  std::vector<RowSpan> rows;
  for (auto p : s.points()) {
    if (rows.empty() || rows.back().y != p.y)
      rows.push_back({p.y, p.x, p.x});
    else
      rows.back().right = p.x;
  }
  return rows;
}

inline bool is_y_monotone(const Shape& s) {
  std::size_t count = 0;
  for (const auto& r : row_spans(s)) count += static_cast<std::size_t>(r.right - r.left + 1);
  return count == s.size();
}

inline bool is_xy_connected(const Shape& s) { return detail::connected(s.points(), false); }

struct ShapeAnalysis {
  bool connected = false;
  bool y_monotone = false;
  bool xy_connected = false;
  std::vector<GridPoint> perimeter_points;  // six-neighbourhood, sorted (y, x)
  std::size_t perimeter_length = 0;
  std::size_t perimeter_length_4 = 0;  // same count under the four +-x/+-y neighbours
};

inline ShapeAnalysis analyze(const Shape& s) {
  ShapeAnalysis a;
  a.connected = detail::connected(s.points(), true);
  a.y_monotone = is_y_monotone(s);
  a.xy_connected = is_xy_connected(s);
  for (auto p : s.points()) {
    bool edge6 = false, edge4 = false;
    for (int k = 0; k < 6; ++k) {
      if (s.contains(p + Direction(k))) continue;
      edge6 = true;
      if (k != 2 && k != 5) edge4 = true;
    }
    if (edge6) a.perimeter_points.push_back(p);
    if (edge4) ++a.perimeter_length_4;
  }
  a.perimeter_length = a.perimeter_points.size();
  return a;
}

inline std::size_t perimeter_length(const Shape& s) { return analyze(s).perimeter_length; }

// |positions Δ shape|
inline std::size_t folding_error(const Shape& s, std::span<const GridPoint> positions) {
  PointSet placed(positions.begin(), positions.end());
  std::size_t err = 0;
  for (auto p : placed)
    if (!s.contains(p)) ++err;
  for (auto p : s.points())
    if (!placed.count(p)) ++err;
  return err;
}

// Every step in {+-x, +y, +w} (positive) or {+-x, -y, -w} (negative).
inline bool is_zigzag(const Path& p, bool positive) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const int d = p.step(i).index();
    const bool ok = d == 0 || d == 3 || (positive ? (d == 1 || d == 2) : (d == 4 || d == 5));
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Zig-zag traversal of a y-monotone shape

// Row by row from the bottom: even rows run rightward and odd rows leftward. Each row is
// widened to sit under the start of the row above and over the end of the row below, so
// consecutive rows join with a +y step. The result contains the shape; any extra point
// neighbours a perimeter point.
inline Path monotone_traversal(const Shape& s) {
  if (!is_y_monotone(s)) throw ShapeError("shape is not y-monotone");
  const auto rows = row_spans(s);
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].y != rows[i - 1].y + 1)
      throw ShapeError("row " + std::to_string(i) + " does not follow row " + std::to_string(i - 1));
  std::vector<GridPoint> pts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool even = i % 2 == 0;
    std::int32_t lo = rows[i].left, hi = rows[i].right;
    const RowSpan* below = i > 0 ? &rows[i - 1] : nullptr;
    const RowSpan* above = i + 1 < rows.size() ? &rows[i + 1] : nullptr;
    // Rows are joined at the row end the traversal leaves from, so the extension must be
    // contiguous with this row's segment.
    auto extend = [&](const RowSpan* other, bool to_left) {
      if (!other) return;
      if (to_left) {
        if (other->left < lo) {
          if (other->right < lo - 1)
            throw ShapeError("rows " + std::to_string(i) + " and its neighbour do not overlap enough to join");
          lo = other->left;
        }
      } else if (other->right > hi) {
        if (other->left > hi + 1)
          throw ShapeError("rows " + std::to_string(i) + " and its neighbour do not overlap enough to join");
        hi = other->right;
      }
    };
    if (even) {
      extend(below, true);
      extend(above, false);
      for (std::int32_t x = lo; x <= hi; ++x) pts.push_back({x, rows[i].y});
    } else {
      extend(above, true);
      extend(below, false);
      for (std::int32_t x = hi; x >= lo; --x) pts.push_back({x, rows[i].y});
    }
    if (i > 0) {
      const GridPoint join = pts[pts.size() - static_cast<std::size_t>(hi - lo + 1)];
      const GridPoint prev = pts[pts.size() - static_cast<std::size_t>(hi - lo + 1) - 1];
      if (join - prev != GridPoint{0, 1})
        throw ShapeError("row " + std::to_string(i) + " cannot be joined to row " + std::to_string(i - 1));
    }
  }
  return Path(std::move(pts));
}

// ---------------------------------------------------------------------------
// yw-chains, separators and the factor-2 partition

// Points c_1..c_k with each step +y or +w.
class YwChain {
 public:
  explicit YwChain(std::vector<GridPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ShapeError("a yw-chain needs at least one point");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      const auto d = points_[i + 1] - points_[i];
      if (d != GridPoint{0, 1} && d != GridPoint{-1, 1})
        throw ShapeError("yw-chain step " + std::to_string(i) + " is neither +y nor +w");
    }
  }
  const std::vector<GridPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  GridPoint operator[](std::size_t i) const { return points_[i]; }
  // True if the step from point i to point i+1 is along +y (otherwise +w).
  bool step_is_y(std::size_t i) const { return points_[i + 1].x == points_[i].x; }

  friend bool operator==(const YwChain&, const YwChain&) = default;

 private:
  std::vector<GridPoint> points_;
};

inline bool is_yw_separator(const Shape& s, const YwChain& c) {
  const auto rows = row_spans(s);
  if (c.points().front().y != rows.front().y || c.points().back().y != rows.back().y) return false;
  return std::all_of(c.points().begin(), c.points().end(), [&](GridPoint p) { return s.contains(p); });
}

// A yw-chain inside s from the bottom row to the top row. Depth-first from the left: starts
// are tried left to right and +w (leftward) is tried before +y.
inline std::optional<YwChain> yw_separator(const Shape& s) {
  if (!is_y_monotone(s)) throw ShapeError("shape is not y-monotone");
  const auto rows = row_spans(s);
  const std::int32_t top = rows.back().y;
  std::set<std::pair<std::int32_t, std::int32_t>> dead;
  std::vector<GridPoint> chain;
  std::function<bool(GridPoint)> grow = [&](GridPoint p) -> bool {
    chain.push_back(p);
    if (p.y == top) return true;
    for (GridPoint step : {GridPoint{-1, 1}, GridPoint{0, 1}}) {
      const GridPoint q = p + step;
      if (s.contains(q) && !dead.count({q.x, q.y}) && grow(q)) return true;
    }
    dead.insert({p.x, p.y});
    chain.pop_back();
    return false;
  };
  for (std::int32_t x = rows.front().left; x <= rows.front().right; ++x)
    if (grow({x, rows.front().y})) return YwChain(chain);
  return std::nullopt;
}

struct CutRow {
  std::int32_t y;
  std::int32_t left_x;  // the cut runs between left_x and left_x + 1 in this row
  friend bool operator==(const CutRow&, const CutRow&) = default;
};

struct PartitionResult {
  Shape source;
  YwChain separator;
  Shape scaled;
  Shape left;
  Shape right;
  YwChain right_boundary_of_left;  // C'
  YwChain left_boundary_of_right;  // C''
  std::vector<CutRow> cut;         // bottom to top, one entry per row of the scaled shape
};

// Splits S x2 along the cut derived from a yw-separator of S.
inline PartitionResult scaled_partition(const Shape& s, const YwChain& sep) {
  if (!is_y_monotone(s)) throw ShapeError("scaled_partition: shape is not y-monotone");
  if (!is_xy_connected(s)) throw ShapeError("scaled_partition: shape is not xy-connected");
  if (!is_yw_separator(s, sep)) throw ShapeError("scaled_partition: chain is not a yw-separator of the shape");

  // Points of the scaled copy of c_i at offset (a, b).
  auto at = [&](std::size_t i, std::int32_t a, std::int32_t b) {
    return GridPoint{2 * sep[i].x + a, 2 * sep[i].y + b};
  };
  const std::size_t k = sep.size();
  std::vector<GridPoint> left_chain{at(0, 0, 0)};
  std::vector<GridPoint> right_chain{at(0, 1, 0)};
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (sep.step_is_y(i)) {
      left_chain.push_back(at(i, 0, 1));
      right_chain.push_back(at(i, 1, 1));
    } else if (s.contains(sep[i] - GridPoint{1, 0})) {
      // c_{i,(0,1)} and c_{i,(1,1)} go right; the left boundary steps to the point before them.
      left_chain.push_back(at(i, -1, 1));
      right_chain.push_back(at(i, 0, 1));
    } else if (s.contains(sep[i + 1] + GridPoint{1, 0})) {
      left_chain.push_back(at(i, 0, 1));
      right_chain.push_back(at(i, 1, 1));
    } else {
      throw ShapeError("scaled_partition: +w step " + std::to_string(i) + " has no supporting x-neighbour");
    }
    if (sep.step_is_y(i) || s.contains(sep[i] - GridPoint{1, 0})) {
      left_chain.push_back(at(i + 1, 0, 0));
      right_chain.push_back(at(i + 1, 1, 0));
    } else {
      left_chain.push_back(at(i + 1, 1, 0));
      right_chain.push_back(at(i + 1, 2, 0));
    }
  }
  left_chain.push_back(at(k - 1, 0, 1));
  right_chain.push_back(at(k - 1, 1, 1));

  Shape scaled = scale(s, 2);
  std::vector<CutRow> cut;
  std::map<std::int32_t, std::int32_t> cut_at;
  for (auto p : left_chain) {
    cut.push_back({p.y, p.x});
    cut_at[p.y] = p.x;
  }
  std::vector<GridPoint> lpts, rpts;
  for (auto p : scaled.points()) (p.x <= cut_at.at(p.y) ? lpts : rpts).push_back(p);
  for (auto p : left_chain)
    if (!scaled.contains(p)) throw ShapeError("scaled_partition: left boundary leaves the scaled shape");
  for (auto p : right_chain)
    if (!scaled.contains(p)) throw ShapeError("scaled_partition: right boundary leaves the scaled shape");
  return PartitionResult{s,           sep,
                         std::move(scaled), Shape(std::move(lpts)),
                         Shape(std::move(rpts)), YwChain(std::move(left_chain)),
                         YwChain(std::move(right_chain)), std::move(cut)};
}

// Down the left part in row pairs (out from C' along the upper row, back along the lower
// row), across the bottom row, then up the right part the same way from C''.
inline Path scaled_traversal(const PartitionResult& p) {
  const auto left_rows = row_spans(p.left);
  const auto right_rows = row_spans(p.right);
  const auto& cl = p.right_boundary_of_left.points();
  const auto& cr = p.left_boundary_of_right.points();
  const std::size_t rows = cl.size();
  std::vector<GridPoint> pts;
  for (std::size_t r = rows; r >= 2; r -= 2) {
    const std::size_t upper = r - 1, lower = r - 2;
    for (std::int32_t x = cl[upper].x; x >= left_rows[upper].left; --x) pts.push_back({x, cl[upper].y});
    for (std::int32_t x = left_rows[lower].left; x <= cl[lower].x; ++x) pts.push_back({x, cl[lower].y});
  }
  for (std::size_t r = 0; r + 1 < rows; r += 2) {
    const std::size_t lower = r, upper = r + 1;
    for (std::int32_t x = cr[lower].x; x <= right_rows[lower].right; ++x) pts.push_back({x, cr[lower].y});
    for (std::int32_t x = right_rows[upper].right; x >= cr[upper].x; --x) pts.push_back({x, cr[upper].y});
  }
  return Path(std::move(pts));
}

}  // namespace turnfold
