#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <utility>

namespace turnfold {

// One of the six unit directions of the triangular grid, anticlockwise from +x:
// +x, +y, +w, -x, -y, -w. The w axis runs through (-1, 1).
class Direction {
 public:
  constexpr Direction() = default;
  constexpr explicit Direction(int index) : index_(wrap(index)) {}

  static constexpr Direction px() { return Direction(0); }
  static constexpr Direction py() { return Direction(1); }
  static constexpr Direction pw() { return Direction(2); }
  static constexpr Direction nx() { return Direction(3); }
  static constexpr Direction ny() { return Direction(4); }
  static constexpr Direction nw() { return Direction(5); }

  constexpr int index() const { return index_; }

  constexpr Direction rotated(int k) const { return Direction(index_ + k); }
  constexpr Direction opposite() const { return rotated(3); }

  // Signed number of pi/3 steps from this direction to `to`, in [-2, 3].
  constexpr int turn_to(Direction to) const {
    int d = wrap(to.index_ - index_);
    return d > 3 ? d - 6 : d;
  }

  friend constexpr bool operator==(Direction, Direction) = default;

  static constexpr int wrap(int k) {
    int r = k % 6;
    return r < 0 ? r + 6 : r;
  }

 private:
  int index_ = 0;
};

constexpr Direction rotate_direction(Direction d, int k) { return d.rotated(k); }

struct GridPoint {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(GridPoint, GridPoint) = default;
  // Row-major by (y, x); this is the canonical ordering for shape files.
  friend constexpr auto operator<=>(GridPoint a, GridPoint b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }

  constexpr GridPoint operator+(GridPoint o) const { return {x + o.x, y + o.y}; }
  constexpr GridPoint operator-(GridPoint o) const { return {x - o.x, y - o.y}; }
  constexpr GridPoint operator-() const { return {-x, -y}; }
  constexpr GridPoint& operator+=(GridPoint o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr GridPoint& operator-=(GridPoint o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
};

inline std::ostream& operator<<(std::ostream& os, GridPoint p) {
  return os << '(' << p.x << ',' << p.y << ')';
}

inline std::ostream& operator<<(std::ostream& os, Direction d) {
  static constexpr const char* kNames[6] = {"+x", "+y", "+w", "-x", "-y", "-w"};
  return os << kNames[d.index()];
}

inline constexpr std::array<GridPoint, 6> kDisplacements = {
    GridPoint{1, 0}, GridPoint{0, 1}, GridPoint{-1, 1},
    GridPoint{-1, 0}, GridPoint{0, -1}, GridPoint{1, -1}};

constexpr GridPoint displacement(Direction d) { return kDisplacements[d.index()]; }

constexpr GridPoint operator+(GridPoint p, Direction d) { return p + displacement(d); }

// Direction of a unit step, or nothing if `step` is not a grid unit vector.
constexpr bool direction_of(GridPoint step, Direction& out) {
  for (int k = 0; k < 6; ++k) {
    if (kDisplacements[k] == step) {
      out = Direction(k);
      return true;
    }
  }
  return false;
}

constexpr bool adjacent(GridPoint a, GridPoint b) {
  Direction ignored;
  return direction_of(b - a, ignored);
}

constexpr std::array<GridPoint, 6> neighbors(GridPoint p) {
  std::array<GridPoint, 6> out{};
  for (int k = 0; k < 6; ++k) out[k] = p + kDisplacements[k];
  return out;
}

// Euclidean embedding, used only by the renderer.
struct Embedded {
  double x;
  double y;
};

inline Embedded embed(GridPoint p) {
  constexpr double kHalfSqrt3 = 0.86602540378443864676;
  return {p.x + 0.5 * p.y, p.y * kHalfSqrt3};
}

struct GridPointHash {
  std::size_t operator()(GridPoint p) const noexcept {
    auto k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
             static_cast<std::uint32_t>(p.y);
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

}  // namespace turnfold
