#pragma once

// Slow reference implementations used to cross-check the library.

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "turnfold/turnfold.hpp"

namespace oracle {

using turnfold::GridPoint;
using turnfold::TurningMachine;

// Chain positions from Euclidean angles: monomer i points at 60 * (d_i + rotation_i) degrees.
inline std::vector<GridPoint> positions(const TurningMachine& tm, const std::vector<int>& states) {
  const double pi = std::acos(-1.0);
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<GridPoint> out{{0, 0}};
  double x = 0, y = 0;
  for (std::size_t i = 0; i + 1 < tm.size(); ++i) {
    const double a = pi / 3.0 * (tm.initial_direction(i).index() + tm.initial_state(i) - states[i]);
    x += std::cos(a);
    y += std::sin(a);
    const auto gy = static_cast<std::int32_t>(std::lround(y / h));
    const auto gx = static_cast<std::int32_t>(std::lround(x - gy / 2.0));
    out.push_back({gx, gy});
  }
  return out;
}

inline bool simple(const std::vector<GridPoint>& pts) {
  std::set<std::pair<int, int>> seen;
  for (auto p : pts)
    if (!seen.insert({p.x, p.y}).second) return false;
  return true;
}

// A move is possible iff the chain after the move is simple.
inline bool can_move(const TurningMachine& tm, const std::vector<int>& states, std::size_t i) {
  if (states[i] == 0) return false;
  auto next = states;
  next[i] += states[i] > 0 ? -1 : 1;
  return simple(positions(tm, next));
}

inline std::vector<std::size_t> moves(const TurningMachine& tm, const std::vector<int>& states) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (can_move(tm, states, i)) out.push_back(i);
  return out;
}

struct Reach {
  std::set<std::vector<int>> all;
  std::set<std::vector<int>> blocked;
};

// Depth-first closure over state vectors.
inline Reach reach(const TurningMachine& tm) {
  Reach r;
  std::vector<std::vector<int>> stack{tm.initial_states()};
  r.all.insert(tm.initial_states());
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    auto m = moves(tm, s);
    bool final = std::all_of(s.begin(), s.end(), [](int v) { return v == 0; });
    if (m.empty() && !final) r.blocked.insert(s);
    for (auto i : m) {
      auto t = s;
      t[i] += t[i] > 0 ? -1 : 1;
      if (r.all.insert(t).second) stack.push_back(t);
    }
  }
  return r;
}

struct DirectRun {
  double time = 0;
  bool blocked = false;
  std::size_t steps = 0;
};

// Gillespie sampling: recompute the applicable set every step, pick uniformly, wait Exp(k).
inline DirectRun direct_sample(const TurningMachine& tm, std::mt19937_64& gen) {
  DirectRun run;
  auto s = tm.initial_states();
  for (;;) {
    auto m = moves(tm, s);
    if (m.empty()) {
      run.blocked = !std::all_of(s.begin(), s.end(), [](int v) { return v == 0; });
      return run;
    }
    run.time += std::exponential_distribution<double>(double(m.size()))(gen);
    auto i = m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(gen)];
    s[i] += s[i] > 0 ? -1 : 1;
    ++run.steps;
  }
}

// States for the factor-2 construction read row by row: rows of S x2 counted from 1 at the
// bottom, odd rows of the left part run toward C', even rows away from it, and the right part
// the other way round. `plus3` selects +3 for the right part's leftward monomers.
inline std::vector<int> scaled_states_by_rows(const turnfold::PartitionResult& p, bool plus3) {
  using turnfold::row_spans;
  const auto& cl = p.right_boundary_of_left.points();
  const auto& cr = p.left_boundary_of_right.points();
  const auto lrows = row_spans(p.left);
  const auto rrows = row_spans(p.right);
  const std::size_t rows = cl.size();
  std::vector<int> out;
  for (std::size_t r = rows; r >= 2; r -= 2) {
    const std::size_t even = r - 1, odd = r - 2;  // zero-based index of rows r and r-1
    for (auto x = cl[even].x; x >= lrows[even].left; --x) out.push_back(x == lrows[even].left ? -2 : -3);
    for (auto x = lrows[odd].left; x <= cl[odd].x; ++x) {
      if (x < cl[odd].x || odd == 0) {
        out.push_back(0);
      } else {
        const bool y_step = cl[odd - 1].x == cl[odd].x;
        out.push_back(y_step ? -2 : -1);
      }
    }
  }
  for (std::size_t r = 0; r + 1 < rows; r += 2) {
    const std::size_t odd = r, even = r + 1;
    for (auto x = cr[odd].x; x <= rrows[odd].right; ++x) out.push_back(x == rrows[odd].right ? 1 : 0);
    for (auto x = rrows[even].right; x >= cr[even].x; --x) {
      if (x > cr[even].x) {
        out.push_back(plus3 ? 3 : -3);
      } else if (even + 1 == rows) {
        out.push_back(0);
      } else {
        const bool y_step = cr[even + 1].x == cr[even].x;
        out.push_back(y_step ? 1 : 2);
      }
    }
  }
  return out;
}

// Random y-monotone connected shape: consecutive rows whose x-ranges touch.
template <typename Gen>
turnfold::Shape random_monotone(Gen& gen, std::size_t max_points, bool xy_connected) {
  for (;;) {
    std::uniform_int_distribution<int> rows_d(1, 6), width_d(1, 6), shift_d(-3, 3);
    std::vector<GridPoint> pts;
    int rows = rows_d(gen), l = 0, r = width_d(gen) - 1;
    bool ok = true;
    for (int y = 0; y < rows && ok; ++y) {
      if (y > 0) {
        int nl = l + shift_d(gen), nr = nl + width_d(gen) - 1;
        // Rows touch under 6-adjacency iff nl <= r + 1 and nr >= l - 1 (with the +w link);
        // xy-connectivity needs overlapping x-ranges.
        const bool touch = xy_connected ? (nl <= r && nr >= l) : (nl <= r && nr >= l - 1);
        if (!touch) ok = false;
        l = nl;
        r = nr;
      }
      for (int x = l; x <= r; ++x) pts.push_back({x, y});
    }
    if (!ok || pts.size() > max_points) continue;
    return turnfold::Shape(pts);
  }
}

}  // namespace oracle
