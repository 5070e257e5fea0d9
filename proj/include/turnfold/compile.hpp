#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "turnfold/grid.hpp"
#include "turnfold/machine.hpp"
#include "turnfold/shapes.hpp"

namespace turnfold {

class CompileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Provenance { ZigZag, General, SpiralInToOut, SpiralOutToIn, ScaledFold };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ZigZag: return "ZigZag";
    case Provenance::General: return "General";
    case Provenance::SpiralInToOut: return "SpiralInToOut";
    case Provenance::SpiralOutToIn: return "SpiralOutToIn";
    case Provenance::ScaledFold: return "ScaledFold";
  }
  return "?";
}

inline Provenance provenance_from_string(const std::string& s) {
  for (auto p : {Provenance::ZigZag, Provenance::General, Provenance::SpiralInToOut,
                 Provenance::SpiralOutToIn, Provenance::ScaledFold})
    if (s == to_string(p)) return p;
  throw CompileError("unknown provenance '" + s + "'");
}

// Initial states for an east-line machine.
struct StateProgram {
  std::vector<int> states;
  Provenance provenance = Provenance::General;

  TurningMachine machine() const { return TurningMachine::line(states); }
  friend bool operator==(const StateProgram&, const StateProgram&) = default;
};

// What the last monomer gets: 0, or a copy of its predecessor's state. The last monomer has
// no outgoing bond, so either choice folds to the same geometry.
enum class Terminal { Zero, RepeatLast };

namespace detail {

inline int floor_mod6(int v) { return Direction::wrap(v); }

inline void append_terminal(std::vector<int>& states, Terminal t) {
  states.push_back(t == Terminal::RepeatLast && !states.empty() ? states.back() : 0);
}

}  // namespace detail

// Positive zig-zag: +x, +y, +w, -x become 0, 1, 2, 3. Negative zig-zag: +x, -w, -y, -x become
// 0, -1, -2, -3.
inline StateProgram zigzag_states(const Path& p) {
  bool positive = true, negative = true;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const int d = p.step(i).index();
    if (d == 1 || d == 2) negative = false;
    if (d == 4 || d == 5) positive = false;
    if (!positive && !negative)
      throw CompileError("zigzag_states: step " + std::to_string(i) + " mixes upward and downward moves");
  }
  StateProgram sp{{}, Provenance::ZigZag};
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const int d = p.step(i).index();
    sp.states.push_back(positive ? d : (d == 0 ? 0 : d - 6));
  }
  sp.states.push_back(0);
  return sp;
}

// Turning numbers along p starting from `anchor`.
inline StateProgram states_from_path(const Path& p, int anchor, Terminal terminal = Terminal::Zero) {
  StateProgram sp{{}, Provenance::General};
  if (p.size() == 1) {
    sp.states.push_back(0);
    return sp;
  }
  if (detail::floor_mod6(anchor) != p.step(0).index())
    throw CompileError("states_from_path: anchor " + std::to_string(anchor) +
                       " does not match the first segment direction " + std::to_string(p.step(0).index()));
  int s = anchor;
  sp.states.push_back(s);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    s += p.step(i - 1).turn_to(p.step(i));
    sp.states.push_back(s);
  }
  detail::append_terminal(sp.states, terminal);
  return sp;
}

// t_0, t_1, ..., t_{4k}: in-to-out turns +1 after even runs and +2 after odd runs; out-to-in
// mirrors this with decrements.
inline std::vector<int> spiral_turning_numbers(std::size_t k, int t0, SpiralDirection dir) {
  std::vector<int> t{t0};
  for (std::size_t i = 1; i <= 4 * k; ++i) {
    const bool even = i % 2 == 0;
    if (dir == SpiralDirection::InToOut)
      t.push_back(t.back() + (even ? 2 : 1));
    else
      t.push_back(t.back() - (even ? 1 : 2));
  }
  return t;
}

enum class SpiralLayout {
  Published,  // out-to-in leads with an extra t_0
  Geometric   // out-to-in ends with an extra t_{4k}, matching the reversed traversal
};

// Run-length expansion of the turning numbers. In-to-out is [t0]^1 ... [t4k]^(4k+1), t4k.
inline StateProgram spiral_states(std::size_t k, int t0, SpiralDirection dir,
                                  SpiralLayout layout = SpiralLayout::Published) {
  if (k == 0) throw CompileError("spiral_states: k must be at least 1");
  const int want = dir == SpiralDirection::InToOut ? 0 : 3;
  if (detail::floor_mod6(t0) != want)
    throw CompileError("spiral_states: t0 = " + std::to_string(t0) + " must be congruent to " +
                       std::to_string(want) + " mod 6");
  const auto t = spiral_turning_numbers(k, t0, dir);
  const std::size_t runs = 4 * k + 1;
  StateProgram sp{{}, dir == SpiralDirection::InToOut ? Provenance::SpiralInToOut : Provenance::SpiralOutToIn};
  if (dir == SpiralDirection::InToOut) {
    for (std::size_t i = 0; i < runs; ++i) sp.states.insert(sp.states.end(), i + 1, t[i]);
    sp.states.push_back(t.back());
  } else {
    if (layout == SpiralLayout::Published) sp.states.push_back(t0);
    for (std::size_t i = 0; i < runs; ++i) sp.states.insert(sp.states.end(), runs - i, t[i]);
    if (layout == SpiralLayout::Geometric) sp.states.push_back(t.back());
  }
  return sp;
}

enum class SignReading {
  Verbatim,  // leftward monomers of the right part's even rows get -3
  Corrected  // they get +3, keeping the right part's states non-negative
};

// States for the traversal of the scaled partition. Rows of S x2 are counted from 1 at the
// bottom. m0 sits at the top of C'.
inline StateProgram scaled_fold_states(const PartitionResult& p, SignReading reading = SignReading::Corrected) {
  const Path path = scaled_traversal(p);
  StateProgram sp{{}, Provenance::ScaledFold};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int d = path.step(i).index();
    if (p.left.contains(path.points()[i])) {
      sp.states.push_back(d == 0 ? 0 : d - 6);
    } else if (d == 3) {
      sp.states.push_back(reading == SignReading::Corrected ? 3 : -3);
    } else {
      sp.states.push_back(d);
    }
  }
  sp.states.push_back(0);
  return sp;
}

// ---------------------------------------------------------------------------
// Static validation

struct StateViolation {
  char check;  // 'a' adjacent difference, 'b' direction, 'c' terminal
  std::size_t index;
  std::string detail;
};

struct ValidationReport {
  bool adjacent_ok = true;
  bool directions_ok = true;
  bool terminal_ok = true;
  std::vector<StateViolation> violations;
  bool passed() const { return adjacent_ok && directions_ok && terminal_ok; }
};

// Necessary conditions only: adjacent states differ by at most 2 (not checked against the
// terminal monomer, which has no bond to turn), each monomer's final direction (+x turned by
// its state) matches the target, and the terminal state is 0 or a repeat of its predecessor.
inline ValidationReport validate_states(const StateProgram& sp, const Path& target) {
  if (sp.states.size() != target.size())
    throw CompileError("validate_states: program has " + std::to_string(sp.states.size()) +
                       " states but the target has " + std::to_string(target.size()) + " points");
  ValidationReport r;
  const auto& s = sp.states;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (i + 2 < s.size() && std::abs(s[i] - s[i + 1]) > 2) {
      r.adjacent_ok = false;
      r.violations.push_back({'a', i, "|s" + std::to_string(i) + " - s" + std::to_string(i + 1) +
                                          "| = " + std::to_string(std::abs(s[i] - s[i + 1]))});
    }
    if (Direction(s[i]) != target.step(i)) {
      r.directions_ok = false;
      r.violations.push_back({'b', i, "state " + std::to_string(s[i]) + " points along direction " +
                                          std::to_string(Direction(s[i]).index()) + ", target step is " +
                                          std::to_string(target.step(i).index())});
    }
  }
  const std::size_t last = s.size() - 1;
  if (s[last] != 0 && !(last > 0 && s[last] == s[last - 1])) {
    r.terminal_ok = false;
    r.violations.push_back({'c', last, "terminal state " + std::to_string(s[last]) + " is neither 0 nor a repeat"});
  }
  return r;
}

// Watches the right part of a factor-2 fold. Positions are taken relative to the first
// right-part monomer and placed on its target point; every right-part monomer must then stay
// at or right of C'' in its row. Rows past either end of the shape continue C'' vertically.
class CutGuard {
 public:
  explicit CutGuard(const PartitionResult& p) {
    const Path path = scaled_traversal(p);
    first_ = 0;
    while (first_ < path.size() && p.left.contains(path.points()[first_])) ++first_;
    if (first_ == path.size()) throw CompileError("CutGuard: the traversal never enters the right part");
    anchor_ = path.points()[first_];
    for (auto c : p.left_boundary_of_right.points()) boundary_[c.y] = c.x;
  }

  std::size_t first_right() const { return first_; }

  // Index of the first right-part monomer left of the cut, if any.
  std::optional<std::size_t> violation(std::span<const GridPoint> positions) const {
    const GridPoint base = positions[first_];
    for (std::size_t j = first_; j < positions.size(); ++j) {
      const GridPoint q = positions[j] - base + anchor_;
      if (q.x < limit(q.y)) return j;
    }
    return std::nullopt;
  }

 private:
  std::int32_t limit(std::int32_t y) const {
    if (y <= boundary_.begin()->first) return boundary_.begin()->second;
    if (y >= boundary_.rbegin()->first) return boundary_.rbegin()->second;
    return boundary_.at(y);
  }

  std::size_t first_ = 0;
  GridPoint anchor_;
  std::map<std::int32_t, std::int32_t> boundary_;
};

// ---------------------------------------------------------------------------
// Shape to machine

struct FoldPlan {
  Shape shape;        // what the fold is compared against, translated so m0 is at the origin
  Path target;        // ordered positions of the intended fold, starting at the origin
  StateProgram program;
};

// Zig-zag traversal of a y-monotone shape, or the exact factor-2 construction when `scale2` is
// set and a yw-separator exists.
inline FoldPlan fold_plan(const Shape& s, bool scale2, SignReading reading = SignReading::Corrected) {
  if (!scale2) {
    const Path raw = monotone_traversal(s);
    const GridPoint shift = -raw.front();
    return {s.translated(shift), raw.translated(shift), zigzag_states(raw)};
  }
  const auto sep = yw_separator(s);
  if (!sep) throw CompileError("fold_plan: shape has no yw-separator");
  const auto part = scaled_partition(s, *sep);
  const Path raw = scaled_traversal(part);
  const GridPoint shift = -raw.front();
  return {part.scaled.translated(shift), raw.translated(shift), scaled_fold_states(part, reading)};
}

}  // namespace turnfold
