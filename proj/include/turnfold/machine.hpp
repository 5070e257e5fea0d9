#pragma once

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "turnfold/grid.hpp"

namespace turnfold {

class MachineError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The state vector does not describe a simple chain.
class SelfIntersecting : public std::runtime_error {
 public:
  SelfIntersecting(std::size_t first, std::size_t second)
      : std::runtime_error("self-intersecting configuration: monomers " + std::to_string(first) +
                           " and " + std::to_string(second) + " share a position"),
        first_(first),
        second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

constexpr int sign(int v) { return (v > 0) - (v < 0); }

// One step of the turning rule: move a nonzero state one unit toward zero.
constexpr int turn_rule(int s) { return s > 0 ? s - 1 : s + 1; }

// An instance: initial states plus the simple initial path anchored at the origin.
// Copies share the immutable definition.
class TurningMachine {
 public:
  TurningMachine(std::vector<int> states, std::vector<GridPoint> path)
      : def_(std::make_shared<Definition>()) {
    if (states.empty()) throw MachineError("a turning machine needs at least one monomer");
    if (path.size() != states.size())
      throw MachineError("initial path has " + std::to_string(path.size()) +
                         " points but there are " + std::to_string(states.size()) + " states");
    if (path.front() != GridPoint{0, 0}) throw MachineError("initial path must start at (0,0)");
    def_->directions.reserve(path.size() - 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      Direction d;
      if (!direction_of(path[i + 1] - path[i], d))
        throw MachineError("initial path step " + std::to_string(i) + " is not a unit step");
      def_->directions.push_back(d);
    }
    std::unordered_set<GridPoint, GridPointHash> seen;
    for (auto p : path)
      if (!seen.insert(p).second) throw MachineError("initial path is not simple");
    def_->states = std::move(states);
    def_->path = std::move(path);
  }

  // Monomers on the x-axis, all pointing east.
  static TurningMachine line(std::vector<int> states) {
    if (states.empty()) throw MachineError("a turning machine needs at least one monomer");
    std::vector<GridPoint> path(states.size());
    for (std::size_t i = 0; i < path.size(); ++i) path[i] = {static_cast<std::int32_t>(i), 0};
    return TurningMachine(std::move(states), std::move(path));
  }

  // L^sigma_n: n-1 monomers in state sigma followed by a terminal 0.
  static TurningMachine line_rotation(int sigma, std::size_t n) {
    if (n == 0) throw MachineError("a turning machine needs at least one monomer");
    std::vector<int> states(n, sigma);
    states.back() = 0;
    return line(std::move(states));
  }

  std::size_t size() const { return def_->states.size(); }
  const std::vector<int>& initial_states() const { return def_->states; }
  const std::vector<GridPoint>& initial_path() const { return def_->path; }
  int initial_state(std::size_t i) const { return def_->states[i]; }
  Direction initial_direction(std::size_t i) const { return def_->directions[i]; }

  bool is_east_line() const {
    return std::all_of(def_->directions.begin(), def_->directions.end(),
                       [](Direction d) { return d == Direction::px(); });
  }
  bool uniform_initial_direction() const {
    return std::adjacent_find(def_->directions.begin(), def_->directions.end(),
                              std::not_equal_to<>()) == def_->directions.end();
  }

  int state_min() const { return std::min(0, *std::min_element(def_->states.begin(), def_->states.end())); }
  int state_max() const { return std::max(0, *std::max_element(def_->states.begin(), def_->states.end())); }

  // Total number of rule applications on any trajectory that reaches the final configuration.
  long total_moves() const {
    long t = 0;
    for (int s : def_->states) t += std::abs(s);
    return t;
  }

  bool valid_state(std::size_t i, int s) const {
    int s0 = def_->states[i];
    return (s == 0 || sign(s) == sign(s0)) && std::abs(s) <= std::abs(s0);
  }

  friend bool operator==(const TurningMachine& a, const TurningMachine& b) {
    return a.def_ == b.def_ || (a.def_->states == b.def_->states && a.def_->path == b.def_->path);
  }

 private:
  struct Definition {
    std::vector<int> states;
    std::vector<GridPoint> path;
    std::vector<Direction> directions;
  };
  std::shared_ptr<Definition> def_;
};

inline TurningMachine line_machine(std::vector<int> states) { return TurningMachine::line(std::move(states)); }

struct Applicable {
  friend bool operator==(Applicable, Applicable) = default;
};
struct ZeroState {
  friend bool operator==(ZeroState, ZeroState) = default;
};
// Moving monomer i would put head monomer `head` onto tail monomer `tail`.
struct Blocked {
  std::size_t head;
  std::size_t tail;
  friend bool operator==(Blocked, Blocked) = default;
};
using MoveStatus = std::variant<Applicable, ZeroState, Blocked>;

inline bool is_applicable(const MoveStatus& s) { return std::holds_alternative<Applicable>(s); }
inline bool is_blocked(const MoveStatus& s) { return std::holds_alternative<Blocked>(s); }

inline std::string describe(const MoveStatus& s) {
  if (std::holds_alternative<Applicable>(s)) return "applicable";
  if (std::holds_alternative<ZeroState>(s)) return "zero state";
  auto b = std::get<Blocked>(s);
  return "blocked (head " + std::to_string(b.head) + " onto tail " + std::to_string(b.tail) + ")";
}

class NotApplicable : public std::runtime_error {
 public:
  NotApplicable(std::size_t monomer, MoveStatus status)
      : std::runtime_error("move of monomer " + std::to_string(monomer) + " not applicable: " +
                           describe(status)),
        monomer_(monomer),
        status_(status) {}
  std::size_t monomer() const { return monomer_; }
  const MoveStatus& status() const { return status_; }

 private:
  std::size_t monomer_;
  MoveStatus status_;
};

enum class Classification { Final, PermanentlyBlocked, Active };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Final: return "final";
    case Classification::PermanentlyBlocked: return "permanently-blocked";
    case Classification::Active: return "active";
  }
  return "?";
}

// Direction monomer i points in once it has turned `rotation` pi/3 steps (signed).
inline Direction rotated_direction(const TurningMachine& tm, std::size_t i, int rotation) {
  return tm.initial_direction(i).rotated(rotation);
}

class Configuration {
 public:
  // The initial configuration of `tm`.
  explicit Configuration(TurningMachine tm)
      : tm_(std::move(tm)), states_(tm_.initial_states()), positions_(tm_.initial_path()) {}

  Configuration(TurningMachine tm, std::vector<int> states, std::vector<GridPoint> positions)
      : tm_(std::move(tm)), states_(std::move(states)), positions_(std::move(positions)) {}

  const TurningMachine& machine() const { return tm_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<int>& states() const { return states_; }
  const std::vector<GridPoint>& positions() const { return positions_; }
  int state(std::size_t i) const { return states_[i]; }
  GridPoint position(std::size_t i) const { return positions_[i]; }

  // Signed number of pi/3 turns monomer i has made (positive = anticlockwise).
  int rotation(std::size_t i) const { return tm_.initial_state(i) - states_[i]; }
  // Number of rule applications to monomer i so far.
  int delta_s(std::size_t i) const { return std::abs(rotation(i)); }

  // Direction of monomer i (i < n-1), read off the chain.
  Direction direction(std::size_t i) const {
    Direction d;
    direction_of(positions_[i + 1] - positions_[i], d);
    return d;
  }

  bool is_final() const {
    return std::all_of(states_.begin(), states_.end(), [](int s) { return s == 0; });
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.states_ == b.states_ && a.positions_ == b.positions_;
  }

 private:
  TurningMachine tm_;
  std::vector<int> states_;
  std::vector<GridPoint> positions_;
};

// Rebuild the chain for a state vector by walking per-monomer directions from the origin.
inline Configuration reconstruct_positions(const TurningMachine& tm, std::vector<int> states) {
  const std::size_t n = tm.size();
  if (states.size() != n)
    throw MachineError("state vector has " + std::to_string(states.size()) + " entries, machine has " +
                       std::to_string(n) + " monomers");
  for (std::size_t i = 0; i < n; ++i)
    if (!tm.valid_state(i, states[i]))
      throw MachineError("state " + std::to_string(states[i]) + " of monomer " + std::to_string(i) +
                         " is not between 0 and its initial state " +
                         std::to_string(tm.initial_state(i)));
  std::vector<GridPoint> pos(n);
  std::unordered_map<GridPoint, std::size_t, GridPointHash> seen;
  seen.reserve(n * 2);
  seen.emplace(pos[0], 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    pos[i + 1] = pos[i] + rotated_direction(tm, i, tm.initial_state(i) - states[i]);
    auto [it, inserted] = seen.emplace(pos[i + 1], i + 1);
    if (!inserted) throw SelfIntersecting(it->second, i + 1);
  }
  return Configuration(tm, std::move(states), std::move(pos));
}

// Translation applied to head(m_i) when monomer i moves.
inline GridPoint head_translation(const Configuration& c, std::size_t i) {
  const int turn = c.state(i) > 0 ? 2 : -2;
  return displacement(c.direction(i).rotated(turn));
}

inline MoveStatus move_status(const Configuration& c, std::size_t i) {
  const std::size_t n = c.size();
  if (i >= n) throw std::out_of_range("monomer index " + std::to_string(i) + " out of range");
  if (c.state(i) == 0) return ZeroState{};
  if (i + 1 == n) return Applicable{};
  const GridPoint t = head_translation(c, i);
  const auto& pos = c.positions();
  std::unordered_map<GridPoint, std::size_t, GridPointHash> tail;
  tail.reserve(2 * (i + 1));
  for (std::size_t k = 0; k <= i; ++k) tail.emplace(pos[k], k);
  std::optional<Blocked> best;
  for (std::size_t j = i + 1; j < n; ++j) {
    auto it = tail.find(pos[j] + t);
    if (it == tail.end()) continue;
    Blocked b{j, it->second};
    if (!best || std::pair(b.tail, b.head) < std::pair(best->tail, best->head)) best = b;
  }
  if (best) return *best;
  return Applicable{};
}

inline Configuration apply_move(const Configuration& c, std::size_t i) {
  auto status = move_status(c, i);
  if (!is_applicable(status)) throw NotApplicable(i, status);
  auto states = c.states();
  auto positions = c.positions();
  if (i + 1 < c.size()) {
    const GridPoint t = head_translation(c, i);
    for (std::size_t j = i + 1; j < positions.size(); ++j) positions[j] += t;
  }
  states[i] = turn_rule(states[i]);
  return Configuration(c.machine(), std::move(states), std::move(positions));
}

inline std::vector<std::size_t> applicable_moves(const Configuration& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.state(i) != 0 && is_applicable(move_status(c, i))) out.push_back(i);
  return out;
}

inline Classification classify(const Configuration& c) {
  if (c.is_final()) return Classification::Final;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.state(i) != 0 && is_applicable(move_status(c, i))) return Classification::Active;
  return Classification::PermanentlyBlocked;
}

// Signed turn at monomer i in pi/3 units; positive is a left turn.
inline int turn_angle(const Configuration& c, std::size_t i) {
  if (i == 0 || i + 1 >= c.size())
    throw std::out_of_range("turn angle needs 1 <= i <= n-2, got " + std::to_string(i));
  return c.direction(i - 1).turn_to(c.direction(i));
}

inline std::size_t count_blocked(const Configuration& c) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.state(i) != 0 && is_blocked(move_status(c, i))) ++count;
  return count;
}

inline bool is_simple(std::span<const GridPoint> points) {
  std::unordered_set<GridPoint, GridPointHash> seen(points.begin(), points.end());
  return seen.size() == points.size();
}

}  // namespace turnfold
