#pragma once

#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "turnfold/machine.hpp"

namespace turnfold {

inline constexpr std::size_t kDefaultReachCap = 10'000'000;

// Reachable configurations are identified by their state vectors. Keys store the number of
// moves made by each monomer, one byte per monomer.
namespace detail {

inline std::string encode_states(const TurningMachine& tm, std::span<const int> states) {
  std::string key(states.size(), '\0');
  for (std::size_t i = 0; i < states.size(); ++i)
    key[i] = static_cast<char>(static_cast<unsigned char>(std::abs(tm.initial_state(i) - states[i])));
  return key;
}

inline std::vector<int> decode_states(const TurningMachine& tm, std::string_view key) {
  std::vector<int> states(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) {
    const int moved = static_cast<unsigned char>(key[i]);
    const int s0 = tm.initial_state(i);
    states[i] = s0 - sign(s0) * moved;
  }
  return states;
}

inline void check_encodable(const TurningMachine& tm) {
  for (int s : tm.initial_states())
    if (std::abs(s) > 255) throw MachineError("reachability supports initial states up to |255|");
}

// Positions of a state vector; caller guarantees the vector is reachable.
inline std::vector<GridPoint> walk(const TurningMachine& tm, std::span<const int> states) {
  std::vector<GridPoint> pos(states.size());
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    pos[i + 1] = pos[i] + rotated_direction(tm, i, tm.initial_state(i) - states[i]);
  return pos;
}

// Applicable moves of a configuration given as raw states and positions.
inline std::vector<std::size_t> applicable(std::span<const int> states, std::span<const GridPoint> pos) {
  const std::size_t n = states.size();
  std::unordered_map<GridPoint, std::size_t, GridPointHash> where;
  where.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) where.emplace(pos[k], k);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (states[i] == 0) continue;
    bool blocked = false;
    if (i + 1 < n) {
      Direction d;
      direction_of(pos[i + 1] - pos[i], d);
      const GridPoint t = displacement(d.rotated(states[i] > 0 ? 2 : -2));
      for (std::size_t j = i + 1; j < n && !blocked; ++j) {
        auto it = where.find(pos[j] + t);
        blocked = it != where.end() && it->second <= i;
      }
    }
    if (!blocked) out.push_back(i);
  }
  return out;
}

}  // namespace detail

struct ReachReport {
  std::size_t reachable_count = 0;
  std::vector<std::vector<int>> blocked_configs;  // in breadth-first discovery order
  bool final_reached = false;
  bool truncated = false;
  // Shortest (then lexicographically least) move sequence to the first blocked configuration.
  std::optional<std::vector<std::size_t>> first_blocked_witness;
};

// Breadth-first closure over state vectors. Successors are generated in ascending monomer
// order and the frontier is FIFO, so each configuration's parent chain is its
// lexicographically least shortest move sequence.
class Reachability {
 public:
  struct Visit {
    std::size_t id;
    const std::vector<int>& states;
    const std::vector<GridPoint>& positions;
    const std::vector<std::size_t>& applicable;
  };

  Reachability(TurningMachine tm, std::size_t cap) : tm_(std::move(tm)), cap_(cap) {
    if (cap_ == 0) throw std::invalid_argument("reachability cap must be at least 1");
    detail::check_encodable(tm_);
  }

  template <typename Visitor>
  ReachReport run(Visitor&& visit) {
    ReachReport report;
    nodes_.clear();
    index_.clear();
    const auto root = detail::encode_states(tm_, tm_.initial_states());
    add(root, kNoParent, 0);
    std::size_t head = 0;
    std::vector<int> states;
    while (head < nodes_.size()) {
      const std::size_t id = head++;
      states = detail::decode_states(tm_, *nodes_[id].key);
      const auto positions = detail::walk(tm_, states);
      const auto moves = detail::applicable(states, positions);
      const bool final = std::all_of(states.begin(), states.end(), [](int s) { return s == 0; });
      if (final) report.final_reached = true;
      if (!final && moves.empty()) {
        report.blocked_configs.push_back(states);
        if (!report.first_blocked_witness) report.first_blocked_witness = path_to(id);
      }
      visit(Visit{id, states, positions, moves});
      for (std::size_t i : moves) {
        std::string key = *nodes_[id].key;
        key[i] = static_cast<char>(static_cast<unsigned char>(key[i]) + 1);
        if (index_.count(key)) continue;
        if (nodes_.size() >= cap_) {
          report.truncated = true;
          continue;
        }
        add(std::move(key), id, i);
      }
    }
    report.reachable_count = nodes_.size();
    return report;
  }

  ReachReport run() {
    return run([](const Visit&) {});
  }

  std::vector<std::size_t> path_to(std::size_t id) const {
    std::vector<std::size_t> moves;
    while (nodes_[id].parent != kNoParent) {
      moves.push_back(nodes_[id].move);
      id = nodes_[id].parent;
    }
    return {moves.rbegin(), moves.rend()};
  }

  const TurningMachine& machine() const { return tm_; }

 private:
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);
  struct Node {
    const std::string* key;
    std::size_t parent;
    std::size_t move;
  };

  void add(std::string key, std::size_t parent, std::size_t move) {
    auto [it, inserted] = index_.emplace(std::move(key), nodes_.size());
    nodes_.push_back({&it->first, parent, move});
  }

  TurningMachine tm_;
  std::size_t cap_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline ReachReport reachable(const TurningMachine& tm, std::size_t cap = kDefaultReachCap) {
  return Reachability(tm, cap).run();
}

struct Folds {};
struct Unfoldable {
  std::vector<std::size_t> witness;
  std::vector<int> blocked_states;
};
struct Inconclusive {
  std::size_t explored;
};
using Verdict = std::variant<Folds, Unfoldable, Inconclusive>;

inline const char* verdict_name(const Verdict& v) {
  if (std::holds_alternative<Folds>(v)) return "folds";
  if (std::holds_alternative<Unfoldable>(v)) return "unfoldable";
  return "inconclusive";
}

struct Decision {
  Verdict verdict;
  ReachReport report;
};

// Every trajectory is finite (each move lowers the total |state|) and ends either final or
// permanently blocked; the all-zero state vector has a single geometry. So the machine
// computes its target iff no permanently blocked configuration is reachable.
inline Decision decide(const TurningMachine& tm, std::size_t cap = kDefaultReachCap) {
  Reachability reach(tm, cap);
  auto report = reach.run();
  if (!report.blocked_configs.empty()) {
    Unfoldable u{*report.first_blocked_witness, report.blocked_configs.front()};
    return {u, std::move(report)};
  }
  if (report.truncated) return {Inconclusive{report.reachable_count}, std::move(report)};
  return {Folds{}, std::move(report)};
}

inline Verdict decide_folds(const TurningMachine& tm, std::size_t cap = kDefaultReachCap) {
  return decide(tm, cap).verdict;
}

class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t step, std::size_t monomer, MoveStatus status)
      : std::runtime_error("replay failed at step " + std::to_string(step) + ": monomer " +
                           std::to_string(monomer) + " is " + describe(status)),
        step_(step),
        monomer_(monomer),
        status_(status) {}
  std::size_t step() const { return step_; }
  std::size_t monomer() const { return monomer_; }
  const MoveStatus& status() const { return status_; }

 private:
  std::size_t step_;
  std::size_t monomer_;
  MoveStatus status_;
};

inline Configuration replay(const TurningMachine& tm, std::span<const std::size_t> moves) {
  Configuration c(tm);
  for (std::size_t t = 0; t < moves.size(); ++t) {
    const std::size_t i = moves[t];
    if (i >= c.size()) throw ReplayError(t, i, ZeroState{});
    auto status = move_status(c, i);
    if (!is_applicable(status)) throw ReplayError(t, i, status);
    c = apply_move(c, i);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Invariant suite

struct Counterexample {
  std::vector<int> states;
  std::size_t monomer = 0;
  std::string detail;
};

struct InvariantResult {
  std::string name;
  bool applicable = false;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::optional<Counterexample> first;
};

struct InvariantReport {
  std::vector<InvariantResult> results;
  std::size_t configurations = 0;
  bool truncated = false;

  bool passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.violations == 0; });
  }
  const InvariantResult* find(std::string_view name) const {
    for (const auto& r : results)
      if (r.name == name) return &r;
    return nullptr;
  }
};

// Invariant names used in reports.
namespace invariant {
inline constexpr std::string_view kSimple = "simple-chain";
inline constexpr std::string_view kStateBounds = "state-bounds";
inline constexpr std::string_view kRoundTrip = "reconstruct-round-trip";
inline constexpr std::string_view kAdjacentRotation = "adjacent-rotation-at-most-2";
inline constexpr std::string_view kTurnAngleChain = "turn-angle-chain";
inline constexpr std::string_view kUnblockedStates = "low-progress-never-blocked";
inline constexpr std::string_view kHeadAboveTail = "head-above-tail-below";
inline constexpr std::string_view kPiBlocking = "pi-blocking-state-1-next-to-3";
inline constexpr std::string_view kBlockedFraction = "blocked-at-most-3n/4";
}  // namespace invariant

// Sigma if tm is the line-rotation machine L^sigma_n, otherwise nothing.
inline std::optional<int> line_rotation_state(const TurningMachine& tm) {
  if (!tm.is_east_line() || tm.size() < 2) return std::nullopt;
  const auto& s = tm.initial_states();
  if (s.back() != 0 || s.front() <= 0) return std::nullopt;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] != s.front()) return std::nullopt;
  return s.front();
}

// Checks the structural invariants on individual configurations of one machine.
class InvariantChecker {
 public:
  explicit InvariantChecker(const TurningMachine& tm) : tm_(tm) {
    const auto& s0 = tm.initial_states();
    const bool uniform = tm.uniform_initial_direction();
    const bool nonneg_le5 = std::all_of(s0.begin(), s0.end(), [](int s) { return s >= 0 && s <= 5; });
    const bool nonneg_le3 = std::all_of(s0.begin(), s0.end(), [](int s) { return s >= 0 && s <= 3; });
    const auto sigma = line_rotation_state(tm);
    add(invariant::kSimple, true);
    add(invariant::kStateBounds, true);
    add(invariant::kRoundTrip, true);
    add(invariant::kAdjacentRotation, uniform);
    add(invariant::kTurnAngleChain, uniform);
    add(invariant::kUnblockedStates, uniform && nonneg_le5);
    add(invariant::kHeadAboveTail, tm.is_east_line() && nonneg_le3);
    add(invariant::kPiBlocking, sigma == 3);
    add(invariant::kBlockedFraction, sigma.has_value() && *sigma <= 5);
  }

  void check(const Configuration& c) {
    const std::size_t n = c.size();
    const auto& states = c.states();
    const auto& pos = c.positions();
    pending_states_ = states;

    record(invariant::kSimple, is_simple(pos), 0, "positions repeat");
    {
      std::size_t bad = n;
      for (std::size_t i = 0; i < n && bad == n; ++i)
        if (!tm_.valid_state(i, states[i])) bad = i;
      record(invariant::kStateBounds, bad == n, bad == n ? 0 : bad, "state outside [0, s0]");
    }
    {
      bool ok = true;
      try {
        ok = reconstruct_positions(tm_, states) == c;
      } catch (const std::exception&) {
        ok = false;
      }
      record(invariant::kRoundTrip, ok, 0, "reconstructed chain differs");
    }
    if (enabled(invariant::kAdjacentRotation)) {
      std::size_t bad = n;
      // Only bonds with a successor: the last monomer carries no bond of its own.
      for (std::size_t i = 0; i + 2 < n && bad == n; ++i)
        if (std::abs(c.rotation(i) - c.rotation(i + 1)) > 2) bad = i;
      record(invariant::kAdjacentRotation, bad == n, bad == n ? 0 : bad, "|rotation(i) - rotation(i+1)| > 2");
    }
    if (enabled(invariant::kTurnAngleChain) && n >= 3) {
      // prefix[k] = sum of turn angles alpha_1..alpha_k
      std::vector<int> prefix(n - 1, 0);
      for (std::size_t k = 1; k + 1 < n; ++k) prefix[k] = prefix[k - 1] + turn_angle(c, k);
      std::size_t bad = n;
      for (std::size_t i = 0; i + 1 < n && bad == n; ++i)
        for (std::size_t j = i + 1; j + 1 < n && bad == n; ++j)
          if (c.rotation(j) - c.rotation(i) != prefix[j] - prefix[i]) bad = j;
      record(invariant::kTurnAngleChain, bad == n, bad == n ? 0 : bad,
             "rotation difference differs from summed turn angles");
    }
    const bool need_status = enabled(invariant::kUnblockedStates) || enabled(invariant::kPiBlocking) ||
                             enabled(invariant::kBlockedFraction);
    if (need_status) {
      std::vector<bool> blocked(n, false);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (states[i] != 0 && is_blocked(move_status(c, i))) {
          blocked[i] = true;
          ++count;
        }
      if (enabled(invariant::kUnblockedStates)) {
        std::size_t bad = n;
        for (std::size_t i = 0; i < n && bad == n; ++i)
          if (blocked[i] && c.delta_s(i) <= 1) bad = i;
        record(invariant::kUnblockedStates, bad == n, bad == n ? 0 : bad, "blocked monomer with delta_s <= 1");
      }
      if (enabled(invariant::kPiBlocking)) {
        std::size_t bad = n;
        for (std::size_t i = 0; i < n && bad == n; ++i) {
          if (!blocked[i]) continue;
          const bool neighbor3 = (i > 0 && states[i - 1] == 3) || (i + 1 < n && states[i + 1] == 3);
          if (states[i] != 1 || !neighbor3) bad = i;
        }
        record(invariant::kPiBlocking, bad == n, bad == n ? 0 : bad,
               "blocked monomer not in state 1 beside a state-3 monomer");
      }
      if (enabled(invariant::kBlockedFraction))
        record(invariant::kBlockedFraction, 4 * count <= 3 * n, 0,
               std::to_string(count) + " blocked of " + std::to_string(n));
    }
    if (enabled(invariant::kHeadAboveTail)) {
      std::size_t bad = n;
      for (std::size_t i = 0; i < n && bad == n; ++i) {
        for (std::size_t k = 0; k < i && bad == n; ++k)
          if (pos[k].y > pos[i].y) bad = i;
        for (std::size_t j = i + 1; j < n && bad == n; ++j)
          if (pos[j].y < pos[i].y) bad = i;
      }
      record(invariant::kHeadAboveTail, bad == n, bad == n ? 0 : bad, "head below or tail above monomer");
    }
  }

  InvariantReport report() const {
    InvariantReport r;
    r.results = results_;
    return r;
  }

 private:
  void add(std::string_view name, bool applicable) {
    InvariantResult r;
    r.name = std::string(name);
    r.applicable = applicable;
    results_.push_back(std::move(r));
  }
  InvariantResult& get(std::string_view name) {
    for (auto& r : results_)
      if (r.name == name) return r;
    throw std::logic_error("unknown invariant");
  }
  bool enabled(std::string_view name) { return get(name).applicable; }

  void record(std::string_view name, bool ok, std::size_t monomer, const std::string& detail) {
    auto& r = get(name);
    ++r.checked;
    if (ok) return;
    ++r.violations;
    if (!r.first) r.first = Counterexample{pending_states_, monomer, detail};
  }

  TurningMachine tm_;
  std::vector<InvariantResult> results_;
  std::vector<int> pending_states_;
};

inline InvariantReport check_invariants(const TurningMachine& tm, std::size_t max_configs = kDefaultReachCap,
                                        std::span<const std::vector<int>> injected = {}) {
  InvariantChecker checker(tm);
  Reachability reach(tm, max_configs);
  auto reach_report = reach.run([&](const Reachability::Visit& v) {
    checker.check(Configuration(tm, v.states, v.positions));
  });
  std::size_t extra = 0;
  for (const auto& states : injected) {
    checker.check(reconstruct_positions(tm, states));
    ++extra;
  }
  auto report = checker.report();
  report.configurations = reach_report.reachable_count + extra;
  report.truncated = reach_report.truncated;
  return report;
}

}  // namespace turnfold
