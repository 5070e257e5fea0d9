#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "turnfold/machine.hpp"

namespace turnfold {

// ---------------------------------------------------------------------------
// Random streams

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of trial `index` under master seed `master`. Frozen: changing this changes every
// recorded experiment.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Uniform in [0, bound), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in the open interval (0, 1).
  double open01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Exponential with the given rate; strictly positive.
  double exponential(double rate) { return -std::log(open01()) / rate; }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Incremental chain engine backed by a dense occupancy grid.

namespace detail {

class ChainEngine {
 public:
  explicit ChainEngine(const TurningMachine& tm)
      : tm_(&tm),
        n_(tm.size()),
        radius_(static_cast<std::int32_t>(n_) + 1),
        side_(2 * static_cast<std::size_t>(radius_) + 1),
        occupancy_(side_ * side_, 0),
        states_(tm.initial_states()),
        positions_(tm.initial_path()) {
    for (std::size_t j = 0; j < n_; ++j) occupy(positions_[j], j);
  }

  void reset() {
    for (auto p : positions_) cell(p) = 0;
    states_ = tm_->initial_states();
    positions_ = tm_->initial_path();
    for (std::size_t j = 0; j < n_; ++j) occupy(positions_[j], j);
  }

  std::size_t size() const { return n_; }
  std::span<const int> states() const { return states_; }
  std::span<const GridPoint> positions() const { return positions_; }

  GridPoint translation(std::size_t i) const {
    Direction d;
    direction_of(positions_[i + 1] - positions_[i], d);
    return displacement(d.rotated(states_[i] > 0 ? 2 : -2));
  }

  // Precondition: states_[i] != 0.
  bool blocked(std::size_t i) const {
    if (i + 1 == n_) return false;
    const GridPoint t = translation(i);
    const std::size_t head = n_ - 1 - i;
    if (i + 1 <= head) {
      for (std::size_t k = 0; k <= i; ++k) {
        auto occ = at(positions_[k] - t);
        if (occ > i + 1) return true;
      }
    } else {
      for (std::size_t j = i + 1; j < n_; ++j) {
        auto occ = at(positions_[j] + t);
        if (occ != 0 && occ <= i + 1) return true;
      }
    }
    return false;
  }

  // Precondition: states_[i] != 0 and !blocked(i).
  void apply(std::size_t i) {
    if (i + 1 < n_) {
      const GridPoint t = translation(i);
      for (std::size_t j = i + 1; j < n_; ++j) cell(positions_[j]) = 0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        positions_[j] += t;
        occupy(positions_[j], j);
      }
    }
    states_[i] = turn_rule(states_[i]);
  }

 private:
  std::size_t index(GridPoint p) const {
    return static_cast<std::size_t>(p.y + radius_) * side_ + static_cast<std::size_t>(p.x + radius_);
  }
  bool inside(GridPoint p) const {
    return p.x >= -radius_ && p.x <= radius_ && p.y >= -radius_ && p.y <= radius_;
  }
  std::uint32_t at(GridPoint p) const { return inside(p) ? occupancy_[index(p)] : 0; }
  std::uint32_t& cell(GridPoint p) { return occupancy_[index(p)]; }
  void occupy(GridPoint p, std::size_t j) { cell(p) = static_cast<std::uint32_t>(j + 1); }

  const TurningMachine* tm_;
  std::size_t n_;
  std::int32_t radius_;
  std::size_t side_;
  std::vector<std::uint32_t> occupancy_;  // monomer index + 1, 0 when empty
  std::vector<int> states_;
  std::vector<GridPoint> positions_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Trajectories

enum class Outcome { Final, PermanentlyBlocked };

inline const char* to_string(Outcome o) {
  return o == Outcome::Final ? "final" : "permanently-blocked";
}

struct TrajectoryEvent {
  double time;
  std::size_t monomer;
  int state_after;
  friend bool operator==(const TrajectoryEvent&, const TrajectoryEvent&) = default;
};

struct TrajectoryLog {
  std::vector<TrajectoryEvent> events;
  Outcome outcome = Outcome::Final;
  double total_time = 0.0;
  std::size_t step_count = 0;
  std::uint64_t seed = 0;
  std::vector<int> final_states;
  std::vector<GridPoint> final_positions;

  std::vector<std::size_t> moves() const {
    std::vector<std::size_t> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.monomer);
    return out;
  }
  friend bool operator==(const TrajectoryLog&, const TrajectoryLog&) = default;
};

struct SampleOptions {
  bool record_events = true;
};

struct NoObserver {
  void operator()(std::size_t, std::span<const int>, std::span<const GridPoint>) const {}
};

namespace detail {

// Continuous-time Markov chain with unit rate per applicable move. Implemented by
// uniformization over the nonzero monomers: every nonzero monomer fires at rate 1 and a
// blocked firing changes nothing. Holding times until the next effective move are then
// Exp(k) with k applicable moves, and the move is uniform among them.
template <typename Observer>
TrajectoryLog run_trajectory(ChainEngine& engine, std::uint64_t seed, const SampleOptions& options,
                             Observer&& observer) {
  TrajectoryLog log;
  log.seed = seed;
  Rng rng(seed);
  const std::size_t n = engine.size();

  std::vector<std::size_t> active;
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (engine.states()[i] != 0) {
      slot[i] = active.size();
      active.push_back(i);
    }
  }
  std::vector<std::uint64_t> blocked_epoch(n, 0);
  std::uint64_t epoch = 1;
  std::size_t blocked_now = 0;
  double clock = 0.0;
  double last_event = 0.0;

  while (!active.empty()) {
    const std::size_t m = active.size();
    clock += rng.exponential(static_cast<double>(m));
    const std::size_t i = active[rng.below(m)];
    if (blocked_epoch[i] == epoch) continue;
    if (engine.blocked(i)) {
      blocked_epoch[i] = epoch;
      if (++blocked_now == m) break;
      continue;
    }
    engine.apply(i);
    ++epoch;
    blocked_now = 0;
    last_event = clock;
    const int s = engine.states()[i];
    if (options.record_events) log.events.push_back({clock, i, s});
    ++log.step_count;
    if (s == 0) {
      const std::size_t back = active.back();
      active[slot[i]] = back;
      slot[back] = slot[i];
      active.pop_back();
    }
    observer(i, engine.states(), engine.positions());
  }
  log.outcome = active.empty() ? Outcome::Final : Outcome::PermanentlyBlocked;
  log.total_time = last_event;
  log.final_states.assign(engine.states().begin(), engine.states().end());
  log.final_positions.assign(engine.positions().begin(), engine.positions().end());
  return log;
}

}  // namespace detail

template <typename Observer>
TrajectoryLog sample_trajectory(const TurningMachine& tm, std::uint64_t seed, const SampleOptions& options,
                                Observer&& observer) {
  detail::ChainEngine engine(tm);
  return detail::run_trajectory(engine, seed, options, std::forward<Observer>(observer));
}

inline TrajectoryLog sample_trajectory(const TurningMachine& tm, std::uint64_t seed,
                                       const SampleOptions& options = {}) {
  return sample_trajectory(tm, seed, options, NoObserver{});
}

// ---------------------------------------------------------------------------
// Aggregation

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct TrialStats {
  std::size_t trials = 0;
  double mean_time = 0.0;
  double std_time = 0.0;
  double blocked_fraction = 0.0;
  double mean_steps = 0.0;

  double standard_error() const { return trials > 0 ? std_time / std::sqrt(double(trials)) : 0.0; }
};

struct TrialRecord {
  double time = 0.0;
  std::size_t steps = 0;
  Outcome outcome = Outcome::Final;
};

// Worker count: TURNFOLD_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TURNFOLD_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return hw;
}

// Runs `body(i)` for i in [0, count) on up to worker_count() threads. Each index is handled
// by exactly one worker; results must be written to per-index slots.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = next++; i < count; i = next++) body(i, w);
    });
  }
  for (auto& t : pool) t.join();
}

inline TrialStats summarize(std::span<const TrialRecord> records) {
  TrialStats st;
  st.trials = records.size();
  if (records.empty()) return st;
  CompensatedSum time_sum, step_sum;
  std::size_t blocked = 0;
  for (const auto& r : records) {
    time_sum.add(r.time);
    step_sum.add(static_cast<double>(r.steps));
    if (r.outcome == Outcome::PermanentlyBlocked) ++blocked;
  }
  const double n = static_cast<double>(records.size());
  st.mean_time = time_sum.value() / n;
  st.mean_steps = step_sum.value() / n;
  st.blocked_fraction = static_cast<double>(blocked) / n;
  if (records.size() > 1) {
    CompensatedSum sq;
    for (const auto& r : records) sq.add((r.time - st.mean_time) * (r.time - st.mean_time));
    st.std_time = std::sqrt(sq.value() / (n - 1.0));
  }
  return st;
}

// Runs independent trials; trial i uses trial_seed(seed, i).
inline std::vector<TrialRecord> run_trials(const TurningMachine& tm, std::size_t trials, std::uint64_t seed) {
  std::vector<TrialRecord> records(trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  std::vector<std::unique_ptr<detail::ChainEngine>> engines(workers);
  parallel_for(trials, [&](std::size_t i, unsigned w) {
    auto& engine = engines[w];
    if (!engine)
      engine = std::make_unique<detail::ChainEngine>(tm);
    else
      engine->reset();
    auto log = detail::run_trajectory(*engine, trial_seed(seed, i), SampleOptions{false}, NoObserver{});
    records[i] = {log.total_time, log.step_count, log.outcome};
  });
  return records;
}

inline TrialStats trial_stats(const TurningMachine& tm, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trial_stats needs at least one trial");
  auto records = run_trials(tm, trials, seed);
  return summarize(records);
}

// ---------------------------------------------------------------------------
// Timing experiments

inline double harmonic(std::size_t n) {
  CompensatedSum s;
  for (std::size_t k = n; k >= 1; --k) s.add(1.0 / static_cast<double>(k));
  return s.value();
}

struct ScalingRow {
  std::size_t n = 0;
  TrialStats stats;
};

struct LogFit {
  double intercept = 0.0;  // a in  mean_time ~ a + b ln n
  double slope = 0.0;      // b
  double r_squared = 0.0;
};

struct ScalingTable {
  int initial_state = 0;
  std::vector<ScalingRow> rows;
  LogFit fit;
};

// Ordinary least squares of y on ln(x).
inline LogFit fit_logarithmic(std::span<const double> xs, std::span<const double> ys) {
  LogFit fit;
  const std::size_t m = xs.size();
  if (m < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += std::log(xs[k]);
    my += ys[k];
  }
  mx /= double(m);
  my /= double(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = std::log(xs[k]) - mx, dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = ys[k] - (fit.intercept + fit.slope * std::log(xs[k]));
    sse += r * r;
  }
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

// Timing of L^s_n over the given sizes; size n uses master seed trial_seed(seed, n).
inline ScalingTable scaling_experiment(int s, std::span<const std::size_t> sizes, std::size_t trials,
                                       std::uint64_t seed) {
  if (s < 1 || s > 5) throw std::invalid_argument("scaling experiments take an initial state in 1..5");
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw std::invalid_argument("sizes must be ascending");
  ScalingTable table;
  table.initial_state = s;
  std::vector<double> xs, ys;
  for (std::size_t n : sizes) {
    auto tm = TurningMachine::line_rotation(s, n);
    auto stats = trial_stats(tm, trials, trial_seed(seed, n));
    table.rows.push_back({n, stats});
    xs.push_back(static_cast<double>(n));
    ys.push_back(stats.mean_time);
  }
  table.fit = fit_logarithmic(xs, ys);
  return table;
}

}  // namespace turnfold
