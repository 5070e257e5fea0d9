#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "turnfold/explore.hpp"
#include "turnfold/sim.hpp"

using namespace turnfold;

TEST(Rng, SplitMixReferenceValue) {
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

TEST(Rng, BelowIsUniform) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int k = 0; k < draws; ++k) ++counts[rng.below(7)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - draws / 7.0) * (c - draws / 7.0) / (draws / 7.0);
  EXPECT_LT(chi2, 22.46);  // 6 degrees of freedom, p = 0.001
}

TEST(Rng, Open01StaysInside) {
  Rng rng(5);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.open01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Sampler, SameSeedSameTrajectory) {
  auto tm = TurningMachine::line_rotation(3, 12);
  auto a = sample_trajectory(tm, 99);
  auto b = sample_trajectory(tm, 99);
  EXPECT_EQ(a, b);
  auto c = sample_trajectory(tm, 100);
  EXPECT_NE(a.events, c.events);
}

TEST(Sampler, FinalRunsMakeEveryMove) {
  for (int s = 1; s <= 5; ++s) {
    auto tm = TurningMachine::line_rotation(s, 10);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto log = sample_trajectory(tm, seed);
      ASSERT_EQ(log.outcome, Outcome::Final);
      EXPECT_EQ(static_cast<long>(log.step_count), tm.total_moves());
      EXPECT_TRUE(std::is_sorted(log.events.begin(), log.events.end(),
                                 [](auto& x, auto& y) { return x.time < y.time; }));
      EXPECT_DOUBLE_EQ(log.total_time, log.events.back().time);
    }
  }
}

TEST(Sampler, ReplayReproducesEndState) {
  auto tm = TurningMachine::line_rotation(6, 7);
  std::size_t blocked = 0;
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    auto log = sample_trajectory(tm, seed);
    auto c = replay(tm, log.moves());
    EXPECT_EQ(c.states(), log.final_states);
    EXPECT_EQ(c.positions(), log.final_positions);
    const auto cls = classify(c);
    EXPECT_EQ(cls == Classification::PermanentlyBlocked, log.outcome == Outcome::PermanentlyBlocked);
    EXPECT_NE(cls, Classification::Active);
    if (log.outcome == Outcome::PermanentlyBlocked) ++blocked;
  }
  EXPECT_GT(blocked, 0u);
}

TEST(Sampler, ObserverSeesEveryMove) {
  auto tm = TurningMachine::line_rotation(2, 6);
  std::size_t calls = 0;
  auto log = sample_trajectory(tm, 1, SampleOptions{}, [&](std::size_t i, std::span<const int> s,
                                                         std::span<const GridPoint> p) {
    ++calls;
    EXPECT_EQ(std::vector<GridPoint>(p.begin(), p.end()), oracle::positions(tm, {s.begin(), s.end()}));
    (void)i;
  });
  EXPECT_EQ(calls, log.step_count);
}

// First holding time of L^1_n is Exp(n-1): every nonzero monomer is applicable.
TEST(Sampler, FirstHoldingTimeIsExponential) {
  const std::size_t n = 9;
  auto tm = TurningMachine::line_rotation(1, n);
  const int runs = 4000;
  std::vector<double> first;
  for (int k = 0; k < runs; ++k) first.push_back(sample_trajectory(tm, trial_seed(11, k)).events.front().time);
  std::sort(first.begin(), first.end());
  double d = 0;
  for (int k = 0; k < runs; ++k) {
    const double f = 1.0 - std::exp(-double(n - 1) * first[k]);
    d = std::max({d, f - double(k) / runs, double(k + 1) / runs - f});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(double(runs)));  // Kolmogorov-Smirnov, p = 0.01
}

// With L^3_5 nothing is blocked initially, so the first move is uniform over four monomers.
TEST(Sampler, FirstMoveIsUniformAmongApplicable) {
  auto tm = TurningMachine::line_rotation(3, 5);
  std::vector<int> counts(4, 0);
  const int runs = 8000;
  for (int k = 0; k < runs; ++k) ++counts[sample_trajectory(tm, trial_seed(12, k)).events.front().monomer];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - runs / 4.0) * (c - runs / 4.0) / (runs / 4.0);
  EXPECT_LT(chi2, 16.27);  // 3 degrees of freedom, p = 0.001
}

// Thinning over nonzero monomers against direct recomputation of the applicable set, on a
// machine that blocks often.
TEST(Sampler, AgreesWithDirectSampler) {
  auto tm = TurningMachine::line_rotation(6, 7);
  const std::size_t runs = 6000;
  auto stats = trial_stats(tm, runs, 21);
  std::mt19937_64 gen(21);
  CompensatedSum t, t2;
  std::size_t blocked = 0;
  for (std::size_t k = 0; k < runs; ++k) {
    auto r = oracle::direct_sample(tm, gen);
    t.add(r.time);
    t2.add(r.time * r.time);
    if (r.blocked) ++blocked;
  }
  const double mean = t.value() / runs;
  const double sd = std::sqrt(t2.value() / runs - mean * mean);
  const double se = std::hypot(sd, stats.std_time) / std::sqrt(double(runs));
  EXPECT_NEAR(stats.mean_time, mean, 4 * se);
  const double p = double(blocked) / runs;
  const double pse = std::sqrt(2 * p * (1 - p) / runs);
  EXPECT_NEAR(stats.blocked_fraction, p, 4 * pse + 1e-9);
}

TEST(Sampler, HalfTurnMeanTracksHarmonicBound) {
  auto tm = TurningMachine::line_rotation(1, 8);
  auto st = trial_stats(tm, 20000, 4);
  EXPECT_NEAR(st.mean_time, harmonic(7), 4 * st.standard_error());
}

TEST(Trials, ThreadCountDoesNotChangeResults) {
  auto tm = TurningMachine::line_rotation(4, 20);
  setenv("TURNFOLD_THREADS", "1", 1);
  auto one = run_trials(tm, 64, 8);
  setenv("TURNFOLD_THREADS", "4", 1);
  auto four = run_trials(tm, 64, 8);
  unsetenv("TURNFOLD_THREADS");
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].time, four[i].time);
    EXPECT_EQ(one[i].steps, four[i].steps);
  }
  EXPECT_EQ(summarize(one).mean_time, summarize(four).mean_time);
}

TEST(Trials, WorkerCountHonoursEnvironment) {
  setenv("TURNFOLD_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("TURNFOLD_THREADS", "junk", 1);
  EXPECT_GE(worker_count(), 1u);
  unsetenv("TURNFOLD_THREADS");
}

TEST(Trials, Errors) {
  auto tm = TurningMachine::line_rotation(1, 4);
  EXPECT_THROW(trial_stats(tm, 0, 1), std::invalid_argument);
  std::vector<std::size_t> sizes{8, 4};
  EXPECT_THROW(scaling_experiment(3, sizes, 10, 1), std::invalid_argument);
  std::vector<std::size_t> ok{4, 8};
  EXPECT_THROW(scaling_experiment(6, ok, 10, 1), std::invalid_argument);
}

TEST(Stats, HarmonicAndCompensatedSum) {
  EXPECT_DOUBLE_EQ(harmonic(3), 11.0 / 6.0);
  EXPECT_DOUBLE_EQ(harmonic(1), 1.0);
  CompensatedSum s;
  s.add(1e16);
  for (int k = 0; k < 10; ++k) s.add(1.0);
  s.add(-1e16);
  EXPECT_DOUBLE_EQ(s.value(), 10.0);
}

TEST(Stats, LogFitRecoversExactLine) {
  std::vector<double> xs{2, 4, 8, 16, 32}, ys;
  for (double x : xs) ys.push_back(1.5 + 0.25 * std::log(x));
  auto f = fit_logarithmic(xs, ys);
  EXPECT_NEAR(f.intercept, 1.5, 1e-12);
  EXPECT_NEAR(f.slope, 0.25, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Stats, ScalingUsesPerSizeSeeds) {
  std::vector<std::size_t> sizes{4, 8};
  auto table = scaling_experiment(2, sizes, 50, 17);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[1].stats.mean_time,
            trial_stats(TurningMachine::line_rotation(2, 8), 50, trial_seed(17, 8)).mean_time);
}
