#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "dpsqkd/rng.hpp"

using namespace dpsqkd;

TEST_CASE("counter draws reproduce the reference splitmix64 sequence") {
  // classic splitmix64 outputs for initial state 1234567
  CHECK(rng::at(1234567ull, 0) == 6457827717110365317ull);
  CHECK(rng::at(1234567ull, 1) == 3203168211198807973ull);
  CHECK(rng::at(1234567ull, 2) == 9817491932198370423ull);
}

TEST_CASE("stream keys are stable and distinct") {
  CHECK(rng::stream_key(1, rng::Stream::kPhase) == 13757245211066428519ull);
  CHECK(rng::at(rng::stream_key(1, rng::Stream::kPhase), 0) == 8614008028692990056ull);
  CHECK(rng::at(rng::stream_key(42, rng::Stream::kGate), 7) == 7886078316474364095ull);

  std::set<std::uint64_t> keys;
  for (auto s : {rng::Stream::kPhase, rng::Stream::kGate, rng::Stream::kSignalError,
                 rng::Stream::kResolve, rng::Stream::kEvent, rng::Stream::kToeplitz,
                 rng::Stream::kSample}) {
    keys.insert(rng::stream_key(7, s));
    keys.insert(rng::stream_key(8, s));
  }
  CHECK(keys.size() == 14);  // no collisions across streams or seeds
}

TEST_CASE("draws are pure functions of (key, index)") {
  const std::uint64_t key = rng::stream_key(99, rng::Stream::kEvent);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(rng::at(key, i) == rng::at(key, i));
  CHECK(rng::at(key, 0) != rng::at(key, 1));
}

TEST_CASE("bernoulli gate endpoints") {
  const auto never = rng::BernoulliGate::from_probability(0.0);
  const auto always = rng::BernoulliGate::from_probability(1.0);
  const auto half = rng::BernoulliGate::from_probability(0.5);
  CHECK_FALSE(never.hit(0));
  CHECK_FALSE(never.hit(~0ull));
  CHECK(always.hit(0));
  CHECK(always.hit(~0ull));
  CHECK(half.threshold == (1ull << 63));
  CHECK(half.hit((1ull << 63) - 1));
  CHECK_FALSE(half.hit(1ull << 63));
  CHECK_THROWS_AS((void)rng::BernoulliGate::from_probability(-0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)rng::BernoulliGate::from_probability(1.5), std::invalid_argument);
}

TEST_CASE("bernoulli empirical frequency matches its probability") {
  const double p = 0.01;
  const auto gate = rng::BernoulliGate::from_probability(p);
  const std::uint64_t key = rng::stream_key(5, rng::Stream::kGate);
  const int n = 2000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += gate.hit(rng::at(key, static_cast<std::uint64_t>(i)));
  const double freq = static_cast<double>(hits) / n;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(freq - p) < 4 * se);
}

TEST_CASE("uniform01 stays inside (0, 1]") {
  CHECK(rng::uniform01(0) > 0.0);
  CHECK(rng::uniform01(0) == doctest::Approx(std::pow(2.0, -53)));
  CHECK(rng::uniform01(~0ull) == 1.0);
}

TEST_CASE("geometric gaps: endpoints and mean") {
  CHECK(rng::geometric_slots(1.0, 0.5) == 1);
  CHECK(rng::geometric_slots(0.3, 1.0) == 1);  // u = 1 is the most likely bin
  CHECK_THROWS_AS((void)rng::geometric_slots(0.0, 0.5), std::invalid_argument);

  const double p = 0.01;
  const std::uint64_t key = rng::stream_key(11, rng::Stream::kEvent);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += static_cast<double>(
        rng::geometric_slots(p, rng::uniform01(rng::at(key, static_cast<std::uint64_t>(i)))));
  const double sample_mean = sum / n;
  const double expected = 1.0 / p;
  const double se = std::sqrt((1 - p) / (p * p) / n);
  CHECK(std::abs(sample_mean - expected) < 4 * se);
}
