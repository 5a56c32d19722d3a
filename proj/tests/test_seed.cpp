#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "stablab/seed.hpp"

using namespace stablab;

TEST_SUITE("seed") {
  TEST_CASE("splitmix64 matches the published reference sequence") {
    // Reference outputs of SplitMix64 seeded with 1234567.
    SplitMix64 rng(SeedKey(1234567));
    CHECK(rng() == 6457827717110365317ULL);
    CHECK(rng() == 3203168211198807973ULL);
    CHECK(rng() == 9817491932198370423ULL);
  }

  TEST_CASE("child keys are pure functions of the path") {
    const SeedKey root(7);
    CHECK(root.child(3) == root.child(3));
    CHECK(root.child("sample") == root.child("sample"));
    CHECK(root.child(3).child("learner") == SeedKey(7).child(3).child("learner"));
    CHECK_FALSE(root.child(0) == root.child(1));
    CHECK_FALSE(root.child("sample") == root.child("learner"));
    CHECK_FALSE(root.child(0) == root);
  }

  TEST_CASE("child streams do not collide over many indices and tags") {
    std::set<std::uint64_t> seen;
    const SeedKey root(42);
    for (std::uint64_t i = 0; i < 20000; ++i) {
      seen.insert(root.child(i).value());
      seen.insert(root.child(i).child("sample").value());
      seen.insert(root.child(i).child("learner").value());
    }
    CHECK(seen.size() == 60000);
  }

  TEST_CASE("uniform01 stays in [0, 1) with the right mean") {
    SplitMix64 rng(SeedKey(1));
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double u = uniform01(rng);
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    // Hoeffding at 1e-6 failure probability.
    CHECK(std::abs(sum / n - 0.5) < std::sqrt(std::log(2e6) / (2.0 * n)));
  }

  TEST_CASE("uniform_below is in range and roughly uniform") {
    SplitMix64 rng(SeedKey(2));
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
      const auto v = uniform_below(rng, 7);
      REQUIRE(v < 7);
      ++counts[v];
    }
    const double tol = std::sqrt(std::log(2e6 * 7) / (2.0 * n));
    for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 7.0) < tol);
    CHECK(uniform_below(rng, 1) == 0);
  }

  TEST_CASE("exponential1 has mean one") {
    SplitMix64 rng(SeedKey(3));
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double e = exponential1(rng);
      REQUIRE(e >= 0.0);
      sum += e;
    }
    // Standard deviation of the mean is 1/sqrt(n); allow 6 of them.
    CHECK(std::abs(sum / n - 1.0) < 6.0 / std::sqrt(double(n)));
  }
}
