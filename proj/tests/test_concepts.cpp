#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "stablab/concepts.hpp"
#include "stablab/error.hpp"
#include "stablab/seed.hpp"

using namespace stablab;

namespace {

Hypothesis pat(const char* p) { return Hypothesis::from_pattern(p); }

}  // namespace

TEST_SUITE("concepts") {
  TEST_CASE("hypothesis patterns round-trip and order with + first") {
    const Hypothesis h = pat("+-+");
    CHECK(h.size() == 3);
    CHECK(h(0) == Label::plus);
    CHECK(h(1) == Label::minus);
    CHECK(h.pattern() == "+-+");
    CHECK(h.with_label(1, Label::plus) == Hypothesis::all_plus(3));
    CHECK(Hypothesis::all_plus(3) < pat("+-+"));
    CHECK(pat("+-+") < pat("-++"));
    CHECK(pat("+--") < pat("-++"));
    CHECK(pat("--+") < Hypothesis::all_minus(3));
    CHECK_THROWS_AS(Hypothesis::from_pattern("+x"), ArgumentError);
    CHECK_THROWS_AS(h.with_label(5, Label::plus), DomainMismatchError);
  }

  TEST_CASE("domain lookups") {
    const Domain d({"a", "b", "c"});
    CHECK(d.size() == 3);
    CHECK(d.index_of("b") == 1);
    CHECK_FALSE(d.find("z").has_value());
    CHECK_THROWS_AS(d.index_of("z"), DomainMismatchError);
    CHECK_THROWS_AS(Domain({"a", "a"}), ArgumentError);
    CHECK(Domain::numbered(3).ids() == std::vector<std::string>{"1", "2", "3"});
    CHECK(Domain::numbered(3) == Domain({"1", "2", "3"}));
  }

  TEST_CASE("class construction rejects duplicates and wrong sizes") {
    const Domain d = Domain::numbered(2);
    CHECK_THROWS_AS(ConceptClass(d, {pat("+-"), pat("+-")}), ArgumentError);
    CHECK_THROWS_AS(ConceptClass(d, {pat("+-+")}), ArgumentError);
    const ConceptClass c(d, {pat("--"), pat("++")});
    CHECK(c[0] == pat("++"));
    CHECK(c.index_of(pat("--")) == 1);
    CHECK_FALSE(c.contains(pat("+-")));
  }

  TEST_CASE("make_cube") {
    CHECK(make_cube(1).size() == 2);
    CHECK(make_cube(1).contains(pat("+")));
    CHECK(make_cube(1).contains(pat("-")));
    CHECK(make_cube(2).size() == 4);
    CHECK(make_cube(2).domain().size() == 2);
    CHECK(make_cube(3).size() == 8);
    CHECK(vc_dimension(make_cube(3)) == 3);
    CHECK_THROWS_AS(make_cube(17), SizeError);
    CHECK_THROWS_AS(make_cube(0), ArgumentError);
  }

  TEST_CASE("make_thresholds") {
    const ConceptClass t3 = make_thresholds(3);
    REQUIRE(t3.size() == 3);
    CHECK(t3[0] == pat("++"));
    CHECK(t3[1] == pat("-+"));
    CHECK(t3[2] == pat("--"));
    const ConceptClass t2 = make_thresholds(2);
    CHECK(t2.domain().size() == 1);
    CHECK(t2[0] == pat("+"));
    CHECK(t2[1] == pat("-"));
    CHECK(littlestone_dimension(make_thresholds(5)) == 2);
    CHECK_THROWS_AS(make_thresholds(1), ArgumentError);
  }

  TEST_CASE("make_singletons") {
    const ConceptClass s3 = make_singletons(3);
    CHECK(s3.size() == 3);
    for (const auto& h : s3.hypotheses()) CHECK(__builtin_popcountll(h.plus_mask()) == 1);
    CHECK_FALSE(s3.contains(Hypothesis::all_minus(3)));
    CHECK(hollow_star_number(make_singletons(4), 4) == 4);
    CHECK_THROWS_AS(make_singletons(1), ArgumentError);
  }

  TEST_CASE("vc_dimension examples") {
    CHECK(vc_dimension(make_cube(3)) == 3);
    CHECK(vc_dimension(make_thresholds(5)) == 1);
    CHECK(vc_dimension(make_singletons(3)) == 1);
    CHECK(vc_dimension(ConceptClass(Domain::numbered(3), {pat("+-+")})) == 0);
  }

  TEST_CASE("littlestone_dimension examples") {
    CHECK(littlestone_dimension(make_cube(2)) == 2);
    CHECK(littlestone_dimension(make_thresholds(5)) == 2);
    CHECK(littlestone_dimension(ConceptClass(Domain::numbered(2), {pat("+-")})) == 0);
  }

  TEST_CASE("hollow_star_number examples") {
    CHECK(hollow_star_number(make_singletons(4), 4) == 4);
    CHECK(hollow_star_number(make_cube(2), 2) == 0);
    CHECK(hollow_star_number(make_thresholds(5), 3) == 2);
    CHECK_THROWS_AS(hollow_star_number(make_cube(2), 21), SizeError);
    const auto star = find_hollow_star(make_thresholds(5), 2);
    REQUIRE(star.has_value());
    CHECK(star->points.size() == 2);
    CHECK(star->centre == std::vector<Label>{Label::plus, Label::minus});
  }

  TEST_CASE("dimension caps raise size errors with a lower bound") {
    BruteForceLimits limits;
    limits.max_subset = 2;
    try {
      vc_dimension(make_cube(4), limits);
      FAIL("expected a size error");
    } catch (const SizeError& e) {
      CHECK(e.lower_bound() == 2);
    }
    limits = {};
    limits.max_domain = 3;
    CHECK_THROWS_AS(littlestone_dimension(make_cube(4), limits), SizeError);
  }

  TEST_CASE("generated dimensions agree with the brute-force oracles") {
    for (std::size_t d = 1; d <= 6; ++d) {
      CAPTURE(d);
      const ConceptClass c = make_cube(d);
      CHECK(vc_dimension(c) == d);
      CHECK(littlestone_dimension(c) == d);
      if (d <= 4) CHECK(oracle::ldim(c) == d);
    }
    for (std::size_t t = 2; t <= 17; ++t) {
      CAPTURE(t);
      CHECK(vc_dimension(make_thresholds(t)) == 1);
    }
    for (std::size_t t = 2; t <= 9; ++t) {
      CAPTURE(t);
      const ConceptClass c = make_thresholds(t);
      CHECK(vc_dimension(c) == oracle::vc(c));
      CHECK(littlestone_dimension(c) == oracle::ldim(c));
    }
    for (std::size_t s = 2; s <= 6; ++s) {
      CAPTURE(s);
      const ConceptClass c = make_singletons(s);
      CHECK(hollow_star_number(c, s) == s);
      CHECK(oracle::has_hollow_star(c, s));
      CHECK(vc_dimension(c) == oracle::vc(c));
      CHECK(littlestone_dimension(c) == oracle::ldim(c));
    }
  }

  TEST_CASE("property: on random small classes every dimension matches its oracle") {
    SplitMix64 rng(SeedKey(11));
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 2 + uniform_below(rng, 4);
      std::set<std::uint64_t> members;
      const std::size_t target = 1 + uniform_below(rng, std::size_t{1} << n);
      while (members.size() < target) members.insert(uniform_below(rng, std::uint64_t{1} << n));
      std::vector<Hypothesis> hs;
      for (auto m : members) hs.emplace_back(m, n);
      const ConceptClass c(Domain::numbered(n), hs);
      CAPTURE(trial);
      const std::size_t vc = vc_dimension(c);
      CHECK(vc == oracle::vc(c));
      const std::size_t ld = littlestone_dimension(c);
      CHECK(ld == oracle::ldim(c));
      CHECK(ld >= vc);
      const std::size_t hs_number = hollow_star_number(c, n);
      for (std::size_t s = 1; s <= n; ++s) {
        CHECK(oracle::has_hollow_star(c, s) == find_hollow_star(c, s).has_value());
      }
      if (hs_number > 0) CHECK(oracle::has_hollow_star(c, hs_number));
      for (std::size_t s = hs_number + 1; s <= n; ++s) CHECK_FALSE(oracle::has_hollow_star(c, s));
    }
  }

  TEST_CASE("class construction is deterministic") {
    const ConceptClass a = make_cube(4);
    const ConceptClass b = make_cube(4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(a[0] == Hypothesis::all_plus(4));
  }
}
