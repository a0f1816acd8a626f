#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "flrce/selection.hpp"

using flrce::ExploreSchedule;
using flrce::SelectionMode;

TEST_CASE("explore probability decays geometrically from one") {
  const ExploreSchedule sched;
  REQUIRE(flrce::explore_prob(1, sched) == 1.0);
  REQUIRE(flrce::explore_prob(2, sched) == Catch::Approx(0.98).margin(1e-15));
  REQUIRE(flrce::explore_prob(11, sched) == Catch::Approx(std::pow(0.98, 10)).margin(1e-12));
  for (int t = 1; t < 200; ++t) {
    REQUIRE(flrce::explore_prob(t + 1, sched) <= flrce::explore_prob(t, sched));
  }
}

TEST_CASE("exploit takes the top heuristic values") {
  flrce::Rng rng(70);
  const ExploreSchedule never_explore{0.0, 0.98};
  const std::vector<double> h{0.9, 0.1, 0.5};
  const auto sel = flrce::select_clients(h, 1, 2, never_explore, rng);
  REQUIRE(sel.mode == SelectionMode::exploit);
  REQUIRE(sel.clients == std::vector<int>{0, 2});
}

TEST_CASE("exploit ties break toward the smaller client id") {
  flrce::Rng rng(71);
  const ExploreSchedule never_explore{0.0, 0.98};
  const std::vector<double> h{0.4, 0.4, 0.4, 0.4};
  const auto sel = flrce::select_clients(h, 5, 2, never_explore, rng);
  REQUIRE(sel.mode == SelectionMode::exploit);
  REQUIRE(sel.clients == std::vector<int>{0, 1});
}

TEST_CASE("exploit choice is invariant under order-preserving rescaling") {
  flrce::Rng rng(72);
  const ExploreSchedule never_explore{0.0, 0.98};
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> h(8);
    for (auto& x : h) x = rng.uniform(-1.0, 1.0);
    flrce::Rng r1(1), r2(1);
    const auto base = flrce::select_clients(h, 3, 3, never_explore, r1);
    std::vector<double> scaled = h;
    const double a = 0.01 + 10.0 * rng.uniform();
    const double b = rng.uniform(-5.0, 5.0);
    for (auto& x : scaled) x = a * x + b;
    const auto same = flrce::select_clients(scaled, 3, 3, never_explore, r2);
    REQUIRE(base.clients == same.clients);
  }
}

TEST_CASE("selection always returns exactly P distinct pool members") {
  flrce::Rng rng(73);
  const ExploreSchedule sched{0.5, 0.9};
  std::vector<double> h(9);
  for (auto& x : h) x = rng.uniform(-1.0, 1.0);
  for (int t = 1; t <= 300; ++t) {
    const auto sel = flrce::select_clients(h, t, 4, sched, rng);
    REQUIRE(sel.clients.size() == 4);
    const std::set<int> unique(sel.clients.begin(), sel.clients.end());
    REQUIRE(unique.size() == 4);
    for (const int id : sel.clients) {
      REQUIRE(id >= 0);
      REQUIRE(id < 9);
    }
  }
}

TEST_CASE("selection rejects a pool smaller than P") {
  flrce::Rng rng(74);
  const std::vector<double> h{0.1, 0.2};
  REQUIRE_THROWS_AS(flrce::select_clients(h, 1, 3, ExploreSchedule{}, rng),
                    flrce::ConfigError);
  REQUIRE_THROWS_AS(flrce::sample_uniform(2, 3, rng), flrce::ConfigError);
}

TEST_CASE("forced exploration selects uniformly") {
  flrce::Rng rng(75);
  const ExploreSchedule always{1.0, 1.0};
  const std::vector<double> h(10, 0.0);
  const int draws = 10000;
  const int p = 3;
  std::vector<int> hits(10, 0);
  for (int i = 0; i < draws; ++i) {
    const auto sel = flrce::select_clients(h, 1, p, always, rng);
    REQUIRE(sel.mode == SelectionMode::explore);
    for (const int id : sel.clients) ++hits[static_cast<std::size_t>(id)];
  }
  const double expect = static_cast<double>(p) / 10.0;
  const double sigma = std::sqrt(expect * (1.0 - expect) / draws);
  for (const int count : hits) {
    const double freq = static_cast<double>(count) / draws;
    REQUIRE(std::abs(freq - expect) < 3.0 * sigma);
  }
}

TEST_CASE("selection replays identically under a fixed seed") {
  const ExploreSchedule sched{0.8, 0.95};
  std::vector<double> h{0.3, -0.2, 0.9, 0.1, 0.5};
  flrce::Rng r1(42), r2(42);
  for (int t = 1; t <= 50; ++t) {
    const auto a = flrce::select_clients(h, t, 2, sched, r1);
    const auto b = flrce::select_clients(h, t, 2, sched, r2);
    REQUIRE(a.mode == b.mode);
    REQUIRE(a.clients == b.clients);
  }
}

TEST_CASE("expected explore rounds track the geometric closed form") {
  const ExploreSchedule sched{1.0, 0.9};
  const int horizon = 60;
  double closed_form = 0.0;
  for (int t = 1; t <= horizon; ++t) closed_form += flrce::explore_prob(t, sched);

  flrce::Rng rng(76);
  const std::vector<double> h(6, 0.0);
  const int trials = 1000;
  double total_explores = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    for (int t = 1; t <= horizon; ++t) {
      const auto sel = flrce::select_clients(h, t, 2, sched, rng);
      if (sel.mode == SelectionMode::explore) total_explores += 1.0;
    }
  }
  const double mean = total_explores / trials;
  REQUIRE(mean == Catch::Approx(closed_form).epsilon(0.05));
}
