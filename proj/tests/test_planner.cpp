#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mvb/bounds.hpp"
#include "mvb/cli.hpp"
#include "mvb/errors.hpp"
#include "mvb/planner.hpp"
#include "mvb/rng.hpp"

using namespace mvb;

TEST_CASE("bound planner on perfect voters") {
  const auto pop = single_group_population(
      build_transition_matrix(Eigen::MatrixXd::Identity(2, 2)));
  const PlanResult plan = min_voters_bound(pop, 1e-3, 100, PlanMethod::kThm1);
  REQUIRE(plan.m_min.has_value());
  // the two-class identity bound collapses to 2 e^{-M}; it first meets 1e-3
  // at M = 8 (ln 2000 = 7.6)
  CHECK(*plan.m_min == 8);
  REQUIRE(plan.bound_evidence.has_value());
  CHECK(plan.bound_evidence->clamped <= 1e-3);
  CHECK(iid_upper_bound(pop.group(0).matrix, 7).clamped > 1e-3);
}

TEST_CASE("bound planner refuses unreliable populations") {
  Eigen::MatrixXd g(2, 2);
  g << 0.4, 0.6, 0.2, 0.8;
  const auto pop = single_group_population(build_transition_matrix(g));
  const PlanResult plan = min_voters_bound(pop, 0.4, 1000, PlanMethod::kThm1);
  CHECK_FALSE(plan.m_min.has_value());
  REQUIRE(plan.reliability.has_value());
  CHECK(plan.reliability->reliable_set == std::vector<int>{1});
  CHECK(plan.not_achievable_reason.find("0.5") != std::string::npos);

  SUBCASE("a marginal class also blocks achievability") {
    Eigen::MatrixXd mg(2, 2);
    mg << 0.5, 0.5, 0.2, 0.8;
    const auto marginal = single_group_population(build_transition_matrix(mg));
    const PlanResult p2 =
        min_voters_bound(marginal, 0.4, 1000, PlanMethod::kThm1);
    CHECK_FALSE(p2.m_min.has_value());
    REQUIRE(p2.reliability.has_value());
    CHECK(p2.reliability->marginal_set == std::vector<int>{0});
  }
}

TEST_CASE("bound planner certifies the homogeneous 10-class model") {
  const auto pop = single_group_population(dawid_skene_matrix(10, 0.3));
  const PlanResult plan = min_voters_bound(pop, 1e-2, 200, PlanMethod::kThm1);
  REQUIRE(plan.m_min.has_value());
  CHECK(*plan.m_min >= 31);
  // frozen from the scan (cross-checked against an independent evaluation)
  CHECK(*plan.m_min == 49);
  CHECK(plan.bound_evidence->clamped <= 1e-2);
  CHECK(iid_upper_bound(pop.group(0).matrix, *plan.m_min - 1).clamped > 1e-2);
}

TEST_CASE("bound planner validates its inputs") {
  const auto pop = single_group_population(dawid_skene_matrix(3, 0.5));
  CHECK_THROWS_AS(min_voters_bound(pop, 0.0, 10, PlanMethod::kThm1), Error);
  CHECK_THROWS_AS(min_voters_bound(pop, 1.0, 10, PlanMethod::kThm1), Error);
  CHECK_THROWS_AS(min_voters_bound(pop, 0.5, 0, PlanMethod::kThm1), Error);
  CHECK_THROWS_AS(min_voters_bound(pop, 0.5, 10, PlanMethod::kSimulation),
                  Error);
  // group-resolved method works on multi-group populations; the iid ones
  // do not
  const VoterPopulation multi = fixtures::four_group_population();
  CHECK_THROWS_AS(min_voters_bound(multi, 0.5, 10, PlanMethod::kThm1), Error);
  CHECK(min_voters_bound(multi, 0.5, 200, PlanMethod::kThm4).m_min.has_value());
}

TEST_CASE("bound planner scan ceiling is reported") {
  const auto pop = single_group_population(dawid_skene_matrix(10, 0.3));
  const PlanResult plan = min_voters_bound(pop, 1e-6, 10, PlanMethod::kThm1);
  CHECK_FALSE(plan.m_min.has_value());
  CHECK_FALSE(plan.reliability.has_value());
  CHECK(plan.scan_ceiling == 10);
}

TEST_CASE("chernoff-union planner is usable but weaker") {
  const auto pop = single_group_population(dawid_skene_matrix(10, 0.5));
  const PlanResult thm1 = min_voters_bound(pop, 1e-2, 300, PlanMethod::kThm1);
  const PlanResult uni =
      min_voters_bound(pop, 1e-2, 300, PlanMethod::kChernoffUnion);
  REQUIRE(thm1.m_min.has_value());
  REQUIRE(uni.m_min.has_value());
  CHECK(*uni.m_min >= *thm1.m_min);
}

TEST_CASE("simulation planner certifies via the Wilson upper limit") {
  SUBCASE("perfect voters need one voter for any sane target") {
    const auto pop = single_group_population(
        build_transition_matrix(Eigen::MatrixXd::Identity(3, 3)));
    const PlanResult plan =
        min_voters_simulated(pop, 0.1, 100000, 50, 42, 2);
    REQUIRE(plan.m_min.has_value());
    CHECK(*plan.m_min == 1);
    CHECK(plan.simulation_evidence->ci_high <= 0.1);
  }
  SUBCASE("published voter-count claims, moderate accuracy") {
    const auto pop = single_group_population(dawid_skene_matrix(10, 0.3));
    const PlanResult plan =
        min_voters_simulated(pop, 1e-2, 1000000, 61, 2024, 2, TiePolicy::kRandom, 4);
    REQUIRE(plan.m_min.has_value());
    CHECK(*plan.m_min >= 25);
    CHECK(*plan.m_min <= 37);
    CHECK(plan.simulation_evidence->ci_high <= 1e-2);
  }
  SUBCASE("published voter-count claims, high accuracy") {
    const auto pop = single_group_population(dawid_skene_matrix(10, 0.5));
    const PlanResult plan =
        min_voters_simulated(pop, 1e-2, 1000000, 41, 2025, 2, TiePolicy::kRandom, 4);
    REQUIRE(plan.m_min.has_value());
    CHECK(*plan.m_min >= 11);
    CHECK(*plan.m_min <= 19);
  }
}

TEST_CASE("simulation planner is conservative relative to the bound planner") {
  const auto pop = single_group_population(dawid_skene_matrix(10, 0.5));
  const PlanResult bound = min_voters_bound(pop, 1e-2, 100, PlanMethod::kThm1);
  const PlanResult sim =
      min_voters_simulated(pop, 1e-2, 1000000, 100, 7, 2, TiePolicy::kRandom, 4);
  REQUIRE(bound.m_min.has_value());
  REQUIRE(sim.m_min.has_value());
  CHECK(*bound.m_min >= *sim.m_min);
}

TEST_CASE("simulation planner validation") {
  const auto pop = single_group_population(dawid_skene_matrix(3, 0.5));
  try {
    min_voters_simulated(pop, 1e-3, 1000, 50, 1);
    FAIL("expected TrialsInsufficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTrialsInsufficient);
  }
  CHECK_THROWS_AS(min_voters_simulated(pop, -0.1, 100000, 50, 1), Error);
  CHECK_THROWS_AS(min_voters_simulated(pop, 0.5, 100000, 0, 1), Error);
  CHECK_THROWS_AS(min_voters_simulated(pop, 0.5, 100000, 50, 1, 0), Error);
}

TEST_CASE("simulation planner is deterministic under its seed") {
  const auto pop = single_group_population(dawid_skene_matrix(4, 0.4));
  const PlanResult a = min_voters_simulated(pop, 0.05, 50000, 60, 99, 2);
  const PlanResult b =
      min_voters_simulated(pop, 0.05, 50000, 60, 99, 2, TiePolicy::kRandom, 4);
  REQUIRE(a.m_min.has_value());
  REQUIRE(b.m_min.has_value());
  CHECK(*a.m_min == *b.m_min);
  CHECK(a.simulation_evidence->errors == b.simulation_evidence->errors);
}
