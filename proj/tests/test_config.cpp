#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "l1net/config.hpp"

using namespace l1net;

TEST_CASE("key-value parsing") {
  Config cfg = Config::parse_text(
      "# comment\n"
      "plan.replicates = 5\n"
      "\n"
      "target.name = cos1\n"
      "plan.n = 100, 200, 400\n");
  CHECK(cfg.get_int("plan.replicates", 0) == 5);
  CHECK(cfg.get_string("target.name", "") == "cos1");
  CHECK(cfg.get_ints("plan.n", {}) == std::vector<int>{100, 200, 400});
  CHECK(cfg.get_double("absent", 2.5) == 2.5);

  SUBCASE("line numbers attach to errors") {
    Config bad = Config::parse_text("plan.replicates = five\n");
    try {
      bad.get_int("plan.replicates", 0);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "plan.replicates");
      CHECK(e.line() == 1);
    }
  }

  SUBCASE("missing '=' rejected") {
    CHECK_THROWS_AS(Config::parse_text("just words\n"), ConfigError);
  }

  SUBCASE("duplicate keys rejected") {
    CHECK_THROWS_AS(Config::parse_text("a = 1\na = 2\n"), ConfigError);
  }

  SUBCASE("overrides replace file values") {
    Config c = Config::parse_text("plan.n = 100\n");
    c.apply_override("plan.n=500");
    CHECK(c.get_ints("plan.n", {}) == std::vector<int>{500});
  }

  SUBCASE("unused keys are rejected with their location") {
    Config c = Config::parse_text("plan.replicates = 5\nmystery.key = 1\n");
    CHECK(c.get_int("plan.replicates", 0) == 5);
    try {
      c.reject_unused();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "mystery.key");
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("target building") {
  Config cfg = Config::parse_text(
      "target.name = mix\n"
      "target.d = 3\n"
      "target.atoms = 2|1,1|0 0.5|0,3|0\n");
  TargetSpec target = build_target(cfg);
  CHECK(target.name == "mix");
  CHECK(target.d == 3);
  REQUIRE(target.atoms.size() == 2);
  CHECK(target.atoms[0].amplitude == 2.0);
  CHECK(target.atoms[0].frequency == std::vector<double>{1.0, 1.0, 0.0});
  CHECK(target.atoms[1].frequency == std::vector<double>{0.0, 3.0, 0.0});
  CHECK(target.support() == std::vector<int>{0, 1});

  SUBCASE("malformed atom") {
    Config bad = Config::parse_text("target.atoms = 1|1\n");
    CHECK_THROWS_AS(build_target(bad), ConfigError);
  }
}

TEST_CASE("class spec building and invariant violations name the key") {
  Config cfg = Config::parse_text(
      "class.regime = joint-l1\n"
      "class.V = 2\n"
      "class.eta = 1.5\n"
      "class.r = 8\n");
  FunctionClassSpec spec = build_class_spec(cfg, 3);
  CHECK(spec.regime == Regime::JointL1);
  CHECK(spec.V == 2.0);
  CHECK(spec.eta == 1.5);

  SUBCASE("negative V names V") {
    Config bad = Config::parse_text("class.V = -1\n");
    try {
      build_class_spec(bad, 2);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("V") != std::string::npos);
    }
  }

  SUBCASE("1-based support converts to 0-based") {
    Config c = Config::parse_text(
        "class.regime = input-l0\n"
        "class.support = 1, 3\n");
    FunctionClassSpec s = build_class_spec(c, 4);
    CHECK(s.support == std::vector<int>{0, 2});
    CHECK(s.k == 2);
  }
}

TEST_CASE("plan building applies defaults and overrides") {
  Config cfg = Config::parse_text(
      "target.atoms = 1|1|0\n"
      "noise.kind = gaussian\n"
      "noise.tau = 0.3\n"
      "plan.n = 100,200,400\n"
      "plan.d = 2\n"
      "plan.replicates = 3\n"
      "plan.eval_samples = 10000\n");
  cfg.apply_override("plan.n=250,500,1000");
  ExperimentPlan plan = build_plan(cfg);
  cfg.reject_unused();
  CHECK(plan.n_grid == std::vector<int>{250, 500, 1000});
  CHECK(plan.noise.kind == NoiseKind::Gaussian);
  CHECK(plan.noise.tau == 0.3);
  CHECK(plan.noise.sd == 0.3);  // sd defaults to tau
  CHECK(plan.v_policy.kind == VPolicy::Kind::MinAdmissibleTimes);
  CHECK(plan.r_policy.kind == RPolicy::Kind::BalancedChoice);
  CHECK(plan.train.loss == Loss::L1);
  CHECK(plan.train.schedule == StepSchedule::InvSqrt);

  SUBCASE("invalid plan value is a config error") {
    Config bad = Config::parse_text("plan.eval_samples = 10\n");
    CHECK_THROWS_AS(build_plan(bad), ConfigError);
  }
}

TEST_CASE("bound inputs builder") {
  Config cfg = Config::parse_text(
      "bounds.C = 1\nbounds.V = 3\nbounds.d = 4\nbounds.n = 10000\n"
      "bounds.tau = 1\nbounds.r = 1000000\n");
  BoundInputs in = build_bound_inputs(cfg);
  CHECK(output_l1_risk_bound(in, 0.0) ==
        doctest::Approx(0.19309125552621756).epsilon(1e-12));

  Config bad = Config::parse_text("bounds.n = 1\n");
  CHECK_THROWS_AS(build_bound_inputs(bad), ConfigError);
}
