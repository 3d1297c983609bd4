#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "l1net/optim.hpp"
#include "l1net/rng.hpp"
#include "oracles.hpp"

using namespace l1net;

namespace {

Dataset dataset_from_y(std::vector<double> y) {
  Dataset data;
  data.n = static_cast<int>(y.size());
  data.d = 1;
  data.X.assign(static_cast<std::size_t>(data.n), 0.0);
  data.y = std::move(y);
  return data;
}

}  // namespace

TEST_CASE("empirical loss basics") {
  ActivationSpec act;
  Dataset data = dataset_from_y({1.0, -1.0});
  TwoLayerParams zero = TwoLayerParams::zeros(0, 1);
  CHECK(empirical_loss(zero, act, data, Loss::L1) == 1.0);
  CHECK(empirical_loss(zero, act, data, Loss::L2) == 1.0);

  TwoLayerParams fit = zero;
  fit.a0 = 1.0;
  Dataset ones = dataset_from_y({1.0, 1.0, 1.0});
  CHECK(empirical_loss(fit, act, ones, Loss::L1) == 0.0);
  CHECK(empirical_loss(fit, act, ones, Loss::L2) == 0.0);

  Dataset empty;
  empty.d = 1;
  CHECK_THROWS_AS(empirical_loss(zero, act, empty, Loss::L1),
                  std::invalid_argument);
}

TEST_CASE("subgradient trivial cases") {
  ActivationSpec act;

  SUBCASE("zero residuals give zero L2 gradient") {
    TwoLayerParams p = TwoLayerParams::zeros(2, 1);
    p.a0 = 0.5;
    Dataset data = dataset_from_y({0.5, 0.5});
    ParamGrad g = loss_subgradient(p, act, data, Loss::L2);
    CHECK(g.a0 == 0.0);
    for (double v : g.a) CHECK(v == 0.0);
    for (double v : g.W) CHECK(v == 0.0);
    for (double v : g.b) CHECK(v == 0.0);
  }

  SUBCASE("constant model under L1 sees the mean residual sign") {
    TwoLayerParams p = TwoLayerParams::zeros(0, 1);
    Dataset data = dataset_from_y({2.0, 2.0});
    ParamGrad g = loss_subgradient(p, act, data, Loss::L1);
    CHECK(g.a0 == doctest::Approx(-1.0));
  }

  SUBCASE("sign(0) = 0 keeps exact fits stationary") {
    TwoLayerParams p = TwoLayerParams::zeros(0, 1);
    p.a0 = 3.0;
    Dataset data = dataset_from_y({3.0, 3.0, 3.0});
    ParamGrad g = loss_subgradient(p, act, data, Loss::L1);
    CHECK(g.a0 == 0.0);
  }
}

TEST_CASE("L2 gradient matches central finite differences") {
  ActivationSpec act;
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(rng.uniform(0.0, 7.99));
    int d = 1 + static_cast<int>(rng.uniform(0.0, 2.99));
    int r = 1 + static_cast<int>(rng.uniform(0.0, 2.99));
    TwoLayerParams p = oracles::random_params(r, d, rng);
    Dataset data = oracles::random_dataset(n, d, rng);
    ParamGrad analytic = loss_subgradient(p, act, data, Loss::L2);
    ParamGrad numeric = oracles::fd_gradient(p, act, data, Loss::L2, 1e-5);
    CHECK(oracles::gradient_rel_error(analytic, numeric) < 1e-5);
  }
}

TEST_CASE("l1 ball projection examples") {
  SUBCASE("feasible points pass through unchanged") {
    std::vector<double> v = {0.5, -0.3};
    CHECK(project_l1_ball(v, 1.0) == v);
  }
  SUBCASE("threshold value confirmed by the bisection oracle") {
    std::vector<double> v = {3.0, 1.0};
    std::vector<double> p = project_l1_ball(v, 2.0);
    CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<double> o = oracles::project_l1_bisect(v, 2.0);
    CHECK(p[0] == doctest::Approx(o[0]).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(o[1]).epsilon(1e-10));
  }
  SUBCASE("sign symmetry") {
    std::vector<double> v = {-3.0, 1.0};
    std::vector<double> p = project_l1_ball(v, 2.0);
    CHECK(p[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("V = 0 gives the zero vector") {
    std::vector<double> v = {1.0, -2.0, 3.0};
    for (double x : project_l1_ball(v, 0.0)) CHECK(x == 0.0);
  }
  SUBCASE("negative V rejected") {
    std::vector<double> v = {1.0};
    CHECK_THROWS_AS(project_l1_ball(v, -0.1), std::invalid_argument);
  }
}

TEST_CASE("l1 ball projection properties") {
  Rng rng(2024);

  SUBCASE("matches the theta oracle on random inputs") {
    for (int trial = 0; trial < 200; ++trial) {
      int m = 1 + static_cast<int>(rng.uniform(0.0, 5.99));
      std::vector<double> v(static_cast<std::size_t>(m));
      double norm = 0.0;
      for (double& x : v) {
        x = rng.uniform(-3.0, 3.0);
        norm += std::abs(x);
      }
      double V = rng.uniform(1e-6, 2.0 * norm);
      std::vector<double> mine = project_l1_ball(v, V);
      std::vector<double> oracle = oracles::project_l1_bisect(v, V);
      for (int i = 0; i < m; ++i)
        CHECK(std::abs(mine[static_cast<std::size_t>(i)] -
                       oracle[static_cast<std::size_t>(i)]) <= 1e-9);
      double out_norm = 0.0;
      for (double x : mine) out_norm += std::abs(x);
      CHECK(out_norm <= V + 1e-12);
    }
  }

  SUBCASE("idempotent") {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> v(4);
      for (double& x : v) x = rng.uniform(-2.0, 2.0);
      std::vector<double> once = project_l1_ball(v, 1.3);
      CHECK(project_l1_ball(once, 1.3) == once);
    }
  }

  SUBCASE("nonexpansive") {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> u(5), v(5);
      for (double& x : u) x = rng.uniform(-2.0, 2.0);
      for (double& x : v) x = rng.uniform(-2.0, 2.0);
      std::vector<double> pu = project_l1_ball(u, 1.0);
      std::vector<double> pv = project_l1_ball(v, 1.0);
      double d_in = 0.0, d_out = 0.0;
      for (int i = 0; i < 5; ++i) {
        d_in += (u[i] - v[i]) * (u[i] - v[i]);
        d_out += (pu[i] - pv[i]) * (pu[i] - pv[i]);
      }
      CHECK(std::sqrt(d_out) <= std::sqrt(d_in) + 1e-12);
    }
  }

  SUBCASE("argmin over a dense feasible lattice, m = 3") {
    const double pitch = 0.05;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> v(3);
      for (double& x : v) x = rng.uniform(-1.5, 1.5);
      double V = rng.uniform(0.2, 1.4);
      std::vector<double> mine = project_l1_ball(v, V);

      double best = std::numeric_limits<double>::infinity();
      std::vector<double> arg(3, 0.0);
      int steps = static_cast<int>(V / pitch);
      for (int i = -steps; i <= steps; ++i)
        for (int j = -steps; j <= steps; ++j)
          for (int k = -steps; k <= steps; ++k) {
            double a = i * pitch, b = j * pitch, c = k * pitch;
            if (std::abs(a) + std::abs(b) + std::abs(c) > V) continue;
            double dist = (a - v[0]) * (a - v[0]) + (b - v[1]) * (b - v[1]) +
                          (c - v[2]) * (c - v[2]);
            if (dist < best) {
              best = dist;
              arg = {a, b, c};
            }
          }
      double gap = 0.0;
      for (int t = 0; t < 3; ++t) gap += (mine[t] - arg[t]) * (mine[t] - arg[t]);
      CHECK(std::sqrt(gap) <= pitch * std::sqrt(3.0));
    }
  }
}

TEST_CASE("soft threshold") {
  std::vector<double> v = {3.0, -0.5, 0.0};
  CHECK(soft_threshold(v, 0.0) == v);
  std::vector<double> s = soft_threshold(v, 1.0);
  CHECK(s == std::vector<double>{2.0, 0.0, 0.0});

  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> u(6);
    double norm = 0.0;
    for (double& x : u) {
      x = rng.uniform(-3.0, 3.0);
      norm += std::abs(x);
    }
    double lambda = rng.uniform(0.0, 2.0);
    double out_norm = 0.0;
    for (double x : soft_threshold(u, lambda)) out_norm += std::abs(x);
    CHECK(out_norm <= norm);
  }
  CHECK_THROWS_AS(soft_threshold(v, -1.0), std::invalid_argument);
}

TEST_CASE("constant model L1 training recovers the median") {
  // 1-D, convex; the iterates straddle the median once in its basin and the
  // best objective iterate is the closest visited point.
  Rng rng(77);
  FunctionClassSpec spec = FunctionClassSpec::output_l1(10.0, 0, 1);
  TrainConfig cfg;
  cfg.loss = Loss::L1;
  cfg.max_iters = 40000;
  cfg.schedule = StepSchedule::InvSqrt;
  cfg.step = 0.1;
  cfg.restarts = 1;
  cfg.record_trace = false;

  for (int trial = 0; trial < 5; ++trial) {
    int n = 2 * (3 + static_cast<int>(rng.uniform(0.0, 8.0))) + 1;
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y) v = rng.uniform(-1.0, 1.0);
    Dataset data = dataset_from_y(y);

    std::vector<double> sorted = y;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    double median = sorted[static_cast<std::size_t>(n / 2)];

    cfg.seed = 1000 + static_cast<std::uint64_t>(trial);
    TrainReport report = train_erm(data, spec, cfg);
    REQUIRE(report.ok);
    CHECK(std::abs(report.best_params.a0 - median) <= 1e-3);

    double median_loss = 0.0;
    for (double v : y) median_loss += std::abs(v - median);
    median_loss /= n;
    CHECK(std::abs(report.best_objective - median_loss) <= 1e-3);
  }
}

TEST_CASE("training beats any warm start it is given") {
  // Noiseless data from a feasible one-neuron net; with that net as the warm
  // start, the best objective can only improve on it.
  ActivationSpec act;
  TwoLayerParams gen = TwoLayerParams::zeros(1, 2);
  gen.a0 = 0.3;
  gen.a[0] = 1.2;
  gen.W = {0.8, -0.5};
  gen.b[0] = 0.1;

  Rng rng(303);
  Dataset data;
  data.n = 60;
  data.d = 2;
  data.X.resize(120);
  for (double& v : data.X) v = rng.uniform(-1.0, 1.0);
  data.y.resize(60);
  for (int i = 0; i < 60; ++i) data.y[i] = forward(gen, act, data.x_row(i));

  FunctionClassSpec spec = FunctionClassSpec::output_l1(2.0, 1, 2);
  TrainConfig cfg;
  cfg.loss = Loss::L2;
  cfg.max_iters = 200;
  cfg.restarts = 2;  // zero net + warm start
  cfg.warm_start = gen;
  cfg.seed = 5;
  double gen_loss = empirical_loss(gen, act, data, Loss::L2);
  TrainReport report = train_erm(data, spec, cfg);
  REQUIRE(report.ok);
  CHECK(report.best_objective <= gen_loss + 1e-6);
}

TEST_CASE("zero network is always a baseline") {
  ActivationSpec act;
  Rng rng(404);
  Dataset data = oracles::random_dataset(40, 3, rng);
  FunctionClassSpec spec = FunctionClassSpec::output_l1(1.5, 4, 3);
  TrainConfig cfg;
  cfg.max_iters = 150;
  cfg.restarts = 3;
  cfg.seed = 8;
  TrainReport report = train_erm(data, spec, cfg);
  REQUIRE(report.ok);
  TwoLayerParams zero = TwoLayerParams::zeros(4, 3);
  CHECK(report.best_objective <=
        empirical_loss(zero, act, data, Loss::L1) + 1e-15);
}

TEST_CASE("best objective is monotone in the iteration budget") {
  Rng rng(505);
  Dataset data = oracles::random_dataset(30, 2, rng);
  FunctionClassSpec spec = FunctionClassSpec::output_l1(2.0, 3, 2);
  TrainConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 11;
  cfg.max_iters = 100;
  double best_100 = train_erm(data, spec, cfg).best_objective;
  cfg.max_iters = 200;
  double best_200 = train_erm(data, spec, cfg).best_objective;
  CHECK(best_200 <= best_100);  // same seed: the first 100 iterates coincide
}

TEST_CASE("trained parameters are feasible in every regime") {
  Rng rng(606);
  Dataset data = oracles::random_dataset(50, 4, rng);
  TrainConfig cfg;
  cfg.max_iters = 120;
  cfg.restarts = 3;
  cfg.seed = 21;

  FunctionClassSpec out = FunctionClassSpec::output_l1(0.8, 5, 4);
  TrainReport r1 = train_erm(data, out, cfg);
  REQUIRE(r1.ok);
  CHECK(check_feasibility(r1.best_params, out).feasible);
  CHECK(output_l1_norm(r1.best_params) <= 0.8 + 1e-12);
  CHECK(r1.constraint_residual <= 1e-12);

  FunctionClassSpec joint = FunctionClassSpec::joint_l1(0.8, 1.5, 5, 4);
  TrainReport r2 = train_erm(data, joint, cfg);
  REQUIRE(r2.ok);
  CHECK(check_feasibility(r2.best_params, joint).feasible);
  for (double norm : neuron_l1_norms(r2.best_params))
    CHECK(norm <= 1.5 + 1e-12);

  FunctionClassSpec sparse = FunctionClassSpec::input_l0(0.8, {0, 2}, 5, 4);
  TrainReport r3 = train_erm(data, sparse, cfg);
  REQUIRE(r3.ok);
  CHECK(check_feasibility(r3.best_params, sparse).feasible);
  for (int j = 0; j < 5; ++j) {
    CHECK(r3.best_params.W[static_cast<std::size_t>(j) * 4 + 1] == 0.0);
    CHECK(r3.best_params.W[static_cast<std::size_t>(j) * 4 + 3] == 0.0);
  }
}

TEST_CASE("check_feasibility reports residuals") {
  FunctionClassSpec spec = FunctionClassSpec::output_l1(1.0, 2, 2);

  TwoLayerParams zero = TwoLayerParams::zeros(2, 2);
  CHECK(check_feasibility(zero, spec).feasible);

  TwoLayerParams over = zero;
  over.a = {0.7, 0.4};  // norm 1.1
  FeasibilityReport rep = check_feasibility(over, spec);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.output_residual == doctest::Approx(0.1).epsilon(1e-9));

  FunctionClassSpec sparse = FunctionClassSpec::input_l0(1.0, {0}, 1, 2);
  TwoLayerParams tiny = TwoLayerParams::zeros(1, 2);
  tiny.W = {0.5, 1e-15};  // off-support leak below slack
  CHECK(check_feasibility(tiny, sparse).feasible);
}

TEST_CASE("non-finite data is reported as a failed run") {
  Dataset data = dataset_from_y({1.0, std::nan("")});
  FunctionClassSpec spec = FunctionClassSpec::output_l1(1.0, 1, 1);
  TrainConfig cfg;
  cfg.max_iters = 5;
  cfg.restarts = 1;
  TrainReport report = train_erm(data, spec, cfg);
  CHECK_FALSE(report.ok);
  CHECK(!report.failure_reason.empty());
}

TEST_CASE("plateau stop cuts off stalled restarts") {
  Dataset data = dataset_from_y({1.0, 1.0, 1.0});
  FunctionClassSpec spec = FunctionClassSpec::output_l1(5.0, 0, 1);
  TrainConfig cfg;
  cfg.max_iters = 50000;
  cfg.restarts = 1;
  cfg.tolerance = 1e-9;
  cfg.plateau_window = 25;
  cfg.record_trace = false;
  TrainReport report = train_erm(data, spec, cfg);
  REQUIRE(report.ok);
  CHECK(report.iters_run < 50000);  // converges to a0 = 1 and stalls
  CHECK(report.best_objective < 1e-3);
}
