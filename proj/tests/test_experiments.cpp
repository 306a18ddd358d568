#include <doctest.h>

#include <cmath>

#include "clickstat/errors.hpp"
#include "clickstat/experiments.hpp"
#include "clickstat/fockspace.hpp"
#include "clickstat/witnesses.hpp"

using namespace clickstat;

TEST_CASE("reflectivity grid") {
  const auto r = evenly_spaced_reflectivities();
  REQUIRE(r.size() == 21);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == 1.0);
  CHECK(std::abs(r[10] - 0.5) < 1e-15);
}

TEST_CASE("tmsv_joint_pn examples") {
  const auto vac = tmsv_joint_pn(0.0, 0.3, 0.7);
  CHECK(vac.probs()(0, 0) == 1.0);
  CHECK(std::abs(vac.probs().sum() - 1.0) < 1e-15);

  const auto pure = tmsv_joint_pn(0.25, 1.0, 1.0);
  for (int i = 0; i <= pure.n_max_first(); ++i) {
    for (int j = 0; j <= pure.n_max_second(); ++j) {
      if (i != j) CHECK(pure.probs()(i, j) == 0.0);
    }
  }
  const auto th = thermal_pn(1.0 / 3.0, 80);
  const auto m = pure.marginal_first();
  for (int n = 0; n <= 15; ++n) CHECK(std::abs(m[n] - th[n]) < 1e-10);

  const auto half = tmsv_joint_pn(0.25, 0.5, 1.0);
  const auto th1 = thermal_pn(0.5 / 3.0, 80);
  const auto m1 = half.marginal_first();
  const auto m2 = half.marginal_second();
  for (int n = 0; n <= 15; ++n) {
    CHECK(std::abs(m1[n] - th1[n]) < 1e-10);
    CHECK(std::abs(m2[n] - th[n]) < 1e-10);
  }
  CHECK_THROWS_AS(tmsv_joint_pn(1.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(tmsv_joint_pn(0.999, 1.0, 1.0), CutoffOverflow);
}

TEST_CASE("catalysis sweep: pure single photon") {
  CatalysisSweepConfig cfg;
  cfg.alpha_mean = 0.0;
  cfg.reflectivities = {1.0};
  cfg.k_herald = 0;
  cfg.herald = HeraldModel::ideal();
  cfg.signal_eta = 1.0;
  cfg.expected_total_events = 1e4;
  cfg.n_replicas = 50;
  const auto pts = run_catalysis_sweep(cfg);
  REQUIRE(pts.size() == 1);
  REQUIRE(pts[0].ok());
  CHECK(std::abs(pts[0].q_mandel_exact + 1.0) < 1e-12);
  CHECK(std::abs(pts[0].q_binomial_exact + 1.0) < 1e-12);
  CHECK(pts[0].q_binomial.value == -1.0);
  CHECK(std::abs(pts[0].q_mandel.value + 1.0) < 1e-9);
}

TEST_CASE("catalysis sweep: coherent point and degenerate flag") {
  CatalysisSweepConfig cfg;
  cfg.alpha_mean = 1.0;
  cfg.reflectivities = {0.0, 0.5};
  cfg.k_herald = 0;
  cfg.expected_total_events = 1e5;
  cfg.n_replicas = 200;
  const auto pts = run_catalysis_sweep(cfg);
  REQUIRE(pts[0].ok());
  CHECK(std::abs(pts[0].q_mandel_exact) < 1e-9);
  CHECK(std::abs(pts[0].q_binomial_exact) < 1e-10);
  CHECK(pts[0].q_fake_exact < 0.0);
  CHECK(std::abs(pts[0].q_binomial.value) < 3.0 * pts[0].q_binomial.std_error);

  cfg.herald = HeraldModel::ideal();
  const auto flagged = run_catalysis_sweep(cfg);
  CHECK_FALSE(flagged[0].ok());
  CHECK(flagged[0].error.rfind("degenerate-conditioning", 0) == 0);
  CHECK(flagged[1].ok());
}

TEST_CASE("catalysis sweep is deterministic") {
  CatalysisSweepConfig cfg;
  cfg.reflectivities = {0.2, 0.9};
  cfg.n_replicas = 200;
  const auto a = run_catalysis_sweep(cfg);
  const auto b = run_catalysis_sweep(cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].counts.counts == b[i].counts.counts);
    CHECK(a[i].q_mandel.samples == b[i].q_mandel.samples);
  }
}

TEST_CASE("tmsv report") {
  TmsvConfig cfg;
  cfg.n_replicas = 500;
  const auto rep = run_tmsv(cfg);
  REQUIRE(rep.rows.size() == 8);
  for (const auto& f : rep.herald_fractions) {
    double sum = 0.0;
    for (double v : f) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = rep.rows[i];
    const auto& b = rep.rows[i + 4];
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.measured == Arm::first);
    CHECK(b.measured == Arm::second);
    CHECK(std::abs(a.q_binomial_exact - b.q_binomial_exact) < 1e-12);
    const double spread = std::hypot(a.q_binomial.std_error, b.q_binomial.std_error);
    CHECK(std::abs(a.q_binomial.value - b.q_binomial.value) < 3.0 * spread);
  }
  const double uncond = rep.rows[0].q_binomial_exact;
  CHECK(uncond > 0.0);
  CHECK(std::abs(rep.rows[1].q_binomial_exact - uncond) < 0.3 * uncond);
  CHECK(rep.rows[2].q_binomial_exact < 0.0);
}
