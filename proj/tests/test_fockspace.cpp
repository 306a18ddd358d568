#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "clickstat/detector.hpp"
#include "clickstat/errors.hpp"
#include "clickstat/fockspace.hpp"
#include "clickstat/witnesses.hpp"
#include "oracles.hpp"

using namespace clickstat;

namespace {

TwoModeState fock_state(int na, int nb, int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  a(na, nb) = 1.0;
  return TwoModeState(a);
}

double amp(const TwoModeState& s, int na, int nb) {
  if (na > s.cutoff() || nb > s.cutoff()) return 0.0;
  return s.amps()(na, nb).real();
}

}  // namespace

TEST_CASE("product_input examples") {
  const auto s = product_input(1, 0.0, 4);
  CHECK(amp(s, 1, 0) == 1.0);
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-15);

  const auto c = product_input(0, 1.3, 25);
  const auto marginal = c.signal_marginal();
  const auto ref = coherent_pn(1.3, 25);
  for (int m = 0; m <= 25; ++m) CHECK(std::abs(marginal[m] - ref[m]) < 1e-12);

  CHECK(std::abs(product_input(1, 1.0, 20).norm_squared() - 1.0) < 1e-9);
  CHECK_THROWS_AS(product_input(5, 0.0, 4), InvalidArgument);
}

TEST_CASE("beam splitter examples") {
  const auto swap = apply_beamsplitter(fock_state(1, 0, 1), BeamSplitter{1.0});
  CHECK(std::abs(std::abs(amp(swap, 0, 1)) - 1.0) < 1e-15);

  const auto hom = apply_beamsplitter(fock_state(1, 1, 1), BeamSplitter{0.5});
  CHECK(std::abs(amp(hom, 1, 1)) < 1e-12);
  CHECK(std::abs(amp(hom, 2, 0) * amp(hom, 2, 0) - 0.5) < 1e-12);

  const auto split = apply_beamsplitter(fock_state(1, 0, 1), BeamSplitter{0.3});
  CHECK(std::abs(amp(split, 1, 0) * amp(split, 1, 0) - 0.7) < 1e-12);
  CHECK(std::abs(amp(split, 0, 1) * amp(split, 0, 1) - 0.3) < 1e-12);
}

TEST_CASE("beam splitter equals mode-operator substitution") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (double r : {0.0, 0.2, 0.5, 0.77, 1.0}) {
    Eigen::MatrixXd in = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; i + j <= 4 && j < 4; ++j) in(i, j) = g(rng);
    }
    in /= in.norm();
    const auto out = apply_beamsplitter(TwoModeState(in.cast<std::complex<double>>()),
                                        BeamSplitter{r});
    const Eigen::MatrixXd ref = oracle::beamsplitter(in, r);
    for (int i = 0; i < ref.rows(); ++i) {
      for (int j = 0; j < ref.cols(); ++j) CHECK(std::abs(amp(out, i, j) - ref(i, j)) < 1e-12);
    }
    CHECK(std::abs(out.norm_squared() - 1.0) < 1e-12);
  }
}

TEST_CASE("sector unitaries are orthogonal and invertible") {
  for (int n = 0; n <= 12; ++n) {
    for (double r : {0.1, 0.5, 0.9}) {
      const BeamSplitter bs{r};
      const Eigen::MatrixXd u = beamsplitter_sector(n, bs);
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n + 1, n + 1);
      CHECK((u.transpose() * u - id).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((beamsplitter_sector(n, bs.inverse()) * u - id).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  const auto s = product_input(1, 2.0, 30);
  const auto back = apply_beamsplitter(apply_beamsplitter(s, BeamSplitter{0.35}),
                                       BeamSplitter{0.35}.inverse());
  for (int i = 0; i <= s.cutoff(); ++i) {
    for (int j = 0; j <= s.cutoff(); ++j) {
      CHECK(std::abs(amp(back, i, j) - amp(s, i, j)) < 1e-12);
    }
  }
}

TEST_CASE("hwp angle") {
  CHECK(std::abs(BeamSplitter::from_hwp_angle(0.0).reflectivity - 1.0) < 1e-15);
  CHECK(std::abs(BeamSplitter::from_hwp_angle(M_PI / 4).reflectivity - 0.5) < 1e-15);
}

TEST_CASE("loss") {
  const auto lost = apply_loss(fock_pn(3, 3), 0.5);
  CHECK(std::abs(lost[0] - 0.125) < 1e-15);
  CHECK(std::abs(lost[1] - 0.375) < 1e-15);
  CHECK(std::abs(lost[3] - 0.125) < 1e-15);

  const auto t = thermal_pn(1.0, 80);
  const auto thinned = apply_loss(t, 0.3);
  const auto ref = thermal_pn(0.3, 80);
  for (int n = 0; n <= 20; ++n) CHECK(std::abs(thinned[n] - ref[n]) < 1e-12);

  const auto c = coherent_pn(2.0, 30);
  const auto both = apply_loss(apply_loss(c, 0.6), 0.5);
  const auto once = apply_loss(c, 0.3);
  const auto direct = oracle::loss({c.probs().begin(), c.probs().end()}, 0.3);
  for (int n = 0; n <= 30; ++n) {
    CHECK(std::abs(both[n] - once[n]) < 1e-14);
    CHECK(std::abs(once[n] - direct[static_cast<std::size_t>(n)]) < 1e-14);
  }
  CHECK(std::abs(q_mandel(apply_loss(fock_pn(1, 1), 0.6)) + 0.6) < 1e-14);
  CHECK_THROWS_AS(apply_loss(c, 1.5), InvalidArgument);
}

TEST_CASE("catalysis golden vector") {
  // Independent high-precision expansion of the creation-operator
  // polynomial with a brute-force occupancy count for the herald.
  const double golden[] = {0.95735058444552129,    0.0036638089446426934, 0.028122782264859337,
                           0.0094093020170216284,  0.0013272109475847966, 0.00011819307694294884,
                           7.7042357289299846e-6,  3.9655697772820266e-7, 1.6878114376862282e-8,
                           6.1265566235016046e-10, 1.9392273581414455e-11};
  const auto r = catalysis_conditional_pn(0.5, 0.5, 1, DetectorModel(8));
  CHECK(std::abs(r.herald_prob - 0.33704463672443608624) < 1e-12);
  for (int m = 0; m < 11; ++m) CHECK(std::abs(r.signal[m] - golden[m]) < 1e-12);
}

TEST_CASE("catalysis limits") {
  // R = 0: the photon stays in the herald arm, the signal stays coherent.
  const auto c0 = catalysis_conditional_pn(1.5, 0.0, 1, HeraldModel::ideal());
  const auto coh = coherent_pn(1.5, default_cutoff(1.5));
  for (int m = 0; m <= 15; ++m) CHECK(std::abs(c0.signal[m] - coh[m]) < 1e-12);
  CHECK(std::abs(c0.herald_prob - 1.0) < 1e-12);

  const auto lossy = catalysis_conditional_pn(1.5, 0.0, 0, HeraldModel::multiplexed(DetectorModel(8, 0.3)));
  for (int m = 0; m <= 15; ++m) CHECK(std::abs(lossy.signal[m] - coh[m]) < 1e-12);
  CHECK(std::abs(lossy.herald_prob - 0.7) < 1e-12);
  CHECK_THROWS_AS(catalysis_conditional_pn(1.5, 0.0, 0, HeraldModel::ideal()),
                  DegenerateConditioning);

  // R = 1 with vacuum input: a clean single photon on the signal arm.
  const auto c1 = catalysis_conditional_pn(0.0, 1.0, 0, HeraldModel::ideal());
  CHECK(std::abs(c1.signal[1] - 1.0) < 1e-12);
  CHECK(std::abs(q_mandel(c1.signal) + 1.0) < 1e-12);
  CHECK(std::abs(q_binomial(forward_clicks(c1.signal, DetectorModel(8))) + 1.0) < 1e-12);

  CHECK_THROWS_AS(catalysis_conditional_pn(1.0, 0.5, 9, DetectorModel(8)), InvalidArgument);
  CHECK_THROWS_AS(catalysis_conditional_pn(1.0, 1.5, 1, DetectorModel(8)), InvalidArgument);
}

TEST_CASE("herald models") {
  const auto ideal = HeraldModel::ideal();
  CHECK_FALSE(ideal.max_outcome().has_value());
  const auto w = ideal.weights(2, 4);
  CHECK(w[2] == 1.0);
  CHECK(w[1] == 0.0);
  const auto onoff = HeraldModel::on_off(0.5);
  CHECK(*onoff.max_outcome() == 1);
  const auto click = onoff.weights(1, 3);
  CHECK(std::abs(click[2] - 0.75) < 1e-15);
}
