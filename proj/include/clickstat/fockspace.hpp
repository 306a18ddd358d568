#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "clickstat/detector.hpp"
#include "clickstat/distributions.hpp"

namespace clickstat {

/// Pure state of two optical modes in a truncated Fock basis.
/// amps(n, m): n photons in the herald arm, m photons in the signal arm.
class TwoModeState {
 public:
  explicit TwoModeState(Eigen::MatrixXcd amps);

  int cutoff() const noexcept { return static_cast<int>(amps_.rows()) - 1; }
  const Eigen::MatrixXcd& amps() const noexcept { return amps_; }
  double norm_squared() const { return amps_.squaredNorm(); }

  /// |amps(n, m)|^2 as a joint photon-number grid.
  Eigen::MatrixXd photon_grid() const { return amps_.cwiseAbs2(); }
  PhotonDistribution herald_marginal() const;
  PhotonDistribution signal_marginal() const;

 private:
  Eigen::MatrixXcd amps_;
};

/// Variable beam splitter of reflectivity R.
///
/// Creation operators map as a -> sqrt(T) a + sqrt(R) b and
/// b -> sqrt(T) b - sqrt(R) a (a = herald arm, b = signal arm, T = 1 - R).
/// `reversed` flips the sign of the sqrt(R) terms, which is the inverse
/// transformation.
struct BeamSplitter {
  double reflectivity = 0.0;
  bool reversed = false;

  /// Half-wave-plate setting of a polarizing variable splitter, R = cos^2(theta).
  static BeamSplitter from_hwp_angle(double theta) {
    const double c = std::cos(theta);
    return BeamSplitter{c * c, false};
  }
  double transmissivity() const noexcept { return 1.0 - reflectivity; }
  BeamSplitter inverse() const noexcept { return BeamSplitter{reflectivity, !reversed}; }
};

/// |n_photons> on the herald arm, coherent state of mean photon number
/// `alpha_mean` (real, non-negative amplitude) on the signal arm.
TwoModeState product_input(int n_photons, double alpha_mean, int cutoff);

/// Applies the beam-splitter unitary sector by sector. The returned grid
/// grows so that no amplitude is lost: its cutoff covers the largest total
/// photon number present in the input.
TwoModeState apply_beamsplitter(const TwoModeState& state, const BeamSplitter& bs);

/// Sector unitary on |n, N-n>, n = 0..N: U(p, n) = <p, N-p| U |n, N-n>.
Eigen::MatrixXd beamsplitter_sector(int total_photons, const BeamSplitter& bs);

/// Binomial loss channel with survival probability eta.
PhotonDistribution apply_loss(const PhotonDistribution& p, double eta);

/// B(m, n) = C(n, m) eta^m (1 - eta)^(n - m), shape (n_max+1) x (n_max+1).
Eigen::MatrixXd loss_matrix(int n_max, double eta);

/// Photon-number-diagonal herald measurement P(k | n).
class HeraldModel {
 public:
  enum class Kind { ideal, multiplexed, on_off };

  /// P(k|n) = delta_{kn}.
  static HeraldModel ideal();
  /// Full click POVM of a multiplexed detector.
  static HeraldModel multiplexed(const DetectorModel& det);
  /// Bucket detector: k = 0 (no click) or k = 1 (click).
  static HeraldModel on_off(double efficiency, double dark_click_prob = 0.0);

  // Implicit: a DetectorModel heralds with its full click POVM.
  HeraldModel(const DetectorModel& det);  // NOLINT(google-explicit-constructor)

  Kind kind() const noexcept { return kind_; }
  const DetectorModel& detector() const noexcept { return det_; }
  /// Largest outcome index, or nullopt when unbounded (ideal).
  std::optional<int> max_outcome() const;

  /// P(k | n) for n = 0..n_max.
  std::vector<double> weights(int k, int n_max) const;

 private:
  HeraldModel(Kind kind, DetectorModel det) : kind_(kind), det_(std::move(det)) {}
  Kind kind_;
  DetectorModel det_;
};

struct ConditionalState {
  PhotonDistribution signal;
  double herald_prob;
};

/// Photon catalysis: a single photon and a coherent state meet on a beam
/// splitter of reflectivity R, the herald arm is measured with outcome
/// `k_clicks`, and the signal arm's conditional photon distribution is
/// returned together with the probability of the herald outcome.
/// Throws DegenerateConditioning when that probability is below 1e-15.
ConditionalState catalysis_conditional_pn(double alpha_mean, double reflectivity, int k_clicks,
                                          const HeraldModel& herald,
                                          std::optional<int> cutoff = std::nullopt);

}  // namespace clickstat
