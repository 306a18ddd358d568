#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "clickstat/detector.hpp"
#include "clickstat/distributions.hpp"
#include "clickstat/witnesses.hpp"

namespace clickstat {

/// Largest condition number of the click matrix accepted for inversion.
inline constexpr double kMaxConditionNumber = 1e12;

enum class InversionMethod { pseudo_inverse, constrained };

std::string_view method_name(InversionMethod m) noexcept;

struct InversionResult {
  /// Recovered p_0..p_{n_max}. The pseudo-inverse may leave small
  /// negative entries here; they are kept and flagged.
  std::vector<double> probs;
  double residual_norm = 0.0;
  double condition_number = 0.0;
  bool has_negative = false;
  InversionMethod method = InversionMethod::constrained;

  /// The recovered vector as a distribution. Entries down to -1e-9 are
  /// clamped to zero; anything more negative throws InvalidArgument.
  PhotonDistribution distribution() const;
};

/// Solves min ||A x - b||_2 subject to x >= 0 and sum(x) = 1 with a primal
/// active-set method. A must have full column rank.
Eigen::VectorXd simplex_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Inverts the click matrix of one detector at a fixed photon cutoff. The
/// matrix and its SVD are computed once, so repeated inversions (Monte
/// Carlo replicas) are cheap.
class ClickInverter {
 public:
  /// Throws IllConditionedInversion when the click matrix does not have
  /// full column rank or its condition number exceeds kMaxConditionNumber.
  ClickInverter(const DetectorModel& det, int n_max);

  int n_max() const noexcept { return n_max_; }
  int n_bins() const noexcept { return static_cast<int>(matrix_.rows()) - 1; }
  double condition_number() const noexcept { return condition_number_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  InversionResult invert(const ClickDistribution& c, InversionMethod method) const;

 private:
  int n_max_;
  Eigen::MatrixXd matrix_;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_;
  double condition_number_;
};

InversionResult invert_clicks(const ClickDistribution& c, const DetectorModel& det, int n_max,
                              InversionMethod method);

/// Q_M through the full pipeline: counts -> frequencies -> constrained
/// inversion -> Mandel parameter, with the same Poisson bootstrap as
/// mc_witness.
WitnessEstimate q_mandel_from_clicks(const CountRecord& r, const DetectorModel& det, int n_max,
                                     int n_replicas, std::uint64_t seed);

}  // namespace clickstat
