#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "clickstat/distributions.hpp"

namespace clickstat {

/// A multiplexed click detector: the input is split over N bins with
/// probabilities `bin_weights`, each photon survives with probability
/// `efficiency`, and each bin reports a click if at least one photon
/// reached it. Silent bins independently fire a dark click with
/// probability `dark_click_prob`.
class DetectorModel {
 public:
  /// Uniform 1/N bin weights.
  explicit DetectorModel(int n_bins, double efficiency = 1.0, double dark_click_prob = 0.0);
  DetectorModel(std::vector<double> bin_weights, double efficiency, double dark_click_prob = 0.0);

  static DetectorModel ideal(int n_bins) { return DetectorModel(n_bins); }

  int n_bins() const noexcept { return static_cast<int>(bin_weights_.size()); }
  std::span<const double> bin_weights() const noexcept { return bin_weights_; }
  double efficiency() const noexcept { return efficiency_; }
  double dark_click_prob() const noexcept { return dark_click_prob_; }
  bool uniform() const noexcept { return uniform_; }

  DetectorModel with_efficiency(double efficiency) const;

 private:
  std::vector<double> bin_weights_;
  double efficiency_;
  double dark_click_prob_;
  bool uniform_;
};

/// Probability of observing i = 0..N clicks.
class ClickDistribution {
 public:
  /// Entries must be in [0,1] and sum to one within 1e-6; renormalized.
  explicit ClickDistribution(std::vector<double> probs);
  static ClickDistribution from_weights(std::vector<double> weights);

  int n_bins() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](int i) const noexcept;

  double mean() const noexcept;
  double variance() const noexcept;

 private:
  ClickDistribution() = default;
  std::vector<double> probs_;
};

/// Raw click-number histogram: counts[i] events showed i clicks.
struct CountRecord {
  std::vector<std::uint64_t> counts;

  std::uint64_t total_events() const noexcept;
  int n_bins() const noexcept { return static_cast<int>(counts.size()) - 1; }
  /// Relative frequencies; throws InvalidArgument when there are no events.
  ClickDistribution frequencies() const;
};

/// probs(i, j): i clicks on detector 1 and j clicks on detector 2.
class JointClickDistribution {
 public:
  explicit JointClickDistribution(Eigen::MatrixXd probs);
  const Eigen::MatrixXd& probs() const noexcept { return probs_; }
  int n_bins_first() const noexcept { return static_cast<int>(probs_.rows()) - 1; }
  int n_bins_second() const noexcept { return static_cast<int>(probs_.cols()) - 1; }

 private:
  Eigen::MatrixXd probs_;
};

using CountGrid = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Joint histogram from two detectors read out on the same trigger.
struct JointCountRecord {
  CountGrid counts;
  std::uint64_t total_events() const noexcept;
};

enum class Arm { first = 1, second = 2 };

/// L(i, n) = P(i clicks | n photons), shape (N+1) x (n_max+1).
Eigen::MatrixXd click_matrix(const DetectorModel& det, int n_max);

namespace detail {
// Inclusion-exclusion over bin subsets; valid for any weights, N <= 20.
Eigen::MatrixXd click_matrix_subsets(const DetectorModel& det, int n_max);
// Occupancy recurrence photon by photon; uniform weights only, any N.
Eigen::MatrixXd click_matrix_uniform(const DetectorModel& det, int n_max);
}  // namespace detail

ClickDistribution forward_clicks(const PhotonDistribution& p, const DetectorModel& det);

JointClickDistribution joint_forward_clicks(const JointPhotonDistribution& p,
                                            const DetectorModel& det1, const DetectorModel& det2);

struct ConditionalClicks {
  ClickDistribution clicks;
  double probability;
};

/// Conditions on `k` clicks at arm `herald_arm` and returns the normalized
/// click distribution of the other arm. With no `k` the other arm's
/// marginal is returned with probability 1.
ConditionalClicks condition_on_clicks(const JointClickDistribution& joint, Arm herald_arm,
                                      std::optional<int> k);

/// Counts of the other arm in the events where `herald_arm` showed `k`
/// clicks (all events when `k` is empty).
CountRecord condition_on_clicks(const JointCountRecord& joint, Arm herald_arm,
                                std::optional<int> k);

/// Independent Poisson counts with means expected_total * c[i].
CountRecord sample_counts(const ClickDistribution& c, double expected_total, std::uint64_t seed);
JointCountRecord sample_joint_counts(const JointClickDistribution& c, double expected_total,
                                     std::uint64_t seed);

}  // namespace clickstat
