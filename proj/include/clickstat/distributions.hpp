#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace clickstat {

/// Tail mass a constructor may discard before it must extend the cutoff.
inline constexpr double kTailTolerance = 1e-10;
/// Tail mass constructors aim for when the hard limit allows it.
inline constexpr double kTargetTail = 1e-16;
/// Largest photon-number cutoff a constructor will extend to.
inline constexpr int kHardCutoff = 512;

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Probability distribution over photon number n = 0..n_max.
///
/// Always normalized: construction renormalizes the supplied vector so the
/// entries sum to one to machine precision.
class PhotonDistribution {
 public:
  /// Takes a probability vector that already sums to one within 1e-6.
  /// Throws InvalidArgument for negative entries, NaNs, or a bad sum.
  explicit PhotonDistribution(std::vector<double> probs);

  /// Builds a distribution from arbitrary non-negative weights with a
  /// positive total.
  static PhotonDistribution from_weights(std::vector<double> weights);

  int n_max() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  std::span<const double> probs() const noexcept { return probs_; }

  /// p_n, zero beyond the cutoff.
  double operator[](int n) const noexcept;

  double mean() const noexcept;
  double variance() const noexcept;

  /// Same distribution zero-padded (or checked-truncated) to a new cutoff.
  /// Truncation is only allowed over entries that are exactly zero.
  PhotonDistribution with_cutoff(int n_max) const;

 private:
  PhotonDistribution() = default;
  std::vector<double> probs_;
};

/// Poisson distribution of mean `mean_photons`. The cutoff is extended
/// beyond `n_max` (up to `hard_limit`) until the discarded tail is below
/// kTargetTail; throws CutoffOverflow when even kTailTolerance is out of
/// reach or `n_max` itself exceeds `hard_limit`.
PhotonDistribution coherent_pn(double mean_photons, int n_max, int hard_limit = kHardCutoff);

/// Bose-Einstein (geometric) distribution of mean `mean_photons`, with the
/// same cutoff handling as coherent_pn.
PhotonDistribution thermal_pn(double mean_photons, int n_max, int hard_limit = kHardCutoff);

/// Fock state |n>, represented over 0..n_max.
PhotonDistribution fock_pn(int n, int n_max);

Moments moments(const PhotonDistribution& p);

/// Cutoff that keeps a Poisson tail of mean `mean_photons` negligible:
/// max(20, ceil(mu + 8 sqrt(mu)) + 2).
int default_cutoff(double mean_photons);

/// Joint photon-number distribution of two modes, probs(n1, n2).
class JointPhotonDistribution {
 public:
  explicit JointPhotonDistribution(Eigen::MatrixXd probs);

  const Eigen::MatrixXd& probs() const noexcept { return probs_; }
  int n_max_first() const noexcept { return static_cast<int>(probs_.rows()) - 1; }
  int n_max_second() const noexcept { return static_cast<int>(probs_.cols()) - 1; }

  PhotonDistribution marginal_first() const;
  PhotonDistribution marginal_second() const;

 private:
  Eigen::MatrixXd probs_;
};

namespace detail {

/// Binomial pmf C(n,k) p^k (1-p)^(n-k), exact at p = 0 and p = 1.
double binomial_pmf(int n, int k, double p);

/// log C(n, k).
double log_choose(int n, int k);

}  // namespace detail

}  // namespace clickstat
