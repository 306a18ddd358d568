#include "clickstat/distributions.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "clickstat/errors.hpp"

namespace clickstat {
namespace {

void check_mean(double mean_photons) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons)) {
    throw InvalidArgument("mean photon number must be finite and non-negative, got " +
                          std::to_string(mean_photons));
  }
}

void check_cutoff(int n_max) {
  if (n_max < 0) throw InvalidArgument("cutoff n_max must be >= 0, got " + std::to_string(n_max));
}

// pmf holds the untruncated masses for 0..M, tail_beyond the mass above M.
// Extends the cutoff from n_max until the discarded tail drops below
// kTargetTail or the hard limit is reached, then requires it below
// kTailTolerance and returns the renormalized truncation.
PhotonDistribution truncate(const std::vector<double>& pmf, double tail_beyond, int n_max,
                            int hard_limit, const char* family) {
  const int last = static_cast<int>(pmf.size()) - 1;
  // suffix[n] = mass strictly above n
  std::vector<double> suffix(pmf.size());
  double acc = tail_beyond;
  for (int n = last; n >= 0; --n) {
    suffix[n] = acc;
    acc += pmf[n];
  }
  const int limit = std::min(last, hard_limit);
  int cutoff = n_max;
  while (cutoff < limit && suffix[cutoff] >= kTargetTail) ++cutoff;
  if (n_max > hard_limit || suffix[cutoff] >= kTailTolerance) {
    throw CutoffOverflow(std::string(family) + " distribution needs a cutoff above the hard limit " +
                         std::to_string(hard_limit) + " to keep the tail below 1e-10");
  }
  return PhotonDistribution::from_weights(
      std::vector<double>(pmf.begin(), pmf.begin() + cutoff + 1));
}

}  // namespace

namespace detail {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace detail

PhotonDistribution::PhotonDistribution(std::vector<double> probs) {
  if (probs.empty()) throw InvalidArgument("photon distribution must have at least one entry");
  double total = 0.0;
  for (double v : probs) {
    if (!(v >= 0.0) || v > 1.0 + 1e-12) {
      throw InvalidArgument("photon probabilities must lie in [0, 1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument("photon probabilities sum to " + std::to_string(total) + ", not 1");
  }
  for (double& v : probs) v /= total;
  probs_ = std::move(probs);
}

PhotonDistribution PhotonDistribution::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw InvalidArgument("photon distribution must have at least one entry");
  double total = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be finite and >= 0");
    total += v;
  }
  if (!(total > 0.0)) throw InvalidArgument("weights have zero total mass");
  for (double& v : weights) v /= total;
  PhotonDistribution p;
  p.probs_ = std::move(weights);
  return p;
}

double PhotonDistribution::operator[](int n) const noexcept {
  return (n >= 0 && n <= n_max()) ? probs_[static_cast<std::size_t>(n)] : 0.0;
}

double PhotonDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) m += static_cast<double>(n) * probs_[n];
  return m;
}

double PhotonDistribution::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) {
    const double d = static_cast<double>(n) - m;
    v += d * d * probs_[n];
  }
  return v;
}

PhotonDistribution PhotonDistribution::with_cutoff(int n_max) const {
  check_cutoff(n_max);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (std::size_t n = 0; n < probs_.size(); ++n) {
    if (n < out.size()) {
      out[n] = probs_[n];
    } else if (probs_[n] != 0.0) {
      throw InvalidArgument("cannot truncate a distribution with mass above n_max=" +
                            std::to_string(n_max));
    }
  }
  PhotonDistribution p;
  p.probs_ = std::move(out);
  return p;
}

PhotonDistribution coherent_pn(double mean_photons, int n_max, int hard_limit) {
  check_mean(mean_photons);
  check_cutoff(n_max);
  if (mean_photons == 0.0) return fock_pn(0, n_max);

  const int last = std::max(n_max, hard_limit) + 1;
  std::vector<double> pmf(static_cast<std::size_t>(last) + 1);
  const double log_mu = std::log(mean_photons);
  for (int n = 0; n <= last; ++n) {
    pmf[n] = std::exp(-mean_photons + n * log_mu - std::lgamma(n + 1.0));
  }
  double tail = 0.0;
  if (mean_photons < last + 1.0) {
    // geometric bound on the Poisson tail above `last`
    const double ratio = mean_photons / (last + 1.0);
    tail = pmf[last] * ratio / (1.0 - ratio);
  } else {
    tail = std::max(0.0, 1.0 - std::accumulate(pmf.begin(), pmf.end(), 0.0));
  }
  return truncate(pmf, tail, n_max, hard_limit, "coherent");
}

PhotonDistribution thermal_pn(double mean_photons, int n_max, int hard_limit) {
  check_mean(mean_photons);
  check_cutoff(n_max);
  if (mean_photons == 0.0) return fock_pn(0, n_max);

  const int last = std::max(n_max, hard_limit) + 1;
  const double ratio = mean_photons / (1.0 + mean_photons);
  const double log_ratio = std::log(ratio);
  std::vector<double> pmf(static_cast<std::size_t>(last) + 1);
  for (int n = 0; n <= last; ++n) pmf[n] = std::exp(n * log_ratio) / (1.0 + mean_photons);
  const double tail = std::exp((last + 1) * log_ratio);
  return truncate(pmf, tail, n_max, hard_limit, "thermal");
}

PhotonDistribution fock_pn(int n, int n_max) {
  check_cutoff(n_max);
  if (n < 0 || n > n_max) {
    throw InvalidArgument("Fock index " + std::to_string(n) + " outside 0.." +
                          std::to_string(n_max));
  }
  std::vector<double> probs(static_cast<std::size_t>(n_max) + 1, 0.0);
  probs[static_cast<std::size_t>(n)] = 1.0;
  return PhotonDistribution(std::move(probs));
}

Moments moments(const PhotonDistribution& p) { return {p.mean(), p.variance()}; }

int default_cutoff(double mean_photons) {
  check_mean(mean_photons);
  const int wide = static_cast<int>(std::ceil(mean_photons + 8.0 * std::sqrt(mean_photons))) + 2;
  return std::max(20, wide);
}

JointPhotonDistribution::JointPhotonDistribution(Eigen::MatrixXd probs) {
  if (probs.size() == 0) throw InvalidArgument("joint photon grid is empty");
  if (!(probs.array() >= 0.0).all() || !probs.allFinite()) {
    throw InvalidArgument("joint photon probabilities must be finite and >= 0");
  }
  const double total = probs.sum();
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument("joint photon probabilities sum to " + std::to_string(total));
  }
  probs_ = probs / total;
}

PhotonDistribution JointPhotonDistribution::marginal_first() const {
  Eigen::VectorXd m = probs_.rowwise().sum();
  return PhotonDistribution::from_weights(std::vector<double>(m.begin(), m.end()));
}

PhotonDistribution JointPhotonDistribution::marginal_second() const {
  Eigen::VectorXd m = probs_.colwise().sum().transpose();
  return PhotonDistribution::from_weights(std::vector<double>(m.begin(), m.end()));
}

}  // namespace clickstat
