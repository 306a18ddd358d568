#include "clickstat/detector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "clickstat/errors.hpp"
#include "clickstat/random.hpp"

namespace clickstat {
namespace {

constexpr int kMaxSubsetBins = 20;

void check_unit_interval(double v, const char* name, bool allow_one) {
  const bool ok = v >= 0.0 && (allow_one ? v <= 1.0 : v < 1.0);
  if (!ok) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1" + (allow_one ? "]" : ")") +
                          ", got " + std::to_string(v));
  }
}

std::vector<double> validated_weights(std::vector<double> weights) {
  if (weights.empty()) throw InvalidArgument("a detector needs at least one bin");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("bin weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("bin weights sum to " + std::to_string(total) + ", not 1");
  }
  return weights;
}

// D(i, a) = P(i clicks | a bins hit by photons), dark clicks on the rest.
Eigen::MatrixXd dark_click_map(int n_bins, double dark) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_bins + 1, n_bins + 1);
  for (int a = 0; a <= n_bins; ++a) {
    for (int i = a; i <= n_bins; ++i) d(i, a) = detail::binomial_pmf(n_bins - a, i - a, dark);
  }
  return d;
}

std::vector<double> validated_click_probs(std::vector<double> probs, bool exact_sum) {
  if (probs.empty()) throw InvalidArgument("click distribution must have at least one entry");
  double total = 0.0;
  for (double v : probs) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("click probabilities must be >= 0");
    total += v;
  }
  if (exact_sum && std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument("click probabilities sum to " + std::to_string(total) + ", not 1");
  }
  if (!(total > 0.0)) throw InvalidArgument("click weights have zero total mass");
  for (double& v : probs) v /= total;
  return probs;
}

}  // namespace

DetectorModel::DetectorModel(int n_bins, double efficiency, double dark_click_prob)
    : efficiency_(efficiency), dark_click_prob_(dark_click_prob), uniform_(true) {
  if (n_bins < 1) throw InvalidArgument("a detector needs at least one bin");
  bin_weights_.assign(static_cast<std::size_t>(n_bins), 1.0 / n_bins);
  check_unit_interval(efficiency, "efficiency", true);
  check_unit_interval(dark_click_prob, "dark_click_prob", false);
}

DetectorModel::DetectorModel(std::vector<double> bin_weights, double efficiency,
                             double dark_click_prob)
    : bin_weights_(validated_weights(std::move(bin_weights))),
      efficiency_(efficiency),
      dark_click_prob_(dark_click_prob),
      uniform_(false) {
  check_unit_interval(efficiency, "efficiency", true);
  check_unit_interval(dark_click_prob, "dark_click_prob", false);
  const double w0 = bin_weights_.front();
  uniform_ = std::all_of(bin_weights_.begin(), bin_weights_.end(),
                         [&](double w) { return std::abs(w - w0) <= 1e-15; });
}

DetectorModel DetectorModel::with_efficiency(double efficiency) const {
  DetectorModel copy = *this;
  check_unit_interval(efficiency, "efficiency", true);
  copy.efficiency_ = efficiency;
  return copy;
}

ClickDistribution::ClickDistribution(std::vector<double> probs)
    : probs_(validated_click_probs(std::move(probs), true)) {}

ClickDistribution ClickDistribution::from_weights(std::vector<double> weights) {
  ClickDistribution c;
  c.probs_ = validated_click_probs(std::move(weights), false);
  return c;
}

double ClickDistribution::operator[](int i) const noexcept {
  return (i >= 0 && i <= n_bins()) ? probs_[static_cast<std::size_t>(i)] : 0.0;
}

double ClickDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) m += static_cast<double>(i) * probs_[i];
  return m;
}

double ClickDistribution::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double d = static_cast<double>(i) - m;
    v += d * d * probs_[i];
  }
  return v;
}

std::uint64_t CountRecord::total_events() const noexcept {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

ClickDistribution CountRecord::frequencies() const {
  if (counts.empty() || total_events() == 0) {
    throw InvalidArgument("count record holds no events");
  }
  std::vector<double> w(counts.begin(), counts.end());
  return ClickDistribution::from_weights(std::move(w));
}

JointClickDistribution::JointClickDistribution(Eigen::MatrixXd probs) {
  if (probs.size() == 0) throw InvalidArgument("joint click grid is empty");
  if (!(probs.array() >= 0.0).all() || !probs.allFinite()) {
    throw InvalidArgument("joint click probabilities must be finite and >= 0");
  }
  const double total = probs.sum();
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvalidArgument("joint click probabilities sum to " + std::to_string(total));
  }
  probs_ = probs / total;
}

std::uint64_t JointCountRecord::total_events() const noexcept { return counts.sum(); }

namespace detail {

Eigen::MatrixXd click_matrix_subsets(const DetectorModel& det, int n_max) {
  const int n_bins = det.n_bins();
  if (n_bins > kMaxSubsetBins) {
    throw InvalidArgument("non-uniform detectors are limited to " +
                          std::to_string(kMaxSubsetBins) + " bins");
  }
  const std::size_t n_subsets = std::size_t{1} << n_bins;
  const auto weights = det.bin_weights();
  const double eta = det.efficiency();

  // miss[S] = probability a single photon avoids every bin outside S
  std::vector<double> miss(n_subsets);
  for (std::size_t s = 0; s < n_subsets; ++s) {
    double outside = 0.0;
    for (int b = 0; b < n_bins; ++b) {
      if (!(s & (std::size_t{1} << b))) outside += weights[b];
    }
    miss[s] = std::max(0.0, 1.0 - eta * outside);
  }

  Eigen::MatrixXd hits = Eigen::MatrixXd::Zero(n_bins + 1, n_max + 1);
  std::vector<double> f(n_subsets);
  for (int n = 0; n <= n_max; ++n) {
    for (std::size_t s = 0; s < n_subsets; ++s) f[s] = std::pow(miss[s], n);
    // Moebius inversion turns "all photons inside S" into "exactly S hit".
    for (int b = 0; b < n_bins; ++b) {
      const std::size_t bit = std::size_t{1} << b;
      for (std::size_t s = 0; s < n_subsets; ++s) {
        if (s & bit) f[s] -= f[s ^ bit];
      }
    }
    for (std::size_t s = 0; s < n_subsets; ++s) {
      hits(std::popcount(s), n) += f[s];
    }
  }
  return dark_click_map(n_bins, det.dark_click_prob()) * hits;
}

Eigen::MatrixXd click_matrix_uniform(const DetectorModel& det, int n_max) {
  const int n_bins = det.n_bins();
  const double eta = det.efficiency();
  Eigen::MatrixXd hits = Eigen::MatrixXd::Zero(n_bins + 1, n_max + 1);
  Eigen::VectorXd occ = Eigen::VectorXd::Zero(n_bins + 1);
  occ(0) = 1.0;
  hits.col(0) = occ;
  for (int n = 1; n <= n_max; ++n) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n_bins + 1);
    for (int j = 0; j <= n_bins; ++j) {
      if (occ(j) == 0.0) continue;
      const double fresh = eta * static_cast<double>(n_bins - j) / n_bins;
      next(j) += occ(j) * (1.0 - fresh);
      if (j < n_bins) next(j + 1) += occ(j) * fresh;
    }
    occ = next;
    hits.col(n) = occ;
  }
  return dark_click_map(n_bins, det.dark_click_prob()) * hits;
}

}  // namespace detail

Eigen::MatrixXd click_matrix(const DetectorModel& det, int n_max) {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  return det.uniform() ? detail::click_matrix_uniform(det, n_max)
                       : detail::click_matrix_subsets(det, n_max);
}

ClickDistribution forward_clicks(const PhotonDistribution& p, const DetectorModel& det) {
  const Eigen::MatrixXd l = click_matrix(det, p.n_max());
  const Eigen::Map<const Eigen::VectorXd> pv(p.probs().data(), p.n_max() + 1);
  const Eigen::VectorXd c = l * pv;
  std::vector<double> out(c.begin(), c.end());
  for (double& v : out) v = std::max(v, 0.0);
  return ClickDistribution::from_weights(std::move(out));
}

JointClickDistribution joint_forward_clicks(const JointPhotonDistribution& p,
                                            const DetectorModel& det1, const DetectorModel& det2) {
  const Eigen::MatrixXd l1 = click_matrix(det1, p.n_max_first());
  const Eigen::MatrixXd l2 = click_matrix(det2, p.n_max_second());
  Eigen::MatrixXd joint = l1 * p.probs() * l2.transpose();
  joint = joint.cwiseMax(0.0);
  return JointClickDistribution(joint / joint.sum());
}

ConditionalClicks condition_on_clicks(const JointClickDistribution& joint, Arm herald_arm,
                                      std::optional<int> k) {
  const Eigen::MatrixXd& g = joint.probs();
  const bool first = herald_arm == Arm::first;
  const Eigen::Index herald_size = first ? g.rows() : g.cols();
  Eigen::VectorXd slice;
  if (k) {
    if (*k < 0 || *k >= herald_size) {
      throw InvalidArgument("herald click number " + std::to_string(*k) + " outside 0.." +
                            std::to_string(herald_size - 1));
    }
    slice = first ? Eigen::VectorXd(g.row(*k).transpose()) : Eigen::VectorXd(g.col(*k));
  } else {
    slice = first ? Eigen::VectorXd(g.colwise().sum().transpose())
                  : Eigen::VectorXd(g.rowwise().sum());
  }
  const double prob = slice.sum();
  if (prob < 1e-15) {
    throw DegenerateConditioning("herald outcome " + std::to_string(k.value_or(-1)) +
                                 " has probability " + std::to_string(prob));
  }
  return {ClickDistribution::from_weights(std::vector<double>(slice.begin(), slice.end())),
          k ? prob : 1.0};
}

CountRecord condition_on_clicks(const JointCountRecord& joint, Arm herald_arm,
                                std::optional<int> k) {
  const CountGrid& g = joint.counts;
  const bool first = herald_arm == Arm::first;
  const Eigen::Index herald_size = first ? g.rows() : g.cols();
  const Eigen::Index other_size = first ? g.cols() : g.rows();
  if (k && (*k < 0 || *k >= herald_size)) {
    throw InvalidArgument("herald click number " + std::to_string(*k) + " outside 0.." +
                          std::to_string(herald_size - 1));
  }
  CountRecord out;
  out.counts.assign(static_cast<std::size_t>(other_size), 0);
  for (Eigen::Index h = 0; h < herald_size; ++h) {
    if (k && h != *k) continue;
    for (Eigen::Index o = 0; o < other_size; ++o) {
      out.counts[static_cast<std::size_t>(o)] += first ? g(h, o) : g(o, h);
    }
  }
  return out;
}

CountRecord sample_counts(const ClickDistribution& c, double expected_total, std::uint64_t seed) {
  if (!(expected_total > 0.0) || !std::isfinite(expected_total)) {
    throw InvalidArgument("expected_total must be > 0");
  }
  Engine engine(stream_seed(seed, 0));
  CountRecord r;
  r.counts.reserve(c.probs().size());
  for (double p : c.probs()) r.counts.push_back(draw_poisson(engine, expected_total * p));
  return r;
}

JointCountRecord sample_joint_counts(const JointClickDistribution& c, double expected_total,
                                     std::uint64_t seed) {
  if (!(expected_total > 0.0) || !std::isfinite(expected_total)) {
    throw InvalidArgument("expected_total must be > 0");
  }
  Engine engine(stream_seed(seed, 0));
  const Eigen::MatrixXd& p = c.probs();
  JointCountRecord r{CountGrid(p.rows(), p.cols())};
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      r.counts(i, j) = draw_poisson(engine, expected_total * p(i, j));
    }
  }
  return r;
}

}  // namespace clickstat
