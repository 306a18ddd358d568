#include "clickstat/fockspace.hpp"

#include <cmath>
#include <string>

#include "clickstat/errors.hpp"

namespace clickstat {
namespace {

// U_0 .. U_max_total, each built from the previous sector by applying one
// transformed creation operator.
std::vector<Eigen::MatrixXd> sector_unitaries(int max_total, const BeamSplitter& bs) {
  if (!(bs.reflectivity >= 0.0 && bs.reflectivity <= 1.0)) {
    throw InvalidArgument("reflectivity must lie in [0, 1], got " +
                          std::to_string(bs.reflectivity));
  }
  const double t = std::sqrt(bs.transmissivity());
  const double s = (bs.reversed ? -1.0 : 1.0) * std::sqrt(bs.reflectivity);

  std::vector<Eigen::MatrixXd> sectors;
  sectors.reserve(static_cast<std::size_t>(max_total) + 1);
  sectors.push_back(Eigen::MatrixXd::Ones(1, 1));
  for (int total = 1; total <= max_total; ++total) {
    const Eigen::MatrixXd& prev = sectors.back();
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(total + 1, total + 1);
    for (int n = 0; n <= total; ++n) {
      // |n, total-n> = a'^dag |n-1, total-n> / sqrt(n), or b'^dag |0, total-1> / sqrt(total)
      const bool raise_herald = n > 0;
      const Eigen::VectorXd v = prev.col(raise_herald ? n - 1 : 0);
      const double norm = 1.0 / std::sqrt(static_cast<double>(raise_herald ? n : total));
      for (int p = 0; p < total; ++p) {
        const double up = std::sqrt(static_cast<double>(p + 1));     // a^dag on |p, .>
        const double side = std::sqrt(static_cast<double>(total - p));  // b^dag on |., total-1-p>
        if (raise_herald) {
          u(p + 1, n) += t * up * v(p) * norm;
          u(p, n) += s * side * v(p) * norm;
        } else {
          u(p, n) += t * side * v(p) * norm;
          u(p + 1, n) -= s * up * v(p) * norm;
        }
      }
    }
    sectors.push_back(std::move(u));
  }
  return sectors;
}

}  // namespace

TwoModeState::TwoModeState(Eigen::MatrixXcd amps) : amps_(std::move(amps)) {
  if (amps_.rows() == 0 || amps_.rows() != amps_.cols()) {
    throw InvalidArgument("two-mode amplitude grid must be square and non-empty");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > 1e-9) {
    throw InvalidArgument("two-mode state is not normalized (norm^2 = " +
                          std::to_string(amps_.squaredNorm()) + ")");
  }
}

PhotonDistribution TwoModeState::herald_marginal() const {
  const Eigen::VectorXd m = photon_grid().rowwise().sum();
  return PhotonDistribution::from_weights(std::vector<double>(m.begin(), m.end()));
}

PhotonDistribution TwoModeState::signal_marginal() const {
  const Eigen::VectorXd m = photon_grid().colwise().sum().transpose();
  return PhotonDistribution::from_weights(std::vector<double>(m.begin(), m.end()));
}

TwoModeState product_input(int n_photons, double alpha_mean, int cutoff) {
  if (n_photons < 0 || n_photons > cutoff) {
    throw InvalidArgument("photon number " + std::to_string(n_photons) + " outside 0.." +
                          std::to_string(cutoff));
  }
  const PhotonDistribution coherent = coherent_pn(alpha_mean, cutoff);
  const int size = coherent.n_max() + 1;
  Eigen::MatrixXcd amps = Eigen::MatrixXcd::Zero(size, size);
  for (int m = 0; m < size; ++m) amps(n_photons, m) = std::sqrt(coherent[m]);
  return TwoModeState(std::move(amps));
}

Eigen::MatrixXd beamsplitter_sector(int total_photons, const BeamSplitter& bs) {
  if (total_photons < 0) throw InvalidArgument("photon number must be >= 0");
  return sector_unitaries(total_photons, bs).back();
}

TwoModeState apply_beamsplitter(const TwoModeState& state, const BeamSplitter& bs) {
  const Eigen::MatrixXcd& in = state.amps();
  const int cutoff = state.cutoff();
  int max_total = 0;
  for (int n = 0; n <= cutoff; ++n) {
    for (int m = 0; m <= cutoff; ++m) {
      if (in(n, m) != std::complex<double>(0.0)) max_total = std::max(max_total, n + m);
    }
  }
  const auto sectors = sector_unitaries(max_total, bs);
  const int out_cutoff = std::max(cutoff, max_total);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_cutoff + 1, out_cutoff + 1);
  for (int total = 0; total <= max_total; ++total) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(total + 1);
    for (int n = std::max(0, total - cutoff); n <= std::min(total, cutoff); ++n) {
      v(n) = in(n, total - n);
    }
    const Eigen::VectorXcd w = sectors[total].cast<std::complex<double>>() * v;
    for (int p = 0; p <= total; ++p) out(p, total - p) = w(p);
  }
  return TwoModeState(std::move(out));
}

Eigen::MatrixXd loss_matrix(int n_max, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidArgument("efficiency must lie in [0, 1], got " + std::to_string(eta));
  }
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) b(m, n) = detail::binomial_pmf(n, m, eta);
  }
  return b;
}

PhotonDistribution apply_loss(const PhotonDistribution& p, double eta) {
  const Eigen::MatrixXd b = loss_matrix(p.n_max(), eta);
  const Eigen::Map<const Eigen::VectorXd> pv(p.probs().data(), p.n_max() + 1);
  const Eigen::VectorXd out = b * pv;
  return PhotonDistribution::from_weights(std::vector<double>(out.begin(), out.end()));
}

HeraldModel HeraldModel::ideal() { return HeraldModel(Kind::ideal, DetectorModel(1)); }

HeraldModel HeraldModel::multiplexed(const DetectorModel& det) {
  return HeraldModel(Kind::multiplexed, det);
}

HeraldModel HeraldModel::on_off(double efficiency, double dark_click_prob) {
  // a bucket detector is a one-bin multiplexed detector
  return HeraldModel(Kind::on_off, DetectorModel(1, efficiency, dark_click_prob));
}

HeraldModel::HeraldModel(const DetectorModel& det) : kind_(Kind::multiplexed), det_(det) {}

std::optional<int> HeraldModel::max_outcome() const {
  if (kind_ == Kind::ideal) return std::nullopt;
  return det_.n_bins();
}

std::vector<double> HeraldModel::weights(int k, int n_max) const {
  const auto top = max_outcome();
  if (k < 0 || (top && k > *top)) {
    throw InvalidArgument("herald outcome " + std::to_string(k) + " is not a valid click number");
  }
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (kind_ == Kind::ideal) {
    if (k <= n_max) w[static_cast<std::size_t>(k)] = 1.0;
    return w;
  }
  const Eigen::MatrixXd l = click_matrix(det_, n_max);
  for (int n = 0; n <= n_max; ++n) w[static_cast<std::size_t>(n)] = l(k, n);
  return w;
}

ConditionalState catalysis_conditional_pn(double alpha_mean, double reflectivity, int k_clicks,
                                          const HeraldModel& herald, std::optional<int> cutoff) {
  const int c = cutoff.value_or(default_cutoff(alpha_mean));
  const TwoModeState out =
      apply_beamsplitter(product_input(1, alpha_mean, c), BeamSplitter{reflectivity, false});
  const Eigen::MatrixXd grid = out.photon_grid();
  const std::vector<double> w = herald.weights(k_clicks, out.cutoff());

  std::vector<double> signal(static_cast<std::size_t>(out.cutoff()) + 1, 0.0);
  double herald_prob = 0.0;
  for (int m = 0; m <= out.cutoff(); ++m) {
    double acc = 0.0;
    for (int n = 0; n <= out.cutoff(); ++n) acc += w[static_cast<std::size_t>(n)] * grid(n, m);
    signal[static_cast<std::size_t>(m)] = acc;
    herald_prob += acc;
  }
  if (herald_prob < 1e-15) {
    throw DegenerateConditioning("herald outcome k=" + std::to_string(k_clicks) +
                                 " has probability " + std::to_string(herald_prob) +
                                 " at R=" + std::to_string(reflectivity));
  }
  return {PhotonDistribution::from_weights(std::move(signal)), herald_prob};
}

}  // namespace clickstat
