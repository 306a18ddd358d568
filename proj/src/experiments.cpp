#include "clickstat/experiments.hpp"

#include <cmath>
#include <string>

#include "clickstat/errors.hpp"
#include "clickstat/inversion.hpp"
#include "clickstat/random.hpp"

namespace clickstat {
namespace {

// Independent seed streams per point and per estimator.
enum Stream : std::uint64_t { kSample = 0, kBinomial = 1, kMandel = 2, kFake = 3 };

std::uint64_t point_seed(std::uint64_t seed, std::size_t point, Stream stream) {
  return stream_seed(stream_seed(seed, point), stream);
}

std::string describe(const Error& e) { return e.kind() + ": " + e.what(); }

Arm other(Arm a) { return a == Arm::first ? Arm::second : Arm::first; }

}  // namespace

std::vector<double> evenly_spaced_reflectivities(int count) {
  if (count < 2) throw InvalidArgument("a reflectivity grid needs at least 2 points");
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
  return r;
}

std::vector<CatalysisPoint> run_catalysis_sweep(const CatalysisSweepConfig& cfg) {
  for (double r : cfg.reflectivities) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("reflectivities must lie in [0, 1]");
  }
  if (!(cfg.expected_total_events > 0.0)) throw InvalidArgument("expected_total_events must be > 0");
  const int n_bins = cfg.signal_det.n_bins();
  const int n_max = cfg.inversion_n_max.value_or(n_bins);
  const ClickInverter inverter(cfg.signal_det, n_max);

  std::vector<CatalysisPoint> points(cfg.reflectivities.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    CatalysisPoint& pt = points[i];
    pt.reflectivity = cfg.reflectivities[i];
    try {
      const ConditionalState state =
          catalysis_conditional_pn(cfg.alpha_mean, pt.reflectivity, cfg.k_herald, cfg.herald);
      pt.herald_prob = state.herald_prob;
      const PhotonDistribution signal = apply_loss(state.signal, cfg.signal_eta);
      const ClickDistribution clicks = forward_clicks(signal, cfg.signal_det);
      pt.q_binomial_exact = q_binomial(clicks, n_bins);
      pt.q_mandel_exact = q_mandel(signal);
      pt.q_fake_exact = q_fake(clicks);

      pt.counts = sample_counts(clicks, cfg.expected_total_events, point_seed(cfg.seed, i, kSample));
      pt.q_binomial = mc_witness(pt.counts, Witness::binomial, n_bins, cfg.n_replicas,
                                 point_seed(cfg.seed, i, kBinomial));
      pt.q_fake = mc_witness(pt.counts, Witness::fake, n_bins, cfg.n_replicas,
                             point_seed(cfg.seed, i, kFake));
      pt.q_mandel = mc_estimate(
          pt.counts,
          [&](const CountRecord& rec) {
            if (rec.total_events() == 0) throw UndefinedWitness("count record holds no events");
            return q_mandel(
                inverter.invert(rec.frequencies(), InversionMethod::constrained).distribution());
          },
          cfg.n_replicas, point_seed(cfg.seed, i, kMandel));
    } catch (const Error& e) {
      pt.error = describe(e);
    }
  }
  return points;
}

JointPhotonDistribution tmsv_joint_pn(double lambda_sq, double eta1, double eta2,
                                      std::optional<int> cutoff) {
  if (!(lambda_sq >= 0.0 && lambda_sq < 1.0)) {
    throw InvalidArgument("lambda_sq must lie in [0, 1), got " + std::to_string(lambda_sq));
  }
  int c = cutoff.value_or(20);
  if (c < 0) throw InvalidArgument("cutoff must be >= 0");
  if (lambda_sq > 0.0) {
    // mass above c is lambda_sq^(c+1)
    while ((c + 1) * std::log(lambda_sq) >= std::log(kTailTolerance)) {
      if (++c > kHardCutoff) {
        throw CutoffOverflow("two-mode squeezed state needs a cutoff above " +
                             std::to_string(kHardCutoff));
      }
    }
  }
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(c + 1, c + 1);
  for (int n = 0; n <= c; ++n) diag(n, n) = (1.0 - lambda_sq) * std::pow(lambda_sq, n);
  diag /= diag.sum();
  const Eigen::MatrixXd lossy = loss_matrix(c, eta1) * diag * loss_matrix(c, eta2).transpose();
  return JointPhotonDistribution(lossy);
}

TmsvReport run_tmsv(const TmsvConfig& cfg) {
  if (!(cfg.expected_total_events > 0.0)) throw InvalidArgument("expected_total_events must be > 0");
  const JointPhotonDistribution photons = tmsv_joint_pn(cfg.lambda_sq, cfg.eta1, cfg.eta2);
  JointClickDistribution joint = joint_forward_clicks(photons, cfg.det1, cfg.det2);
  JointCountRecord counts = sample_joint_counts(joint, cfg.expected_total_events,
                                                stream_seed(cfg.seed, 0));

  TmsvReport report{joint, counts, {}, {}};
  const Eigen::VectorXd first = joint.probs().rowwise().sum();
  const Eigen::VectorXd second = joint.probs().colwise().sum().transpose();
  report.herald_fractions = {std::vector<double>(first.begin(), first.end()),
                             std::vector<double>(second.begin(), second.end())};

  std::vector<std::optional<int>> conditions{std::nullopt};
  for (int k : cfg.conditions) conditions.emplace_back(k);

  for (Arm measured : {Arm::first, Arm::second}) {
    const int n_bins = measured == Arm::first ? cfg.det1.n_bins() : cfg.det2.n_bins();
    for (const auto& k : conditions) {
      TmsvRow row;
      row.measured = measured;
      row.condition = k;
      const std::size_t index = report.rows.size();
      try {
        const ConditionalClicks exact = condition_on_clicks(joint, other(measured), k);
        row.event_fraction = exact.probability;
        row.q_binomial_exact = q_binomial(exact.clicks, n_bins);
        const CountRecord rec = condition_on_clicks(counts, other(measured), k);
        row.observed_events = rec.total_events();
        row.q_binomial = mc_witness(rec, Witness::binomial, n_bins, cfg.n_replicas,
                                    stream_seed(cfg.seed, index + 1));
      } catch (const Error& e) {
        row.error = describe(e);
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace clickstat
