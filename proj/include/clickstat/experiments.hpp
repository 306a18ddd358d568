#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clickstat/detector.hpp"
#include "clickstat/distributions.hpp"
#include "clickstat/fockspace.hpp"
#include "clickstat/witnesses.hpp"

namespace clickstat {

/// `count` evenly spaced reflectivities from 0 to 1 inclusive.
std::vector<double> evenly_spaced_reflectivities(int count = 21);

/// Defaults are the documented reproduction point: a coherent state of mean
/// photon number 2, an 8-bin herald at 30 % efficiency conditioned on one
/// click, 50 % signal-arm efficiency and ~300 heralded events per setting.
/// At this event count the finite-N offset between Q_B and Q_M stays below
/// the combined Monte Carlo error at every reflectivity.
struct CatalysisSweepConfig {
  double alpha_mean = 2.0;
  std::vector<double> reflectivities = evenly_spaced_reflectivities();
  int k_herald = 1;
  HeraldModel herald = HeraldModel::multiplexed(DetectorModel(8, 0.3));
  /// Binomial loss on the signal arm before its detector. The inversion for
  /// Q_M uses signal_det only, so Q_M refers to the state after this loss.
  double signal_eta = 0.5;
  DetectorModel signal_det = DetectorModel(8);
  /// Photon cutoff used when inverting clicks for Q_M; empty means N.
  std::optional<int> inversion_n_max;
  double expected_total_events = 300;
  int n_replicas = 10000;
  std::uint64_t seed = 1;
};

struct CatalysisPoint {
  double reflectivity = 0.0;
  /// Empty when the point succeeded; otherwise the error name and message.
  std::string error;
  double herald_prob = 0.0;
  /// Noise-free witness values of the conditional state.
  double q_binomial_exact = 0.0;
  double q_mandel_exact = 0.0;
  double q_fake_exact = 0.0;
  CountRecord counts;
  WitnessEstimate q_binomial;
  WitnessEstimate q_mandel;
  WitnessEstimate q_fake;

  bool ok() const noexcept { return error.empty(); }
};

/// One row per reflectivity, in input order. A failing point is flagged and
/// the sweep continues.
std::vector<CatalysisPoint> run_catalysis_sweep(const CatalysisSweepConfig& cfg);

/// Two-mode squeezed vacuum photon statistics p(n, n) = (1 - l) l^n with
/// l = lambda_sq, followed by independent binomial loss on each arm. The
/// cutoff is extended until the discarded tail is below 1e-10.
JointPhotonDistribution tmsv_joint_pn(double lambda_sq, double eta1, double eta2,
                                      std::optional<int> cutoff = std::nullopt);

/// Calibrated defaults: lambda_sq = 0.15 puts the unconditioned binomial
/// parameter at 1.08e-2 for 7 % efficiency and 8 bins, and 1e7 triggers
/// give it a Monte Carlo error of about 6e-4.
struct TmsvConfig {
  double lambda_sq = 0.15;
  double eta1 = 0.07;
  double eta2 = 0.07;
  DetectorModel det1 = DetectorModel(8);
  DetectorModel det2 = DetectorModel(8);
  double expected_total_events = 1e7;
  int n_replicas = 10000;
  std::uint64_t seed = 1;
  /// Herald click numbers to condition on, besides the unconditioned row.
  std::vector<int> conditions = {0, 1, 2};
};

struct TmsvRow {
  /// Arm whose clicks are analysed; the herald is the other arm.
  Arm measured = Arm::first;
  /// Herald click number; empty for the unconditioned marginal.
  std::optional<int> condition;
  std::string error;
  /// Exact probability of the herald outcome (1 when unconditioned).
  double event_fraction = 1.0;
  std::uint64_t observed_events = 0;
  double q_binomial_exact = 0.0;
  WitnessEstimate q_binomial;

  bool ok() const noexcept { return error.empty(); }
};

struct TmsvReport {
  JointClickDistribution joint_clicks;
  JointCountRecord joint_counts;
  /// herald_fractions[a][k]: probability that arm a+1 shows k clicks.
  std::vector<std::vector<double>> herald_fractions;
  std::vector<TmsvRow> rows;
};

TmsvReport run_tmsv(const TmsvConfig& cfg);

}  // namespace clickstat
