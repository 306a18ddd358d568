#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "clickstat/detector.hpp"
#include "clickstat/distributions.hpp"
#include "clickstat/random.hpp"

namespace clickstat {

enum class Witness { binomial, fake };

std::string_view witness_name(Witness w) noexcept;

/// A witness value with its Monte Carlo spread.
struct WitnessEstimate {
  double value = 0.0;
  /// Sample standard deviation of `samples`.
  double std_error = 0.0;
  int n_replicas = 0;
  /// Fraction of replicas dropped because the witness was undefined.
  double dropped_fraction = 0.0;
  std::vector<double> samples;
};

/// Mandel parameter Var(n) / <n> - 1. Negative values certify
/// sub-Poissonian, hence nonclassical, light.
double q_mandel(const PhotonDistribution& p);

/// Binomial click parameter Var(c) / (<c> (1 - <c>/N)) - 1 for an N-bin
/// detector. Negative values (sub-binomial clicks) certify nonclassical
/// light without reconstructing the photon statistics.
/// Throws UndefinedWitness when <c> = 0 or <c> = N.
double q_binomial(const ClickDistribution& c, int n_bins);
inline double q_binomial(const ClickDistribution& c) { return q_binomial(c, c.n_bins()); }

/// Mandel's formula applied directly to clicks, Var(c) / <c> - 1. Not a
/// valid witness: it is negative for coherent light.
double q_fake(const ClickDistribution& c);

double witness_from_counts(const CountRecord& r, Witness witness, int n_bins);

/// Redraws every count as Poisson with mean equal to the observed count.
CountRecord poisson_resample(const CountRecord& r, Engine& engine);

using RecordStatistic = std::function<double(const CountRecord&)>;

/// Parametric bootstrap of an arbitrary statistic of a count record.
/// Replica r draws from its own stream derived from (seed, r), so the
/// result does not depend on evaluation order. Replicas for which the
/// statistic throws UndefinedWitness are dropped.
WitnessEstimate mc_estimate(const CountRecord& r, const RecordStatistic& statistic,
                            int n_replicas, std::uint64_t seed);

WitnessEstimate mc_witness(const CountRecord& r, Witness witness, int n_bins, int n_replicas,
                           std::uint64_t seed);

}  // namespace clickstat
