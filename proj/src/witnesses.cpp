#include "clickstat/witnesses.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "clickstat/errors.hpp"
#include "clickstat/parallel.hpp"

namespace clickstat {

std::string_view witness_name(Witness w) noexcept {
  return w == Witness::binomial ? "q_binomial" : "q_fake";
}

double q_mandel(const PhotonDistribution& p) {
  const double mean = p.mean();
  if (!(mean > 0.0)) throw UndefinedWitness("Mandel parameter needs a positive mean photon number");
  return p.variance() / mean - 1.0;
}

double q_binomial(const ClickDistribution& c, int n_bins) {
  if (n_bins < 1 || c.n_bins() > n_bins) {
    throw InvalidArgument("click distribution over 0.." + std::to_string(c.n_bins()) +
                          " does not fit a detector with " + std::to_string(n_bins) + " bins");
  }
  const double mean = c.mean();
  const double denom = mean * (1.0 - mean / n_bins);
  if (!(mean > 0.0) || !(denom > 1e-14 * n_bins)) {
    throw UndefinedWitness("binomial parameter needs 0 < mean clicks < N (mean = " +
                           std::to_string(mean) + ")");
  }
  return c.variance() / denom - 1.0;
}

double q_fake(const ClickDistribution& c) {
  const double mean = c.mean();
  if (!(mean > 0.0)) throw UndefinedWitness("click Mandel parameter needs a positive mean");
  return c.variance() / mean - 1.0;
}

double witness_from_counts(const CountRecord& r, Witness witness, int n_bins) {
  if (r.counts.empty() || r.total_events() == 0) {
    throw UndefinedWitness("count record holds no events");
  }
  const ClickDistribution c = r.frequencies();
  return witness == Witness::binomial ? q_binomial(c, n_bins) : q_fake(c);
}

CountRecord poisson_resample(const CountRecord& r, Engine& engine) {
  CountRecord out;
  out.counts.reserve(r.counts.size());
  for (auto c : r.counts) out.counts.push_back(draw_poisson(engine, static_cast<double>(c)));
  return out;
}

WitnessEstimate mc_estimate(const CountRecord& r, const RecordStatistic& statistic,
                            int n_replicas, std::uint64_t seed) {
  if (n_replicas < 2) throw InvalidArgument("Monte Carlo needs at least 2 replicas");
  WitnessEstimate est;
  est.value = statistic(r);
  est.n_replicas = n_replicas;

  std::vector<std::optional<double>> slots(static_cast<std::size_t>(n_replicas));
  detail::parallel_for(slots.size(), [&](std::size_t i) {
    Engine engine(stream_seed(seed, i + 1));
    const CountRecord replica = poisson_resample(r, engine);
    try {
      slots[i] = statistic(replica);
    } catch (const UndefinedWitness&) {
    }
  });

  for (const auto& s : slots) {
    if (s) est.samples.push_back(*s);
  }
  if (est.samples.empty()) throw UndefinedWitness("every Monte Carlo replica was undefined");
  est.dropped_fraction =
      1.0 - static_cast<double>(est.samples.size()) / static_cast<double>(n_replicas);
  if (est.samples.size() >= 2) {
    double mean = 0.0;
    for (double v : est.samples) mean += v;
    mean /= static_cast<double>(est.samples.size());
    double ss = 0.0;
    for (double v : est.samples) ss += (v - mean) * (v - mean);
    est.std_error = std::sqrt(ss / static_cast<double>(est.samples.size() - 1));
  }
  return est;
}

WitnessEstimate mc_witness(const CountRecord& r, Witness witness, int n_bins, int n_replicas,
                           std::uint64_t seed) {
  return mc_estimate(
      r, [&](const CountRecord& rec) { return witness_from_counts(rec, witness, n_bins); },
      n_replicas, seed);
}

}  // namespace clickstat
