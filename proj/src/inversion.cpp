#include "clickstat/inversion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "clickstat/errors.hpp"

namespace clickstat {
namespace {

// Least squares over the free coordinates with sum(x) = 1, solved by
// eliminating the first free coordinate.
Eigen::VectorXd solve_on_face(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& free) {
  const Eigen::Index n = a.cols();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (free[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  const Eigen::Index pivot = idx.front();
  if (idx.size() == 1) {
    z(pivot) = 1.0;
    return z;
  }
  const Eigen::Index k = static_cast<Eigen::Index>(idx.size()) - 1;
  Eigen::MatrixXd m(a.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) m.col(j) = a.col(idx[j + 1]) - a.col(pivot);
  const Eigen::VectorXd y = m.colPivHouseholderQr().solve(b - a.col(pivot));
  z(pivot) = 1.0 - y.sum();
  for (Eigen::Index j = 0; j < k; ++j) z(idx[j + 1]) = y(j);
  return z;
}

}  // namespace

std::string_view method_name(InversionMethod m) noexcept {
  return m == InversionMethod::constrained ? "constrained" : "pseudo_inverse";
}

PhotonDistribution InversionResult::distribution() const {
  std::vector<double> clamped = probs;
  for (double& v : clamped) {
    if (v < -1e-9) {
      throw InvalidArgument("inverted distribution has a negative entry " + std::to_string(v));
    }
    v = std::max(v, 0.0);
  }
  return PhotonDistribution::from_weights(std::move(clamped));
}

Eigen::VectorXd simplex_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  if (n == 0 || a.rows() != b.size()) throw InvalidArgument("simplex_least_squares: bad shapes");

  std::vector<bool> free(static_cast<std::size_t>(n), true);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const double scale = std::max(1.0, a.norm() * (a.norm() + b.norm()));
  const double tol = 1e-13 * scale;

  const int max_iter = 50 * static_cast<int>(n) + 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd z = solve_on_face(a, b, free);

    // Step towards z until the first free coordinate hits zero.
    double step = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!free[static_cast<std::size_t>(i)] || z(i) >= 0.0) continue;
      const double s = x(i) / (x(i) - z(i));
      if (s < step) {
        step = s;
        blocking = i;
      }
    }
    if (blocking >= 0) {
      x += step * (z - x);
      x(blocking) = 0.0;
      free[static_cast<std::size_t>(blocking)] = false;
      continue;
    }
    x = z;

    // KKT check: fixed coordinates need gradient >= the free-face level.
    const Eigen::VectorXd grad = a.transpose() * (a * x - b);
    double level = 0.0;
    int n_free = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (free[static_cast<std::size_t>(i)]) {
        level += grad(i);
        ++n_free;
      }
    }
    level /= n_free;
    Eigen::Index release = -1;
    double worst = -tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (free[static_cast<std::size_t>(i)]) continue;
      const double multiplier = grad(i) - level;
      if (multiplier < worst) {
        worst = multiplier;
        release = i;
      }
    }
    if (release < 0) break;
    free[static_cast<std::size_t>(release)] = true;
  }
  return x.cwiseMax(0.0) / x.cwiseMax(0.0).sum();
}

ClickInverter::ClickInverter(const DetectorModel& det, int n_max)
    : n_max_(n_max), matrix_(click_matrix(det, n_max)) {
  svd_.compute(matrix_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd_.singularValues();
  const bool wide = matrix_.cols() > matrix_.rows();
  if (wide || sv(sv.size() - 1) <= 0.0) {
    condition_number_ = std::numeric_limits<double>::infinity();
  } else {
    condition_number_ = sv(0) / sv(sv.size() - 1);
  }
  if (!(condition_number_ <= kMaxConditionNumber)) {
    throw IllConditionedInversion(
        "click matrix for N=" + std::to_string(det.n_bins()) + " at n_max=" +
            std::to_string(n_max) + " has condition number " + std::to_string(condition_number_) +
            (wide ? " (more unknowns than click outcomes)" : ""),
        condition_number_);
  }
}

InversionResult ClickInverter::invert(const ClickDistribution& c, InversionMethod method) const {
  if (c.n_bins() != n_bins()) {
    throw InvalidArgument("click distribution has " + std::to_string(c.n_bins()) +
                          " bins, detector has " + std::to_string(n_bins()));
  }
  const Eigen::Map<const Eigen::VectorXd> cv(c.probs().data(), c.n_bins() + 1);
  Eigen::VectorXd p = method == InversionMethod::constrained
                          ? simplex_least_squares(matrix_, cv)
                          : Eigen::VectorXd(svd_.solve(cv));

  InversionResult result;
  result.method = method;
  result.condition_number = condition_number_;
  result.residual_norm = (matrix_ * p - cv).norm();
  result.probs.assign(p.begin(), p.end());
  result.has_negative = (p.array() < 0.0).any();
  return result;
}

InversionResult invert_clicks(const ClickDistribution& c, const DetectorModel& det, int n_max,
                              InversionMethod method) {
  return ClickInverter(det, n_max).invert(c, method);
}

WitnessEstimate q_mandel_from_clicks(const CountRecord& r, const DetectorModel& det, int n_max,
                                     int n_replicas, std::uint64_t seed) {
  const ClickInverter inverter(det, n_max);
  return mc_estimate(
      r,
      [&](const CountRecord& rec) {
        if (rec.total_events() == 0) throw UndefinedWitness("count record holds no events");
        return q_mandel(
            inverter.invert(rec.frequencies(), InversionMethod::constrained).distribution());
      },
      n_replicas, seed);
}

}  // namespace clickstat
