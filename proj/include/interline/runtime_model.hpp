#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "interline/common.hpp"

namespace interline {

enum class DistributionKind { constant, normal, lognormal, empirical };

inline std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::constant: return "constant";
    case DistributionKind::normal: return "normal";
    case DistributionKind::lognormal: return "lognormal";
    case DistributionKind::empirical: return "empirical";
  }
  return "unknown";
}

/// Distribution of a non-negative duration in seconds, clamped to [floor, ceiling].
///
/// The clamp is part of the distribution: cdf() and quantile() describe the clamped
/// variable, and sampling is inverse-transform, so sample(u) == quantile(u). One uniform
/// draw per sample keeps per-trip random streams aligned across scenarios.
class RunTimeModel {
 public:
  RunTimeModel() : RunTimeModel(constant(0.0)) {}

  static RunTimeModel constant(Seconds value) {
    if (!(value >= 0.0)) throw DomainError("constant model: value must be >= 0");
    RunTimeModel m(DistributionKind::constant);
    m.mean_ = value;
    m.sd_ = 0.0;
    m.floor_ = 0.0;
    return m;
  }

  static RunTimeModel normal(Seconds mean, Seconds sd) {
    if (!(mean > 0.0)) throw DomainError("normal model: mean must be > 0");
    if (!(sd >= 0.0)) throw DomainError("normal model: sd must be >= 0");
    RunTimeModel m(DistributionKind::normal);
    m.mean_ = mean;
    m.sd_ = sd;
    m.floor_ = kDefaultFloorFraction * mean;
    return m;
  }

  static RunTimeModel lognormal(Seconds mean, double cov) {
    if (!(mean > 0.0)) throw DomainError("lognormal model: mean must be > 0");
    if (!(cov >= 0.0)) throw DomainError("lognormal model: cov must be >= 0");
    RunTimeModel m(DistributionKind::lognormal);
    m.mean_ = mean;
    m.sd_ = cov * mean;
    m.cov_ = cov;
    m.log_sigma_ = std::sqrt(std::log1p(cov * cov));
    m.log_mu_ = std::log(mean) - 0.5 * m.log_sigma_ * m.log_sigma_;
    m.floor_ = kDefaultFloorFraction * mean;
    return m;
  }

  static RunTimeModel empirical(std::vector<Seconds> samples) {
    if (samples.empty()) throw DomainError("empirical model: sample list is empty");
    for (double s : samples) {
      if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("empirical model: samples must be finite and > 0");
    }
    std::sort(samples.begin(), samples.end());
    RunTimeModel m(DistributionKind::empirical);
    double sum = 0.0;
    for (double s : samples) sum += s;
    m.mean_ = sum / samples.size();
    double ss = 0.0;
    for (double s : samples) ss += (s - m.mean_) * (s - m.mean_);
    m.sd_ = std::sqrt(ss / samples.size());
    m.samples_ = std::move(samples);
    m.floor_ = kDefaultFloorFraction * m.mean_;
    return m;
  }

  RunTimeModel with_bounds(Seconds floor, Seconds ceiling = std::numeric_limits<double>::infinity()) const {
    if (!(floor >= 0.0)) throw DomainError("model floor must be >= 0");
    if (!(ceiling >= floor)) throw DomainError("model ceiling must be >= floor");
    RunTimeModel m = *this;
    m.floor_ = floor;
    m.ceiling_ = ceiling;
    return m;
  }

  /// Same family and mean with the spread multiplied by `factor`.
  RunTimeModel with_scaled_spread(double factor) const {
    if (!(factor >= 0.0)) throw DomainError("spread factor must be >= 0");
    RunTimeModel m = *this;
    switch (kind_) {
      case DistributionKind::constant: return m;
      case DistributionKind::normal: m = normal(mean_, sd_ * factor); break;
      case DistributionKind::lognormal: m = lognormal(mean_, cov() * factor); break;
      case DistributionKind::empirical: {
        std::vector<Seconds> scaled;
        scaled.reserve(samples_.size());
        for (double s : samples_) scaled.push_back(std::max(mean_ + factor * (s - mean_), floor_ > 0 ? floor_ : 1e-3));
        m = empirical(std::move(scaled));
        break;
      }
    }
    m.floor_ = floor_;
    m.ceiling_ = ceiling_;
    return m;
  }

  DistributionKind kind() const noexcept { return kind_; }
  /// Parameters of the unclamped family.
  Seconds mean() const noexcept { return mean_; }
  Seconds sd() const noexcept { return sd_; }
  double cov() const noexcept {
    if (kind_ == DistributionKind::lognormal) return cov_;
    return mean_ > 0 ? sd_ / mean_ : 0.0;
  }
  Seconds floor() const noexcept { return floor_; }
  Seconds ceiling() const noexcept { return ceiling_; }
  std::span<const Seconds> samples() const noexcept { return samples_; }
  bool degenerate() const noexcept { return kind_ == DistributionKind::constant || sd_ == 0.0; }

  double cdf(Seconds x) const {
    if (x < floor_) return 0.0;
    if (x >= ceiling_) return 1.0;
    return family_cdf(x);
  }

  Seconds quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: probability must lie in [0, 1]");
    return std::clamp(family_quantile(p), floor_, ceiling_);
  }

  /// Inverse-transform sample from a uniform variate in (0, 1).
  Seconds sample(double u) const { return quantile(u); }

  bool operator==(const RunTimeModel&) const = default;

 private:
  static constexpr double kDefaultFloorFraction = 0.01;

  explicit RunTimeModel(DistributionKind kind) : kind_(kind) {}

  static double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

  static double std_normal_quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return std::numbers::sqrt2 * boost::math::erf_inv(2.0 * p - 1.0);
  }

  double family_cdf(Seconds x) const {
    switch (kind_) {
      case DistributionKind::constant: return x >= mean_ ? 1.0 : 0.0;
      case DistributionKind::normal:
        if (sd_ == 0.0) return x >= mean_ ? 1.0 : 0.0;
        return std_normal_cdf((x - mean_) / sd_);
      case DistributionKind::lognormal:
        if (log_sigma_ == 0.0) return x >= mean_ ? 1.0 : 0.0;
        if (x <= 0.0) return 0.0;
        return std_normal_cdf((std::log(x) - log_mu_) / log_sigma_);
      case DistributionKind::empirical: {
        auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
        return static_cast<double>(it - samples_.begin()) / samples_.size();
      }
    }
    return 0.0;
  }

  double family_quantile(double p) const {
    switch (kind_) {
      case DistributionKind::constant: return mean_;
      case DistributionKind::normal:
        if (sd_ == 0.0) return mean_;
        return mean_ + sd_ * std_normal_quantile(p);
      case DistributionKind::lognormal:
        if (log_sigma_ == 0.0) return mean_;
        return std::exp(log_mu_ + log_sigma_ * std_normal_quantile(p));
      case DistributionKind::empirical: {
        // smallest sample whose step cdf reaches p
        const auto n = samples_.size();
        auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        idx = idx == 0 ? 0 : idx - 1;
        return samples_[std::min(idx, n - 1)];
      }
    }
    return mean_;
  }

  DistributionKind kind_;
  Seconds mean_ = 0.0;
  Seconds sd_ = 0.0;
  double cov_ = 0.0;
  double log_mu_ = 0.0;
  double log_sigma_ = 0.0;
  std::vector<Seconds> samples_;
  Seconds floor_ = 0.0;
  Seconds ceiling_ = std::numeric_limits<double>::infinity();
};

}  // namespace interline
