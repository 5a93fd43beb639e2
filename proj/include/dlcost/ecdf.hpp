#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dlcost {

template <class Real>
struct CdfPoint {
  Real x{};
  double cumulative = 0.0;

  bool operator==(const CdfPoint&) const = default;
};

/// Empirical CDF over samples with non-negative integer weights.
///
/// Right-continuous: F(x) = weight(samples <= x) / total. Cumulative values
/// are computed from integer partial sums, so the last step is exactly 1.
/// Quantiles return the smallest sample whose F reaches p (lower step at ties).
template <class Real>
class WeightedEcdf {
 public:
  WeightedEcdf() = default;

  explicit WeightedEcdf(std::vector<std::pair<Real, std::int64_t>> samples) {
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [x, w] : samples) {
      if (w < 0) throw std::domain_error("ECDF weights must be non-negative");
      if (w == 0) continue;
      if (!xs_.empty() && xs_.back() == x) {
        cum_.back() += w;
      } else {
        xs_.push_back(x);
        cum_.push_back((cum_.empty() ? 0 : cum_.back()) + w);
      }
    }
    if (xs_.empty()) throw std::domain_error("ECDF requires at least one sample with positive weight");
  }

  /// Unweighted convenience constructor.
  static WeightedEcdf from_values(const std::vector<Real>& values) {
    std::vector<std::pair<Real, std::int64_t>> s;
    s.reserve(values.size());
    for (const auto& v : values) s.emplace_back(v, 1);
    return WeightedEcdf(std::move(s));
  }

  double operator()(Real x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return 0.0;
    const auto i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return fraction(cum_[i]);
  }

  Real quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile p must lie in [0, 1]");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (fraction(cum_[i]) >= p) return xs_[i];
    }
    return xs_.back();
  }

  Real median() const { return quantile(0.5); }

  /// One point per distinct sample value, ascending.
  std::vector<CdfPoint<Real>> points() const {
    std::vector<CdfPoint<Real>> out;
    out.reserve(xs_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) out.push_back({xs_[i], fraction(cum_[i])});
    return out;
  }

  std::int64_t total_weight() const { return cum_.empty() ? 0 : cum_.back(); }
  std::size_t distinct() const { return xs_.size(); }

 private:
  double fraction(std::int64_t c) const {
    return static_cast<double>(c) / static_cast<double>(cum_.back());
  }

  std::vector<Real> xs_;
  std::vector<std::int64_t> cum_;
};

}  // namespace dlcost
