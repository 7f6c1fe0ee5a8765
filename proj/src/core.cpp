#include "soul/core.hpp"

#include <algorithm>
#include <cmath>

namespace soul {

ParameterDomain::ParameterDomain(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("ParameterDomain: lower/upper size mismatch");
  }
  if (lower_.empty()) throw std::invalid_argument("ParameterDomain: zero dimension");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
      throw std::invalid_argument("ParameterDomain: lower bound exceeds upper bound at coordinate " +
                                  std::to_string(i));
    }
  }
}

ParameterDomain ParameterDomain::uniform(std::size_t dim, double lo, double hi) {
  return ParameterDomain(Vector(dim, lo), Vector(dim, hi));
}

bool ParameterDomain::is_compact() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) return false;
  }
  return true;
}

bool ParameterDomain::contains(std::span<const double> theta) const {
  if (theta.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!(theta[i] >= lower_[i] && theta[i] <= upper_[i])) return false;
  }
  return true;
}

double ParameterDomain::diameter() const {
  if (!is_compact()) return kInf;
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += (upper_[i] - lower_[i]) * (upper_[i] - lower_[i]);
  return std::sqrt(s);
}

void project_inplace(std::span<double> theta, const ParameterDomain& domain) {
  if (theta.size() != domain.dim()) {
    throw std::invalid_argument("project: expected dimension " + std::to_string(domain.dim()) +
                                ", got " + std::to_string(theta.size()));
  }
  const auto& lo = domain.lower();
  const auto& hi = domain.upper();
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = std::clamp(theta[i], lo[i], hi[i]);
}

Vector project(std::span<const double> theta, const ParameterDomain& domain) {
  Vector out(theta.begin(), theta.end());
  project_inplace(out, domain);
  return out;
}

void WeightedAverage::add(std::span<const double> theta, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("WeightedAverage: weight must be positive");
  if (mean_.empty() && count_ == 0) mean_.assign(theta.size(), 0.0);
  if (theta.size() != mean_.size()) throw std::invalid_argument("WeightedAverage: dimension mismatch");
  total_ += weight;
  const double r = weight / total_;
  for (std::size_t i = 0; i < mean_.size(); ++i) mean_[i] += r * (theta[i] - mean_[i]);
  ++count_;
}

Vector averaged_iterate(const std::vector<Vector>& thetas, std::span<const double> deltas) {
  if (thetas.empty()) throw std::invalid_argument("averaged_iterate: empty input");
  if (thetas.size() != deltas.size()) throw std::invalid_argument("averaged_iterate: length mismatch");
  const std::size_t dim = thetas.front().size();
  Vector num(dim, 0.0);
  double den = 0.0;
  for (std::size_t n = 0; n < thetas.size(); ++n) {
    if (!(deltas[n] > 0.0)) throw std::invalid_argument("averaged_iterate: nonpositive step size");
    if (thetas[n].size() != dim) throw std::invalid_argument("averaged_iterate: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) num[i] += deltas[n] * thetas[n][i];
    den += deltas[n];
  }
  for (auto& v : num) v /= den;
  return num;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace soul
