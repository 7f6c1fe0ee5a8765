#include "soul/validation/checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "soul/models/logistic.hpp"

namespace soul {

double gradcheck(const ScalarFn& f, const VectorFn& grad, std::span<const double> point, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("gradcheck: h must be positive");
  const std::size_t k = point.size();
  Vector analytic(k);
  grad(point, analytic);
  Vector probe(point.begin(), point.end());
  double worst = 0.0;
  const double denom = std::max(linalg::norm_inf(analytic), 1e-8);
  for (std::size_t i = 0; i < k; ++i) {
    probe[i] = point[i] + h;
    const double up = f(probe);
    probe[i] = point[i] - h;
    const double down = f(probe);
    probe[i] = point[i];
    if (!std::isfinite(up) || !std::isfinite(down)) throw NonFiniteError("gradcheck: non-finite function value");
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - analytic[i]) / denom);
  }
  return worst;
}

double prediction_error(std::span<const double> y_test, std::span<const double> y_hat) {
  if (y_test.size() != y_hat.size()) throw std::invalid_argument("prediction_error: length mismatch");
  if (y_test.empty()) throw std::invalid_argument("prediction_error: empty test set");
  double s = 0.0;
  for (std::size_t i = 0; i < y_test.size(); ++i) s += std::abs(y_test[i] - y_hat[i]);
  return s / static_cast<double>(y_test.size());
}

Vector predictive_labels(const std::vector<Vector>& beta_samples, const Matrix& test_covariates) {
  if (beta_samples.empty()) throw std::invalid_argument("predictive_labels: no posterior samples");
  const std::size_t n = test_covariates.rows();
  Vector prob(n, 0.0), u(n);
  for (const auto& beta : beta_samples) {
    if (beta.size() != test_covariates.cols()) throw std::invalid_argument("predictive_labels: dimension mismatch");
    linalg::gemv(test_covariates, beta, u);
    for (std::size_t i = 0; i < n; ++i) prob[i] += sigmoid(u[i]);
  }
  Vector labels(n);
  const double inv = 1.0 / static_cast<double>(beta_samples.size());
  for (std::size_t i = 0; i < n; ++i) labels[i] = prob[i] * inv >= 0.5 ? 1.0 : 0.0;
  return labels;
}

bool concavity_check(std::span<const double> xs, std::span<const double> fs, double tol) {
  if (xs.size() != fs.size()) throw std::invalid_argument("concavity_check: length mismatch");
  if (xs.size() < 3) throw std::invalid_argument("concavity_check: need at least 3 points");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("concavity_check: grid must be strictly increasing");
  }
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double w = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
    const double chord = fs[i - 1] + w * (fs[i + 1] - fs[i - 1]);
    if (chord - fs[i] > tol) return false;
  }
  return true;
}

}  // namespace soul
