#pragma once

#include <functional>
#include <span>
#include <vector>

#include "soul/core.hpp"
#include "soul/linalg.hpp"

namespace soul {

using ScalarFn = std::function<double(std::span<const double>)>;
using VectorFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Compares grad against central differences of f at `point` with step h.
/// Returns max_i |fd_i - grad_i| / max(||grad||_inf, 1e-8).
double gradcheck(const ScalarFn& f, const VectorFn& grad, std::span<const double> point, double h = 1e-5);

/// ||y_test - y_hat||_1 / n
double prediction_error(std::span<const double> y_test, std::span<const double> y_hat);

/// 1[mean_k s(v' beta_k) >= 1/2] for each row v of the test covariates.
Vector predictive_labels(const std::vector<Vector>& beta_samples, const Matrix& test_covariates);

/// True iff every interior point lies above the chord of its neighbours up
/// to tol: f(x_{i-1}) + (f(x_{i+1}) - f(x_{i-1})) (x_i - x_{i-1}) / (x_{i+1} - x_{i-1}) - f(x_i) <= tol.
/// On a uniform grid this is the second difference test.
bool concavity_check(std::span<const double> xs, std::span<const double> fs, double tol = 0.0);

}  // namespace soul
