#pragma once

#include <span>

namespace soul {

/// Huber function: u^2/2 for |u| <= lambda, lambda(|u| - lambda/2) beyond.
double huber(double u, double lambda);
/// Derivative of huber in u: u inside the knee, lambda sign(u) outside.
double huber_grad(double u, double lambda);
/// Sum of huber over a vector.
double huber_sum(std::span<const double> u, double lambda);

/// prox of t * huber(., lambda): argmin_x t h(x) + (x - v)^2 / 2.
double huber_prox(double v, double t, double lambda);

/// Normalizer of the smoothed-Laplace density exp(-theta h_lambda(u)):
///   z(theta) = sqrt(2 pi / theta) erf(lambda sqrt(theta / 2)) + 2 exp(-theta lambda^2 / 2) / (theta lambda).
double huber_normalizer(double theta, double lambda);
/// dz/dtheta = -integral h exp(-theta h) du
///           = -sqrt(2 pi / theta) erf(lambda sqrt(theta / 2)) / (2 theta) - 2 exp(-theta lambda^2 / 2) / (theta^2 lambda).
double huber_normalizer_derivative(double theta, double lambda);
/// d/dtheta log z(theta).
double huber_log_normalizer_derivative(double theta, double lambda);

}  // namespace soul
