#include "stancesum/logistic.hpp"

#include <cmath>

#include "stancesum/error.hpp"

namespace stancesum::logistic {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double linear_score(const std::vector<double>& params, const SparseRow& row) {
  double z = params[0];
  for (const auto& [idx, value] : row) z += params[idx + 1] * value;
  return z;
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double objective(const std::vector<double>& params, const Dataset& data, double l2,
                 std::vector<double>* gradient) {
  const double n = static_cast<double>(data.rows.size());
  if (gradient) gradient->assign(params.size(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const double z = linear_score(params, data.rows[i]);
    const double y = data.labels[i];
    loss += softplus(z) - y * z;
    if (gradient) {
      const double r = (sigmoid(z) - y) / n;
      (*gradient)[0] += r;
      for (const auto& [idx, value] : data.rows[i]) (*gradient)[idx + 1] += r * value;
    }
  }
  loss /= n;
  double sq = 0.0;
  for (std::size_t j = 1; j < params.size(); ++j) {
    sq += params[j] * params[j];
    if (gradient) (*gradient)[j] += l2 / n * params[j];
  }
  return loss + l2 / (2.0 * n) * sq;
}

FitResult fit(const Dataset& data, const FitOptions& options) {
  if (data.rows.empty() || data.rows.size() != data.labels.size()) {
    throw TrainingError("logistic fit: empty or inconsistent dataset");
  }
  FitResult result;
  result.params.assign(data.dimension + 1, 0.0);
  std::vector<double> grad;
  std::vector<double> trial(result.params.size());
  double value = objective(result.params, data, options.l2, &grad);
  double step = 1.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double gnorm2 = 0.0;
    for (double g : grad) gnorm2 += g * g;
    result.gradient_norm = std::sqrt(gnorm2);
    result.iterations = iter;
    if (result.gradient_norm <= options.gradient_tolerance) {
      result.converged = true;
      return result;
    }
    // Armijo backtracking; the step is allowed to grow again after success.
    step *= 2.0;
    double next = 0.0;
    while (true) {
      for (std::size_t j = 0; j < trial.size(); ++j) trial[j] = result.params[j] - step * grad[j];
      next = objective(trial, data, options.l2, nullptr);
      if (next <= value - 0.5 * step * gnorm2 || step < 1e-12) break;
      step *= 0.5;
    }
    result.params.swap(trial);
    value = objective(result.params, data, options.l2, &grad);
  }
  double gnorm2 = 0.0;
  for (double g : grad) gnorm2 += g * g;
  result.gradient_norm = std::sqrt(gnorm2);
  result.iterations = options.max_iterations;
  result.converged = result.gradient_norm <= options.gradient_tolerance;
  return result;
}

}  // namespace stancesum::logistic
