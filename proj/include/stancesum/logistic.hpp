#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace stancesum::logistic {

using SparseRow = std::vector<std::pair<std::uint32_t, double>>;

struct Dataset {
  std::size_t dimension = 0;
  std::vector<SparseRow> rows;
  std::vector<int> labels;  // 0 or 1
};

// params[0] is the bias, params[1..dimension] the weights.
//   J = (1/n) sum_i [log(1 + exp(z_i)) - y_i z_i] + l2 / (2n) * |w|^2
// The bias is not penalized. Writes dJ/dparams into gradient when given.
double objective(const std::vector<double>& params, const Dataset& data, double l2,
                 std::vector<double>* gradient);

struct FitOptions {
  double l2 = 1.0;
  double gradient_tolerance = 1e-6;
  int max_iterations = 5000;
};

struct FitResult {
  std::vector<double> params;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Full-batch gradient descent with Armijo backtracking.
FitResult fit(const Dataset& data, const FitOptions& options);

double sigmoid(double z);
double linear_score(const std::vector<double>& params, const SparseRow& row);

}  // namespace stancesum::logistic
