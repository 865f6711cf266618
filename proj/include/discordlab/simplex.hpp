#pragma once

#include <functional>
#include <span>
#include <vector>

namespace discordlab {

struct SimplexOptions {
  /// Stop when max distance of any vertex from the best one falls below this.
  double x_tol = 1e-9;
  /// ... or when f(worst) - f(best) falls below this.
  double f_tol = 1e-12;
  int max_evaluations = 50000;
  /// Edge length of the initial axis-aligned simplex.
  double initial_step = 0.1;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead minimization (reflection, expansion, contraction, shrink)
/// with dimension-adaptive coefficients: expansion 1 + 2/n, contraction
/// 0.75 - 1/(2n), shrink 1 - 1/n.
SimplexResult simplex_minimize(const Objective& f, std::vector<double> x0,
                               const SimplexOptions& options = {});

}  // namespace discordlab
