#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ifc {

struct SimplexOptions {
  int max_evals = 2000;
  double initial_step = 0.5;
  double ftol = 1e-10;  // stop when the simplex values span less than this
  double xtol = 1e-8;   // and the simplex diameter is below this
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free Nelder-Mead minimization. Non-finite objective values are
/// treated as +infinity. When the simplex collapses before the budget is used,
/// it is rebuilt around the incumbent and the search continues until a rebuild
/// yields no improvement.
SimplexResult nelder_mead(const Objective& f, std::vector<double> start, const SimplexOptions& opts);

}  // namespace ifc
