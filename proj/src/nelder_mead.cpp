#include "ifc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ifc {

namespace {

struct Counted {
  const Objective& f;
  int evals = 0;
  double operator()(std::span<const double> x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }
};

// One Nelder-Mead descent from `start`; returns when converged or out of budget.
SimplexResult descend(Counted& f, const std::vector<double>& start, double step,
                      const SimplexOptions& opts) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) {
    if (f.evals >= opts.max_evals && i > 0) {
      vals[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    vals[i] = f(pts[i]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  bool converged = false;

  auto point_along = [&](double coef, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t d = 0; d < n; ++d) out[d] = centroid[d] + coef * (worst[d] - centroid[d]);
  };

  while (f.evals < opts.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t d = 0; d < n; ++d)
        diameter = std::max(diameter, std::abs(pts[i][d] - pts[best][d]));
    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] <= opts.ftol && diameter <= opts.xtol) {
      converged = true;
      break;
    }
    if (diameter <= 1e-14) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);

    point_along(-1.0, xr, pts[worst]);
    const double fr = f(xr);
    if (fr < vals[best]) {
      point_along(-2.0, xe, pts[worst]);
      const double fe = f.evals < opts.max_evals ? f(xe) : std::numeric_limits<double>::infinity();
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    point_along(outside ? -0.5 : 0.5, xc, pts[worst]);
    const double fc = f(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n && f.evals < opts.max_evals; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
      vals[i] = f(pts[i]);
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  SimplexResult out;
  out.x = pts[static_cast<std::size_t>(it - vals.begin())];
  out.value = *it;
  out.converged = converged;
  return out;
}

}  // namespace

SimplexResult nelder_mead(const Objective& objective, std::vector<double> start, const SimplexOptions& opts) {
  Counted f{objective};
  if (start.empty()) {
    SimplexResult r;
    r.value = f(start);
    r.evals = f.evals;
    r.converged = true;
    return r;
  }
  SimplexResult best = descend(f, start, opts.initial_step, opts);
  double step = opts.initial_step;
  while (f.evals < opts.max_evals) {
    step = std::max(step * 0.5, 1e-4);
    SimplexResult next = descend(f, best.x, step, opts);
    const bool improved = next.value < best.value - opts.ftol;
    if (next.value < best.value) best = std::move(next);
    if (!improved) {
      best.converged = true;
      break;
    }
  }
  best.evals = f.evals;
  return best;
}

}  // namespace ifc
