#include "gbtail/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gbtail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& step,
    const NelderMeadOptions& options) {
  const Eigen::Index n = start.size();
  const double refl = 1.0;
  const double expand = 2.0;
  const double contract = 0.5;
  const double shrink = 0.5;

  auto safe = [&](const Eigen::VectorXd& x) {
    const double v = objective(x);
    return std::isnan(v) ? kInf : v;
  };

  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(n) + 1);
  std::vector<double> fs(static_cast<std::size_t>(n) + 1);
  xs[0] = start;
  fs[0] = safe(start);
  for (Eigen::Index i = 0; i < n; ++i) {
    xs[i + 1] = start;
    xs[i + 1][i] += step[i];
    fs[i + 1] = safe(xs[i + 1]);
  }

  std::vector<std::size_t> order(xs.size());
  NelderMeadResult result;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    const double spread = std::fabs(fs[worst] - fs[best]);
    const double scale = std::fabs(fs[worst]) + std::fabs(fs[best]);
    if (std::isfinite(fs[worst]) &&
        2.0 * spread <= options.ftol * scale + 1e-300) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i != worst) centroid += xs[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + refl * (centroid - xs[worst]);
    const double fr = safe(xr);

    if (fr < fs[best]) {
      const Eigen::VectorXd xe = centroid + expand * (centroid - xs[worst]);
      const double fe = safe(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }

    // contraction, outside or inside of the reflected point
    if (fr < fs[worst]) {
      const Eigen::VectorXd xc = centroid + contract * (xr - centroid);
      const double fc = safe(xc);
      if (fc <= fr) {
        xs[worst] = xc;
        fs[worst] = fc;
        continue;
      }
    } else {
      const Eigen::VectorXd xc = centroid + contract * (xs[worst] - centroid);
      const double fc = safe(xc);
      if (fc < fs[worst]) {
        xs[worst] = xc;
        fs[worst] = fc;
        continue;
      }
    }

    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + shrink * (xs[i] - xs[best]);
      fs[i] = safe(xs[i]);
    }
  }

  const std::size_t best = static_cast<std::size_t>(
      std::min_element(fs.begin(), fs.end()) - fs.begin());
  result.x = xs[best];
  result.fmin = fs[best];
  result.iterations = iter;
  return result;
}

}  // namespace gbtail
