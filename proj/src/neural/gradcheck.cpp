#include "uavage/neural/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavage::neural {

std::vector<double> flatten(const ParamBlocks& blocks) {
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.values.begin(), b.values.end());
  return out;
}

GradCheckResult gradient_check(const ParamBlocks& params, const std::function<double()>& loss,
                               const std::vector<double>& analytic, double step, double floor) {
  if (analytic.size() != total_size(params)) throw std::invalid_argument("gradient_check: gradient size mismatch");
  GradCheckResult res;
  std::size_t k = 0;
  for (const auto& b : params) {
    for (double& theta : b.values) {
      const double keep = theta;
      theta = keep + step;
      const double up = loss();
      theta = keep - step;
      const double down = loss();
      theta = keep;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[k];
      const double err = std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), floor);
      if (k == 0 || err > res.max_rel_error) {
        res.max_rel_error = err;
        res.worst_index = k;
        res.analytic = a;
        res.numeric = numeric;
      }
      ++k;
    }
  }
  return res;
}

}  // namespace uavage::neural
