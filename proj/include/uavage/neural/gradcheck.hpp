#pragma once

#include <functional>
#include <vector>

#include "uavage/neural/params.hpp"

namespace uavage::neural {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;  // flat index over all blocks
  double analytic = 0.0;        // values at the worst index
  double numeric = 0.0;
};

/// Compares `analytic` (flattened like `params`) with central differences of `loss`.
/// Relative error is |a - n| / max(|a| + |n|, floor).
GradCheckResult gradient_check(const ParamBlocks& params, const std::function<double()>& loss,
                               const std::vector<double>& analytic, double step = 1e-5, double floor = 1e-4);

/// Concatenates the values of the blocks in order.
std::vector<double> flatten(const ParamBlocks& blocks);

}  // namespace uavage::neural
