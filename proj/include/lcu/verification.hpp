#pragma once

#include <string>
#include <vector>

namespace lcu {

/// One row of the kernel verification grid: the cost-model prediction, the
/// Toffolis counted in the built circuit, and a behavioral simulation check.
struct KernelCheck {
  std::string kernel;
  std::string params;
  long long predicted = 0;
  long long counted = 0;
  bool behavior_ok = false;
  int cases = 0;  // simulated inputs or branches exercised

  bool ok() const { return predicted == counted && behavior_ok; }
};

struct KernelGridOptions {
  std::string kernel_filter;  // empty = the standard grid
  int n = 0;                  // register width override where applicable
  long long d = 0;
  long long k = 0;
  int M = 0;
  bool include_walk = false;  // the walk check is the slow one
};

/// Builds and simulates the circuit kernels against the costing module.
std::vector<KernelCheck> run_kernel_grid(const KernelGridOptions& opts = {});

std::string kernel_grid_report(const std::vector<KernelCheck>& rows);

}  // namespace lcu
