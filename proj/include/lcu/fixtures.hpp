#pragma once

#include "lcu/costing.hpp"

namespace lcu {

/// Version tag for the published FeMoco dataset constants below.
inline constexpr int kFixturesVersion = 1;

/// Published inputs for the 108 spin-orbital FeMoco active space:
/// lambda_T = 1,490, lambda_W = 34,552 (L = 200), lambda_V = 8,373,
/// 3,300,568 surviving two-body values at c = 2e-4 of which 435,023 are
/// symmetry-unique. These are inputs taken from the literature; the
/// integrals themselves are not available here.
DatasetParams rwswt_dataset();

/// Published inputs for the 152 spin-orbital FeMoco active space:
/// lambda_T = 3,446, lambda_W = 20,746 (L = 200), lambda_V = 4,168,
/// 1,291,648 surviving values at c = 1e-4, 176,572 unique.
DatasetParams llduc_dataset();

/// Dataset lookup by name ("rwswt" | "llduc"); throws on unknown names.
DatasetParams paper_dataset(const std::string& name);

/// Allows overriding the published constants from a JSON file (used via the
/// LCU_FIXTURES environment variable). Recognized keys: lambda_T, lambda_W,
/// lambda_V, L, sparse_unique_v, delta_e.
DatasetParams apply_fixture_overrides(DatasetParams base, const std::string& json_text);

}  // namespace lcu
