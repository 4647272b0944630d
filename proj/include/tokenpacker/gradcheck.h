#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokenpacker/projector.h"

namespace tpk {

struct GradcheckOptions {
  std::size_t grid = 4;
  std::size_t channels = 8;
  std::size_t scale = 2;
  std::size_t levels = 2;
  std::size_t heads = 1;
  QueryMode query_mode = QueryMode::kInterpolated;
  double eps = 1e-5;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  // Test hook: perturb one analytic gradient so the harness must fail.
  bool corrupt_backward = false;
};

struct GradcheckEntry {
  std::string name;
  std::size_t elements = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double tolerance = 0.0;

  double worst() const;
  bool passed() const { return worst() < tolerance; }
};

// |analytic - numeric| / max(|analytic|, |numeric|, floor). The floor keeps
// entries whose true gradient is ~0 from dividing roundoff by roundoff.
double relative_error(double analytic, double numeric, double floor = 1e-6);

// Central finite differences of sum(upstream * forward) against backward(),
// for every weight tensor and every input feature tensor.
GradcheckReport run_gradcheck(const GradcheckOptions& opts);

}  // namespace tpk
