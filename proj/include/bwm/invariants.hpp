#pragma once

// Property suite over geometry, grid, dynamics and integrator, printed by
// `bwm invariants` as a pass/fail table.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bwm {

struct InvariantResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

std::vector<InvariantResult> run_invariants(std::uint64_t seed);

void print_invariants(std::ostream& os, const std::vector<InvariantResult>& rows);

}  // namespace bwm
