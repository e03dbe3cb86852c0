#pragma once

// BWM1 snapshot files: "BWM1", little-endian u64 n, M, L, f64 time, then the
// u samples (M^n * L doubles, point-major) followed by the u_t samples.

#include <string>

#include "bwm/dynamics.hpp"

namespace bwm {

void write_snapshot(const std::string& path, const SimulationState& s);

// The box length is not stored; pass the one the state was produced with.
SimulationState read_snapshot(const std::string& path,
                              double length = 2.0 * std::numbers::pi);

}  // namespace bwm
