#pragma once

// Flat `key = value` run configuration. '#' starts a comment; unknown keys
// are rejected.

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "bwm/geometry.hpp"
#include "bwm/grid.hpp"
#include "bwm/integrator.hpp"

namespace bwm {

enum class InitialKind { TravelingWave, Bump, RandomBandlimited, Constant };

struct InitialData {
  InitialKind kind = InitialKind::TravelingWave;
  // traveling_wave: u = cos(theta) e_a + sin(theta) e_b,
  // theta = omega t + k x + ky y.
  int k = 1;
  int ky = 0;
  double omega = 1.0;
  int axis_a = 0;
  int axis_b = 1;
  // bump: u0 = Pi(p + A phi(x) e), u1 = V phi(x) P_{u0} e.
  // random_bandlimited: amplitude of the random tangent push, modes <= kmax.
  double amplitude = 0.5;
  double width = 0.5;
  std::vector<double> base;       // empty: manifold default
  std::vector<double> direction;  // empty: manifold default
  double velocity = -1.0;         // < 0: 0 for bump, amplitude for random data
  int kmax = 2;
};

struct RunConfig {
  int dim = 1;
  int grid_size = 32;
  double length = 2.0 * std::numbers::pi;
  ManifoldSpec manifold = ManifoldSpec::sphere(2);
  SchemeConfig scheme;
  double t_end = 1.0;
  double output_every = 0.0;  // 0 after parsing means 100 * dt
  InitialData initial;
  std::uint64_t seed = 0;
  double tol_constraint = 1e-8;
  double tol_tangent = 1e-8;
  std::string csv = "diagnostics.csv";
  std::string snapshot;      // empty: no final snapshot
  std::string calibration;   // empty: bundled calibration file
  // study parameters
  int lambda = 2;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  std::vector<double> dts{4e-3, 2e-3, 1e-3};
  std::vector<int> grid_sizes{8, 16, 32};

  Grid grid() const { return Grid::make(dim, grid_size, length); }
};

// Throws ParseError (with line number) or ValidationError (naming the field).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Checks cross-field invariants; throws ValidationError.
void validate(const RunConfig& cfg);

std::string to_text(const RunConfig& cfg);

}  // namespace bwm
