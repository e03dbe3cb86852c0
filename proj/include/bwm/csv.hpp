#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bwm/diagnostics.hpp"

namespace bwm {

// time, energy, energy_rel_drift, grad_l2_sq, cal_E, h, constraint_max,
// tangent_max, ortho_residual, gn_<name>..., bgw_ratio, gronwall_envelope,
// gronwall_violated
std::vector<std::string> csv_columns(int dim);

void write_csv_header(std::ostream& os, int dim);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);

// Shortest round-trip-safe rendering with 17 significant digits.
std::string format_double(double v);

}  // namespace bwm
