#pragma once

// Frozen empirical constants for the monitored inequalities, stored as
// `key = value` lines.

#include <map>
#include <string>

namespace bwm {

struct Calibration {
  double gronwall_C1 = 0.0;     // linear envelope, n = 1
  double gronwall_C2 = 0.0;     // log envelope, n = 2
  double grad_K = 0.0;          // sup ||grad u|| <= K sqrt(1+T) (sqrt E + ||grad u0||)
  double displacement_K = 0.0;  // sup ||u - u0|| <= K' T sqrt E
  double bgw_C = 0.0;
  std::map<std::string, double> gn1;  // keyed by gn_names(1)
  std::map<std::string, double> gn2;  // keyed by gn_names(2)

  double gronwall_C(int dim) const { return dim == 1 ? gronwall_C1 : gronwall_C2; }
  const std::map<std::string, double>& gn(int dim) const { return dim == 1 ? gn1 : gn2; }
};

std::string default_calibration_path();

// Throws ParseError / Error. Every constant must be present.
Calibration parse_calibration(const std::string& text);
Calibration load_calibration(const std::string& path);
std::string calibration_to_text(const Calibration& c);
void save_calibration(const std::string& path, const Calibration& c);

}  // namespace bwm
