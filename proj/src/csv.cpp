#include "bwm/csv.hpp"

#include <cstdio>

namespace bwm {

std::vector<std::string> csv_columns(int dim) {
  std::vector<std::string> cols{"time",           "energy",        "energy_rel_drift",
                                "grad_l2_sq",     "cal_E",         "h",
                                "constraint_max", "tangent_max",   "ortho_residual"};
  for (const auto& name : gn_names(dim)) cols.push_back("gn_" + name);
  cols.insert(cols.end(), {"bgw_ratio", "gronwall_envelope", "gronwall_violated"});
  return cols;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_header(std::ostream& os, int dim) {
  const auto cols = csv_columns(dim);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
  const double fixed[] = {r.time,        r.energy,          r.energy_rel_drift,
                          r.grad_l2_sq,  r.cal_E,           r.h,
                          r.constraint_max, r.tangent_max,  r.ortho_residual};
  bool first = true;
  for (double v : fixed) {
    os << (first ? "" : ",") << format_double(v);
    first = false;
  }
  for (const auto& [name, value] : r.gn.ratios) os << ',' << format_double(value);
  os << ',' << format_double(r.bgw_ratio) << ',' << format_double(r.gronwall_envelope)
     << ',' << (r.gronwall_violated ? 1 : 0) << '\n';
}

}  // namespace bwm
