#include "bwm/calibration.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bwm/csv.hpp"
#include "bwm/diagnostics.hpp"
#include "bwm/error.hpp"

namespace bwm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double* slot(Calibration& c, const std::string& key) {
  if (key == "gronwall_C.n1") return &c.gronwall_C1;
  if (key == "gronwall_C.n2") return &c.gronwall_C2;
  if (key == "grad_K") return &c.grad_K;
  if (key == "displacement_K") return &c.displacement_K;
  if (key == "bgw_C") return &c.bgw_C;
  for (int dim : {1, 2}) {
    const std::string prefix = "gn.n" + std::to_string(dim) + ".";
    if (key.rfind(prefix, 0) != 0) continue;
    const std::string name = key.substr(prefix.size());
    for (const auto& known : gn_names(dim)) {
      if (known == name) return &(dim == 1 ? c.gn1 : c.gn2)[name];
    }
  }
  return nullptr;
}

std::vector<std::string> all_keys() {
  std::vector<std::string> keys{"gronwall_C.n1", "gronwall_C.n2", "grad_K",
                                "displacement_K", "bgw_C"};
  for (int dim : {1, 2}) {
    for (const auto& name : gn_names(dim)) {
      keys.push_back("gn.n" + std::to_string(dim) + "." + name);
    }
  }
  return keys;
}

}  // namespace

std::string default_calibration_path() { return BWM_DEFAULT_CALIBRATION; }

Calibration parse_calibration(const std::string& text) {
  Calibration c;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    double* target = slot(c, key);
    if (!target) throw ParseError(line_no, "unknown calibration key '" + key + "'");
    try {
      std::size_t used = 0;
      const std::string value = trim(line.substr(eq + 1));
      *target = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad value for '" + key + "'");
    }
    if (!(*target > 0.0)) throw ParseError(line_no, key + " must be positive");
    seen.insert(key);
  }
  for (const auto& key : all_keys()) {
    if (!seen.count(key)) throw Error("calibration key missing: " + key);
  }
  return c;
}

Calibration load_calibration(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open calibration file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_calibration(ss.str());
}

std::string calibration_to_text(const Calibration& c) {
  std::ostringstream os;
  Calibration copy = c;
  os << "# produced by `bwm calibrate`; do not edit by hand\n";
  for (const auto& key : all_keys()) {
    os << key << " = " << format_double(*slot(copy, key)) << "\n";
  }
  return os.str();
}

void save_calibration(const std::string& path, const Calibration& c) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write calibration file " + path);
  os << calibration_to_text(c);
  if (!os) throw Error("failed writing calibration file " + path);
}

}  // namespace bwm
