#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "bwm/calibration.hpp"
#include "bwm/csv.hpp"
#include "bwm/error.hpp"
#include "bwm/initial.hpp"
#include "bwm/snapshot.hpp"

using namespace bwm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bwm_test_io";
  fs::create_directories(dir);
  return dir / name;
}

Calibration sample_calibration() {
  Calibration c;
  c.gronwall_C1 = 1.5;
  c.gronwall_C2 = 0.25;
  c.grad_K = 0.4;
  c.displacement_K = 1.3;
  c.bgw_C = 0.7;
  for (const auto& n : gn_names(1)) c.gn1[n] = 0.1 + n.size();
  for (const auto& n : gn_names(2)) c.gn2[n] = 1.0 / 3.0 + n.size();
  return c;
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
  std::mt19937_64 rng(5);
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 16);
    SimulationState s =
        random_tangent_state(g, ManifoldSpec::sphere(4), 3, 1.0, 0.7, rng);
    s.time = 0.1 + 0.2;  // not exactly representable in decimal
    const fs::path p = scratch("snap" + std::to_string(dim) + ".bwm");
    write_snapshot(p.string(), s);
    CHECK(fs::file_size(p) == 4 + 3 * 8 + 8 + 2 * g.num_points() * 4 * 8);
    const SimulationState r = read_snapshot(p.string());
    CHECK(r.u.grid() == g);
    CHECK(r.u.ncomp() == 4);
    CHECK(r.time == s.time);
    CHECK(r.u.values() == s.u.values());
    CHECK(r.ut.values() == s.ut.values());
  }
}

TEST_CASE("snapshot header is little endian") {
  const Grid g = Grid::make(1, 8);
  SimulationState s{GridField(g, 2), GridField(g, 2), 1.0};
  const fs::path p = scratch("header.bwm");
  write_snapshot(p.string(), s);
  std::ifstream is(p, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), {});
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "BWM1");
  CHECK(bytes[4] == 1);
  CHECK(bytes[12] == 8);
  CHECK(bytes[20] == 2);
  CHECK(bytes[27] == 0);
}

TEST_CASE("corrupt snapshots are rejected") {
  const fs::path bad = scratch("bad.bwm");
  {
    std::ofstream os(bad, std::ios::binary);
    os << "BWM2 and then some";
  }
  CHECK_THROWS_AS(read_snapshot(bad.string()), Error);
  CHECK_THROWS_AS(read_snapshot(scratch("missing.bwm").string()), Error);

  const Grid g = Grid::make(2, 8);
  const fs::path p = scratch("trunc.bwm");
  write_snapshot(p.string(), SimulationState{GridField(g, 3), GridField(g, 3), 0.0});
  fs::resize_file(p, fs::file_size(p) - 8);
  CHECK_THROWS_AS(read_snapshot(p.string()), Error);
}

TEST_CASE("csv columns and rows") {
  const auto c1 = csv_columns(1);
  const auto c2 = csv_columns(2);
  CHECK(c1.front() == "time");
  CHECK(c1.back() == "gronwall_violated");
  CHECK(c1.size() == 9 + 3 + 3);
  CHECK(c2.size() == 9 + 5 + 3);

  DiagnosticsRecord r;
  r.time = 0.1;
  r.energy = 1.0 / 3.0;
  for (const auto& n : gn_names(2)) r.gn.ratios.emplace_back(n, 0.5);
  r.gronwall_violated = true;
  std::ostringstream os;
  write_csv_header(os, 2);
  write_csv_row(os, r);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(std::count(header.begin(), header.end(), ',') == long(c2.size() - 1));
  CHECK(std::count(row.begin(), row.end(), ',') == long(c2.size() - 1));
  CHECK(row.rfind("0.10000000000000001,0.33333333333333331,", 0) == 0);
  CHECK(row.back() == '1');
}

TEST_CASE("format_double round trips") {
  for (double v : {0.0, 1.0 / 3.0, 1e-300, -2.5e17, std::numeric_limits<double>::max()}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("calibration text round trip") {
  const Calibration c = sample_calibration();
  const std::string text = calibration_to_text(c);
  const Calibration r = parse_calibration(text);
  CHECK(r.gronwall_C(1) == c.gronwall_C1);
  CHECK(r.gronwall_C(2) == c.gronwall_C2);
  CHECK(r.bgw_C == c.bgw_C);
  CHECK(r.gn(1) == c.gn1);
  CHECK(r.gn(2) == c.gn2);
  CHECK(calibration_to_text(r) == text);

  const fs::path p = scratch("cal.cfg");
  save_calibration(p.string(), c);
  CHECK(calibration_to_text(load_calibration(p.string())) == text);
}

TEST_CASE("calibration errors") {
  const std::string text = calibration_to_text(sample_calibration());
  CHECK_THROWS_AS(parse_calibration(text + "bogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_calibration(text + "grad_K = -1\n"), ParseError);
  CHECK_THROWS_AS(parse_calibration(text + "grad_K = 1x\n"), ParseError);
  CHECK_THROWS_AS(parse_calibration("grad_K = 1\n"), Error);
  CHECK_THROWS_AS(load_calibration("/nonexistent/cal.cfg"), Error);
}

TEST_CASE("bundled calibration file loads") {
  const Calibration c = load_calibration(default_calibration_path());
  CHECK(c.gronwall_C1 > 0);
  CHECK(c.gn2.size() == gn_names(2).size());
}
