#include "bwm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "bwm/csv.hpp"
#include "bwm/error.hpp"

namespace bwm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

struct PendingManifold {
  std::string spec;
  std::optional<double> tube;
};

ManifoldSpec build_manifold(const PendingManifold& pm) {
  const auto colon = pm.spec.find(':');
  if (colon == std::string::npos) {
    throw ValidationError("manifold", "expected sphere:L or torus:R,r");
  }
  const std::string kind = pm.spec.substr(0, colon);
  const auto args = split_list(pm.spec.substr(colon + 1));
  try {
    if (kind == "sphere" && args.size() == 1) {
      const int L = int(to_int(args[0]));
      return pm.tube ? ManifoldSpec::sphere(L, *pm.tube) : ManifoldSpec::sphere(L);
    }
    if (kind == "torus" && args.size() == 2) {
      const double R = to_double(args[0]), r = to_double(args[1]);
      return pm.tube ? ManifoldSpec::torus(R, r, *pm.tube) : ManifoldSpec::torus(R, r);
    }
  } catch (const std::invalid_argument& e) {
    throw ValidationError("manifold", e.what());
  } catch (const Error& e) {
    throw ValidationError("manifold", e.what());
  }
  throw ValidationError("manifold", "expected sphere:L or torus:R,r");
}

using Setter = std::function<void(RunConfig&, PendingManifold&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dim", [](RunConfig& c, auto&, const auto& v) { c.dim = int(to_int(v)); }},
      {"grid_size", [](RunConfig& c, auto&, const auto& v) { c.grid_size = int(to_int(v)); }},
      {"length", [](RunConfig& c, auto&, const auto& v) { c.length = to_double(v); }},
      {"manifold", [](RunConfig&, PendingManifold& m, const auto& v) { m.spec = v; }},
      {"tube_radius", [](RunConfig&, PendingManifold& m, const auto& v) { m.tube = to_double(v); }},
      {"scheme",
       [](RunConfig& c, auto&, const auto& v) {
         if (v == "strang") c.scheme.scheme = Scheme::StrangSplit;
         else if (v == "rk4") c.scheme.scheme = Scheme::RK4Proj;
         else throw std::invalid_argument("scheme must be strang or rk4");
       }},
      {"dt", [](RunConfig& c, auto&, const auto& v) { c.scheme.dt = to_double(v); }},
      {"reproject_every",
       [](RunConfig& c, auto&, const auto& v) { c.scheme.reproject_every = int(to_int(v)); }},
      {"dealias_fraction",
       [](RunConfig& c, auto&, const auto& v) { c.scheme.dealias_fraction = to_double(v); }},
      {"rhs",
       [](RunConfig& c, auto&, const auto& v) {
         if (v == "auto") c.scheme.rhs_form = RhsForm::Auto;
         else if (v == "projector") c.scheme.rhs_form = RhsForm::Projector;
         else if (v == "sphere") c.scheme.rhs_form = RhsForm::Sphere;
         else throw std::invalid_argument("rhs must be auto, projector or sphere");
       }},
      {"c_cfl", [](RunConfig& c, auto&, const auto& v) { c.scheme.c_cfl = to_double(v); }},
      {"t_end", [](RunConfig& c, auto&, const auto& v) { c.t_end = to_double(v); }},
      {"output_every", [](RunConfig& c, auto&, const auto& v) { c.output_every = to_double(v); }},
      {"initial",
       [](RunConfig& c, auto&, const auto& v) {
         if (v == "traveling_wave") c.initial.kind = InitialKind::TravelingWave;
         else if (v == "bump") c.initial.kind = InitialKind::Bump;
         else if (v == "random_bandlimited") c.initial.kind = InitialKind::RandomBandlimited;
         else if (v == "constant") c.initial.kind = InitialKind::Constant;
         else throw std::invalid_argument("unknown initial data family '" + v + "'");
       }},
      {"initial.k", [](RunConfig& c, auto&, const auto& v) { c.initial.k = int(to_int(v)); }},
      {"initial.ky", [](RunConfig& c, auto&, const auto& v) { c.initial.ky = int(to_int(v)); }},
      {"initial.omega", [](RunConfig& c, auto&, const auto& v) { c.initial.omega = to_double(v); }},
      {"initial.axes",
       [](RunConfig& c, auto&, const auto& v) {
         const auto items = split_list(v);
         if (items.size() != 2) throw std::invalid_argument("axes needs two indices");
         c.initial.axis_a = int(to_int(items[0]));
         c.initial.axis_b = int(to_int(items[1]));
       }},
      {"initial.amplitude",
       [](RunConfig& c, auto&, const auto& v) { c.initial.amplitude = to_double(v); }},
      {"initial.width", [](RunConfig& c, auto&, const auto& v) { c.initial.width = to_double(v); }},
      {"initial.base", [](RunConfig& c, auto&, const auto& v) { c.initial.base = to_doubles(v); }},
      {"initial.direction",
       [](RunConfig& c, auto&, const auto& v) { c.initial.direction = to_doubles(v); }},
      {"initial.velocity",
       [](RunConfig& c, auto&, const auto& v) { c.initial.velocity = to_double(v); }},
      {"initial.kmax", [](RunConfig& c, auto&, const auto& v) { c.initial.kmax = int(to_int(v)); }},
      {"seed",
       [](RunConfig& c, auto&, const auto& v) {
         const long long s = to_int(v);
         if (s < 0) throw std::invalid_argument("seed must be nonnegative");
         c.seed = std::uint64_t(s);
       }},
      {"tol_constraint", [](RunConfig& c, auto&, const auto& v) { c.tol_constraint = to_double(v); }},
      {"tol_tangent", [](RunConfig& c, auto&, const auto& v) { c.tol_tangent = to_double(v); }},
      {"csv", [](RunConfig& c, auto&, const auto& v) { c.csv = v; }},
      {"snapshot", [](RunConfig& c, auto&, const auto& v) { c.snapshot = v; }},
      {"calibration", [](RunConfig& c, auto&, const auto& v) { c.calibration = v; }},
      {"study.lambda", [](RunConfig& c, auto&, const auto& v) { c.lambda = int(to_int(v)); }},
      {"study.deltas", [](RunConfig& c, auto&, const auto& v) { c.deltas = to_doubles(v); }},
      {"study.dts", [](RunConfig& c, auto&, const auto& v) { c.dts = to_doubles(v); }},
      {"study.grid_sizes",
       [](RunConfig& c, auto&, const auto& v) {
         c.grid_sizes.clear();
         for (const auto& item : split_list(v)) c.grid_sizes.push_back(int(to_int(item)));
       }},
  };
  return table;
}

const std::set<std::string> kRequired = {"dim", "grid_size", "manifold",
                                         "dt",  "t_end",     "initial"};

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.dim != 1 && c.dim != 2) throw ValidationError("dim", "must be 1 or 2");
  if (c.grid_size < 8 || c.grid_size % 2 != 0) {
    throw ValidationError("grid_size", "must be even and at least 8");
  }
  if (!(c.length > 0.0)) throw ValidationError("length", "must be positive");
  if (!(c.scheme.dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (!(c.t_end >= 0.0)) throw ValidationError("t_end", "must be nonnegative");
  if (!(c.output_every >= c.scheme.dt)) {
    throw ValidationError("output_every", "must be at least dt");
  }
  if (c.scheme.reproject_every < 0) {
    throw ValidationError("reproject_every", "must be nonnegative");
  }
  if (!(c.scheme.dealias_fraction > 0.0 && c.scheme.dealias_fraction <= 1.0)) {
    throw ValidationError("dealias_fraction", "must lie in (0, 1]");
  }
  if (!(c.scheme.c_cfl > 0.0)) throw ValidationError("c_cfl", "must be positive");
  if (c.scheme.rhs_form == RhsForm::Sphere && c.manifold.kind != ManifoldKind::Sphere) {
    throw ValidationError("rhs", "sphere form needs a sphere target");
  }
  const InitialData& in = c.initial;
  const int L = c.manifold.ambient_dim;
  if (in.kind == InitialKind::TravelingWave) {
    if (c.manifold.kind != ManifoldKind::Sphere) {
      throw ValidationError("initial", "traveling waves need a sphere target");
    }
    if (in.axis_a < 0 || in.axis_b < 0 || in.axis_a >= L || in.axis_b >= L ||
        in.axis_a == in.axis_b) {
      throw ValidationError("initial.axes", "need two distinct ambient axes");
    }
    if (c.dim == 1 && in.ky != 0) throw ValidationError("initial.ky", "needs dim = 2");
  }
  if (!in.base.empty() && int(in.base.size()) != L) {
    throw ValidationError("initial.base", "dimension differs from the ambient space");
  }
  if (!in.direction.empty() && int(in.direction.size()) != L) {
    throw ValidationError("initial.direction", "dimension differs from the ambient space");
  }
  if (!(in.amplitude >= 0.0)) throw ValidationError("initial.amplitude", "must be >= 0");
  if (!(in.width > 0.0)) throw ValidationError("initial.width", "must be positive");
  if (in.kmax < 1) throw ValidationError("initial.kmax", "must be at least 1");
  if (c.lambda < 1) throw ValidationError("study.lambda", "must be a positive integer");
  for (double d : c.deltas) {
    if (!(d >= 0.0)) throw ValidationError("study.deltas", "must be nonnegative");
  }
  for (double d : c.dts) {
    if (!(d > 0.0)) throw ValidationError("study.dts", "must be positive");
  }
  for (int m : c.grid_sizes) {
    if (m < 8 || m % 2 != 0) throw ValidationError("study.grid_sizes", "even and >= 8");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  PendingManifold pm;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");
    if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
    try {
      it->second(cfg, pm, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, key + ": " + e.what());
    }
  }
  for (const auto& key : kRequired) {
    if (!seen.count(key)) throw ValidationError(key, "required key missing");
  }
  cfg.manifold = build_manifold(pm);
  if (cfg.output_every == 0.0) cfg.output_every = 100.0 * cfg.scheme.dt;
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::ostringstream os;
  const auto& in = c.initial;
  os << "dim = " << c.dim << "\n"
     << "grid_size = " << c.grid_size << "\n"
     << "length = " << format_double(c.length) << "\n"
     << "manifold = "
     << (c.manifold.kind == ManifoldKind::Sphere
             ? "sphere:" + std::to_string(c.manifold.ambient_dim)
             : "torus:" + format_double(c.manifold.major_radius) + "," +
                   format_double(c.manifold.minor_radius))
     << "\n"
     << "tube_radius = " << format_double(c.manifold.tube_radius) << "\n"
     << "scheme = " << (c.scheme.scheme == Scheme::StrangSplit ? "strang" : "rk4") << "\n"
     << "dt = " << format_double(c.scheme.dt) << "\n"
     << "reproject_every = " << c.scheme.reproject_every << "\n"
     << "dealias_fraction = " << format_double(c.scheme.dealias_fraction) << "\n"
     << "rhs = "
     << (c.scheme.rhs_form == RhsForm::Auto        ? "auto"
         : c.scheme.rhs_form == RhsForm::Projector ? "projector"
                                                   : "sphere")
     << "\n"
     << "c_cfl = " << format_double(c.scheme.c_cfl) << "\n"
     << "t_end = " << format_double(c.t_end) << "\n"
     << "output_every = " << format_double(c.output_every) << "\n"
     << "initial = "
     << (in.kind == InitialKind::TravelingWave       ? "traveling_wave"
         : in.kind == InitialKind::Bump              ? "bump"
         : in.kind == InitialKind::RandomBandlimited ? "random_bandlimited"
                                                     : "constant")
     << "\n"
     << "initial.k = " << in.k << "\n"
     << "initial.ky = " << in.ky << "\n"
     << "initial.omega = " << format_double(in.omega) << "\n"
     << "initial.axes = " << in.axis_a << "," << in.axis_b << "\n"
     << "initial.amplitude = " << format_double(in.amplitude) << "\n"
     << "initial.width = " << format_double(in.width) << "\n";
  if (!in.base.empty()) os << "initial.base = " << join(in.base) << "\n";
  if (!in.direction.empty()) os << "initial.direction = " << join(in.direction) << "\n";
  os << "initial.velocity = " << format_double(in.velocity) << "\n"
     << "initial.kmax = " << in.kmax << "\n"
     << "seed = " << c.seed << "\n"
     << "tol_constraint = " << format_double(c.tol_constraint) << "\n"
     << "tol_tangent = " << format_double(c.tol_tangent) << "\n"
     << "csv = " << c.csv << "\n";
  if (!c.snapshot.empty()) os << "snapshot = " << c.snapshot << "\n";
  if (!c.calibration.empty()) os << "calibration = " << c.calibration << "\n";
  os << "study.lambda = " << c.lambda << "\n"
     << "study.deltas = " << join(c.deltas) << "\n"
     << "study.dts = " << join(c.dts) << "\n"
     << "study.grid_sizes = ";
  for (std::size_t i = 0; i < c.grid_sizes.size(); ++i) {
    os << (i ? "," : "") << c.grid_sizes[i];
  }
  os << "\n";
  return os.str();
}

}  // namespace bwm
