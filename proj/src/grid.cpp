#include "bwm/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "bwm/error.hpp"

namespace bwm {

namespace {

// FFTW plans for one (dim, M, ncomp) shape. Planning is not thread-safe, so
// plans are created once under a lock; execution with the new-array interface
// is safe from any thread.
class PlanPair {
 public:
  PlanPair(int dim, int M, int ncomp) {
    const int n[2] = {M, M};
    const std::size_t npts = dim == 1 ? M : std::size_t(M) * M;
    const std::size_t nmodes = dim == 1 ? M / 2 + 1 : std::size_t(M) * (M / 2 + 1);
    std::vector<double> real(npts * ncomp);
    std::vector<fftw_complex> cplx(nmodes * ncomp);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_ = fftw_plan_many_dft_r2c(dim, n, ncomp, real.data(), nullptr, ncomp, 1,
                                  cplx.data(), nullptr, ncomp, 1, flags);
    c2r_ = fftw_plan_many_dft_c2r(dim, n, ncomp, cplx.data(), nullptr, ncomp, 1,
                                  real.data(), nullptr, ncomp, 1, flags);
    if (r2c_ == nullptr || c2r_ == nullptr) throw Error("FFTW planning failed");
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }

  void r2c(double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(r2c_, in, reinterpret_cast<fftw_complex*>(out));
  }
  void c2r(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

const PlanPair& plans_for(const Grid& g, int ncomp) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{g.dim, g.points_per_axis, ncomp}];
  if (!slot) slot = std::make_unique<PlanPair>(g.dim, g.points_per_axis, ncomp);
  return *slot;
}

int signed_index(int j, int M) { return j <= M / 2 ? j : j - M; }

bool is_nyquist(int index, int M) { return std::abs(index) == M / 2; }

std::complex<double> multiplier(const ModeInfo& mi, int M, SpectralOp op,
                                int axis) {
  using namespace std::complex_literals;
  switch (op) {
    case SpectralOp::Identity:
      return 1.0;
    case SpectralOp::Derivative:
      if (is_nyquist(mi.index[axis], M)) return 0.0;
      return 1i * mi.wavevector[axis];
    case SpectralOp::Laplacian:
      return -mi.k2;
    case SpectralOp::Bilaplacian:
      return mi.k2 * mi.k2;
    case SpectralOp::GradLaplacian:
      if (is_nyquist(mi.index[axis], M)) return 0.0;
      return -1i * mi.wavevector[axis] * mi.k2;
  }
  return 0.0;
}

bool dealiased_out(const ModeInfo& mi, const Grid& g, double fraction) {
  if (fraction >= 1.0) return false;
  const double cut = fraction * g.points_per_axis / 2.0;
  for (int a = 0; a < g.dim; ++a) {
    if (std::abs(mi.index[a]) >= cut) return true;
  }
  return false;
}

void require_same_shape(const GridField& a, const GridField& b) {
  if (!(a.grid() == b.grid()) || a.ncomp() != b.ncomp()) {
    throw GridMismatch("fields differ in grid or component count");
  }
}

}  // namespace

Grid Grid::make(int dim, int points_per_axis, double length) {
  if (dim != 1 && dim != 2) throw Error("grid dimension must be 1 or 2");
  if (points_per_axis < 8 || points_per_axis % 2 != 0) {
    throw Error("points per axis must be even and at least 8");
  }
  if (!(length > 0.0)) throw Error("box length must be positive");
  return Grid{dim, points_per_axis, length};
}

std::size_t Grid::num_points() const {
  return dim == 1 ? std::size_t(points_per_axis)
                  : std::size_t(points_per_axis) * points_per_axis;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim); }

double Grid::volume() const { return std::pow(length, dim); }

std::array<double, 2> Grid::coordinate(std::size_t index) const {
  const double h = spacing();
  if (dim == 1) return {h * double(index), 0.0};
  return {h * double(index / points_per_axis),
          h * double(index % points_per_axis)};
}

double Grid::max_wavenumber() const {
  return std::numbers::pi * points_per_axis / length;
}

GridField::GridField(const Grid& grid, int ncomp)
    : grid_(grid), ncomp_(ncomp), values_(grid.num_points() * ncomp, 0.0) {}

GridField::GridField(const Grid& grid, int ncomp, std::vector<double> values)
    : grid_(grid), ncomp_(ncomp), values_(std::move(values)) {
  if (values_.size() != grid_.num_points() * std::size_t(ncomp_)) {
    throw GridMismatch("value count does not match grid shape");
  }
}

GridField GridField::sample(const Grid& grid, int ncomp,
                            const std::function<Vec(double, double)>& f) {
  GridField out(grid, ncomp);
  for (std::size_t p = 0; p < out.num_points(); ++p) {
    const auto x = grid.coordinate(p);
    out.set_point(p, f(x[0], x[1]));
  }
  return out;
}

Vec GridField::point(std::size_t p) const {
  Vec v(ncomp_);
  for (int c = 0; c < ncomp_; ++c) v(c) = at(p, c);
  return v;
}

void GridField::set_point(std::size_t p, const Vec& v) {
  for (int c = 0; c < ncomp_; ++c) at(p, c) = v(c);
}

bool GridField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void GridField::require_finite(const char* where) const {
  if (!all_finite()) throw NonFinite(std::string("non-finite values in ") + where);
}

GridField& GridField::operator+=(const GridField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

double max_abs_diff(const GridField& a, const GridField& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    m = std::max(m, std::abs(a.values_[i] - b.values_[i]));
  }
  return m;
}

double GridField::max_pointwise_norm() const {
  double m = 0.0;
  for (std::size_t p = 0; p < num_points(); ++p) {
    double s = 0.0;
    for (int c = 0; c < ncomp_; ++c) s += at(p, c) * at(p, c);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

std::size_t Spectrum::num_modes() const {
  const std::size_t half = grid.points_per_axis / 2 + 1;
  return grid.dim == 1 ? half : std::size_t(grid.points_per_axis) * half;
}

ModeInfo mode_info(const Grid& g, std::size_t mode) {
  const int M = g.points_per_axis;
  const int half = M / 2 + 1;
  const double k0 = 2.0 * std::numbers::pi / g.length;
  ModeInfo mi;
  int last;
  if (g.dim == 1) {
    last = int(mode);
    mi.index = {last, 0};
  } else {
    last = int(mode % half);
    mi.index = {signed_index(int(mode / half), M), last};
  }
  mi.wavevector = {k0 * mi.index[0], k0 * mi.index[1]};
  mi.k2 = mi.wavevector[0] * mi.wavevector[0] + mi.wavevector[1] * mi.wavevector[1];
  mi.multiplicity = (last == 0 || last == M / 2) ? 1 : 2;
  return mi;
}

Spectrum forward(const GridField& f) {
  Spectrum s{f.grid(), f.ncomp(), {}};
  s.coeffs.resize(s.num_modes() * f.ncomp());
  std::vector<double> in = f.values();
  plans_for(f.grid(), f.ncomp()).r2c(in.data(), s.coeffs.data());
  const double scale = std::sqrt(f.grid().volume()) / double(f.num_points());
  for (auto& c : s.coeffs) c *= scale;
  return s;
}

GridField inverse(const Spectrum& s) {
  std::vector<std::complex<double>> work = s.coeffs;
  GridField out(s.grid, s.ncomp);
  plans_for(s.grid, s.ncomp).c2r(work.data(), out.values().data());
  out *= 1.0 / std::sqrt(s.grid.volume());
  return out;
}

GridField apply(const Spectrum& s, SpectralOp op, int axis,
                double dealias_fraction) {
  Spectrum t = s;
  const int M = s.grid.points_per_axis;
  for (std::size_t m = 0; m < t.num_modes(); ++m) {
    const ModeInfo mi = mode_info(s.grid, m);
    const std::complex<double> mult =
        dealiased_out(mi, s.grid, dealias_fraction) ? 0.0
                                                    : multiplier(mi, M, op, axis);
    for (int c = 0; c < s.ncomp; ++c) t.coeffs[m * s.ncomp + c] *= mult;
  }
  return inverse(t);
}

GridField gradient(const Spectrum& s, double dealias_fraction) {
  const int n = s.grid.dim;
  const int L = s.ncomp;
  GridField out(s.grid, n * L);
  for (int a = 0; a < n; ++a) {
    const GridField d = apply(s, SpectralOp::Derivative, a, dealias_fraction);
    for (std::size_t p = 0; p < out.num_points(); ++p) {
      for (int c = 0; c < L; ++c) out.at(p, a * L + c) = d.at(p, c);
    }
  }
  return out;
}

GridField gradient(const GridField& f) {
  f.require_finite("gradient");
  return gradient(forward(f));
}

GridField laplacian(const GridField& f) {
  f.require_finite("laplacian");
  return apply(forward(f), SpectralOp::Laplacian);
}

GridField bilaplacian(const GridField& f) {
  f.require_finite("bilaplacian");
  return apply(forward(f), SpectralOp::Bilaplacian);
}

GridField divergence(const GridField& stacked, double dealias_fraction) {
  stacked.require_finite("divergence");
  const Grid& g = stacked.grid();
  if (stacked.ncomp() % g.dim != 0) {
    throw GridMismatch("stacked field component count not divisible by dim");
  }
  const int L = stacked.ncomp() / g.dim;
  const Spectrum s = forward(stacked);
  Spectrum acc{g, L, std::vector<std::complex<double>>(s.num_modes() * L)};
  const int M = g.points_per_axis;
  for (std::size_t m = 0; m < s.num_modes(); ++m) {
    const ModeInfo mi = mode_info(g, m);
    if (dealiased_out(mi, g, dealias_fraction)) continue;
    for (int a = 0; a < g.dim; ++a) {
      const auto mult = multiplier(mi, M, SpectralOp::Derivative, a);
      for (int c = 0; c < L; ++c) {
        acc.coeffs[m * L + c] += mult * s.coeffs[m * stacked.ncomp() + a * L + c];
      }
    }
  }
  return inverse(acc);
}

GridField dealias(const GridField& f, double fraction) {
  if (fraction >= 1.0) return f;
  return apply(forward(f), SpectralOp::Identity, 0, fraction);
}

double sobolev_norm(const Spectrum& s, int order) {
  double sum = 0.0;
  for (std::size_t m = 0; m < s.num_modes(); ++m) {
    const ModeInfo mi = mode_info(s.grid, m);
    const double w = mi.multiplicity * std::pow(1.0 + mi.k2, order);
    for (int c = 0; c < s.ncomp; ++c) sum += w * std::norm(s.coeffs[m * s.ncomp + c]);
  }
  return std::sqrt(sum);
}

double sobolev_norm(const GridField& f, int s) {
  f.require_finite("sobolev_norm");
  if (s < 0) throw Error("Sobolev order must be nonnegative");
  return sobolev_norm(forward(f), s);
}

double lebesgue_norm(const GridField& f, LebesgueExponent p) {
  f.require_finite("lebesgue_norm");
  if (p == LebesgueExponent::Infinity) return f.max_pointwise_norm();
  double sum = 0.0;
  for (std::size_t q = 0; q < f.num_points(); ++q) {
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) s += f.at(q, c) * f.at(q, c);
    sum += p == LebesgueExponent::Two ? s : s * s;
  }
  sum *= f.grid().cell_volume();
  return p == LebesgueExponent::Two ? std::sqrt(sum) : std::sqrt(std::sqrt(sum));
}

double inner_product(const GridField& a, const GridField& b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    sum += a.values()[i] * b.values()[i];
  }
  return sum * a.grid().cell_volume();
}

}  // namespace bwm
