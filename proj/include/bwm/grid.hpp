#pragma once

// Periodic grids in one or two dimensions, R^L-valued sampled fields and the
// Fourier-multiplier operators acting on them.
//
// Fourier convention: f_hat(k) = sqrt(|box|) / M^n * sum_j f_j exp(-i k.x_j),
// so that sum_k |f_hat(k)|^2 equals the quadrature L2 norm squared.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "bwm/geometry.hpp"

namespace bwm {

struct Grid {
  int dim = 1;
  int points_per_axis = 32;
  double length = 2.0 * std::numbers::pi;

  // Validates M even, M >= 8, dim in {1, 2}, length > 0.
  static Grid make(int dim, int points_per_axis,
                   double length = 2.0 * std::numbers::pi);

  std::size_t num_points() const;
  double spacing() const { return length / points_per_axis; }
  double cell_volume() const;
  double volume() const;
  // Physical coordinate of grid point `index` along each axis.
  std::array<double, 2> coordinate(std::size_t index) const;
  // Largest resolved angular wavenumber, pi * M / length.
  double max_wavenumber() const;

  bool operator==(const Grid&) const = default;
};

// Samples of an R^ncomp-valued function, point-major: values[p * ncomp + c].
class GridField {
 public:
  GridField() = default;
  GridField(const Grid& grid, int ncomp);
  GridField(const Grid& grid, int ncomp, std::vector<double> values);

  static GridField sample(const Grid& grid, int ncomp,
                          const std::function<Vec(double x, double y)>& f);

  const Grid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  std::size_t num_points() const { return grid_.num_points(); }

  double& at(std::size_t point, int comp) { return values_[point * ncomp_ + comp]; }
  double at(std::size_t point, int comp) const {
    return values_[point * ncomp_ + comp];
  }
  Vec point(std::size_t p) const;
  void set_point(std::size_t p, const Vec& v);

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;
  // Throws NonFinite naming `where` if any entry is NaN or infinite.
  void require_finite(const char* where) const;

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double s);
  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(double s, GridField a) { return a *= s; }

  // Componentwise max |a - b| over all entries.
  friend double max_abs_diff(const GridField& a, const GridField& b);
  // Max over points of the Euclidean norm across components.
  double max_pointwise_norm() const;

 private:
  Grid grid_;
  int ncomp_ = 0;
  std::vector<double> values_;
};

// Half-spectrum (real-to-complex layout) of a GridField.
struct Spectrum {
  Grid grid;
  int ncomp = 0;
  std::vector<std::complex<double>> coeffs;  // coeffs[mode * ncomp + comp]

  std::size_t num_modes() const;
};

struct ModeInfo {
  std::array<int, 2> index{};        // signed mode indices per axis
  std::array<double, 2> wavevector{};
  double k2 = 0.0;                   // |k|^2
  int multiplicity = 1;              // 2 when the conjugate mode is implicit
};

ModeInfo mode_info(const Grid& grid, std::size_t mode);

Spectrum forward(const GridField& f);
GridField inverse(const Spectrum& s);

enum class SpectralOp {
  Identity,
  Derivative,     // d/dx_axis
  Laplacian,
  Bilaplacian,
  GradLaplacian,  // d/dx_axis of the Laplacian
};

// Applies a Fourier multiplier and transforms back. Modes with
// |index_i| >= dealias_fraction * M / 2 are removed when dealias_fraction < 1.
GridField apply(const Spectrum& s, SpectralOp op, int axis = 0,
                double dealias_fraction = 1.0);

// Per-axis stack: result has dim * L components ordered [axis][component].
GridField gradient(const GridField& f);
GridField gradient(const Spectrum& s, double dealias_fraction = 1.0);
GridField laplacian(const GridField& f);
GridField bilaplacian(const GridField& f);
// Divergence of a [axis][component] stacked field with dim * L components.
GridField divergence(const GridField& stacked, double dealias_fraction = 1.0);

GridField dealias(const GridField& f, double fraction);

// (sum_k (1 + |k|^2)^s |f_hat(k)|^2)^(1/2).
double sobolev_norm(const GridField& f, int s);
double sobolev_norm(const Spectrum& s, int order);

enum class LebesgueExponent { Two, Four, Infinity };
double lebesgue_norm(const GridField& f, LebesgueExponent p);

// L2 inner product of two fields with matching shapes.
double inner_product(const GridField& a, const GridField& b);

}  // namespace bwm
