#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace afnls {

using cplx = std::complex<double>;

// Periodic box [-lx, lx) x [-ly, ly) sampled on nx x ny points.
// Frequency lattices are stored in FFT order: index k holds frequency
// k*dxi for k < n/2 and (k-n)*dxi otherwise.
class GridSpec {
 public:
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double dxi() const { return dxi_; }
  double deta() const { return deta_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  double cell() const { return dx_ * dy_; }
  double area() const { return 4.0 * lx_ * ly_; }

  double x(int i) const { return -lx_ + i * dx_; }
  double y(int j) const { return -ly_ + j * dy_; }

  // Signed lattice values, Nyquist entry at -n/2.
  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& eta() const { return eta_; }
  // Same lattices with the Nyquist entry set to 0; used for odd multipliers.
  const std::vector<double>& xi_odd() const { return xi_odd_; }
  const std::vector<double>& eta_odd() const { return eta_odd_; }

  // Signed integer index of storage slot k on an axis of n samples.
  static int signed_index(int k, int n) { return k < n / 2 ? k : k - n; }

  bool same_as(const GridSpec& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && lx_ == o.lx_ && ly_ == o.ly_;
  }

 private:
  friend GridSpec build_grid(int nx, int ny, double lx, double ly);
  GridSpec() = default;

  int nx_ = 0, ny_ = 0;
  double lx_ = 0, ly_ = 0, dx_ = 0, dy_ = 0, dxi_ = 0, deta_ = 0;
  std::vector<double> xi_, eta_, xi_odd_, eta_odd_;
};

GridSpec build_grid(int nx, int ny, double lx, double ly);

enum class Space { physical, spectral };

// Complex samples on a grid, row-major over (x, y): value(i, j) sits at
// flat index i*ny + j.
class Field {
 public:
  explicit Field(const GridSpec& grid, Space space = Space::physical);
  Field(const GridSpec& grid, std::vector<cplx> values,
        Space space = Space::physical);
  Field(std::shared_ptr<const GridSpec> grid, std::vector<cplx> values,
        Space space);

  const GridSpec& grid() const { return *grid_; }
  const std::shared_ptr<const GridSpec>& grid_ptr() const { return grid_; }
  Space space() const { return space_; }
  void set_space(Space s) { space_ = s; }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  std::vector<cplx>& data() { return values_; }
  const std::vector<cplx>& data() const { return values_; }

  cplx& operator()(int i, int j) { return values_[idx(i, j)]; }
  const cplx& operator()(int i, int j) const { return values_[idx(i, j)]; }
  cplx& operator[](std::size_t k) { return values_[k]; }
  const cplx& operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  // Empty field of the same grid and space.
  Field zeros_like() const { return Field(grid_, std::vector<cplx>(size()), space_); }

  Field& operator*=(cplx a);
  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);

  bool all_finite() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * grid_->ny() + j;
  }
  std::shared_ptr<const GridSpec> grid_;
  std::vector<cplx> values_;
  Space space_;
};

Field operator*(cplx a, Field u);
Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);

// Sample a function f(x, y) on the grid.
template <class F>
Field sample(const GridSpec& g, F&& f) {
  Field u(g);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) u(i, j) = f(g.x(i), g.y(j));
  return u;
}

// Throw NonFiniteError naming `what` if u carries NaN/Inf.
void require_finite(const Field& u, const char* what);
void require_physical(const Field& u, const char* what);
void require_spectral(const Field& u, const char* what);

}  // namespace afnls
