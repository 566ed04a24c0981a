#include "afnls/grid.hpp"

#include <cmath>

#include "afnls/error.hpp"
#include "afnls/kernels.hpp"

namespace afnls {

GridSpec build_grid(int nx, int ny, double lx, double ly) {
  if (nx % 2 != 0 || ny % 2 != 0) throw DomainError("sample count must be even");
  if (nx < 8 || ny < 8) throw DomainError("sample count must be at least 8");
  if (!(lx > 0) || !(ly > 0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw DomainError("box half-widths must be positive");
  GridSpec g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.lx_ = lx;
  g.ly_ = ly;
  g.dx_ = 2 * lx / nx;
  g.dy_ = 2 * ly / ny;
  g.dxi_ = M_PI / lx;
  g.deta_ = M_PI / ly;
  auto fill = [](int n, double d, std::vector<double>& v, std::vector<double>& odd) {
    v.resize(n);
    odd.resize(n);
    for (int k = 0; k < n; ++k) {
      v[k] = GridSpec::signed_index(k, n) * d;
      odd[k] = k == n / 2 ? 0.0 : v[k];
    }
  };
  fill(nx, g.dxi_, g.xi_, g.xi_odd_);
  fill(ny, g.deta_, g.eta_, g.eta_odd_);
  return g;
}

Field::Field(const GridSpec& grid, Space space)
    : grid_(std::make_shared<const GridSpec>(grid)), values_(grid.size()), space_(space) {}

Field::Field(const GridSpec& grid, std::vector<cplx> values, Space space)
    : Field(std::make_shared<const GridSpec>(grid), std::move(values), space) {}

Field::Field(std::shared_ptr<const GridSpec> grid, std::vector<cplx> values, Space space)
    : grid_(std::move(grid)), values_(std::move(values)), space_(space) {
  if (values_.size() != grid_->size()) throw DomainError("field length must equal nx*ny");
}

Field& Field::operator*=(cplx a) {
  for (auto& z : values_) z *= a;
  return *this;
}

Field& Field::operator+=(const Field& o) {
  kernels::parallel::axpy(1.0, o.values(), values());
  return *this;
}

Field& Field::operator-=(const Field& o) {
  kernels::parallel::axpy(-1.0, o.values(), values());
  return *this;
}

bool Field::all_finite() const {
  for (const auto& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Field operator*(cplx a, Field u) {
  u *= a;
  return u;
}
Field operator+(Field a, const Field& b) {
  a += b;
  return a;
}
Field operator-(Field a, const Field& b) {
  a -= b;
  return a;
}

void require_finite(const Field& u, const char* what) {
  if (!u.all_finite()) throw NonFiniteError(std::string(what) + ": non-finite samples");
}
void require_physical(const Field& u, const char* what) {
  if (u.space() != Space::physical)
    throw DomainError(std::string(what) + ": expected a physical-space field");
}
void require_spectral(const Field& u, const char* what) {
  if (u.space() != Space::spectral)
    throw DomainError(std::string(what) + ": expected a spectral-space field");
}

}  // namespace afnls
