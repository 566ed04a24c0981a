#include "afnls/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "afnls/error.hpp"

namespace afnls {

namespace {

// Plans are created once per (nx, ny, direction) and executed through the
// new-array interface, which FFTW documents as thread-safe.
fftw_plan plan_for(int nx, int ny, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(nx, ny, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(static_cast<std::size_t>(nx) * ny), b(a.size());
  fftw_plan p = fftw_plan_dft_2d(nx, ny, reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

void execute(const std::vector<cplx>& in, std::vector<cplx>& out, int nx, int ny, int sign) {
  fftw_execute_dft(plan_for(nx, ny, sign),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

// Scale by c and by (-1)^(i+j), which moves the origin of the transform from
// the box corner to (0, 0).
void scale_checkerboard(std::vector<cplx>& v, int nx, int ny, double c) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      v[static_cast<std::size_t>(i) * ny + j] *= ((i + j) & 1) ? -c : c;
}

}  // namespace

Symbol Symbol::dys(double s) {
  Symbol r{Kind::dys};
  r.s = s;
  return r;
}

Symbol Symbol::linear_phase(double dt, double s) {
  Symbol r{Kind::linear_phase};
  r.dt = dt;
  r.s = s;
  return r;
}

Symbol Symbol::half_wave_form(double alpha, double omega, double s) {
  Symbol r{Kind::half_wave_form};
  r.alpha = alpha;
  r.omega = omega;
  r.s = s;
  return r;
}

cplx Symbol::multiplier(double xi, double eta) const {
  using namespace std::complex_literals;
  switch (kind) {
    case Kind::dx: return 1i * xi;
    case Kind::dxx: return -xi * xi;
    case Kind::dys: return abs_pow(eta, s);
    case Kind::dy: return 1i * eta;
    case Kind::hilbert_y: return eta > 0 ? -1i : (eta < 0 ? 1i : 0.0);
    case Kind::linear_phase: return std::polar(1.0, -dt * (xi * xi + abs_pow(eta, s)));
    case Kind::half_wave_form: return alpha + xi * xi + abs_pow(eta, s) - omega * eta;
  }
  return 0.0;
}

cplx Symbol::at(const GridSpec& g, int i, int j) const {
  const double xi = g.xi()[i], eta = g.eta()[j];
  switch (kind) {
    case Kind::dx: return multiplier(g.xi_odd()[i], eta);
    case Kind::dy:
    case Kind::hilbert_y: return multiplier(xi, g.eta_odd()[j]);
    case Kind::half_wave_form:
      return alpha + xi * xi + abs_pow(eta, s) - omega * g.eta_odd()[j];
    default: return multiplier(xi, eta);
  }
}

Field to_spectrum(const Field& u) {
  require_physical(u, "to_spectrum");
  const GridSpec& g = u.grid();
  std::vector<cplx> out(g.size());
  execute(u.data(), out, g.nx(), g.ny(), FFTW_FORWARD);
  scale_checkerboard(out, g.nx(), g.ny(), g.cell());
  return Field(u.grid_ptr(), std::move(out), Space::spectral);
}

Field from_spectrum(const Field& uh) {
  require_spectral(uh, "from_spectrum");
  const GridSpec& g = uh.grid();
  std::vector<cplx> in = uh.data(), out(g.size());
  scale_checkerboard(in, g.nx(), g.ny(), 1.0 / g.area());
  execute(in, out, g.nx(), g.ny(), FFTW_BACKWARD);
  return Field(uh.grid_ptr(), std::move(out), Space::physical);
}

Field apply_symbol(const Field& u, const Symbol& sym) {
  if ((sym.kind == Symbol::Kind::dys || sym.kind == Symbol::Kind::linear_phase ||
       sym.kind == Symbol::Kind::half_wave_form) &&
      !(sym.s > 0 && sym.s < 1))
    throw DomainError("apply_symbol: s must lie in (0, 1)");
  require_finite(u, "apply_symbol");
  const bool phys = u.space() == Space::physical;
  Field uh = phys ? to_spectrum(u) : u;
  const GridSpec& g = uh.grid();
  apply_multiplier(uh, [&](int i, int j) { return sym.at(g, i, j); });
  return phys ? from_spectrum(uh) : uh;
}

Field dealias(const Field& uh) {
  require_spectral(uh, "dealias");
  Field r = uh;
  const GridSpec& g = r.grid();
  const int kx = g.nx() / 3, ky = g.ny() / 3;
  apply_multiplier(r, [&](int i, int j) {
    const bool keep = std::abs(GridSpec::signed_index(i, g.nx())) <= kx &&
                      std::abs(GridSpec::signed_index(j, g.ny())) <= ky;
    return keep ? 1.0 : 0.0;
  });
  return r;
}

double spectral_norm2(const Field& uh) {
  return kernels::parallel::sum_abs2(uh.values()) / uh.grid().area();
}

}  // namespace afnls
