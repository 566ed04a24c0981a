#include "doctest.h"

#include <cmath>

#include "afnls/error.hpp"
#include "afnls/functionals.hpp"
#include "afnls/kernels.hpp"
#include "afnls/spectral.hpp"
#include "oracles.hpp"

using namespace afnls;

TEST_CASE("build_grid lattice") {
  const auto g = build_grid(8, 8, M_PI, M_PI);
  CHECK(g.dx() == doctest::Approx(0.785398).epsilon(1e-6));
  CHECK(g.dxi() == doctest::Approx(1.0));
  std::vector<double> xs(g.xi());
  std::sort(xs.begin(), xs.end());
  CHECK(xs == std::vector<double>{-4, -3, -2, -1, 0, 1, 2, 3});
  CHECK(g.dx() * g.nx() == 2 * g.lx());

  const auto h = build_grid(16, 8, 2 * M_PI, M_PI);
  CHECK(h.dxi() == doctest::Approx(0.5));
  CHECK(h.deta() == doctest::Approx(1.0));
}

TEST_CASE("build_grid rejects bad arguments") {
  CHECK_THROWS_WITH_AS(build_grid(7, 8, M_PI, M_PI), doctest::Contains("sample count must be even"),
                       DomainError);
  CHECK_THROWS_AS(build_grid(4, 8, M_PI, M_PI), DomainError);
  CHECK_THROWS_AS(build_grid(8, 8, 0, M_PI), DomainError);
  CHECK_THROWS_AS(build_grid(8, 8, M_PI, -1), DomainError);
}

TEST_CASE("transform matches the naive Riemann sum") {
  const auto g = build_grid(8, 12, 2.0, 3.0);
  const Field u = oracle::noise_field(g, 7);
  const Field uh = to_spectrum(u);
  const auto ref = oracle::naive_spectrum(u);
  double err = 0, scale = 0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    err = std::max(err, std::abs(uh[k] - ref[k]));
    scale = std::max(scale, std::abs(ref[k]));
  }
  CHECK(err / scale < 1e-12);
}

TEST_CASE("round trip and Parseval") {
  const auto g = build_grid(32, 48, 3.0, 5.0);
  const Field u = oracle::noise_field(g, 11);
  const Field uh = to_spectrum(u);
  CHECK(uh.space() == Space::spectral);
  CHECK(oracle::rel_l2(from_spectrum(uh), u) < 1e-12);
  const double phys = oracle::direct_mass(u);
  CHECK(std::abs(spectral_norm2(uh) - phys) / phys < 1e-12);
  CHECK_THROWS_AS(to_spectrum(uh), DomainError);
  CHECK_THROWS_AS(from_spectrum(u), DomainError);
}

TEST_CASE("DC and plane-wave spectra") {
  const auto g = build_grid(8, 8, M_PI, M_PI);
  const Field one = sample(g, [](double, double) { return cplx(1, 0); });
  const Field oh = to_spectrum(one);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i || j) CHECK(std::abs(oh(i, j)) < 1e-12);
  CHECK(std::abs(oh(0, 0)) > 1);

  const Field pw = sample(g, [](double x, double y) { return std::polar(1.0, x + y); });
  const Field ph = to_spectrum(pw);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const bool at11 = g.xi()[i] == 1 && g.eta()[j] == 1;
      if (at11) CHECK(std::abs(ph(i, j)) > 1);
      else CHECK(std::abs(ph(i, j)) < 1e-12);
    }
}

TEST_CASE("apply_symbol on plane waves") {
  const auto g = build_grid(16, 16, M_PI, M_PI);
  const Field ey = sample(g, [](double, double y) { return std::polar(1.0, y); });
  CHECK(oracle::max_abs_diff(apply_symbol(ey, Symbol::dys(0.5)), ey) < 1e-12);

  const Field ex = sample(g, [](double x, double) { return std::polar(1.0, x); });
  const Field iex = sample(g, [](double x, double) { return cplx(0, 1) * std::polar(1.0, x); });
  CHECK(oracle::max_abs_diff(apply_symbol(ex, Symbol::dx()), iex) < 1e-12);

  const Field c = sample(g, [](double, double y) { return cplx(std::cos(y), 0); });
  const Field sn = sample(g, [](double, double y) { return cplx(std::sin(y), 0); });
  CHECK(oracle::max_abs_diff(apply_symbol(c, Symbol::hilbert_y()), sn) < 1e-12);

  CHECK_THROWS_AS(apply_symbol(ey, Symbol::dys(1.0)), DomainError);
  CHECK_THROWS_AS(apply_symbol(ey, Symbol::dys(0.0)), DomainError);
}

TEST_CASE("hilbert_y against a direct discrete-spectrum oracle") {
  const auto g = build_grid(8, 16, 2.0, 4.0);
  const Field u = oracle::noise_field(g, 3);
  const Field hu = apply_symbol(u, Symbol::hilbert_y());
  // <u, i H u> = (2 pi)^-2 \int sgn(eta) |uh|^2
  const cplx pair = inner(u, cplx(0, 1) * hu);
  const double ref = oracle::naive_weighted(u, [&](double, double eta) {
    const double nyq = M_PI / g.ly() * (g.ny() / 2);
    if (std::abs(eta) == nyq) return 0.0;
    return eta > 0 ? 1.0 : eta < 0 ? -1.0 : 0.0;
  });
  CHECK(pair.real() == doctest::Approx(ref).epsilon(1e-10));
  CHECK(std::abs(pair.imag()) < 1e-10);
}

TEST_CASE("symbol invariants") {
  const auto g = build_grid(16, 32, 3.0, 6.0);
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const cplx d = Symbol::dys(0.7).at(g, i, j);
      CHECK(d.imag() == 0);
      CHECK(d.real() >= 0);
      CHECK(std::abs(Symbol::hilbert_y().at(g, i, j)) <= 1);
      CHECK(std::abs(std::abs(Symbol::linear_phase(0.37, 0.6).at(g, i, j)) - 1) < 1e-15);
    }
  CHECK(Symbol::dys(0.3).multiplier(2.0, 0.0) == cplx(0, 0));
  // Odd multipliers vanish on the Nyquist slot.
  CHECK(Symbol::dx().at(g, g.nx() / 2, 1) == cplx(0, 0));
  CHECK(Symbol::hilbert_y().at(g, 1, g.ny() / 2) == cplx(0, 0));
}

TEST_CASE("dealias keeps |index| <= n/3") {
  const auto g = build_grid(12, 12, 1.0, 1.0);
  Field flat(g, Space::spectral);
  for (auto& z : flat.values()) z = 1;
  const Field d = dealias(flat);
  int survivors_x = 0;
  for (int i = 0; i < 12; ++i) survivors_x += d(i, 0) != cplx(0, 0);
  CHECK(survivors_x == 9);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      const bool keep = std::abs(GridSpec::signed_index(i, 12)) <= 4 &&
                        std::abs(GridSpec::signed_index(j, 12)) <= 4;
      CHECK((d(i, j) != cplx(0, 0)) == keep);
    }
  const Field dd = dealias(d);
  CHECK(oracle::max_abs_diff(dd, d) == 0);
}

TEST_CASE("unitarity of the linear propagator") {
  const auto g = build_grid(32, 32, 4.0, 4.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Field u = oracle::noise_field(g, seed);
    const Field v = apply_symbol(u, Symbol::linear_phase(0.1 * seed, 0.25 * seed / 1.5));
    CHECK(std::abs(mass(v) - mass(u)) / mass(u) < 1e-12);
  }
}

TEST_CASE("real even-in-y fields stay real under dys") {
  const auto g = build_grid(32, 32, 4.0, 4.0);
  const Field u = sample(g, [](double x, double y) {
    return cplx(std::exp(-x * x - 0.5 * y * y) * (1 + 0.3 * std::sin(x)), 0);
  });
  const Field v = apply_symbol(u, Symbol::dys(0.75));
  double im = 0;
  for (const auto& z : v.values()) im = std::max(im, std::abs(z.imag()));
  CHECK(im < 1e-12);
}

TEST_CASE("Hermitian spectra of real fields") {
  const auto g = build_grid(16, 24, 3.0, 4.0);
  oracle::Lcg r(5);
  Field u(g);
  for (auto& z : u.values()) z = r.next() - 0.5;
  auto check_hermitian = [&](const Field& uh) {
    double worst = 0;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) {
        const int mi = (g.nx() - i) % g.nx(), mj = (g.ny() - j) % g.ny();
        worst = std::max(worst, std::abs(uh(i, j) - std::conj(uh(mi, mj))));
      }
    return worst;
  };
  CHECK(check_hermitian(to_spectrum(u)) < 1e-13);
  const Field v = apply_symbol(u, Symbol::dxx());
  CHECK(check_hermitian(to_spectrum(v)) < 1e-12);
}

TEST_CASE("refinement stability of symbol application") {
  auto gauss = [](double x, double y) { return cplx(std::exp(-x * x - y * y), 0); };
  const auto g1 = build_grid(64, 64, 8.0, 8.0), g2 = build_grid(128, 128, 8.0, 8.0);
  for (const Symbol& sym : {Symbol::dxx(), Symbol::dx()}) {
    const Field a = apply_symbol(sample(g1, gauss), sym);
    const Field b = apply_symbol(sample(g2, gauss), sym);
    Field b1(g1);
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) b1(i, j) = b(2 * i, 2 * j);
    CHECK(oracle::rel_l2(a, b1) < 1e-8);
  }
}

TEST_CASE("serial and parallel kernels agree") {
  namespace ks = afnls::kernels::serial;
  namespace kp = afnls::kernels::parallel;
  const auto g = build_grid(64, 96, 3.0, 3.0);
  const Field u = oracle::noise_field(g, 21), v = oracle::noise_field(g, 22);
  CHECK(kp::sum_abs2(u.values()) == doctest::Approx(ks::sum_abs2(u.values())).epsilon(1e-13));
  CHECK(kp::sum_abs_pow(u.values(), 3.3) ==
        doctest::Approx(ks::sum_abs_pow(u.values(), 3.3)).epsilon(1e-13));
  CHECK(std::abs(kp::inner(u.values(), v.values()) - ks::inner(u.values(), v.values())) < 1e-10);
  Field a = u, b = u;
  ks::nonlinear_phase(a.values(), 0.3, 4);
  kp::nonlinear_phase(b.values(), 0.3, 4);
  CHECK(oracle::max_abs_diff(a, b) == 0);
  Field c(g), d(g);
  ks::power_nonlinearity(u.values(), c.values(), 3.5);
  kp::power_nonlinearity(u.values(), d.values(), 3.5);
  CHECK(oracle::max_abs_diff(c, d) == 0);
}
