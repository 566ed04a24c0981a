#include "doctest.h"

#include <cmath>

#include "afnls/error.hpp"
#include "afnls/functionals.hpp"
#include "afnls/rng.hpp"
#include "afnls/spectral.hpp"
#include "oracles.hpp"

using namespace afnls;

namespace {

ModelParams params(double s, double p, double alpha = 1, double omega = 0) {
  ModelParams m;
  m.s = s;
  m.p = p;
  m.alpha = alpha;
  m.omega = omega;
  return m;
}

Field gaussian(const GridSpec& g, double a = 1, double b = 1) {
  return sample(g, [=](double x, double y) { return cplx(std::exp(-a * x * x - b * y * y), 0); });
}

}  // namespace

TEST_CASE("exponents and regimes") {
  CHECK(critical_exponent(0.5) == doctest::Approx(10.0 / 3));
  CHECK(upper_exponent(0.75) == doctest::Approx(14));
  CHECK(classify_regime(params(0.5, 3)) == Regime::subcritical);
  CHECK(classify_regime(params(0.5, 10.0 / 3)) == Regime::critical);
  CHECK(classify_regime(params(0.75, 5)) == Regime::supercritical);
  CHECK_THROWS_AS(classify_regime(params(0.75, 15)), DomainError);
  CHECK_THROWS_AS(classify_regime(params(1.0, 3)), DomainError);
  CHECK_THROWS_AS(classify_regime(params(0.5, 2)), DomainError);
}

TEST_CASE("mass") {
  const auto g = build_grid(8, 8, M_PI, M_PI);
  CHECK(mass(Field(g)) == 0);
  const Field one = sample(g, [](double, double) { return cplx(1, 0); });
  CHECK(mass(one) == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-14));
  const auto h = build_grid(32, 40, 2.5, 3.5);
  const Field u = oracle::noise_field(h, 99);
  CHECK(std::abs(mass(u) - oracle::direct_mass(u)) / oracle::direct_mass(u) < 1e-12);
}

TEST_CASE("plane-wave energy and Pohozaev quantity") {
  const auto g = build_grid(8, 8, M_PI, M_PI);
  const Field pw = sample(g, [](double x, double y) { return std::polar(1.0, x + y); });
  const auto m = params(0.5, 4);
  const double area = 4 * M_PI * M_PI;
  CHECK(energy(pw, m) == doctest::Approx(area * 0.75).epsilon(1e-12));
  CHECK(energy(pw, m) == doctest::Approx(29.6088).epsilon(1e-5));
  CHECK(q_pohozaev(pw, m) == doctest::Approx(area * (1 - 3.0 / 8)).epsilon(1e-12));
  CHECK(q_pohozaev(pw, m) == doctest::Approx(24.674).epsilon(1e-4));
  CHECK(energy(Field(g), m) == 0);
  CHECK(q_pohozaev(Field(g), m) == 0);
}

TEST_CASE("momentum") {
  const auto g = build_grid(16, 16, M_PI, M_PI);
  CHECK(momentum(Field(g)) == 0);
  oracle::Lcg r(4);
  Field real(g);
  for (auto& z : real.values()) z = r.next() - 0.5;
  CHECK(std::abs(momentum(real)) < 1e-12 * mass(real));
  const Field pw = sample(g, [](double x, double y) { return std::polar(1.0, x + 2 * y); });
  const double ref = oracle::naive_weighted(pw, [](double xi, double eta) { return xi + eta; });
  CHECK(momentum(pw) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(momentum(pw) == doctest::Approx(3 * mass(pw)).epsilon(1e-12));
}

TEST_CASE("energy_omega") {
  const auto g = build_grid(32, 32, 5.0, 5.0);
  const Field u = random_field(g, 17, 0);
  CHECK(energy_omega(u, params(0.75, 3)) == doctest::Approx(energy(u, params(0.75, 3))));
  Field real(g);
  for (std::size_t k = 0; k < u.size(); ++k) real[k] = std::abs(u[k]);
  CHECK(energy_omega(real, params(0.75, 3, 1, 0.7)) ==
        doctest::Approx(energy(real, params(0.75, 3))).epsilon(1e-12));
  const auto h = build_grid(16, 16, M_PI, M_PI);
  const Field ey = sample(h, [](double, double y) { return std::polar(1.0, y); });
  const auto m = params(0.5, 3, 1, 0.5);
  CHECK(energy(ey, m) - energy_omega(ey, m) == doctest::Approx(0.25 * mass(ey)).epsilon(1e-12));
}

TEST_CASE("weinstein_quotient against direct sums") {
  const auto g = build_grid(64, 64, 6.0, 6.0);
  const Field u = gaussian(g, 1.0, 1.3);
  const auto m = params(0.75, 3, 1, 0);
  const double quad = oracle::naive_weighted(
      u, [&](double xi, double eta) { return 1 + xi * xi + std::pow(std::abs(eta), 1.5); });
  const double ref = std::pow(quad, 1.5) / oracle::direct_lpp(u, 3);
  CHECK(weinstein_quotient(u, m) == doctest::Approx(ref).epsilon(1e-10));
  CHECK_THROWS_AS(weinstein_quotient(Field(g), m), DomainError);
}

TEST_CASE("quadratic_form_omega") {
  const auto g = build_grid(32, 256, 8.0, 64.0);
  CHECK(quadratic_form_omega(g, params(0.5, 3, 1, 0.8)) == doctest::Approx(1.0));
  CHECK(quadratic_form_omega(g, params(0.5, 3, 1, -0.8)) == doctest::Approx(1.0));
  CHECK(quadratic_form_omega(g, params(0.75, 3, 2.5, 0)) == doctest::Approx(2.5));
  // Lattice minimization oracle.
  const auto m = params(0.75, 3, 1, 0.9);
  double best = 1e300;
  for (int k = -128; k < 128; ++k) {
    const double eta = k * M_PI / 64.0;
    if (k == -128) continue;
    best = std::min(best, 1 + std::pow(std::abs(eta), 1.5) - 0.9 * eta);
  }
  CHECK(quadratic_form_omega(g, m) == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("non-existence detector for |omega| > 1 at s = 1/2") {
  for (double omega : {1.2, -1.5, 2.0}) {
    const double threshold = 1 / (std::abs(omega) - 1);
    double prev = 1e300;
    // Doubling ny at fixed ly nests the lattices and doubles the eta-range.
    for (int ny = 8; ny <= 1024; ny *= 2) {
      const auto g = build_grid(8, ny, 1.0, 4.0);
      const double q = quadratic_form_omega(g, params(0.5, 3, 1, omega));
      const double eta_max = (ny / 2 - 1) * M_PI / 4.0;
      if (eta_max > threshold + g.deta()) CHECK(q < 0);
      if (eta_max < threshold) CHECK(q > 0);
      CHECK(q <= prev);
      prev = q;
    }
  }
}

TEST_CASE("Q-E relation holds for all fields") {
  const auto g = build_grid(48, 48, 6.0, 6.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Field u = random_field(g, seed, 1);
    for (const auto& m : {params(0.5, 3), params(0.75, 5), params(0.3, 2.7)}) {
      const Components c = components(u, m);
      const double rhs =
          2 * m.s * energy_of(c, m) - ((m.s + 1) * (m.p - 2) - 4 * m.s) / (2 * m.p) * c.lpp;
      CHECK(q_of(c, m) == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("omega_0 lower bound over random fields") {
  const auto g = build_grid(32, 128, 5.0, 20.0);
  for (double s : {0.6, 0.75, 0.9})
    for (double omega : {0.5, -1.0, 2.0}) {
      const double w0 = (2 * s - 1) * std::pow(std::abs(omega / (2 * s)), 2 * s / (2 * s - 1));
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Field u = random_field(g, seed, 2, 5);
        const Components c = components(u, params(s, 3));
        CHECK(c.hy - omega * c.eta_moment >= -w0 * c.mass * (1 + 1e-12));
      }
    }
}

TEST_CASE("homogeneity") {
  const auto g = build_grid(32, 32, 5.0, 5.0);
  const Field u = random_field(g, 3, 0);
  const cplx lam(1.3, -0.4);
  const Field v = lam * u;
  CHECK(mass(v) == doctest::Approx(std::norm(lam) * mass(u)).epsilon(1e-13));
  CHECK(lp_norm_p(v, 3.5) == doctest::Approx(std::pow(std::abs(lam), 3.5) * lp_norm_p(u, 3.5)).epsilon(1e-12));
}

TEST_CASE("Galilean phase preserves mass") {
  const auto g = build_grid(32, 32, 5.0, 5.0);
  const Field u = random_field(g, 8, 0);
  for (double nu : {0.5, 1.0, 3.0}) {
    Field v = u;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) v(i, j) *= std::polar(1.0, nu * g.x(i) / 2);
    CHECK(std::abs(mass(v) - mass(u)) <= 1e-15 * mass(u));
  }
}

TEST_CASE("diagnostics are consistent") {
  const auto g = build_grid(32, 32, 5.0, 5.0);
  const Field u = random_field(g, 5, 0);
  const auto m = params(0.75, 3.5);
  const Diagnostics d = diagnostics(u, m, 0.25);
  CHECK(d.t == 0.25);
  CHECK(d.mass >= 0);
  CHECK(d.hdot >= 0);
  CHECK(d.lp >= 0);
  CHECK(d.energy == doctest::Approx(d.hdot / 2 - std::pow(d.lp, m.p) / m.p).epsilon(1e-12));
}

TEST_CASE("scale_field") {
  // |eta|^{2s} has a kink at 0, so lattice sums converge like deta^{1+2s}; a
  // long y-box keeps that below the tolerance.
  const auto g = build_grid(128, 4096, 8.0, 256.0);
  const Field u = gaussian(g);
  const auto m = params(0.75, 3);
  CHECK(oracle::rel_l2(scale_field(u, 1.0, m.s), u) < 1e-14);
  const auto small = build_grid(64, 64, 8.0, 8.0);
  const Field us = gaussian(small);
  const Field u2 = scale_field(u, 2.0, m.s);
  CHECK(std::abs(mass(u2) - mass(u)) / mass(u) < 1e-6);
  // E(u_t) = t^{2s} hdot/2 - t^{(s+1)(p-2)/2} ||u||_p^p / p
  const Components c = components(u, m);
  const double t = 2;
  const double ref = std::pow(t, 2 * m.s) * c.hdot() / 2 -
                     std::pow(t, (m.s + 1) * (m.p - 2) / 2) * c.lpp / m.p;
  CHECK(std::abs(energy(u2, m) - ref) < 1e-6 * std::abs(ref));
  CHECK_THROWS_AS(scale_field(u, 0.0, m.s), DomainError);
  CHECK_THROWS_AS(scale_field(u, -1.0, m.s), DomainError);
  CHECK_THROWS_AS(scale_field(us, 0.1, m.s), ResolutionError);
  CHECK_THROWS_AS(scale_field(us, 40.0, m.s), ResolutionError);
}
