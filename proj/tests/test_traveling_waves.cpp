#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "afnls/error.hpp"
#include "afnls/rng.hpp"
#include "afnls/spectral.hpp"
#include "afnls/traveling_waves.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace afnls;
using fixture::params;

TEST_CASE("omega_floor") {
  CHECK(omega_floor(0.75, 0) == 0);
  CHECK(omega_floor(0.75, 1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(omega_floor(0.75, -1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(omega_floor(0.5, 0.3), DomainError);
  CHECK_THROWS_AS(omega_floor(1.0, 0.3), DomainError);
}

TEST_CASE("coercivity detector") {
  const auto g = build_grid(32, 512, 8, 64);
  const auto bad = check_coercivity(params(0.5, 3, 1, 1.2), g);
  CHECK(!bad.coercive);
  CHECK(bad.minimum < 0);
  const auto good = check_coercivity(params(0.5, 3, 1, 0.8), g);
  CHECK(good.coercive);
  CHECK(good.minimum == doctest::Approx(1.0));
}

TEST_CASE("Weinstein quotient is positive on coercive forms") {
  const auto g = build_grid(32, 128, 6, 16);
  for (const auto& m : {params(0.5, 3, 1, 0.7), params(0.75, 4, 1, 1.0), params(0.6, 3, 0.5, -0.4)}) {
    REQUIRE(check_coercivity(m, g).coercive);
    for (std::uint64_t k = 0; k < 20; ++k) CHECK(weinstein_quotient(random_field(g, 31, k), m) > 0);
  }
}

TEST_CASE("zero speed recovers the ground state") {
  const auto& gs = fixture::half_cubic();
  const auto w = solve_boosted(params(0.5, 3), gs.field.grid());
  const double peak = std::abs(gs.field(gs.field.grid().nx() / 2, gs.field.grid().ny() / 2));
  CHECK(oracle::max_abs_diff(w.field, gs.field) < 1e-4 * peak);
  CHECK(!w.poho_ratio.has_value());
}

TEST_CASE("half-wave boosted wave") {
  const auto g = build_grid(64, 512, 12, 64);
  std::vector<double> quotients;
  BoostedOptions o;
  o.on_iterate = [&](int, double q) { quotients.push_back(q); };
  const auto w = solve_boosted(params(0.5, 3, 1, 0.5), g, o);
  REQUIRE(w.poho_ratio.has_value());
  CHECK(*w.poho_ratio == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(half_wave_pohozaev(w.field, 0.5) == doctest::Approx(*w.poho_ratio));
  CHECK(w.el_residual < 1e-6);
  REQUIRE(quotients.size() > 2);
  for (std::size_t k = 1; k < quotients.size(); ++k)
    CHECK(quotients[k] <= quotients[k - 1] * (1 + 1e-14));
}

TEST_CASE("boosted solve rejects indefinite forms and bad parameters") {
  const auto g = build_grid(32, 256, 8, 64);
  CHECK_THROWS_WITH_AS(solve_boosted(params(0.5, 3, 1, 1.2), g),
                       doctest::Contains("quadratic form indefinite"), DomainError);
  CHECK_THROWS_AS(solve_boosted(params(0.75, 3, 0.1, 1.5), g), DomainError);
  CHECK_THROWS_AS(solve_boosted(params(0.4, 3, 1, 0.1), g), DomainError);
  CHECK_THROWS_AS(solve_boosted(params(0.75, 15, 1, 0.1), g), DomainError);
}

TEST_CASE("half-wave Pohozaev ratio of real fields vanishes") {
  const auto g = build_grid(32, 32, 5, 5);
  Field u = random_field(g, 4, 0);
  for (auto& z : u.values()) z = std::abs(z);
  CHECK(std::abs(half_wave_pohozaev(u, 0.5)) < 1e-12);
  CHECK_THROWS_AS(half_wave_pohozaev(u, 0), DomainError);
  CHECK_THROWS_AS(half_wave_pohozaev(Field(g), 0.5), DomainError);
}

TEST_CASE("Steiner symmetrization") {
  const auto g = build_grid(16, 32, 4, 6);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field u = random_field(g, seed, 3, 4);
    const Field v = steiner_symmetrize(u);
    CHECK(mass(v) == doctest::Approx(mass(u)).epsilon(1e-12));
    const Components cu = components(u, params(0.75, 3)), cv = components(v, params(0.75, 3));
    CHECK(cv.hx == doctest::Approx(cu.hx).epsilon(1e-12));
    CHECK(cv.hy <= cu.hy * (1 + 1e-12));
    const Field vh = to_spectrum(v);
    std::vector<int> order{0};
    for (int k = 1; k < g.ny() / 2; ++k) {
      order.push_back(k);
      order.push_back(g.ny() - k);
    }
    order.push_back(g.ny() / 2);
    for (int i = 0; i < g.nx(); ++i) {
      const double scale = std::abs(vh(i, 0));
      for (std::size_t k = 1; k < order.size(); ++k) {
        // Nonincreasing along eta = 0, +1, -1, +2, ... with a real spectrum.
        CHECK(std::abs(vh(i, order[k])) <= std::abs(vh(i, order[k - 1])) + 1e-12 * scale);
        CHECK(std::abs(vh(i, order[k]).imag()) <= 1e-12 * scale + 1e-300);
      }
    }
    CHECK(oracle::rel_l2(steiner_symmetrize(v), v) < 1e-12);
  }
}

TEST_CASE("Steiner ties go to positive eta first") {
  const auto g = build_grid(8, 8, M_PI, M_PI);
  Field uh(g, Space::spectral);
  uh(0, 1) = 3.0;
  uh(0, 2) = 2.0;
  uh(0, 5) = 2.0;
  const Field v = to_spectrum(steiner_symmetrize(from_spectrum(uh)));
  CHECK(std::abs(v(0, 0)) == doctest::Approx(3));
  CHECK(std::abs(v(0, 1)) == doctest::Approx(2));
  CHECK(std::abs(v(0, 7)) == doctest::Approx(2));
  CHECK(std::abs(v(0, 2)) < 1e-12);
}

TEST_CASE("decay of the boosted wave") {
  const auto m = params(0.75, 3, 1, 0.3);
  std::vector<double> sups;
  for (int f : {1, 2}) {
    const auto g = build_grid(64 * f, 256 * f, 16, 32);
    const auto w = solve_boosted(m, g);
    const auto rep = boosted_decay_check(w);
    CHECK(rep.bound_id == BoundId::boosted);
    CHECK(std::isfinite(rep.ratio_max));
    sups.push_back(rep.ratio_max);
  }
  CHECK(sups[1] == doctest::Approx(sups[0]).epsilon(0.1));
  const auto g = build_grid(64, 256, 16, 32);
  DecayWindow too_wide;
  too_wide.x_max = 20;
  CHECK_THROWS_AS(boosted_decay_check(solve_boosted(m, g), too_wide), DomainError);
}

TEST_CASE("scaling study bookkeeping") {
  const auto g = build_grid(64, 512, 12, 32);
  CHECK_THROWS_WITH_AS(mass_scaling_study({0.5}, params(0.5, 4), g), doctest::Contains("need >= 2 points"),
                       DomainError);
  CHECK_THROWS_AS(mass_scaling_study({0.5, 0.7}, params(0.75, 4), g), DomainError);
  CHECK_THROWS_AS(mass_scaling_study({0.5, 1.1}, params(0.5, 4), g), DomainError);
  const auto st = mass_scaling_study({0.5, 0.7, 0.9}, params(0.5, 4), g);
  REQUIRE(st.masses.size() == 3);
  CHECK(st.masses[0] > st.masses[1]);
  CHECK(st.masses[1] > st.masses[2]);
  CHECK(st.fitted_slope > 0);
  const auto path = std::filesystem::temp_directory_path() / "afnls_scaling_test.csv";
  write_scaling_csv(path.string(), st);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "omega,mass,hdot,quotient");
  std::filesystem::remove(path);
}

TEST_CASE("normalized boosted minimizer") {
  const auto g = build_grid(64, 256, 16, 64);
  const auto m = params(0.75, 3, 1, 0.5);
  const auto r = normalized_boosted_min(1.0, m, g);
  CHECK(r.energy <= -omega_floor(0.75, 0.5) * 1.0 / 2 + 1e-6);
  CHECK(mass(r.field) == doctest::Approx(1.0).epsilon(1e-8));

  const auto m0 = params(0.5, 3);
  const auto base = build_grid(128, 128, 5, 24);
  const auto ref = solve_fixed_alpha(m0, base);
  const GridSpec gs = scaled_grid(base, predicted_alpha(1.0, mass(ref.field), 0.5, 3), 0.5);
  const auto a = normalized_boosted_min(1.0, m0, gs), b = solve_subcritical(1.0, m0, gs);
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-4));
  CHECK_THROWS_AS(normalized_boosted_min(1.0, params(0.75, 5, 1, 0.5), g), DomainError);
  CHECK_THROWS_AS(normalized_boosted_min(1.0, params(0.5, 3, 1, 1.5), g), DomainError);
}

TEST_CASE("boosted minimum is midpoint concave in the mass") {
  const auto g = build_grid(64, 256, 16, 64);
  const auto m = params(0.75, 3, 1, 0.5);
  double e[3];
  int k = 0;
  for (double c : {0.5, 1.0, 1.5}) e[k++] = normalized_boosted_min(c, m, g).energy;
  CHECK(e[1] >= (e[0] + e[2]) / 2 - 1e-8);
  CHECK(e[0] > e[1]);
  CHECK(e[1] > e[2]);
}

// Run as its own ctest entry.
TEST_CASE("mass scaling exponents") {
  const auto st = mass_scaling_study({0.5, 0.7, 0.9}, params(0.5, 4), build_grid(64, 512, 12, 32));
  CHECK(std::abs(st.fitted_slope - 0.75) <= 0.1);
  CHECK(std::abs(st.hdot_slope - 0.25) <= 0.15);
}
