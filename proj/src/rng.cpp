#include "afnls/rng.hpp"

#include <cmath>
#include <vector>

namespace afnls {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + k);
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  return static_cast<double>(draw(seed, stream, k) >> 11) * 0x1.0p-53;
}

Field random_field(const GridSpec& g, std::uint64_t seed, std::uint64_t stream, int modes) {
  std::uint64_t k = 0;
  auto u = [&] { return uniform(seed, stream, k++); };
  const double wx = g.lx() / 6 * (0.6 + 0.8 * u());
  const double wy = g.ly() / 6 * (0.6 + 0.8 * u());
  const double cx = 0.2 * wx * (2 * u() - 1), cy = 0.2 * wy * (2 * u() - 1);
  struct Term {
    double a, b, kx, ky, ph;
  };
  std::vector<Term> terms;
  for (int m = 0; m < modes * modes; ++m)
    terms.push_back({2 * u() - 1, 2 * u() - 1, (m / modes) * 2.0 / wx * u(),
                     (m % modes) * 2.0 / wy * u(), 2 * M_PI * u()});
  return sample(g, [&](double x, double y) {
    const double env = std::exp(-std::pow((x - cx) / wx, 2) - std::pow((y - cy) / wy, 2));
    cplx acc = 0;
    for (const auto& t : terms) acc += cplx(t.a, t.b) * std::polar(1.0, t.kx * x + t.ky * y + t.ph);
    return env * acc;
  });
}

}  // namespace afnls
