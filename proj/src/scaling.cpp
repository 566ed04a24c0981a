#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "afnls/error.hpp"
#include "afnls/functionals.hpp"
#include "afnls/spectral.hpp"

namespace afnls {

namespace {

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row a evaluates the trigonometric interpolant at points[a]; the Nyquist
// column uses cos so that real data stays real. Points outside [-l, l] get a
// zero row.
Mat evaluation_matrix(const std::vector<double>& freq, const std::vector<double>& points,
                      double l) {
  const int n = static_cast<int>(freq.size());
  Mat e = Mat::Zero(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t a = 0; a < points.size(); ++a) {
    const double z = points[a];
    if (std::abs(z) > l * (1 + 1e-14)) continue;
    for (int k = 0; k < n; ++k)
      e(a, k) = k == n / 2 ? cplx(std::cos(freq[k] * z), 0.0) : std::polar(1.0, freq[k] * z);
  }
  return e;
}

}  // namespace

Field scale_field(const Field& u, double t, double s, double band_tol) {
  require_physical(u, "scale_field");
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("scale_field: t must be positive");
  if (t == 1.0) return u;
  const GridSpec& g = u.grid();
  const double ts = std::pow(t, s);
  const Field uh = to_spectrum(u);
  const double total = spectral_norm2(uh);
  if (total > 0) {
    double lost = 0;
    if (t > 1) {
      const double xi_cut = g.nx() / 2 * g.dxi() / ts, eta_cut = g.ny() / 2 * g.deta() / t;
      lost = spectral_integral(uh, [&](int i, int j) {
        return (std::abs(g.xi()[i]) > xi_cut || std::abs(g.eta()[j]) > eta_cut) ? 1.0 : 0.0;
      });
    } else {
      double acc = 0;
      for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j)
          if (std::abs(g.x(i)) > ts * g.lx() || std::abs(g.y(j)) > t * g.ly())
            acc += std::norm(u(i, j));
      lost = acc * g.cell();
    }
    if (lost > band_tol * total)
      throw ResolutionError("scale_field: relative mass " + std::to_string(lost / total) +
                            " leaves the resolved box or band at t=" + std::to_string(t));
  }
  std::vector<double> xs(g.nx()), ys(g.ny());
  for (int i = 0; i < g.nx(); ++i) xs[i] = ts * g.x(i);
  for (int j = 0; j < g.ny(); ++j) ys[j] = t * g.y(j);
  const Mat ex = evaluation_matrix(g.xi(), xs, g.lx());
  const Mat ey = evaluation_matrix(g.eta(), ys, g.ly());
  Eigen::Map<const Mat> h(uh.data().data(), g.nx(), g.ny());
  Mat v = ex * h * ey.transpose();
  v *= std::pow(t, (s + 1) / 2) / g.area();
  std::vector<cplx> out(v.data(), v.data() + v.size());
  return Field(u.grid_ptr(), std::move(out), Space::physical);
}

}  // namespace afnls
