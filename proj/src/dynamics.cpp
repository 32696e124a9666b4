#include "tbgeo/dynamics.hpp"

#include <cmath>

namespace tbg {

Vec geodesic_acceleration(const RiemannianChart& chart, const Vec& x, const Vec& xdot) {
  const int m = chart.dim;
  const ConnectionCoeffs conn = connection_with_torsion(chart, base_point(chart, x));
  Vec acc = Vec::Zero(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) acc[i] -= xdot[j] * xdot[k] * conn.gamma(i, j, k);
  return acc;
}

Trajectory integrate_geodesic(const RiemannianChart& chart, const Vec& x0, const Vec& v0,
                              double h, int steps) {
  if (steps < 1 || !(h > 0.0)) throw GeometryError("integrate_geodesic: bad step setup");

  Trajectory traj;
  traj.h = h;
  traj.x.reserve(static_cast<size_t>(steps) + 1);
  traj.xdot.reserve(static_cast<size_t>(steps) + 1);
  Vec x = x0, v = v0;
  traj.x.push_back(x);
  traj.xdot.push_back(v);

  for (int k = 0; k < steps; ++k) {
    const Vec a1 = geodesic_acceleration(chart, x, v);
    const Vec x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a1;
    const Vec a2 = geodesic_acceleration(chart, x2, v2);
    const Vec x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2;
    const Vec a3 = geodesic_acceleration(chart, x3, v3);
    const Vec x4 = x + h * v3, v4 = v + h * a3;
    const Vec a4 = geodesic_acceleration(chart, x4, v4);

    x += (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    traj.x.push_back(x);
    traj.xdot.push_back(v);
  }
  return traj;
}

double horizontality_residual(const RiemannianChart& chart, const Trajectory& traj) {
  const int n = static_cast<int>(traj.x.size());
  if (n < 5) throw GeometryError("horizontality_residual: needs at least five states");
  const int m = chart.dim;

  double worst = 0.0;
  for (int i = 2; i < n - 2; ++i) {
    const Vec xddot =
        (8.0 * (traj.xdot[static_cast<size_t>(i + 1)] - traj.xdot[static_cast<size_t>(i - 1)]) +
         (traj.xdot[static_cast<size_t>(i - 2)] - traj.xdot[static_cast<size_t>(i + 2)])) /
        (12.0 * traj.h);
    const TMScene s =
        make_scene(chart, TMPoint{traj.x[static_cast<size_t>(i)], traj.xdot[static_cast<size_t>(i)]});
    Vec lift(2 * m);
    lift.head(m) = traj.xdot[static_cast<size_t>(i)];
    lift.tail(m) = xddot;
    worst = std::max(worst, split(s, lift).second.norm());
  }
  return worst;
}

double energy_drift(const RiemannianChart& chart, const Trajectory& traj) {
  double e0 = 0.0, worst = 0.0;
  for (size_t i = 0; i < traj.x.size(); ++i) {
    const Mat g = base_point(chart, traj.x[i]).g;
    const double e = traj.xdot[i].dot(g * traj.xdot[i]);
    if (i == 0) e0 = e;
    worst = std::max(worst, std::abs(e - e0));
  }
  return worst;
}

} // namespace tbg
