#pragma once

#include <vector>

#include "tbgeo/tm_bundle.hpp"

namespace tbg {

// Discrete solution of the geodesic equation of the chart connection,
// stored as states (x_k, xdot_k) at t_k = k h, k = 0..steps.
struct Trajectory {
  double h = 0.0;
  std::vector<Vec> x;
  std::vector<Vec> xdot;

  int steps() const { return static_cast<int>(x.size()) - 1; }
};

// acc^i = -xdot^j xdot^k Gamma^i_{jk} at (x, xdot).
Vec geodesic_acceleration(const RiemannianChart& chart, const Vec& x, const Vec& xdot);

// Fixed-step RK4 on the first-order system (x, xdot).
Trajectory integrate_geodesic(const RiemannianChart& chart, const Vec& x0, const Vec& v0,
                              double h, int steps);

// Max vertical defect of the velocity lift t -> (x(t), xdot(t)): the second
// derivative is recovered from the stored velocities by a five-point stencil
// and the lift is split into horizontal and vertical parts at each interior
// node. Zero exactly when xdot is horizontal along the curve.
double horizontality_residual(const RiemannianChart& chart, const Trajectory& traj);

// Max drift of g(xdot, xdot) from its initial value.
double energy_drift(const RiemannianChart& chart, const Trajectory& traj);

} // namespace tbg
