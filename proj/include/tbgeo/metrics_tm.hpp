#pragma once

#include <vector>

#include "tbgeo/tm_bundle.hpp"

namespace tbg {

// Weights for the metric family on TM. phi1, phi2 are base functions with
// f_i = e^{2 phi_i}; f3 is the constant weight of the horizontal one-form
// square in the extended weighted metric, and of the hat-pairing in the full
// family; f4..f6 only enter the full family. radius r(x) > 0 selects the
// sphere subbundle used by the contact checks.
struct WeightSpec {
  Expr phi1, phi2;
  double f3 = 0.0;
  Expr radius;
  double f4 = 0.0, f5 = 0.0, f6 = 0.0;

  static WeightSpec unit(int dim) {
    WeightSpec w;
    w.phi1 = parse("0", dim);
    w.phi2 = parse("0", dim);
    w.radius = parse("1", dim);
    return w;
  }
};

// Sampled sanity checks: r > 0 and f1 + f3 > 0 on the chart domain; throws
// GeometryError on violation or on a dimension mismatch.
void validate_weights(const RiemannianChart& chart, const WeightSpec& w);

// Metric on TM at one point, in the induced coordinates (x, v), with exact
// first derivatives. pd records the Cholesky verdict; an indefinite value is
// legal data for the indefinite pairings.
struct MetricAtPoint {
  int m = 0;
  Mat G;
  std::vector<Mat> G_dx;  // m entries, derivative along x^l
  std::vector<Mat> G_dv;  // m entries, derivative along v^i
  bool pd = false;

  const Mat& d(int l) const {
    return l < m ? G_dx[static_cast<size_t>(l)] : G_dv[static_cast<size_t>(l - m)];
  }
};

MetricAtPoint sasaki(const RiemannianChart& chart, const TMPoint& p);
MetricAtPoint weighted(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);

// Weighted metric plus f3 mu (x) mu on the horizontal block.
MetricAtPoint f3_extended(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);

// Full family: weighted + f3*hat + f4 xi_flat(x)xi_flat + f5 (xi_flat(x)mu +
// mu(x)xi_flat) + f6 mu(x)mu.
MetricAtPoint natural_metric(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);

// The hat-pairing alone; indefinite of signature (m, m).
MetricAtPoint ghat(const RiemannianChart& chart, const TMPoint& p);

// Cheeger-Gromoll metric; the single supported fiber-dependent weight.
MetricAtPoint cheeger_gromoll(const RiemannianChart& chart, const TMPoint& p);

// Scene-level builders used by the checks (same data, no chart re-work).
MetricAtPoint sasaki(const TMScene& s);
MetricAtPoint weighted(const TMScene& s, const WeightSpec& w);
MetricAtPoint f3_extended(const TMScene& s, const WeightSpec& w);
MetricAtPoint natural_metric(const TMScene& s, const WeightSpec& w);
MetricAtPoint ghat(const TMScene& s);
MetricAtPoint cheeger_gromoll(const TMScene& s);

// Connections on TM assembled from the splitting:
//   PullbackOplus: componentwise pullback connection on H and V.
//   DStar:         conformal correction on H, the derivation-style weight
//                  correction X(phi2) Y on V.
//   DTilde:        conformal corrections on both H and V.
//   DTildeTilde:   DTilde plus the horizontal K correction.
enum class ConnTag { PullbackOplus, DStar, DTilde, DTildeTilde };

// Covariant derivative of the field Y along the vector X at the scene point;
// all components in induced coordinates.
Vec apply_connection(const TMScene& s, const WeightSpec& w, ConnTag tag, const Vec& X,
                     const TMField& Y);

// Horizontal correction tensor: K_X Y = ((f3/f1) theta^t X - c Omega(X)
// theta^t xi) mu(Y) with the scalar c fixed by metricity of the extended
// weighted metric. Throws GeometryError when r^2 f3 + f1 is within 1e-9 of 0.
Vec k_tensor(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y);
Vec k_tensor(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
             const Vec& Y);

// Max over adapted-frame triples (X, Y, Z) of
// |X.G(Y,Z) - G(nabla_X Y, Z) - G(Y, nabla_X Z)| where the metric matches the
// tag: Sasaki for PullbackOplus, weighted for DStar and DTilde, the extended
// weighted metric for DTildeTilde.
double parallel_check(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                      ConnTag tag);

// Max frame-component residual of the difference identity between the two
// vertical weight corrections:
// (DTilde - DStar)_X Y = <theta grad phi2, Y> theta X - <theta X, Y> theta grad phi2.
double conn_difference_residual(const RiemannianChart& chart, const WeightSpec& w,
                                const TMPoint& p);

} // namespace tbg
