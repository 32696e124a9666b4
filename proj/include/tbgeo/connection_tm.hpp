#pragma once

#include "tbgeo/metrics_tm.hpp"

namespace tbg {

// Curvature applied to the canonical field: the vertical-valued 2-form
// R(X^h, Y^h)v lifted back to induced coordinates.
Vec r_xi(const TMScene& s, const Vec& X, const Vec& Y);
Vec r_xi(const RiemannianChart& chart, const TMPoint& p, const Vec& X, const Vec& Y);

// Horizontal-valued symmetric tensor obtained by solving
//   f1 <A_X Y, Z> = (f2/2)(<R(X^h, Z^h)v, Y^v> + <R(Y^h, Z^h)v, X^v>)
// against every horizontal frame vector Z.
Vec tensor_A(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y);
Vec tensor_A(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
             const Vec& Y);

// B(X,Y) = Y(phi2) X^v - (f2/f1) <X^v, Y^v> grad phi2, the gradient lifted
// horizontally. Only the horizontal part is symmetric in X, Y.
Vec tensor_B(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y);
Vec tensor_B(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
             const Vec& Y);

// Horizontal-valued torsion correction with defining covector
//   tau(X,Y,Z) = (T(Y,X,Z) + T(X,Z,Y) + T(Y,Z,X)) / 2
// where T is the pulled-back base torsion, lowered with the base metric.
Vec tensor_tau(const TMScene& s, const Vec& X, const Vec& Y);
Vec tensor_tau(const RiemannianChart& chart, const TMPoint& p, const Vec& X, const Vec& Y);

// The structural Levi-Civita connection of the weighted metric, reported as
// its five building blocks and their sum. All components in induced
// coordinates; Y must be a field so the leading derivative term is defined.
struct StructuralConnection {
  Vec dstar;
  Vec r_term;
  Vec a;
  Vec b;
  Vec tau;
  Vec total;
};

StructuralConnection nabla_G(const TMScene& s, const WeightSpec& w, const Vec& X,
                             const TMField& Y);
StructuralConnection nabla_G(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                             const Vec& X, const TMField& Y);

// Brute-force Christoffel symbols of the weighted metric on the induced
// 2m-dimensional chart, from the Koszul formula with exact metric
// derivatives. Index order matches the base convention: gamma(i, j, k) is
// the i-th component of the derivative of frame k along direction j.
Ten3 levi_civita_oracle(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);

// Residuals used by the verification suites; each returns the worst absolute
// component over coordinate or adapted frames at p.
double oracle_agreement_residual(const RiemannianChart& chart, const WeightSpec& w,
                                 const TMPoint& p);
double oplus_torsion_residual(const RiemannianChart& chart, const TMPoint& p);
double nabla_g_metricity_residual(const RiemannianChart& chart, const WeightSpec& w,
                                  const TMPoint& p);
double nabla_g_symmetry_residual(const RiemannianChart& chart, const WeightSpec& w,
                                 const TMPoint& p);

// Horizontal part of the connection over vertical frame pairs: zero exactly
// when the fibres sit totally geodesically, i.e. grad phi2 = 0.
double fibre_defect(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);

// Vertical part of the connection over horizontal frame pairs at p: the
// obstruction field to the horizontal distribution being integrable, zero
// for all v exactly when the base connection is flat.
double zero_section_defect(const RiemannianChart& chart, const TMPoint& p);

} // namespace tbg
