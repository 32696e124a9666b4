#pragma once

#include <utility>
#include <vector>

#include "tbgeo/geometry_base.hpp"

namespace tbg {

// Point of TM in the induced chart (x^1..x^m, v^1..v^m).
struct TMPoint {
  Vec x, v;
  int dim() const { return static_cast<int>(x.size()); }
};

// First-order jet of a scalar function on TM at a point: value plus the
// derivative with respect to all 2m induced coordinates (x first, then v).
struct TMJet1 {
  double val = 0.0;
  Vec d;

  TMJet1() = default;
  TMJet1(double v, Vec dd) : val(v), d(std::move(dd)) {}
  static TMJet1 constant(int n, double c) { return {c, Vec::Zero(n)}; }
};

inline TMJet1 operator+(const TMJet1& a, const TMJet1& b) { return {a.val + b.val, a.d + b.d}; }
inline TMJet1 operator-(const TMJet1& a, const TMJet1& b) { return {a.val - b.val, a.d - b.d}; }
inline TMJet1 operator-(const TMJet1& a) { return {-a.val, -a.d}; }
inline TMJet1 operator*(const TMJet1& a, const TMJet1& b) {
  return {a.val * b.val, a.val * b.d + b.val * a.d};
}
inline TMJet1 operator*(double c, const TMJet1& a) { return {c * a.val, c * a.d}; }
inline TMJet1 operator*(const TMJet1& a, double c) { return c * a; }
inline TMJet1 operator/(const TMJet1& a, const TMJet1& b) {
  double v = a.val / b.val;
  return {v, (a.d - v * b.d) / b.val};
}

// Matrix of scalar TM jets: value matrix plus its derivative along each of
// the 2m induced coordinates.
struct JetMat {
  Mat v;
  std::vector<Mat> d;

  static JetMat constant(const Mat& m, int n) {
    JetMat j;
    j.v = m;
    j.d.assign(n, Mat::Zero(m.rows(), m.cols()));
    return j;
  }
  TMJet1 at(int r, int c) const {
    Vec dd(static_cast<int>(d.size()));
    for (size_t l = 0; l < d.size(); ++l) dd[static_cast<int>(l)] = d[l](r, c);
    return {v(r, c), std::move(dd)};
  }
};

JetMat operator*(const JetMat& a, const JetMat& b);
JetMat operator+(const JetMat& a, const JetMat& b);
JetMat operator*(const TMJet1& s, const JetMat& a);
JetMat transpose(const JetMat& a);

// Adapted frame H_1..H_m, V_1..V_m at a point, as the column matrix
// F = [ I 0 ; -Gv I ] with (Gv)^i_k = v^j Gamma^i_{kj}, plus exact
// derivatives of F and F^{-1} with respect to all induced coordinates.
struct FramePack {
  int m = 0;
  JetMat F, Finv;
};

// Per-point context for the tangent bundle of a chart: base metric data,
// metric connection, lowered torsion, curvature, and the adapted frame.
struct TMScene {
  const RiemannianChart* chart = nullptr;
  TMPoint p;
  BasePoint base;
  ConnectionCoeffs conn;
  TorsionAtPoint tors;
  Ten4 R;
  FramePack fp;
  Vec gv;       // g v
  double r2 = 0.0;  // |v|_g^2

  int m() const { return base.m; }
  int n() const { return 2 * base.m; }
};

TMScene make_scene(const RiemannianChart& chart, const TMPoint& p);

// Frame components b with X = F b; b = (h-components, v-components).
Vec frame_components(const TMScene& s, const Vec& X);
Vec from_frame(const TMScene& s, const Vec& b);

// Horizontal/vertical projections as coordinate vectors (X = h + v).
std::pair<Vec, Vec> split(const TMScene& s, const Vec& X);

// theta(H_i) = V_i, theta(V_i) = 0; theta^t(V_i) = H_i, theta^t(H_i) = 0.
JetMat theta_mat(const TMScene& s);
JetMat theta_t_mat(const TMScene& s);

// Canonical vertical vector field xi_(x,v) = v^i d/dv^i.
Vec xi_vector(const TMScene& s);

// Coordinate components of the one-forms xi^flat and mu = xi^flat o theta.
struct OneForms {
  Vec xi_flat;
  Vec mu;
};
OneForms one_forms(const TMScene& s);

// Scalar jet atoms on TM at the scene point.
TMJet1 jet_v(const TMScene& s, int i);
TMJet1 jet_g(const TMScene& s, int i, int j);
TMJet1 jet_ginv(const TMScene& s, int i, int j);
TMJet1 jet_gamma(const TMScene& s, int i, int j, int k);
TMJet1 jet_base_scalar(const TMScene& s, const Expr& f);  // pullback of f(x)
TMJet1 jet_gv(const TMScene& s, int i);                   // (g v)_i
TMJet1 jet_mu_frame_h(const TMScene& s, int i);           // mu(H_i) = (g v)_i

// dphi(x,v) = d(phi)_x(v).
double dphi(const TMScene& s, const Expr& phi);

// Vector field germ at the scene point: each coordinate component as a jet.
struct TMField {
  std::vector<TMJet1> c;
  int size() const { return static_cast<int>(c.size()); }
  Vec values() const {
    Vec out(size());
    for (int i = 0; i < size(); ++i) out[i] = c[static_cast<size_t>(i)].val;
    return out;
  }
};

TMField field_coord(const TMScene& s, int A);
TMField field_frame_h(const TMScene& s, int k);
TMField field_frame_v(const TMScene& s, int i);
TMField apply(const JetMat& M, const TMField& Y);

// Pointwise Lie bracket [U,W]^A = U^B d_B W^A - W^B d_B U^A.
Vec lie_bracket(const TMField& U, const TMField& W);

// Frame components of a field as jets: b = Finv * Y.
std::vector<TMJet1> frame_components_jets(const TMScene& s, const TMField& Y);

} // namespace tbg
