#include "tbgeo/tm_bundle.hpp"

namespace tbg {

JetMat operator*(const JetMat& a, const JetMat& b) {
  JetMat r;
  r.v = a.v * b.v;
  r.d.resize(a.d.size());
  for (size_t l = 0; l < a.d.size(); ++l) r.d[l] = a.d[l] * b.v + a.v * b.d[l];
  return r;
}

JetMat operator+(const JetMat& a, const JetMat& b) {
  JetMat r;
  r.v = a.v + b.v;
  r.d.resize(a.d.size());
  for (size_t l = 0; l < a.d.size(); ++l) r.d[l] = a.d[l] + b.d[l];
  return r;
}

JetMat operator*(const TMJet1& s, const JetMat& a) {
  JetMat r;
  r.v = s.val * a.v;
  r.d.resize(a.d.size());
  for (size_t l = 0; l < a.d.size(); ++l) r.d[l] = s.val * a.d[l] + s.d[static_cast<int>(l)] * a.v;
  return r;
}

JetMat transpose(const JetMat& a) {
  JetMat r;
  r.v = a.v.transpose();
  r.d.resize(a.d.size());
  for (size_t l = 0; l < a.d.size(); ++l) r.d[l] = a.d[l].transpose();
  return r;
}

TMScene make_scene(const RiemannianChart& chart, const TMPoint& p) {
  TMScene s;
  s.chart = &chart;
  s.p = p;
  s.base = base_point(chart, p.x);
  s.conn = connection_with_torsion(chart, s.base);
  s.tors = torsion_at(chart.torsion, s.base);
  s.R = curvature(s.conn);
  s.gv = s.base.g * p.v;
  s.r2 = p.v.dot(s.gv);

  const int m = s.base.m;
  const int n = 2 * m;

  // Gv(i,k) = v^j Gamma^i_{kj}
  Mat Gv = Mat::Zero(m, m);
  std::vector<Mat> dGv(static_cast<size_t>(n), Mat::Zero(m, m));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      double sum = 0.0;
      for (int j = 0; j < m; ++j) {
        sum += p.v[j] * s.conn.gamma(i, k, j);
        dGv[static_cast<size_t>(m + j)](i, k) = s.conn.gamma(i, k, j);
        for (int a = 0; a < m; ++a)
          dGv[static_cast<size_t>(a)](i, k) += p.v[j] * s.conn.gamma_dx(a, i, k, j);
      }
      Gv(i, k) = sum;
    }

  s.fp.m = m;
  s.fp.F.v = Mat::Identity(n, n);
  s.fp.F.v.block(m, 0, m, m) = -Gv;
  s.fp.Finv.v = Mat::Identity(n, n);
  s.fp.Finv.v.block(m, 0, m, m) = Gv;
  s.fp.F.d.assign(static_cast<size_t>(n), Mat::Zero(n, n));
  s.fp.Finv.d.assign(static_cast<size_t>(n), Mat::Zero(n, n));
  for (int l = 0; l < n; ++l) {
    s.fp.F.d[static_cast<size_t>(l)].block(m, 0, m, m) = -dGv[static_cast<size_t>(l)];
    s.fp.Finv.d[static_cast<size_t>(l)].block(m, 0, m, m) = dGv[static_cast<size_t>(l)];
  }
  return s;
}

Vec frame_components(const TMScene& s, const Vec& X) { return s.fp.Finv.v * X; }
Vec from_frame(const TMScene& s, const Vec& b) { return s.fp.F.v * b; }

std::pair<Vec, Vec> split(const TMScene& s, const Vec& X) {
  const int m = s.m();
  Vec b = frame_components(s, X);
  Vec bh = Vec::Zero(2 * m), bv = Vec::Zero(2 * m);
  bh.head(m) = b.head(m);
  bv.tail(m) = b.tail(m);
  return {from_frame(s, bh), from_frame(s, bv)};
}

JetMat theta_mat(const TMScene& s) {
  const int m = s.m();
  Mat tf = Mat::Zero(2 * m, 2 * m);
  tf.block(m, 0, m, m) = Mat::Identity(m, m);
  return s.fp.F * JetMat::constant(tf, 2 * m) * s.fp.Finv;
}

JetMat theta_t_mat(const TMScene& s) {
  const int m = s.m();
  Mat tf = Mat::Zero(2 * m, 2 * m);
  tf.block(0, m, m, m) = Mat::Identity(m, m);
  return s.fp.F * JetMat::constant(tf, 2 * m) * s.fp.Finv;
}

Vec xi_vector(const TMScene& s) {
  const int m = s.m();
  Vec xi = Vec::Zero(2 * m);
  xi.tail(m) = s.p.v;
  return xi;
}

OneForms one_forms(const TMScene& s) {
  const int m = s.m();
  OneForms out;
  out.mu = Vec::Zero(2 * m);
  out.xi_flat = Vec::Zero(2 * m);
  // frame rows: mu = (gv, 0), xi^flat = (0, gv); coordinate row = frame row * Finv
  out.mu.head(m) = s.gv;
  Vec xf = Vec::Zero(2 * m);
  xf.tail(m) = s.gv;
  out.mu = (out.mu.transpose() * s.fp.Finv.v).transpose();
  out.xi_flat = (xf.transpose() * s.fp.Finv.v).transpose();
  return out;
}

TMJet1 jet_v(const TMScene& s, int i) {
  const int n = s.n();
  TMJet1 j = TMJet1::constant(n, s.p.v[i]);
  j.d[s.m() + i] = 1.0;
  return j;
}

TMJet1 jet_g(const TMScene& s, int i, int j) {
  const int n = s.n();
  TMJet1 out = TMJet1::constant(n, s.base.g(i, j));
  for (int a = 0; a < s.m(); ++a) out.d[a] = s.base.dg(a, i, j);
  return out;
}

TMJet1 jet_ginv(const TMScene& s, int i, int j) {
  const int n = s.n();
  TMJet1 out = TMJet1::constant(n, s.base.g_inv(i, j));
  for (int a = 0; a < s.m(); ++a) out.d[a] = s.base.dg_inv(a, i, j);
  return out;
}

TMJet1 jet_gamma(const TMScene& s, int i, int j, int k) {
  const int n = s.n();
  TMJet1 out = TMJet1::constant(n, s.conn.gamma(i, j, k));
  for (int a = 0; a < s.m(); ++a) out.d[a] = s.conn.gamma_dx(a, i, j, k);
  return out;
}

TMJet1 jet_base_scalar(const TMScene& s, const Expr& f) {
  Jet2 j = eval_jet2(f, s.p.x);
  TMJet1 out = TMJet1::constant(s.n(), j.val);
  for (int a = 0; a < s.m(); ++a) out.d[a] = j.grad[a];
  return out;
}

TMJet1 jet_gv(const TMScene& s, int i) {
  TMJet1 acc = TMJet1::constant(s.n(), 0.0);
  for (int j = 0; j < s.m(); ++j) acc = acc + jet_g(s, i, j) * jet_v(s, j);
  return acc;
}

TMJet1 jet_mu_frame_h(const TMScene& s, int i) { return jet_gv(s, i); }

double dphi(const TMScene& s, const Expr& phi) {
  Jet2 j = eval_jet2(phi, s.p.x);
  return j.grad.dot(s.p.v);
}

TMField field_coord(const TMScene& s, int A) {
  TMField f;
  f.c.assign(static_cast<size_t>(s.n()), TMJet1::constant(s.n(), 0.0));
  f.c[static_cast<size_t>(A)].val = 1.0;
  return f;
}

TMField field_frame_h(const TMScene& s, int k) {
  TMField f;
  f.c.reserve(static_cast<size_t>(s.n()));
  for (int A = 0; A < s.n(); ++A) f.c.push_back(s.fp.F.at(A, k));
  return f;
}

TMField field_frame_v(const TMScene& s, int i) { return field_coord(s, s.m() + i); }

TMField apply(const JetMat& M, const TMField& Y) {
  const int n = Y.size();
  TMField out;
  out.c.assign(static_cast<size_t>(n), TMJet1::constant(n, 0.0));
  for (int A = 0; A < n; ++A) {
    TMJet1 acc = TMJet1::constant(n, 0.0);
    for (int B = 0; B < n; ++B) acc = acc + M.at(A, B) * Y.c[static_cast<size_t>(B)];
    out.c[static_cast<size_t>(A)] = acc;
  }
  return out;
}

Vec lie_bracket(const TMField& U, const TMField& W) {
  const int n = U.size();
  Vec out = Vec::Zero(n);
  for (int A = 0; A < n; ++A) {
    double s = 0.0;
    for (int B = 0; B < n; ++B)
      s += U.c[static_cast<size_t>(B)].val * W.c[static_cast<size_t>(A)].d[B] -
           W.c[static_cast<size_t>(B)].val * U.c[static_cast<size_t>(A)].d[B];
    out[A] = s;
  }
  return out;
}

std::vector<TMJet1> frame_components_jets(const TMScene& s, const TMField& Y) {
  const int n = s.n();
  std::vector<TMJet1> out(static_cast<size_t>(n), TMJet1::constant(n, 0.0));
  for (int A = 0; A < n; ++A) {
    TMJet1 acc = TMJet1::constant(n, 0.0);
    for (int B = 0; B < n; ++B) acc = acc + s.fp.Finv.at(A, B) * Y.c[static_cast<size_t>(B)];
    out[static_cast<size_t>(A)] = acc;
  }
  return out;
}

} // namespace tbg
