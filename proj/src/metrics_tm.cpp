#include "tbgeo/metrics_tm.hpp"

#include <Eigen/Cholesky>
#include <random>

namespace tbg {

namespace {

TMJet1 jet_exp2(const TMScene& s, const Expr& phi) {
  TMJet1 j = jet_base_scalar(s, phi);
  double v = std::exp(2.0 * j.val);
  return {v, 2.0 * v * j.d};
}

void set_sym(JetMat& G, int r, int c, const TMJet1& j) {
  G.v(r, c) = G.v(c, r) = j.val;
  for (size_t l = 0; l < G.d.size(); ++l)
    G.d[l](r, c) = G.d[l](c, r) = j.d[static_cast<int>(l)];
}

void add_sym(JetMat& G, int r, int c, const TMJet1& j) {
  G.v(r, c) += j.val;
  if (r != c) G.v(c, r) += j.val;
  for (size_t l = 0; l < G.d.size(); ++l) {
    G.d[l](r, c) += j.d[static_cast<int>(l)];
    if (r != c) G.d[l](c, r) += j.d[static_cast<int>(l)];
  }
}

JetMat zero_frame(const TMScene& s) {
  const int n = s.n();
  return JetMat::constant(Mat::Zero(n, n), n);
}

JetMat weighted_frame(const TMScene& s, const WeightSpec& w) {
  const int m = s.m();
  JetMat G = zero_frame(s);
  TMJet1 f1 = jet_exp2(s, w.phi1);
  TMJet1 f2 = jet_exp2(s, w.phi2);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      TMJet1 gij = jet_g(s, i, j);
      set_sym(G, i, j, f1 * gij);
      set_sym(G, m + i, m + j, f2 * gij);
    }
  return G;
}

void add_mu_mu(const TMScene& s, JetMat& G, double c) {
  const int m = s.m();
  if (c == 0.0) return;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) add_sym(G, i, j, c * (jet_gv(s, i) * jet_gv(s, j)));
}

// Conjugate a frame-block pairing into induced coordinates and package it.
MetricAtPoint pack(const TMScene& s, const JetMat& frame_blocks) {
  const int m = s.m();
  JetMat Gc = transpose(s.fp.Finv) * frame_blocks * s.fp.Finv;
  MetricAtPoint out;
  out.m = m;
  out.G = Gc.v;
  out.G_dx.assign(static_cast<size_t>(m), Mat());
  out.G_dv.assign(static_cast<size_t>(m), Mat());
  for (int l = 0; l < m; ++l) {
    out.G_dx[static_cast<size_t>(l)] = Gc.d[static_cast<size_t>(l)];
    out.G_dv[static_cast<size_t>(l)] = Gc.d[static_cast<size_t>(m + l)];
  }
  Eigen::LLT<Mat> llt(out.G);
  out.pd = (llt.info() == Eigen::Success);
  return out;
}

} // namespace

void validate_weights(const RiemannianChart& chart, const WeightSpec& w) {
  if (w.phi1.dim() != chart.dim || w.phi2.dim() != chart.dim || w.radius.dim() != chart.dim)
    throw GeometryError("weight functions parsed for a different chart dimension");
  std::mt19937_64 rng(0xc0ffeeu);
  for (int trial = 0; trial < 16; ++trial) {
    Vec x(chart.dim);
    for (int i = 0; i < chart.dim; ++i) {
      std::uniform_real_distribution<double> u(chart.domain[i].first, chart.domain[i].second);
      x[i] = u(rng);
    }
    if (eval(w.radius, x) <= 0.0)
      throw GeometryError("radius function is not positive on the domain");
    double f1 = std::exp(2.0 * eval(w.phi1, x));
    if (f1 + w.f3 <= 0.0)
      throw GeometryError("weights violate f1 + f3 > 0 on the domain");
  }
}

MetricAtPoint sasaki(const TMScene& s) {
  return weighted(s, WeightSpec::unit(s.m()));
}

MetricAtPoint weighted(const TMScene& s, const WeightSpec& w) {
  return pack(s, weighted_frame(s, w));
}

MetricAtPoint f3_extended(const TMScene& s, const WeightSpec& w) {
  JetMat G = weighted_frame(s, w);
  add_mu_mu(s, G, w.f3);
  return pack(s, G);
}

MetricAtPoint natural_metric(const TMScene& s, const WeightSpec& w) {
  const int m = s.m();
  JetMat G = weighted_frame(s, w);
  add_mu_mu(s, G, w.f6);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (w.f3 != 0.0) add_sym(G, i, m + j, w.f3 * jet_g(s, i, j));
      if (w.f5 != 0.0) add_sym(G, i, m + j, w.f5 * (jet_gv(s, i) * jet_gv(s, j)));
    }
  if (w.f4 != 0.0)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        add_sym(G, m + i, m + j, w.f4 * (jet_gv(s, i) * jet_gv(s, j)));
  return pack(s, G);
}

MetricAtPoint ghat(const TMScene& s) {
  const int m = s.m();
  JetMat G = zero_frame(s);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) set_sym(G, i, m + j, jet_g(s, i, j));
  return pack(s, G);
}

MetricAtPoint cheeger_gromoll(const TMScene& s) {
  const int m = s.m();
  const int n = s.n();
  JetMat G = zero_frame(s);
  TMJet1 r2 = TMJet1::constant(n, 0.0);
  for (int i = 0; i < m; ++i) r2 = r2 + jet_v(s, i) * jet_gv(s, i);
  TMJet1 f2 = TMJet1::constant(n, 1.0) / (TMJet1::constant(n, 1.0) + r2);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      TMJet1 gij = jet_g(s, i, j);
      set_sym(G, i, j, gij);
      set_sym(G, m + i, m + j, f2 * (gij + jet_gv(s, i) * jet_gv(s, j)));
    }
  return pack(s, G);
}

MetricAtPoint sasaki(const RiemannianChart& chart, const TMPoint& p) {
  return sasaki(make_scene(chart, p));
}
MetricAtPoint weighted(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p) {
  return weighted(make_scene(chart, p), w);
}
MetricAtPoint f3_extended(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p) {
  return f3_extended(make_scene(chart, p), w);
}
MetricAtPoint natural_metric(const RiemannianChart& chart, const WeightSpec& w,
                             const TMPoint& p) {
  return natural_metric(make_scene(chart, p), w);
}
MetricAtPoint ghat(const RiemannianChart& chart, const TMPoint& p) {
  return ghat(make_scene(chart, p));
}
MetricAtPoint cheeger_gromoll(const RiemannianChart& chart, const TMPoint& p) {
  return cheeger_gromoll(make_scene(chart, p));
}

namespace {

// K applied to frame components: horizontal output from the h-frame pairing
// mu(Y), with the two-term coefficient combined so the v = 0 case is regular.
Vec k_frame_h(const TMScene& s, const WeightSpec& w, const Vec& Xv_frame, double muY) {
  const int m = s.m();
  if (w.f3 == 0.0 || muY == 0.0) return Vec::Zero(m);
  double f1 = std::exp(2.0 * eval(w.phi1, s.p.x));
  double denom = s.r2 * w.f3 + f1;
  if (std::abs(denom) <= 1e-9)
    throw GeometryError("hypothesis violation: r^2 f3 + f1 vanishes at the point");
  double xi_xv = s.gv.dot(Xv_frame);
  Vec out = (w.f3 / f1) * Xv_frame;
  out -= (w.f3 * w.f3 * xi_xv / (denom * f1)) * s.p.v;
  return muY * out;
}

} // namespace

Vec k_tensor(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y) {
  const int m = s.m();
  Vec Xf = frame_components(s, X);
  Vec Yf = frame_components(s, Y);
  double muY = s.gv.dot(Yf.head(m));
  Vec b = Vec::Zero(s.n());
  b.head(m) = k_frame_h(s, w, Xf.tail(m), muY);
  return from_frame(s, b);
}

Vec k_tensor(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
             const Vec& Y) {
  return k_tensor(make_scene(chart, p), w, X, Y);
}

Vec apply_connection(const TMScene& s, const WeightSpec& w, ConnTag tag, const Vec& X,
                     const TMField& Y) {
  const int m = s.m();
  std::vector<TMJet1> Yf = frame_components_jets(s, Y);
  Vec Xf = frame_components(s, X);
  Vec Xh = Xf.head(m), Xv = Xf.tail(m);
  Vec Yh(m), Yv(m);
  for (int i = 0; i < m; ++i) {
    Yh[i] = Yf[static_cast<size_t>(i)].val;
    Yv[i] = Yf[static_cast<size_t>(m + i)].val;
  }

  Vec outH(m), outV(m);
  for (int b = 0; b < m; ++b) {
    double h = Yf[static_cast<size_t>(b)].d.dot(X);
    double v = Yf[static_cast<size_t>(m + b)].d.dot(X);
    for (int l = 0; l < m; ++l)
      for (int k = 0; k < m; ++k) {
        h += Xh[l] * s.conn.gamma(b, l, k) * Yh[k];
        v += Xh[l] * s.conn.gamma(b, l, k) * Yv[k];
      }
    outH[b] = h;
    outV[b] = v;
  }

  if (tag != ConnTag::PullbackOplus) {
    outH += conformal_change_tensor(w.phi1, s.base, Xh, Yh);
    Jet2 p2 = eval_jet2(w.phi2, s.p.x);
    if (tag == ConnTag::DStar) {
      outV += p2.grad.dot(Xh) * Yv;
    } else {
      outV += conformal_change_tensor(w.phi2, s.base, Xh, Yv);
      if (tag == ConnTag::DTildeTilde)
        outH += k_frame_h(s, w, Xv, s.gv.dot(Yh));
    }
  }

  Vec b(s.n());
  b.head(m) = outH;
  b.tail(m) = outV;
  return from_frame(s, b);
}

namespace {

// First-order jet of the scalar G(Y, Z) from the metric data and field jets.
TMJet1 metric_pair_jet(const MetricAtPoint& M, const std::vector<TMJet1>& Yc,
                       const std::vector<TMJet1>& Zc) {
  const int n = 2 * M.m;
  TMJet1 out = TMJet1::constant(n, 0.0);
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      const TMJet1& y = Yc[static_cast<size_t>(A)];
      const TMJet1& z = Zc[static_cast<size_t>(B)];
      double gab = M.G(A, B);
      out.val += y.val * gab * z.val;
      out.d += gab * (y.val * z.d + z.val * y.d);
      for (int l = 0; l < n; ++l) out.d[l] += y.val * M.d(l)(A, B) * z.val;
    }
  return out;
}

} // namespace

double parallel_check(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                      ConnTag tag) {
  TMScene s = make_scene(chart, p);
  MetricAtPoint M;
  switch (tag) {
    case ConnTag::PullbackOplus: M = sasaki(s); break;
    case ConnTag::DStar:
    case ConnTag::DTilde: M = weighted(s, w); break;
    case ConnTag::DTildeTilde: M = f3_extended(s, w); break;
  }

  std::vector<TMField> fields;
  std::vector<Vec> vecs;
  for (int k = 0; k < s.m(); ++k) {
    fields.push_back(field_frame_h(s, k));
    fields.push_back(field_frame_v(s, k));
  }
  for (const auto& f : fields) vecs.push_back(f.values());

  double worst = 0.0;
  for (const Vec& X : vecs)
    for (size_t yi = 0; yi < fields.size(); ++yi)
      for (size_t zi = yi; zi < fields.size(); ++zi) {
        const TMField& Y = fields[yi];
        const TMField& Z = fields[zi];
        TMJet1 gyz = metric_pair_jet(M, Y.c, Z.c);
        Vec dy = apply_connection(s, w, tag, X, Y);
        Vec dz = apply_connection(s, w, tag, X, Z);
        double lhs = gyz.d.dot(X);
        double rhs = dy.dot(M.G * Z.values()) + Y.values().dot(M.G * dz);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

double conn_difference_residual(const RiemannianChart& chart, const WeightSpec& w,
                                const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int m = s.m();
  Jet2 p2 = eval_jet2(w.phi2, s.p.x);
  Vec grad2 = s.base.g_inv * p2.grad;

  double worst = 0.0;
  for (int a = 0; a < s.n(); ++a) {
    Vec X = s.fp.F.v.col(a);
    Vec Xf = frame_components(s, X);
    Vec Xh = Xf.head(m);
    for (int i = 0; i < m; ++i) {
      TMField Y = field_frame_v(s, i);
      Vec Yv = Vec::Unit(m, i);
      Vec lhs = frame_components(
          s, apply_connection(s, w, ConnTag::DTilde, X, Y) -
                 apply_connection(s, w, ConnTag::DStar, X, Y));
      Vec rhs = p2.grad.dot(Yv) * Xh - Xh.dot(s.base.g * Yv) * grad2;
      worst = std::max(worst, (lhs.tail(m) - rhs).cwiseAbs().maxCoeff());
      worst = std::max(worst, lhs.head(m).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

} // namespace tbg
