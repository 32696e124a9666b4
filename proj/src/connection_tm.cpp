#include "tbgeo/connection_tm.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace tbg {

namespace {

// R(a, e_l)v in frame components, one column per l.
Mat curvature_contraction(const TMScene& s, const Vec& a) {
  const int m = s.m();
  Mat out = Mat::Zero(m, m);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) acc += s.R(i, j, k, l) * s.p.v[j] * a[k];
      out(i, l) = acc;
    }
  return out;
}

double weight_value(const Expr& phi, const Vec& x) { return std::exp(2.0 * eval(phi, x)); }

Vec base_gradient(const Expr& phi, const Vec& x) {
  return eval_jet2(phi, x).grad;
}

} // namespace

Vec r_xi(const TMScene& s, const Vec& X, const Vec& Y) {
  const int m = s.m();
  Vec xf = frame_components(s, X), yf = frame_components(s, Y);
  Vec out = Vec::Zero(2 * m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) acc += s.R(i, j, k, l) * s.p.v[j] * xf[k] * yf[l];
    out[m + i] = acc;
  }
  return from_frame(s, out);
}

Vec tensor_A(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y) {
  const int m = s.m();
  Vec xf = frame_components(s, X), yf = frame_components(s, Y);
  double f1 = weight_value(w.phi1, s.p.x);
  double f2 = weight_value(w.phi2, s.p.x);
  Mat rx = curvature_contraction(s, xf.head(m));
  Mat ry = curvature_contraction(s, yf.head(m));
  Vec rhs(m);
  for (int l = 0; l < m; ++l)
    rhs[l] = 0.5 * f2 *
             (rx.col(l).dot(s.base.g * yf.tail(m)) + ry.col(l).dot(s.base.g * xf.tail(m)));
  Vec af = (f1 * s.base.g).ldlt().solve(rhs);
  Vec out = Vec::Zero(2 * m);
  out.head(m) = af;
  return from_frame(s, out);
}

Vec tensor_B(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y) {
  const int m = s.m();
  Vec xf = frame_components(s, X), yf = frame_components(s, Y);
  double f1 = weight_value(w.phi1, s.p.x);
  double f2 = weight_value(w.phi2, s.p.x);
  Vec grad2 = base_gradient(w.phi2, s.p.x);
  Vec out = Vec::Zero(2 * m);
  out.tail(m) = grad2.dot(yf.head(m)) * xf.tail(m);
  double pairing = xf.tail(m).dot(s.base.g * yf.tail(m));
  out.head(m) = -(f2 / f1) * pairing * s.base.g_inv * grad2;
  return from_frame(s, out);
}

Vec tensor_tau(const TMScene& s, const Vec& X, const Vec& Y) {
  const int m = s.m();
  Vec xf = frame_components(s, X), yf = frame_components(s, Y);
  // stored torsion is fully lowered already; covector slots are
  // T(Y,X,Z) + T(X,Z,Y) + T(Y,Z,X), halved
  Vec rhs = Vec::Zero(m);
  for (int l = 0; l < m; ++l) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        acc += s.tors.t(j, k, l) * yf[j] * xf[k];
        acc += s.tors.t(j, l, k) * (xf[j] * yf[k] + yf[j] * xf[k]);
      }
    rhs[l] = 0.5 * acc;
  }
  Vec tf = s.base.g.ldlt().solve(rhs);
  Vec out = Vec::Zero(2 * m);
  out.head(m) = tf;
  return from_frame(s, out);
}

Vec r_xi(const RiemannianChart& chart, const TMPoint& p, const Vec& X, const Vec& Y) {
  return r_xi(make_scene(chart, p), X, Y);
}
Vec tensor_A(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
             const Vec& Y) {
  return tensor_A(make_scene(chart, p), w, X, Y);
}
Vec tensor_B(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
             const Vec& Y) {
  return tensor_B(make_scene(chart, p), w, X, Y);
}
Vec tensor_tau(const RiemannianChart& chart, const TMPoint& p, const Vec& X, const Vec& Y) {
  return tensor_tau(make_scene(chart, p), X, Y);
}

StructuralConnection nabla_G(const TMScene& s, const WeightSpec& w, const Vec& X,
                             const TMField& Y) {
  StructuralConnection out;
  Vec yv = Y.values();
  out.dstar = apply_connection(s, w, ConnTag::DStar, X, Y);
  out.r_term = -0.5 * r_xi(s, X, yv);
  out.a = tensor_A(s, w, X, yv);
  out.b = tensor_B(s, w, X, yv);
  out.tau = tensor_tau(s, X, yv);
  out.total = out.dstar + out.r_term + out.a + out.b + out.tau;
  return out;
}

StructuralConnection nabla_G(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                             const Vec& X, const TMField& Y) {
  return nabla_G(make_scene(chart, p), w, X, Y);
}

Ten3 levi_civita_oracle(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p) {
  const int n = 2 * chart.dim;
  MetricAtPoint M = weighted(chart, w, p);
  Mat ginv = M.G.inverse();
  Ten3 gamma(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Vec low(n);
      for (int d = 0; d < n; ++d) low[d] = 0.5 * (M.d(j)(d, k) + M.d(k)(d, j) - M.d(d)(j, k));
      Vec up = ginv * low;
      for (int i = 0; i < n; ++i) gamma(i, j, k) = up[i];
    }
  return gamma;
}

double oracle_agreement_residual(const RiemannianChart& chart, const WeightSpec& w,
                                 const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int n = s.n();
  Ten3 gamma = levi_civita_oracle(chart, w, p);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    Vec X = Vec::Unit(n, a);
    for (int b = 0; b < n; ++b) {
      Vec nb = nabla_G(s, w, X, field_coord(s, b)).total;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(nb[i] - gamma(i, a, b)));
    }
  }
  return worst;
}

double oplus_torsion_residual(const RiemannianChart& chart, const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int m = s.m(), n = s.n();
  WeightSpec unit = WeightSpec::unit(m);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    Vec X = Vec::Unit(n, a);
    for (int b = a + 1; b < n; ++b) {
      Vec Y = Vec::Unit(n, b);
      Vec tors = apply_connection(s, unit, ConnTag::PullbackOplus, X, field_coord(s, b)) -
                 apply_connection(s, unit, ConnTag::PullbackOplus, Y, field_coord(s, a));
      Vec xf = frame_components(s, X), yf = frame_components(s, Y);
      Vec low = Vec::Zero(m);
      for (int l = 0; l < m; ++l)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) low[l] += s.tors.t(j, k, l) * xf[j] * yf[k];
      Vec expect = Vec::Zero(n);
      expect.head(m) = s.base.g_inv * low;
      expect = from_frame(s, expect) + r_xi(s, X, Y);
      worst = std::max(worst, (tors - expect).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double nabla_g_metricity_residual(const RiemannianChart& chart, const WeightSpec& w,
                                  const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int n = s.n();
  MetricAtPoint M = weighted(s, w);
  std::vector<std::vector<Vec>> nb(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    nb[static_cast<size_t>(c)].resize(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a)
      nb[static_cast<size_t>(c)][static_cast<size_t>(a)] =
          nabla_G(s, w, Vec::Unit(n, c), field_coord(s, a)).total;
  }
  double worst = 0.0;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double lhs = M.d(c)(a, b);
        double rhs = nb[static_cast<size_t>(c)][static_cast<size_t>(a)].dot(M.G.col(b)) +
                     nb[static_cast<size_t>(c)][static_cast<size_t>(b)].dot(M.G.col(a));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

double nabla_g_symmetry_residual(const RiemannianChart& chart, const WeightSpec& w,
                                 const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int n = s.n();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Vec d = nabla_G(s, w, Vec::Unit(n, a), field_coord(s, b)).total -
              nabla_G(s, w, Vec::Unit(n, b), field_coord(s, a)).total;
      worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
  return worst;
}

double fibre_defect(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int m = s.m();
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    Vec X = s.fp.F.v.col(m + i);
    for (int j = 0; j < m; ++j) {
      Vec nb = nabla_G(s, w, X, field_frame_v(s, j)).total;
      Vec bf = frame_components(s, nb);
      worst = std::max(worst, bf.head(m).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double zero_section_defect(const RiemannianChart& chart, const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int m = s.m();
  WeightSpec unit = WeightSpec::unit(m);
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    Vec X = s.fp.F.v.col(i);
    for (int j = 0; j < m; ++j) {
      Vec nb = nabla_G(s, unit, X, field_frame_h(s, j)).total;
      Vec bf = frame_components(s, nb);
      worst = std::max(worst, bf.tail(m).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

} // namespace tbg
