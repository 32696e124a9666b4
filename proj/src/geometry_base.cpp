#include "tbgeo/geometry_base.hpp"

#include <Eigen/Cholesky>
#include <random>

namespace tbg {

RiemannianChart load_chart(int dim, const std::vector<std::string>& metric_entries,
                           std::vector<std::pair<double, double>> domain,
                           TorsionSpec torsion, std::string name) {
  if (dim < 2) throw GeometryError("chart dimension must be at least 2");
  if (metric_entries.size() != static_cast<size_t>(dim) * dim)
    throw GeometryError("metric needs dim*dim entries");
  if (domain.size() != static_cast<size_t>(dim))
    throw GeometryError("domain needs one interval per coordinate");

  RiemannianChart c;
  c.dim = dim;
  c.domain = std::move(domain);
  c.torsion = std::move(torsion);
  c.name = std::move(name);
  c.metric.reserve(metric_entries.size());
  for (const auto& s : metric_entries) c.metric.push_back(parse(s, dim));

  // Symmetry of the sources and positive definiteness at sampled points.
  std::mt19937_64 rng(0x5eedu);
  for (int trial = 0; trial < 16; ++trial) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) {
      std::uniform_real_distribution<double> u(c.domain[i].first, c.domain[i].second);
      x[i] = u(rng);
    }
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = eval(c.g(i, j), x);
    if (!g.isApprox(g.transpose(), 1e-12))
      throw GeometryError("metric is not symmetric at a sampled point");
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
      throw GeometryError("metric is not positive definite at a sampled point");
  }

  if (auto* gen = std::get_if<TorsionSpec::General>(&c.torsion.v)) {
    if (gen->comp.size() != static_cast<size_t>(dim) * dim * dim)
      throw GeometryError("general torsion needs dim^3 entries");
    std::mt19937_64 trng(0x70a5u);
    for (int trial = 0; trial < 8; ++trial) {
      Vec x(dim);
      for (int i = 0; i < dim; ++i) {
        std::uniform_real_distribution<double> u(c.domain[i].first, c.domain[i].second);
        x[i] = u(trng);
      }
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            double a = eval(gen->comp[(static_cast<size_t>(i) * dim + j) * dim + k], x);
            double b = eval(gen->comp[(static_cast<size_t>(j) * dim + i) * dim + k], x);
            if (std::abs(a + b) > 1e-12)
              throw GeometryError("torsion is not antisymmetric in its first two slots");
          }
    }
  }
  return c;
}

BasePoint base_point(const RiemannianChart& chart, const Vec& x) {
  const int m = chart.dim;
  BasePoint bp;
  bp.m = m;
  bp.x = x;
  bp.g = Mat::Zero(m, m);
  bp.dg = Ten3(m);
  bp.ddg = Ten4(m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Jet2 jet = eval_jet2(chart.g(i, j), x);
      bp.g(i, j) = bp.g(j, i) = jet.val;
      for (int l = 0; l < m; ++l) {
        bp.dg(l, i, j) = bp.dg(l, j, i) = jet.grad[l];
        for (int a = 0; a < m; ++a) {
          bp.ddg(a, l, i, j) = bp.ddg(a, l, j, i) = jet.hess(a, l);
        }
      }
    }
  Eigen::LLT<Mat> llt(bp.g);
  if (llt.info() != Eigen::Success) throw GeometryError("metric not positive definite at point");
  bp.chol_lower = llt.matrixL();
  bp.g_inv = bp.g.inverse();

  // d_a g^{il} = -g^{ib} (d_a g_bc) g^{cl}
  bp.dg_inv = Ten3(m);
  for (int a = 0; a < m; ++a) {
    Mat dg_a(m, m);
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) dg_a(b, c) = bp.dg(a, b, c);
    Mat d = -bp.g_inv * dg_a * bp.g_inv;
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l) bp.dg_inv(a, i, l) = d(i, l);
  }
  return bp;
}

ConnectionCoeffs christoffel_lc(const BasePoint& bp) {
  const int m = bp.m;
  ConnectionCoeffs c;
  c.m = m;
  c.gamma = Ten3(m);
  c.gamma_dx = Ten4(m);

  // Koszul: Gamma_{jk,l} = (d_j g_lk + d_k g_lj - d_l g_jk)/2
  Ten3 low(m);
  Ten4 dlow(m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        low(j, k, l) = 0.5 * (bp.dg(j, l, k) + bp.dg(k, l, j) - bp.dg(l, j, k));
        for (int a = 0; a < m; ++a)
          dlow(a, j, k, l) =
              0.5 * (bp.ddg(a, j, l, k) + bp.ddg(a, k, l, j) - bp.ddg(a, l, j, k));
      }

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += bp.g_inv(i, l) * low(j, k, l);
        c.gamma(i, j, k) = s;
        for (int a = 0; a < m; ++a) {
          double ds = 0.0;
          for (int l = 0; l < m; ++l)
            ds += bp.dg_inv(a, i, l) * low(j, k, l) + bp.g_inv(i, l) * dlow(a, j, k, l);
          c.gamma_dx(a, i, j, k) = ds;
        }
      }
  return c;
}

TorsionAtPoint torsion_at(const TorsionSpec& spec, const BasePoint& bp) {
  const int m = bp.m;
  TorsionAtPoint out;
  out.t = Ten3(m);
  out.dt = Ten4(m);
  if (std::holds_alternative<TorsionSpec::None>(spec.v)) return out;

  if (const auto* vt = std::get_if<TorsionSpec::Vectorial>(&spec.v)) {
    Jet2 psi = eval_jet2(vt->potential, bp.x);
    // T_ijk = psi_i g_jk - psi_j g_ik
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          out.t(i, j, k) = psi.grad[i] * bp.g(j, k) - psi.grad[j] * bp.g(i, k);
          for (int a = 0; a < m; ++a)
            out.dt(a, i, j, k) = psi.hess(a, i) * bp.g(j, k) + psi.grad[i] * bp.dg(a, j, k) -
                                 psi.hess(a, j) * bp.g(i, k) - psi.grad[j] * bp.dg(a, i, k);
        }
    return out;
  }

  const auto& gen = std::get<TorsionSpec::General>(spec.v);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Jet2 jet = eval_jet2(gen.comp[(static_cast<size_t>(i) * m + j) * m + k], bp.x);
        out.t(i, j, k) = jet.val;
        for (int a = 0; a < m; ++a) out.dt(a, i, j, k) = jet.grad[a];
      }
  return out;
}

ConnectionCoeffs connection_with_torsion(const RiemannianChart& chart, const BasePoint& bp) {
  ConnectionCoeffs c = christoffel_lc(bp);
  if (chart.torsion.is_none()) return c;
  const int m = bp.m;
  TorsionAtPoint tp = torsion_at(chart.torsion, bp);

  // contorsion_{jk,l} = (T_jkl - T_klj + T_ljk)/2
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          double kt = 0.5 * (tp.t(j, k, l) - tp.t(k, l, j) + tp.t(l, j, k));
          c.gamma(i, j, k) += bp.g_inv(i, l) * kt;
          for (int a = 0; a < m; ++a) {
            double dkt =
                0.5 * (tp.dt(a, j, k, l) - tp.dt(a, k, l, j) + tp.dt(a, l, j, k));
            c.gamma_dx(a, i, j, k) += bp.dg_inv(a, i, l) * kt + bp.g_inv(i, l) * dkt;
          }
        }
      }
  return c;
}

Ten4 curvature(const ConnectionCoeffs& conn) {
  const int m = conn.m;
  Ten4 r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double s = conn.gamma_dx(k, i, l, j) - conn.gamma_dx(l, i, k, j);
          for (int a = 0; a < m; ++a)
            s += conn.gamma(i, k, a) * conn.gamma(a, l, j) -
                 conn.gamma(i, l, a) * conn.gamma(a, k, j);
          r(i, j, k, l) = s;
        }
  return r;
}

Vec conformal_change_tensor(const Expr& phi, const BasePoint& bp, const Vec& X, const Vec& Y) {
  Jet2 p = eval_jet2(phi, bp.x);
  double xphi = p.grad.dot(X);
  double yphi = p.grad.dot(Y);
  double inner = X.dot(bp.g * Y);
  Vec grad = bp.g_inv * p.grad;
  return xphi * Y + yphi * X - inner * grad;
}

TorsionParts torsion_decompose_in_frame(const Ten3& tf, const Mat& frame) {
  const int m = tf.n;
  if (m < 2) throw GeometryError("torsion decomposition needs dimension >= 2");
  TorsionParts out;
  out.frame = frame;

  out.vectorial = Vec::Zero(m);
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += tf(i, j, i);
    out.vectorial[j] = s / (1.0 - m);
  }

  out.skew3 = Ten3(m);
  Ten3 vecp(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        out.skew3(i, j, k) = (tf(i, j, k) + tf(j, k, i) + tf(k, i, j)) / 3.0;
        vecp(i, j, k) = out.vectorial[i] * (j == k ? 1.0 : 0.0) -
                        out.vectorial[j] * (i == k ? 1.0 : 0.0);
      }

  out.cartan = Ten3(m);
  for (size_t idx = 0; idx < tf.a.size(); ++idx)
    out.cartan.a[idx] = tf.a[idx] - out.skew3.a[idx] - vecp.a[idx];
  return out;
}

TorsionParts torsion_decompose(const Ten3& t_coord, const Mat& g) {
  const int m = t_coord.n;
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw GeometryError("torsion decomposition needs a positive definite metric");
  Mat L = llt.matrixL();
  Mat frame = L.transpose().inverse();  // columns orthonormal: frame^T g frame = I

  Ten3 tf(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double s = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
              s += t_coord(i, j, k) * frame(i, a) * frame(j, b) * frame(k, c);
        tf(a, b, c) = s;
      }
  return torsion_decompose_in_frame(tf, frame);
}

} // namespace tbg
