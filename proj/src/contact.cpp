#include "tbgeo/contact.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace tbg {

namespace {

// Orthonormal basis of the hyperplane q-perp via the Householder reflection
// that sends q to a signed coordinate axis.
std::vector<Vec> householder_complement(const Vec& q_in) {
  const int n = static_cast<int>(q_in.size());
  Vec q = q_in.normalized();
  int k = 0;
  q.cwiseAbs().maxCoeff(&k);
  const double sgn = q[k] >= 0.0 ? 1.0 : -1.0;
  Vec u = q;
  u[k] += sgn;
  const Mat H = Mat::Identity(n, n) - (2.0 / u.squaredNorm()) * (u * u.transpose());
  std::vector<Vec> basis;
  basis.reserve(static_cast<size_t>(n - 1));
  for (int j = 0; j < n; ++j)
    if (j != k) basis.push_back(H.col(j));
  return basis;
}

double gram_volume(const std::vector<Vec>& basis) {
  const int k = static_cast<int>(basis.size());
  Mat B(basis[0].size(), k);
  for (int j = 0; j < k; ++j) B.col(j) = basis[static_cast<size_t>(j)];
  return std::sqrt((B.transpose() * B).determinant());
}

} // namespace

Vec gamma_covector(const TMScene& s, const Expr& radius) {
  const int m = s.m();
  const Jet2 rj = eval_jet2(radius, s.p.x);
  Vec c = one_forms(s).xi_flat;
  c.head(m) -= rj.val * rj.grad;
  return c;
}

SpherePoint sphere_sample(const RiemannianChart& chart, const WeightSpec& w, const Vec& x,
                          std::uint64_t seed) {
  const int m = chart.dim;
  const double r = eval(w.radius, x);
  if (!(r > 0.0)) throw GeometryError("sphere_sample: radius must be positive at the point");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mat g = base_point(chart, x).g;
  Vec v(m);
  double norm = 0.0;
  do {
    for (int i = 0; i < m; ++i) v[i] = u(rng);
    norm = std::sqrt(v.dot(g * v));
  } while (norm < 0.2);
  v *= r / norm;

  SpherePoint sp;
  sp.p = TMPoint{x, v};
  sp.r = r;
  const TMScene s = make_scene(chart, sp.p);
  sp.basis = householder_complement(gamma_covector(s, w.radius));
  return sp;
}

double contact_check(const RiemannianChart& chart, const WeightSpec&, const SpherePoint& sp) {
  const int m = chart.dim;
  if (m < 2) throw GeometryError("contact_check: needs dim >= 2");

  const double gram = gram_volume(sp.basis);
  if (gram < 1e-10) throw GeometryError("contact_check: degenerate tangent basis");

  const TMScene s = make_scene(chart, sp.p);
  const AltForm mu = mu_form(s);
  const AltForm dmu = exterior_d(mu);
  AltForm top = mu;
  for (int i = 0; i < m - 1; ++i) top = wedge(top, dmu);
  return std::abs(alt_eval(top, sp.basis)) / gram;
}

TashiroStructure tashiro(const RiemannianChart& chart, double r_const, const SpherePoint& sp) {
  const TMScene s = make_scene(chart, sp.p);
  const int m = s.m();
  const int n2 = s.n();

  TashiroStructure ts;
  ts.gt = 0.25 * sasaki(s).G;
  const OneForms of = one_forms(s);
  ts.eta = of.mu / (2.0 * r_const);

  Mat mirror = Mat::Zero(n2, n2);            // theta - theta^t in the frame
  mirror.block(0, m, m, m) = -Mat::Identity(m, m);
  mirror.block(m, 0, m, m) = Mat::Identity(m, m);
  ts.phi = s.fp.F.v * mirror * s.fp.Finv.v -
           (1.0 / (r_const * r_const)) * xi_vector(s) * of.mu.transpose();

  Vec zf = Vec::Zero(n2);
  zf.head(m) = sp.p.v;
  ts.zeta = (2.0 / r_const) * from_frame(s, zf);
  return ts;
}

TashiroResiduals tashiro_residuals(const RiemannianChart& chart, double r_const,
                                   const SpherePoint& sp) {
  const TashiroStructure ts = tashiro(chart, r_const, sp);
  const TMScene s = make_scene(chart, sp.p);
  const AltForm dmu = exterior_d(mu_form(s));

  TashiroResiduals res;
  res.phi_zeta = (ts.phi * ts.zeta).cwiseAbs().maxCoeff();
  res.eta_zeta = std::abs(ts.eta.dot(ts.zeta) - 1.0);
  for (const Vec& b : sp.basis) {
    res.phi_sq = std::max(res.phi_sq,
                          (ts.phi * (ts.phi * b) + b - ts.zeta * ts.eta.dot(b)).cwiseAbs().maxCoeff());
    res.eta_flat = std::max(res.eta_flat, std::abs(ts.eta.dot(b) - ts.zeta.dot(ts.gt * b)));
  }
  for (const Vec& a : sp.basis) {
    for (const Vec& b : sp.basis) {
      const double gt_ab = a.dot(ts.gt * b);
      res.metric_compat =
          std::max(res.metric_compat, std::abs((ts.phi * a).dot(ts.gt * (ts.phi * b)) - gt_ab +
                                               ts.eta.dot(a) * ts.eta.dot(b)));
      const double deta = alt_eval(dmu, {a, b}) / (2.0 * r_const);
      res.deta = std::max(res.deta, std::abs(deta - 2.0 * a.dot(ts.gt * (ts.phi * b))));
    }
  }
  return res;
}

} // namespace tbg
