#include "tbgeo/hermitian.hpp"

#include <Eigen/Dense>
#include <cassert>
#include <cmath>

namespace tbg {

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

AltForm alt_zero(int n, int deg, int nder) {
  AltForm f;
  f.n = n;
  f.deg = deg;
  f.nder = nder;
  const size_t count = static_cast<size_t>(binom(n, deg));
  f.c.assign(count, 0.0);
  if (nder >= 1) f.d.assign(static_cast<size_t>(n), std::vector<double>(count, 0.0));
  if (nder >= 2)
    f.dd.assign(static_cast<size_t>(n),
                std::vector<std::vector<double>>(static_cast<size_t>(n),
                                                 std::vector<double>(count, 0.0)));
  return f;
}

int alt_rank(int n, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  int rank = 0, prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int j = prev + 1; j < idx[static_cast<size_t>(i)]; ++j) rank += binom(n - 1 - j, k - 1 - i);
    prev = idx[static_cast<size_t>(i)];
  }
  return rank;
}

namespace {

// lexicographic successor of an increasing tuple; false when exhausted
bool next_combo(int n, std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<size_t>(i)] < n - k + i) {
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_combo(int k) {
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  return idx;
}

} // namespace

double& alt_coeff(AltForm& f, const std::vector<int>& idx) {
  return f.c[static_cast<size_t>(alt_rank(f.n, idx))];
}

double alt_coeff(const AltForm& f, const std::vector<int>& idx) {
  return f.c[static_cast<size_t>(alt_rank(f.n, idx))];
}

double alt_eval(const AltForm& f, const std::vector<Vec>& args) {
  assert(static_cast<int>(args.size()) == f.deg);
  if (f.deg == 0) return f.c[0];
  double out = 0.0;
  std::vector<int> idx = first_combo(f.deg);
  size_t r = 0;
  do {
    Mat minor(f.deg, f.deg);
    for (int a = 0; a < f.deg; ++a)
      for (int b = 0; b < f.deg; ++b) minor(a, b) = args[static_cast<size_t>(b)][idx[static_cast<size_t>(a)]];
    out += f.c[r] * minor.determinant();
    ++r;
  } while (next_combo(f.n, idx));
  return out;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  assert(a.n == b.n);
  const int n = a.n, K = a.deg + b.deg;
  const int nder = std::min(a.nder, b.nder);
  if (K > n) return alt_zero(n, 0, nder);
  AltForm out = alt_zero(n, K, nder);
  std::vector<int> combo = first_combo(K);
  size_t rk = 0;
  std::vector<int> ia(static_cast<size_t>(a.deg)), ib(static_cast<size_t>(b.deg));
  do {
    // split the K slots into a-slots and b-slots in every shuffle
    std::vector<int> pos = first_combo(a.deg);
    bool more = a.deg > 0;
    do {
      int sign = 1;
      size_t pa = 0, pb = 0;
      for (int i = 0; i < K; ++i) {
        bool in_a = pa < static_cast<size_t>(a.deg) &&
                    pos[pa] == i;
        if (in_a) {
          if ((i - static_cast<int>(pa)) % 2 != 0) sign = -sign;
          ia[pa++] = combo[static_cast<size_t>(i)];
        } else {
          ib[pb++] = combo[static_cast<size_t>(i)];
        }
      }
      const size_t ra = static_cast<size_t>(alt_rank(n, ia));
      const size_t rb = static_cast<size_t>(alt_rank(n, ib));
      out.c[rk] += sign * a.c[ra] * b.c[rb];
      for (int l = 0; l < n && nder >= 1; ++l)
        out.d[static_cast<size_t>(l)][rk] +=
            sign * (a.d[static_cast<size_t>(l)][ra] * b.c[rb] +
                    a.c[ra] * b.d[static_cast<size_t>(l)][rb]);
      if (nder >= 2)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            out.dd[static_cast<size_t>(p)][static_cast<size_t>(q)][rk] +=
                sign * (a.dd[static_cast<size_t>(p)][static_cast<size_t>(q)][ra] * b.c[rb] +
                        a.d[static_cast<size_t>(p)][ra] * b.d[static_cast<size_t>(q)][rb] +
                        a.d[static_cast<size_t>(q)][ra] * b.d[static_cast<size_t>(p)][rb] +
                        a.c[ra] * b.dd[static_cast<size_t>(p)][static_cast<size_t>(q)][rb]);
      more = a.deg > 0 && next_combo(K, pos);
    } while (more);
    ++rk;
  } while (next_combo(n, combo));
  return out;
}

AltForm exterior_d(const AltForm& f) {
  assert(f.nder >= 1);
  const int n = f.n, K = f.deg + 1;
  AltForm out = alt_zero(n, K, f.nder - 1);
  if (K > n) return alt_zero(n, 0, f.nder - 1);
  std::vector<int> combo = first_combo(K);
  size_t rk = 0;
  std::vector<int> rest(static_cast<size_t>(f.deg));
  do {
    for (int i = 0; i < K; ++i) {
      size_t p = 0;
      for (int j = 0; j < K; ++j)
        if (j != i) rest[p++] = combo[static_cast<size_t>(j)];
      const size_t rr = static_cast<size_t>(alt_rank(n, rest));
      const int dir = combo[static_cast<size_t>(i)];
      const int sign = (i % 2 == 0) ? 1 : -1;
      out.c[rk] += sign * f.d[static_cast<size_t>(dir)][rr];
      if (f.nder >= 2)
        for (int l = 0; l < n; ++l)
          out.d[static_cast<size_t>(l)][rk] +=
              sign * f.dd[static_cast<size_t>(dir)][static_cast<size_t>(l)][rr];
    }
    ++rk;
  } while (next_combo(n, combo));
  return out;
}

namespace {

TMJet1 jet_exp(const TMJet1& a) { return {std::exp(a.val), std::exp(a.val) * a.d}; }

} // namespace

AlmostComplex almost_complex(const TMScene& s, const WeightSpec& w) {
  TMJet1 psi = jet_base_scalar(s, w.phi2) - jet_base_scalar(s, w.phi1);
  TMJet1 ep = jet_exp(psi);
  TMJet1 em = jet_exp(-psi);
  JetMat I = ep * theta_t_mat(s) + TMJet1{-em.val, -em.d} * theta_mat(s);
  return {I};
}

AlmostComplex almost_complex(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p) {
  return almost_complex(make_scene(chart, p), w);
}

AltForm omega_form(const TMScene& s, const WeightSpec& w, OmegaKind kind) {
  const int n = s.n();
  WeightSpec unit = WeightSpec::unit(s.m());
  const WeightSpec& used = (kind == OmegaKind::Sasaki) ? unit : w;
  AlmostComplex ac = almost_complex(s, used);
  MetricAtPoint M = (kind == OmegaKind::Sasaki) ? sasaki(s) : weighted(s, w);
  Mat W = ac.I.v.transpose() * M.G;
  std::vector<Mat> dW(static_cast<size_t>(n));
  for (int l = 0; l < n; ++l)
    dW[static_cast<size_t>(l)] =
        ac.I.d[static_cast<size_t>(l)].transpose() * M.G + ac.I.v.transpose() * M.d(l);
  AltForm out = alt_zero(n, 2, 1);
  std::vector<int> idx(2);
  for (int A = 0; A < n; ++A)
    for (int B = A + 1; B < n; ++B) {
      idx[0] = A;
      idx[1] = B;
      const size_t r = static_cast<size_t>(alt_rank(n, idx));
      out.c[r] = W(A, B);
      for (int l = 0; l < n; ++l) out.d[static_cast<size_t>(l)][r] = dW[static_cast<size_t>(l)](A, B);
    }
  return out;
}

AltForm omega_form(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                   OmegaKind kind) {
  return omega_form(make_scene(chart, p), w, kind);
}

AltForm mu_form(const TMScene& s) {
  const int m = s.m(), n = s.n();
  AltForm out = alt_zero(n, 1, 2);
  for (int A = 0; A < m; ++A) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += s.base.g(A, j) * s.p.v[j];
    out.c[static_cast<size_t>(A)] = acc;
    for (int l = 0; l < m; ++l) {
      double dacc = 0.0;
      for (int j = 0; j < m; ++j) dacc += s.base.dg(l, A, j) * s.p.v[j];
      out.d[static_cast<size_t>(l)][static_cast<size_t>(A)] = dacc;
      for (int q = 0; q < m; ++q) {
        double h = 0.0;
        for (int j = 0; j < m; ++j) h += s.base.ddg(l, q, A, j) * s.p.v[j];
        out.dd[static_cast<size_t>(l)][static_cast<size_t>(q)][static_cast<size_t>(A)] = h;
      }
      for (int j = 0; j < m; ++j) {
        out.dd[static_cast<size_t>(l)][static_cast<size_t>(m + j)][static_cast<size_t>(A)] =
            s.base.dg(l, A, j);
        out.dd[static_cast<size_t>(m + j)][static_cast<size_t>(l)][static_cast<size_t>(A)] =
            s.base.dg(l, A, j);
      }
    }
    for (int j = 0; j < m; ++j)
      out.d[static_cast<size_t>(m + j)][static_cast<size_t>(A)] = s.base.g(A, j);
  }
  return out;
}

AltForm mu_form(const RiemannianChart& chart, const TMPoint& p) {
  return mu_form(make_scene(chart, p));
}

AltForm mu_circ_t(const TMScene& s) {
  const int m = s.m(), n = s.n();
  // frame-level horizontal 2-form t(j,k,c) v^c, pulled to coordinates
  Mat Q = Mat::Zero(n, n);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double acc = 0.0;
      for (int c = 0; c < m; ++c) acc += s.tors.t(j, k, c) * s.p.v[c];
      Q(j, k) = acc;
    }
  Mat Qc = s.fp.Finv.v.transpose() * Q * s.fp.Finv.v;
  AltForm out = alt_zero(n, 2, 0);
  std::vector<int> idx(2);
  for (int A = 0; A < n; ++A)
    for (int B = A + 1; B < n; ++B) {
      idx[0] = A;
      idx[1] = B;
      alt_coeff(out, idx) = Qc(A, B);
    }
  return out;
}

AltForm mu_circ_t(const RiemannianChart& chart, const TMPoint& p) {
  return mu_circ_t(make_scene(chart, p));
}

Vec nijenhuis(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y) {
  const int n = s.n();
  AlmostComplex ac = almost_complex(s, w);
  const Mat& I = ac.I.v;
  auto dI = [&](const Vec& U) {
    Mat out = Mat::Zero(n, n);
    for (int b = 0; b < n; ++b) out += U[b] * ac.I.d[static_cast<size_t>(b)];
    return out;
  };
  Vec ix = I * X, iy = I * Y;
  return dI(ix) * Y - dI(iy) * X + I * (dI(Y) * X) - I * (dI(X) * Y);
}

Vec nijenhuis(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
              const Vec& Y) {
  return nijenhuis(make_scene(chart, p), w, X, Y);
}

double nijenhuis_max(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  const int n = s.n();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      worst = std::max(worst,
                       nijenhuis(s, w, Vec::Unit(n, a), Vec::Unit(n, b)).cwiseAbs().maxCoeff());
  return worst;
}

double domega_max(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                  OmegaKind kind) {
  TMScene s = make_scene(chart, p);
  AltForm dw = exterior_d(omega_form(s, w, kind));
  double worst = 0.0;
  for (double v : dw.c) worst = std::max(worst, std::abs(v));
  return worst;
}

double flatness_residual(const RiemannianChart& chart, const TMPoint& p) {
  TMScene s = make_scene(chart, p);
  return max_abs(s.R);
}

double torsion_match_residual(const TMScene& s, const Vec& grad_potential) {
  const int m = s.m();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double expect = grad_potential[i] * s.base.g(j, k) - grad_potential[j] * s.base.g(i, k);
        worst = std::max(worst, std::abs(s.tors.t(i, j, k) - expect));
      }
  return worst;
}

double torsion_match_residual(const RiemannianChart& chart, const TMPoint& p,
                              const Vec& grad_potential) {
  return torsion_match_residual(make_scene(chart, p), grad_potential);
}

} // namespace tbg
