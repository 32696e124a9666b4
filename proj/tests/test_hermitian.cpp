#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "tbgeo/connection_tm.hpp"
#include "tbgeo/hermitian.hpp"

using namespace tbg;
using tbgtest::sample_box;
using tbgtest::sample_fiber;

namespace {

std::vector<std::pair<double, double>> box(int m, double a, double b) {
  return std::vector<std::pair<double, double>>(static_cast<size_t>(m), {a, b});
}

RiemannianChart chart_flat(int m, TorsionSpec t = TorsionSpec::none()) {
  std::vector<std::string> entries(static_cast<size_t>(m) * m, "0");
  for (int i = 0; i < m; ++i) entries[static_cast<size_t>(i) * m + i] = "1";
  return load_chart(m, entries, box(m, -1.0, 1.0), std::move(t), "flat");
}

RiemannianChart chart_sphere2(TorsionSpec t = TorsionSpec::none()) {
  std::string conf = "4/(1+x1^2+x2^2)^2";
  return load_chart(2, {conf, "0", "0", conf}, box(2, -0.8, 0.8), std::move(t), "sphere2");
}

RiemannianChart chart_generic3(TorsionSpec t = TorsionSpec::none()) {
  std::vector<std::string> e = {
      "1+0.1*sin(x1)", "0.05*x1*x2",    "0",
      "0.05*x1*x2",    "1+0.1*x3^2",    "0.02*x2",
      "0",             "0.02*x2",       "1.2+0.1*cos(x2)"};
  return load_chart(3, e, box(3, -0.7, 0.7), std::move(t), "generic3");
}

WeightSpec weights(int dim, const std::string& phi1, const std::string& phi2) {
  WeightSpec w = WeightSpec::unit(dim);
  w.phi1 = parse(phi1, dim);
  w.phi2 = parse(phi2, dim);
  return w;
}

AltForm random_form(std::mt19937_64& rng, int n, int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AltForm f = alt_zero(n, deg, 0);
  for (double& v : f.c) v = u(rng);
  return f;
}

Vec rand_vec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = u(rng);
  return out;
}

double max_coeff_diff(const AltForm& a, const AltForm& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.c.size(); ++i) worst = std::max(worst, std::abs(a.c[i] - b.c[i]));
  return worst;
}

// 1-form d(phi o pi) with one derivative level
AltForm base_differential(const TMScene& s, const Expr& phi) {
  const int m = s.m(), n = s.n();
  Jet2 j = eval_jet2(phi, s.p.x);
  AltForm out = alt_zero(n, 1, 1);
  for (int A = 0; A < m; ++A) {
    out.c[static_cast<size_t>(A)] = j.grad[A];
    for (int l = 0; l < m; ++l) out.d[static_cast<size_t>(l)][static_cast<size_t>(A)] = j.hess(l, A);
  }
  return out;
}

} // namespace

TEST_CASE("alternating algebra: wedge and evaluation") {
  std::mt19937_64 rng(80);
  const int n = 6;
  for (auto degs : {std::pair<int, int>{1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
    AltForm a = random_form(rng, n, degs.first);
    AltForm b = random_form(rng, n, degs.second);
    AltForm ab = wedge(a, b);
    AltForm ba = wedge(b, a);
    double sign = (degs.first * degs.second) % 2 == 0 ? 1.0 : -1.0;
    for (size_t i = 0; i < ab.c.size(); ++i) CHECK(std::abs(ab.c[i] - sign * ba.c[i]) <= 1e-14);
  }

  AltForm a = random_form(rng, n, 1);
  AltForm b = random_form(rng, n, 1);
  AltForm g = random_form(rng, n, 2);
  CHECK(max_coeff_diff(wedge(wedge(a, b), g), wedge(a, wedge(b, g))) <= 1e-14);

  // evaluation against the shuffle formula for 1-forms
  for (int trial = 0; trial < 4; ++trial) {
    Vec X = rand_vec(rng, n), Y = rand_vec(rng, n);
    double lhs = alt_eval(wedge(a, b), {X, Y});
    double ax = alt_eval(a, {X}), ay = alt_eval(a, {Y});
    double bx = alt_eval(b, {X}), by = alt_eval(b, {Y});
    CHECK(std::abs(lhs - (ax * by - ay * bx)) <= 1e-13);
    // antisymmetry of evaluation
    CHECK(std::abs(alt_eval(g, {X, Y}) + alt_eval(g, {Y, X})) <= 1e-13);
  }
}

TEST_CASE("exterior derivative: frozen example and d squared") {
  // alpha = u dx0 + w dx1 at a point with u = x0*x1, w = x1^2 + x0,
  // evaluated at (2, 3): d alpha = (dw/dx0 - du/dx1) dx0^dx1 = (1 - 2) = -1
  AltForm alpha = alt_zero(2, 1, 1);
  alpha.c = {6.0, 11.0};
  alpha.d[0] = {3.0, 1.0};
  alpha.d[1] = {2.0, 6.0};
  AltForm da = exterior_d(alpha);
  CHECK(da.deg == 2);
  CHECK(std::abs(da.c[0] - (-1.0)) <= 1e-15);

  // d(d mu) = 0 with real geometry data
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1", 3)));
  std::mt19937_64 rng(81);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(c, {x, v});
  AltForm ddmu = exterior_d(exterior_d(mu_form(s)));
  double worst = 0.0;
  for (double q : ddmu.c) worst = std::max(worst, std::abs(q));
  CHECK(worst <= 1e-11);
}

TEST_CASE("almost complex structure: algebra and compatibility") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.2*x2", 3)));
  WeightSpec w = weights(3, "0.15*x1", "0.1*x2^2-0.2*x3");
  std::mt19937_64 rng(82);
  for (int trial = 0; trial < 4; ++trial) {
    Vec x = sample_box(rng, c.domain);
    Vec v = sample_fiber(rng, 3);
    TMScene s = make_scene(c, {x, v});
    AlmostComplex ac = almost_complex(s, w);
    CHECK((ac.I.v * ac.I.v + Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-13);
    // derivative of I^2 vanishes too
    for (int l = 0; l < 6; ++l) {
      Mat dsq = ac.I.d[static_cast<size_t>(l)] * ac.I.v + ac.I.v * ac.I.d[static_cast<size_t>(l)];
      CHECK(dsq.cwiseAbs().maxCoeff() <= 1e-12);
    }
    MetricAtPoint M = weighted(s, w);
    CHECK((ac.I.v.transpose() * M.G * ac.I.v - M.G).cwiseAbs().maxCoeff() <= 1e-12);

    // frame blocks: I H_i = -e^{-psi} V_i, I V_i = e^{psi} H_i
    double psi = eval(w.phi2, x) - eval(w.phi1, x);
    Mat If = s.fp.Finv.v * ac.I.v * s.fp.F.v;
    Mat expect = Mat::Zero(6, 6);
    expect.block(0, 3, 3, 3) = std::exp(psi) * Mat::Identity(3, 3);
    expect.block(3, 0, 3, 3) = -std::exp(-psi) * Mat::Identity(3, 3);
    CHECK((If - expect).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("fundamental 2-forms") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.2*x2", 3)));
  WeightSpec w = weights(3, "0.15*x1", "0.1*x2^2");
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 4; ++trial) {
    Vec x = sample_box(rng, c.domain);
    Vec v = sample_fiber(rng, 3);
    TMScene s = make_scene(c, {x, v});
    AltForm ws = omega_form(s, w, OmegaKind::Sasaki);
    AltForm wg = omega_form(s, w, OmegaKind::Weighted);

    // mirror pairing in the adapted frame
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(alt_eval(ws, {s.fp.F.v.col(i), s.fp.F.v.col(3 + j)}) + s.base.g(i, j)) <=
              1e-13);
        CHECK(std::abs(alt_eval(ws, {s.fp.F.v.col(i), s.fp.F.v.col(j)})) <= 1e-13);
        CHECK(std::abs(alt_eval(ws, {s.fp.F.v.col(3 + i), s.fp.F.v.col(3 + j)})) <= 1e-13);
      }

    // conformal relation between the weighted and Sasaki forms
    double ebar = std::exp(eval(w.phi1, x) + eval(w.phi2, x));
    for (size_t r = 0; r < ws.c.size(); ++r) CHECK(std::abs(wg.c[r] - ebar * ws.c[r]) <= 1e-13);

    Vec X = rand_vec(rng, 6);
    CHECK(std::abs(alt_eval(wg, {X, X})) <= 1e-14);
  }
}

TEST_CASE("derivative identities of mu") {
  std::mt19937_64 rng(84);
  RiemannianChart charts[] = {chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.1*x3", 3))),
                              chart_sphere2(TorsionSpec::vectorial(parse("0.4*x2", 2))),
                              chart_generic3()};
  for (const auto& c : charts)
    for (int trial = 0; trial < 3; ++trial) {
      Vec x = sample_box(rng, c.domain);
      Vec v = sample_fiber(rng, c.dim);
      TMScene s = make_scene(c, {x, v});
      WeightSpec unit = WeightSpec::unit(c.dim);
      AltForm dmu = exterior_d(mu_form(s));
      AltForm ws = omega_form(s, unit, OmegaKind::Sasaki);
      AltForm mt = mu_circ_t(s);
      double worst = 0.0;
      for (size_t r = 0; r < dmu.c.size(); ++r)
        worst = std::max(worst, std::abs(dmu.c[r] - ws.c[r] - mt.c[r]));
      CHECK(worst <= 1e-10);
      if (c.torsion.is_none()) {
        double w2 = 0.0;
        for (size_t r = 0; r < dmu.c.size(); ++r)
          w2 = std::max(w2, std::abs(dmu.c[r] - ws.c[r]));
        CHECK(w2 <= 1e-10);
      }
    }
}

TEST_CASE("frame components of d omega sasaki") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.2*x2^2", 3)));
  std::mt19937_64 rng(85);
  WeightSpec unit = WeightSpec::unit(3);
  for (int trial = 0; trial < 3; ++trial) {
    Vec x = sample_box(rng, c.domain);
    Vec v = sample_fiber(rng, 3);
    TMScene s = make_scene(c, {x, v});
    AltForm dws = exterior_d(omega_form(s, unit, OmegaKind::Sasaki));
    auto H = [&](int i) { return Vec(s.fp.F.v.col(i)); };
    auto V = [&](int i) { return Vec(s.fp.F.v.col(3 + i)); };
    // mixed slots carry minus the lowered torsion
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          CHECK(std::abs(alt_eval(dws, {H(i), H(j), V(k)}) + s.tors.t(i, j, k)) <= 1e-10);
          CHECK(std::abs(alt_eval(dws, {H(i), V(j), V(k)})) <= 1e-12);
          CHECK(std::abs(alt_eval(dws, {V(i), V(j), V(k)})) <= 1e-12);
        }
    // horizontal slots carry the cyclic curvature pairing
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          auto pair_rv = [&](int a, int b, int cth) {
            Vec r = r_xi(s, H(a), H(b));
            Vec rf = frame_components(s, r);
            return rf.tail(3).dot(s.base.g.col(cth));
          };
          double expect = pair_rv(k, i, j) + pair_rv(j, k, i) + pair_rv(i, j, k);
          CHECK(std::abs(alt_eval(dws, {H(i), H(j), H(k)}) - expect) <= 1e-10);
        }
  }
}

TEST_CASE("conformal formula for d omega weighted") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.2*x3", 3)));
  WeightSpec w = weights(3, "0.1*x1+0.05*x2", "0.2*x2");
  std::mt19937_64 rng(86);
  for (int trial = 0; trial < 3; ++trial) {
    Vec x = sample_box(rng, c.domain);
    Vec v = sample_fiber(rng, 3);
    TMScene s = make_scene(c, {x, v});
    AltForm dwg = exterior_d(omega_form(s, w, OmegaKind::Weighted));
    AltForm ws = omega_form(s, w, OmegaKind::Sasaki);
    AltForm dws = exterior_d(ws);
    Expr psibar = parse(to_string(w.phi1) + "+" + to_string(w.phi2), 3);
    AltForm dbar = base_differential(s, psibar);
    AltForm rhsw = wedge(dbar, ws);
    double ebar = std::exp(eval(psibar, x));
    double worst = 0.0;
    for (size_t r = 0; r < dwg.c.size(); ++r)
      worst = std::max(worst, std::abs(dwg.c[r] - ebar * (rhsw.c[r] + dws.c[r])));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("nijenhuis tensor: structure and integrability directions") {
  std::mt19937_64 rng(87);

  // bilinearity and antisymmetry
  RiemannianChart c = chart_sphere2();
  WeightSpec w = weights(2, "0.1*x1", "0.2*x2");
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 2);
  TMScene s = make_scene(c, {x, v});
  Vec X = rand_vec(rng, 4), Y = rand_vec(rng, 4);
  Vec direct = nijenhuis(s, w, X, Y);
  Vec assembled = Vec::Zero(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      assembled += X[a] * Y[b] * nijenhuis(s, w, Vec::Unit(4, a), Vec::Unit(4, b));
  CHECK((direct - assembled).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((direct + nijenhuis(s, w, Y, X)).cwiseAbs().maxCoeff() <= 1e-13);

  // integrable configuration: flat connection with matched vectorial torsion
  RiemannianChart fl = chart_flat(2, TorsionSpec::vectorial(parse("x1", 2)));
  WeightSpec wi = weights(2, "0", "x1");
  for (int trial = 0; trial < 5; ++trial) {
    Vec xf = sample_box(rng, fl.domain);
    Vec vf = sample_fiber(rng, 2);
    CHECK(flatness_residual(fl, {xf, vf}) <= 1e-12);
    Jet2 jpsi = eval_jet2(parse("x1", 2), xf);
    CHECK(torsion_match_residual(fl, {xf, vf}, jpsi.grad) <= 1e-14);
    CHECK(nijenhuis_max(fl, wi, {xf, vf}) <= 1e-8);
  }

  // broken hypotheses: curved base, or unmatched nonconstant psi
  double worst_sphere = 0.0, worst_psi = 0.0;
  RiemannianChart fl0 = chart_flat(2);
  for (int trial = 0; trial < 5; ++trial) {
    Vec xs = sample_box(rng, c.domain);
    Vec vs = sample_fiber(rng, 2);
    worst_sphere = std::max(worst_sphere, nijenhuis_max(c, w, {xs, vs}));
    Vec xf = sample_box(rng, fl0.domain);
    Vec vf = sample_fiber(rng, 2);
    worst_psi = std::max(worst_psi, nijenhuis_max(fl0, wi, {xf, vf}));
  }
  CHECK(worst_sphere >= 1e-3);
  CHECK(worst_psi >= 1e-3);
}

TEST_CASE("symplectic criterion for the weighted form") {
  std::mt19937_64 rng(88);

  // torsion matching the weight sum kills d omega; the matching vectorial
  // potential is minus the sum of the weight exponents
  WeightSpec w = weights(3, "0.1*x1", "0.2*x2");
  RiemannianChart cm = chart_generic3(TorsionSpec::vectorial(parse("-0.1*x1-0.2*x2", 3)));
  // torsion-free with constant product f1 f2
  WeightSpec wc = weights(3, "0.15*x2", "-0.15*x2");
  RiemannianChart c0 = chart_generic3();
  // torsion-free with nonconstant product
  WeightSpec wb = weights(3, "0.1*x1", "0.1*x1");

  double worst_bad = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    Vec x = sample_box(rng, cm.domain);
    Vec v = sample_fiber(rng, 3);
    CHECK(domega_max(cm, w, {x, v}, OmegaKind::Weighted) <= 1e-9);
    CHECK(domega_max(c0, wc, {x, v}, OmegaKind::Weighted) <= 1e-9);
    worst_bad = std::max(worst_bad, domega_max(c0, wb, {x, v}, OmegaKind::Weighted));
  }
  CHECK(worst_bad >= 1e-4);
}

TEST_CASE("flat constant configuration is fully degenerate") {
  RiemannianChart fl = chart_flat(3);
  WeightSpec w = weights(3, "0.3", "-0.2");
  std::mt19937_64 rng(89);
  Vec x = sample_box(rng, fl.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(fl, {x, v});
  CHECK(nijenhuis_max(fl, w, {x, v}) <= 1e-12);
  CHECK(domega_max(fl, w, {x, v}, OmegaKind::Weighted) <= 1e-12);
  MetricAtPoint M = weighted(s, w);
  for (int l = 0; l < 6; ++l) CHECK(M.d(l).cwiseAbs().maxCoeff() <= 1e-12);
}
