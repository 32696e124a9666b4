#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "tbgeo/tm_bundle.hpp"

using namespace tbg;
using tbgtest::rel_err;
using tbgtest::sample_box;
using tbgtest::sample_fiber;

namespace {

std::vector<std::pair<double, double>> box(int m, double a, double b) {
  return std::vector<std::pair<double, double>>(static_cast<size_t>(m), {a, b});
}

RiemannianChart chart_generic3(TorsionSpec t = TorsionSpec::none()) {
  std::vector<std::string> e = {
      "1+0.1*sin(x1)", "0.05*x1*x2",    "0",
      "0.05*x1*x2",    "1+0.1*x3^2",    "0.02*x2",
      "0",             "0.02*x2",       "1.2+0.1*cos(x2)"};
  return load_chart(3, e, box(3, -0.7, 0.7), std::move(t), "generic3");
}

// Central difference of a scalar scene functional along induced coordinate l
// (x directions first, then v).
double fd_scene(const RiemannianChart& c, const Vec& x, const Vec& v, int l,
                const std::function<double(const TMScene&)>& f, double h = 1e-5) {
  const int m = c.dim;
  Vec xp = x, vp = v, xm = x, vm = v;
  if (l < m) {
    xp[l] += h;
    xm[l] -= h;
  } else {
    vp[l - m] += h;
    vm[l - m] -= h;
  }
  return (f(make_scene(c, {xp, vp})) - f(make_scene(c, {xm, vm}))) / (2.0 * h);
}

void check_jet_derivatives(const RiemannianChart& c, const Vec& x, const Vec& v,
                           const std::function<TMJet1(const TMScene&)>& jet_fn, double tol) {
  TMScene s = make_scene(c, {x, v});
  TMJet1 j = jet_fn(s);
  for (int l = 0; l < s.n(); ++l) {
    double fd = fd_scene(c, x, v, l, [&](const TMScene& sc) { return jet_fn(sc).val; });
    CHECK(rel_err(j.d[l], fd) <= tol);
  }
}

} // namespace

TEST_CASE("adapted frame matrices are mutually inverse to second order") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.2*x2^2", 3)));
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    Vec x = sample_box(rng, c.domain);
    Vec v = sample_fiber(rng, 3);
    TMScene s = make_scene(c, {x, v});
    JetMat prod = s.fp.F * s.fp.Finv;
    CHECK((prod.v - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-13);
    for (const Mat& d : prod.d) CHECK(d.cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("frame matrix derivatives agree with central differences") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.2*x2^2", 3)));
  std::mt19937_64 rng(32);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(c, {x, v});
  for (int r = 0; r < 6; ++r)
    for (int col = 0; col < 6; ++col)
      for (int l = 0; l < 6; ++l) {
        double fd = fd_scene(c, x, v, l, [&](const TMScene& sc) { return sc.fp.F.v(r, col); });
        CHECK(rel_err(s.fp.F.d[static_cast<size_t>(l)](r, col), fd) <= 1e-7);
      }
}

TEST_CASE("structure equations of the adapted frame") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.2*x2^2", 3)));
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 3; ++trial) {
    Vec x = sample_box(rng, c.domain);
    Vec v = sample_fiber(rng, 3);
    TMScene s = make_scene(c, {x, v});
    const int m = 3;

    // [H_k, H_l] is vertical with components -R^i_{jkl} v^j
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        Vec br = lie_bracket(field_frame_h(s, k), field_frame_h(s, l));
        for (int i = 0; i < m; ++i) CHECK(std::abs(br[i]) <= 1e-12);
        for (int i = 0; i < m; ++i) {
          double expect = 0.0;
          for (int j = 0; j < m; ++j) expect -= s.R(i, j, k, l) * v[j];
          CHECK(std::abs(br[m + i] - expect) <= 1e-11);
        }
      }

    // [H_k, V_i] is vertical with components Gamma^a_{ki}
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i) {
        Vec br = lie_bracket(field_frame_h(s, k), field_frame_v(s, i));
        for (int a = 0; a < m; ++a) {
          CHECK(std::abs(br[a]) <= 1e-13);
          CHECK(std::abs(br[m + a] - s.conn.gamma(a, k, i)) <= 1e-12);
        }
      }

    // [V_i, V_j] = 0
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        CHECK(lie_bracket(field_frame_v(s, i), field_frame_v(s, j)).cwiseAbs().maxCoeff() <=
              1e-14);
  }
}

TEST_CASE("frame component round-trip and splitting") {
  RiemannianChart c = chart_generic3();
  std::mt19937_64 rng(34);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(c, {x, v});

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vec X(6);
    for (int i = 0; i < 6; ++i) X[i] = u(rng);
    Vec b = frame_components(s, X);
    CHECK((from_frame(s, b) - X).cwiseAbs().maxCoeff() <= 1e-13);

    auto [h, vv] = split(s, X);
    CHECK((h + vv - X).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(vv.head(3).cwiseAbs().maxCoeff() <= 1e-14);
    // horizontal part determined by its base projection
    Vec lifted = h.head(3);
    Vec expect_v = Vec::Zero(3);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) expect_v[i] -= lifted[k] * v[j] * s.conn.gamma(i, k, j);
    CHECK((h.tail(3) - expect_v).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("vertical and horizontal endomorphisms") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1", 3)));
  std::mt19937_64 rng(35);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(c, {x, v});
  JetMat th = theta_mat(s), tht = theta_t_mat(s);

  for (int k = 0; k < 3; ++k) {
    Vec Hk = field_frame_h(s, k).values();
    Vec Vk = field_frame_v(s, k).values();
    CHECK((th.v * Hk - Vk).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((th.v * Vk).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((tht.v * Vk - Hk).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((tht.v * Hk).cwiseAbs().maxCoeff() <= 1e-13);
  }
  CHECK(((th.v * th.v)).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((th.v * tht.v + tht.v * th.v - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-13);

  // xi = theta(geodesic spray); here just: theta^t xi is horizontal with base part v
  Vec xi = xi_vector(s);
  Vec hx = tht.v * xi;
  CHECK((hx.head(3) - v).cwiseAbs().maxCoeff() <= 1e-14);

  // derivative of theta agrees with central differences
  for (int r = 0; r < 6; ++r)
    for (int col = 0; col < 6; ++col)
      for (int l = 0; l < 6; ++l) {
        double fd =
            fd_scene(c, x, v, l, [&](const TMScene& sc) { return theta_mat(sc).v(r, col); });
        CHECK(rel_err(th.d[static_cast<size_t>(l)](r, col), fd) <= 1e-7);
      }
}

TEST_CASE("canonical one-forms") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.2*x2^2", 3)));
  RiemannianChart c0 = chart_generic3();
  std::mt19937_64 rng(36);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(c, {x, v});
  OneForms f = one_forms(s);

  for (int i = 0; i < 3; ++i) {
    Vec Hi = field_frame_h(s, i).values();
    Vec Vi = field_frame_v(s, i).values();
    CHECK(std::abs(f.mu.dot(Hi) - s.gv[i]) <= 1e-13);
    CHECK(std::abs(f.mu.dot(Vi)) <= 1e-13);
    CHECK(std::abs(f.xi_flat.dot(Vi) - s.gv[i]) <= 1e-13);
    CHECK(std::abs(f.xi_flat.dot(Hi)) <= 1e-13);
  }

  // mu in coordinates is (g v, 0), independent of the connection
  CHECK((f.mu.head(3) - s.gv).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(f.mu.tail(3).cwiseAbs().maxCoeff() <= 1e-14);
  TMScene s0 = make_scene(c0, {x, v});
  OneForms f0 = one_forms(s0);
  CHECK((f.mu - f0.mu).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("scalar jet atoms differentiate correctly") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1+0.2*x2^2", 3)));
  std::mt19937_64 rng(37);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  Expr f = parse("sin(x1)*x2+0.3*x3^2", 3);

  for (int i = 0; i < 3; ++i) {
    check_jet_derivatives(c, x, v, [&](const TMScene& s) { return jet_v(s, i); }, 1e-9);
    check_jet_derivatives(c, x, v, [&](const TMScene& s) { return jet_gv(s, i); }, 1e-7);
    for (int j = 0; j < 3; ++j) {
      check_jet_derivatives(c, x, v, [&](const TMScene& s) { return jet_g(s, i, j); }, 1e-7);
      check_jet_derivatives(c, x, v, [&](const TMScene& s) { return jet_ginv(s, i, j); }, 1e-7);
      for (int k = 0; k < 3; ++k)
        check_jet_derivatives(c, x, v, [&](const TMScene& s) { return jet_gamma(s, i, j, k); },
                              1e-6);
    }
  }
  check_jet_derivatives(c, x, v, [&](const TMScene& s) { return jet_base_scalar(s, f); }, 1e-7);

  // dphi is the fiberwise pairing of the base differential with v
  TMScene s = make_scene(c, {x, v});
  Expr phi = parse("0.3*x1+0.2*x2^2", 3);
  double h = 1e-6;
  double along = (eval(phi, x + h * v) - eval(phi, x - h * v)) / (2.0 * h);
  CHECK(rel_err(dphi(s, phi), along) <= 1e-8);
}

TEST_CASE("field helpers and frame component jets") {
  RiemannianChart c = chart_generic3(TorsionSpec::vectorial(parse("0.3*x1", 3)));
  std::mt19937_64 rng(38);
  Vec x = sample_box(rng, c.domain);
  Vec v = sample_fiber(rng, 3);
  TMScene s = make_scene(c, {x, v});

  for (int k = 0; k < 3; ++k) {
    // frame components of H_k are the constant basis vector e_k
    auto comps = frame_components_jets(s, field_frame_h(s, k));
    for (int A = 0; A < 6; ++A) {
      CHECK(std::abs(comps[static_cast<size_t>(A)].val - (A == k ? 1.0 : 0.0)) <= 1e-13);
      CHECK(comps[static_cast<size_t>(A)].d.cwiseAbs().maxCoeff() <= 1e-12);
    }
    // theta maps the H_k field onto the V_k field
    TMField img = apply(theta_mat(s), field_frame_h(s, k));
    CHECK((img.values() - field_frame_v(s, k).values()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}
