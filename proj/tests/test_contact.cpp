#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "tbgeo/contact.hpp"

using namespace tbg;
using tbgtest::sample_box;

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

WeightSpec unit_with_radius(int dim, const std::string& r) {
  WeightSpec w = WeightSpec::unit(dim);
  w.radius = parse(r, dim);
  return w;
}

// Euclidean-orthonormal frame of R^m whose first vector is v/|v|.
std::vector<Vec> frame_from(const Vec& v) {
  const int m = static_cast<int>(v.size());
  Vec q = v.normalized();
  int k = 0;
  q.cwiseAbs().maxCoeff(&k);
  const double sgn = q[k] >= 0.0 ? 1.0 : -1.0;
  Vec u = q;
  u[k] += sgn;
  Mat H = Mat::Identity(m, m) - (2.0 / u.squaredNorm()) * (u * u.transpose());
  std::vector<Vec> frame;
  frame.push_back(q);
  for (int j = 0; j < m; ++j)
    if (j != k) frame.push_back(H.col(j));
  return frame;
}

} // namespace

TEST_CASE("sphere samples live on the radius sphere with a kernel basis") {
  std::mt19937_64 rng(71);

  RiemannianChart flat = chart_flat(2);
  WeightSpec wu = WeightSpec::unit(2);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x = sample_box(rng, flat.domain);
    SpherePoint sp = sphere_sample(flat, wu, x, 1000 + static_cast<std::uint64_t>(trial));
    CHECK(sp.r == 1.0);
    CHECK(std::abs(sp.p.v.norm() - 1.0) <= 1e-14);
    CHECK(sp.basis.size() == 3);
  }

  RiemannianChart chart = chart_sphere2(TorsionSpec::vectorial(parse("x1", 2)));
  WeightSpec w = unit_with_radius(2, "1+0.2*sin(x1)");
  for (int trial = 0; trial < 20; ++trial) {
    Vec x = sample_box(rng, chart.domain);
    SpherePoint sp = sphere_sample(chart, w, x, 7000 + static_cast<std::uint64_t>(trial));
    Mat g = base_point(chart, x).g;
    CHECK(std::abs(std::sqrt(sp.p.v.dot(g * sp.p.v)) - eval(w.radius, x)) <= 1e-13);

    TMScene s = make_scene(chart, sp.p);
    Vec gamma = gamma_covector(s, w.radius);
    REQUIRE(sp.basis.size() == 3);
    for (const Vec& b : sp.basis) {
      CHECK(std::abs(gamma.dot(b)) <= 1e-12);
      CHECK(std::abs(b.norm() - 1.0) <= 1e-13);
    }
    // dr is horizontal: the vertical components of the kernel covector are
    // exactly those of xi^flat
    Vec xi_flat = one_forms(s).xi_flat;
    CHECK((gamma.tail(2) - xi_flat.tail(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(gamma.tail(2).cwiseAbs().maxCoeff() > 0.1);
  }

  // reproducible for a fixed seed
  Vec x0 = Vec::Zero(2);
  SpherePoint a = sphere_sample(chart, w, x0, 42);
  SpherePoint b = sphere_sample(chart, w, x0, 42);
  CHECK((a.p.v - b.p.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("contact value of the flat unit bundle is exactly one") {
  RiemannianChart flat = chart_flat(2);
  WeightSpec wu = WeightSpec::unit(2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x = sample_box(rng, flat.domain);
    SpherePoint sp = sphere_sample(flat, wu, x, static_cast<std::uint64_t>(trial));
    double val = contact_check(flat, wu, sp);
    CHECK(val > 1e-6);
    CHECK(val == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("contact nondegeneracy survives variable radius, torsion and curvature") {
  std::mt19937_64 rng(17);

  RiemannianChart chart = chart_sphere2(TorsionSpec::vectorial(parse("x1", 2)));
  WeightSpec w = unit_with_radius(2, "1+0.2*sin(x1)");
  for (int trial = 0; trial < 100; ++trial) {
    Vec x = sample_box(rng, chart.domain);
    SpherePoint sp = sphere_sample(chart, w, x, 31 * static_cast<std::uint64_t>(trial) + 7);
    CHECK(contact_check(chart, w, sp) > 1e-6);
  }

  RiemannianChart flat3 = chart_flat(3, TorsionSpec::vectorial(parse("0.5*x2", 3)));
  WeightSpec w3 = unit_with_radius(3, "1+0.1*x1^2");
  for (int trial = 0; trial < 25; ++trial) {
    Vec x = sample_box(rng, flat3.domain);
    SpherePoint sp = sphere_sample(flat3, w3, x, 900 + static_cast<std::uint64_t>(trial));
    CHECK(contact_check(flat3, w3, sp) > 1e-6);
  }
}

TEST_CASE("top form value in the adapted basis") {
  // flat unit-radius case: mu ^ (d mu)^n on (H e_0 .. H e_n, V e_1 .. V e_n)
  // with e_0 = v equals (-1)^{n(n+1)/2} n!
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 2; m <= 4; ++m) {
    RiemannianChart flat = chart_flat(m);
    Vec x = Vec::Zero(m), v(m);
    for (int i = 0; i < m; ++i) {
      x[i] = 0.3 * u(rng);
      v[i] = u(rng);
    }
    v.normalize();

    TMScene s = make_scene(flat, TMPoint{x, v});
    std::vector<Vec> frame = frame_from(v);
    std::vector<Vec> basis;
    for (int a = 0; a < m; ++a) {
      Vec b = Vec::Zero(2 * m);
      b.head(m) = frame[static_cast<size_t>(a)];
      basis.push_back(b);
    }
    for (int i = 1; i < m; ++i) {
      Vec b = Vec::Zero(2 * m);
      b.tail(m) = frame[static_cast<size_t>(i)];
      basis.push_back(b);
    }

    AltForm mu = mu_form(s);
    AltForm dmu = exterior_d(mu);
    AltForm top = mu;
    for (int i = 0; i < m - 1; ++i) top = wedge(top, dmu);

    const int n = m - 1;
    double expected = (n * (n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    for (int i = 2; i <= n; ++i) expected *= i;
    CHECK(alt_eval(top, basis) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("contact verdict is invariant under change of tangent basis") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  RiemannianChart chart = chart_sphere2(TorsionSpec::vectorial(parse("x1", 2)));
  WeightSpec w = unit_with_radius(2, "1+0.2*sin(x1)");
  for (int trial = 0; trial < 10; ++trial) {
    Vec x = sample_box(rng, chart.domain);
    SpherePoint sp = sphere_sample(chart, w, x, 600 + static_cast<std::uint64_t>(trial));
    double ref = contact_check(chart, w, sp);

    const int k = static_cast<int>(sp.basis.size());
    Mat R(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) R(i, j) = u(rng) + (i == j ? 2.0 : 0.0);
    SpherePoint mixed = sp;
    for (int j = 0; j < k; ++j) {
      Vec b = Vec::Zero(4);
      for (int i = 0; i < k; ++i) b += R(i, j) * sp.basis[static_cast<size_t>(i)];
      mixed.basis[static_cast<size_t>(j)] = b;
    }
    CHECK(std::abs(contact_check(chart, w, mixed) - ref) / ref <= 1e-10);
  }

  // collapsing the basis is reported, not silently evaluated
  SpherePoint bad = sphere_sample(chart, w, Vec::Zero(2), 2);
  bad.basis[2] = bad.basis[1];
  CHECK_THROWS_AS(contact_check(chart, w, bad), GeometryError);
}

TEST_CASE("the canonical one-form ignores the choice of metric connection") {
  std::mt19937_64 rng(53);
  RiemannianChart plain = chart_sphere2();
  RiemannianChart twisted = chart_sphere2(TorsionSpec::vectorial(parse("x1+0.3*x2", 2)));
  WeightSpec w = unit_with_radius(2, "1.3");

  for (int trial = 0; trial < 20; ++trial) {
    Vec x = sample_box(rng, plain.domain);
    SpherePoint sp = sphere_sample(plain, w, x, 50 + static_cast<std::uint64_t>(trial));
    TMScene s0 = make_scene(plain, sp.p);
    TMScene s1 = make_scene(twisted, sp.p);
    CHECK((one_forms(s0).mu - one_forms(s1).mu).cwiseAbs().maxCoeff() <= 1e-13);

    AltForm m0 = mu_form(s0), m1 = mu_form(s1);
    for (size_t i = 0; i < m0.c.size(); ++i) CHECK(m0.c[i] == m1.c[i]);
  }
}

TEST_CASE("tashiro quadruple satisfies the structure identities") {
  std::mt19937_64 rng(67);

  for (double r : {1.0, 1.7}) {
    WeightSpec w = unit_with_radius(2, r == 1.0 ? "1" : "1.7");
    for (const RiemannianChart& chart :
         {chart_sphere2(), chart_sphere2(TorsionSpec::vectorial(parse("0.4*x2", 2)))}) {
      for (int trial = 0; trial < 15; ++trial) {
        Vec x = sample_box(rng, chart.domain);
        SpherePoint sp = sphere_sample(chart, w, x, 80 + static_cast<std::uint64_t>(trial));
        TashiroResiduals res = tashiro_residuals(chart, r, sp);
        CHECK(res.phi_zeta <= 1e-13);
        CHECK(res.eta_zeta <= 1e-13);
        CHECK(res.phi_sq <= 1e-10);
        CHECK(res.eta_flat <= 1e-10);
        CHECK(res.metric_compat <= 1e-10);
      }
    }
  }
}

TEST_CASE("metric contact identity holds exactly for torsion-free charts at unit radius") {
  std::mt19937_64 rng(83);
  WeightSpec w = WeightSpec::unit(2);

  RiemannianChart plain = chart_sphere2();
  for (int trial = 0; trial < 25; ++trial) {
    Vec x = sample_box(rng, plain.domain);
    SpherePoint sp = sphere_sample(plain, w, x, 500 + static_cast<std::uint64_t>(trial));
    CHECK(tashiro_residuals(plain, 1.0, sp).deta <= 1e-9);
  }

  RiemannianChart twisted = chart_sphere2(TorsionSpec::vectorial(parse("x1", 2)));
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    Vec x = sample_box(rng, twisted.domain);
    SpherePoint sp = sphere_sample(twisted, w, x, 300 + static_cast<std::uint64_t>(trial));
    worst = std::max(worst, tashiro_residuals(twisted, 1.0, sp).deta);
  }
  CHECK(worst >= 1e-4);
}
