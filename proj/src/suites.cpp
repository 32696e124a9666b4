#include "tbgeo/suites.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include "tbgeo/catalog.hpp"
#include "tbgeo/connection_tm.hpp"
#include "tbgeo/contact.hpp"
#include "tbgeo/dynamics.hpp"
#include "tbgeo/hermitian.hpp"

namespace tbg {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t salt, int k) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ salt) + static_cast<std::uint64_t>(k)));
}

Vec sample_x(std::mt19937_64& rng, const std::vector<std::pair<double, double>>& dom,
             double shrink = 0.9) {
  Vec x(static_cast<int>(dom.size()));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (size_t i = 0; i < dom.size(); ++i) {
    double c = 0.5 * (dom[i].first + dom[i].second);
    double r = 0.5 * (dom[i].second - dom[i].first) * shrink;
    x[static_cast<int>(i)] = c + r * u(rng);
  }
  return x;
}

Vec sample_v(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(m);
  do {
    for (int i = 0; i < m; ++i) v[i] = u(rng);
  } while (v.norm() < 0.3);
  return v;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct SampleOut {
  Vec point;
  std::vector<double> vals;
};

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

double tol_of(const RunConfig& cfg, const std::string& name) {
  auto it = cfg.tol.find(name);
  if (it != cfg.tol.end()) return it->second;
  const bool nonvanish = name.size() > 10 && name.compare(name.size() - 10, 10, ".nonvanish") == 0;
  if (nonvanish && cfg.nonvanish > 0.0) return cfg.nonvanish;
  return default_tolerances().at(name);
}

// aggregates column j over the samples and judges it against the threshold
CheckResult make_check(const std::string& name, CheckMode mode, double threshold,
                       const std::vector<SampleOut>& outs, size_t j, std::string note = "") {
  CheckResult r;
  r.name = name;
  r.mode = mode;
  r.threshold = threshold;
  r.samples = static_cast<int>(outs.size());
  r.note = std::move(note);

  bool first = true;
  for (const SampleOut& s : outs) {
    const double v = s.vals[j];
    bool better = first;
    if (!first) {
      if (mode == CheckMode::MinGeq)
        better = v < r.residual || (v == r.residual && lex_less(s.point, r.worst_point));
      else
        better = v > r.residual || (v == r.residual && lex_less(s.point, r.worst_point));
    }
    if (better) {
      r.residual = v;
      r.worst_point = s.point;
    }
    first = false;
  }
  r.pass = mode == CheckMode::MaxLeq ? r.residual <= threshold : r.residual >= threshold;
  return r;
}

void fd_jet_residual(const Expr& e, const Vec& x, double& worst) {
  const int m = static_cast<int>(x.size());
  const Jet2 jet = eval_jet2(e, x);
  auto at = [&](int i, double h) {
    Vec y = x;
    y[i] += h;
    return y;
  };
  const double hg = 1e-5, hh = 1e-4;
  for (int i = 0; i < m; ++i) {
    double fd = (eval(e, at(i, hg)) - eval(e, at(i, -hg))) / (2.0 * hg);
    worst = std::max(worst, std::abs(jet.grad[i] - fd) / std::max(1.0, std::abs(fd)));
  }
  const double f0 = eval(e, x);
  for (int i = 0; i < m; ++i) {
    double fd = (eval(e, at(i, hh)) - 2.0 * f0 + eval(e, at(i, -hh))) / (hh * hh);
    worst = std::max(worst, std::abs(jet.hess(i, i) - fd) / std::max(1.0, std::abs(fd)));
    for (int j = i + 1; j < m; ++j) {
      Vec a = at(i, hh), b = at(i, hh), c = at(i, -hh), d = at(i, -hh);
      a[j] += hh;
      b[j] -= hh;
      c[j] += hh;
      d[j] -= hh;
      double fdij = (eval(e, a) - eval(e, b) - eval(e, c) + eval(e, d)) / (4.0 * hh * hh);
      worst = std::max(worst, std::abs(jet.hess(i, j) - fdij) / std::max(1.0, std::abs(fdij)));
    }
  }
}

// 1-form d(f pulled back from the base), with one derivative level
AltForm base_differential(const TMScene& s, const Jet2& f) {
  AltForm a = alt_zero(s.n(), 1, 1);
  const int m = s.m();
  for (int i = 0; i < m; ++i) {
    a.c[static_cast<size_t>(i)] = f.grad[i];
    for (int l = 0; l < m; ++l) a.d[static_cast<size_t>(l)][static_cast<size_t>(i)] = f.hess(l, i);
  }
  return a;
}

Vec tm_point(const TMPoint& p) {
  Vec out(2 * p.dim());
  out.head(p.dim()) = p.x;
  out.tail(p.dim()) = p.v;
  return out;
}

SuiteResult run_base_suite(const VerifySpec& spec, const RunConfig& cfg) {
  const RiemannianChart& chart = spec.chart;
  const int m = chart.dim;
  std::vector<SampleOut> outs(static_cast<size_t>(spec.samples));

  parallel_for(spec.samples, cfg.threads, [&](int k) {
    std::mt19937_64 rng = sample_rng(spec.seed, 0xBA5Eu, k);
    const Vec x = sample_x(rng, chart.domain);
    const Vec v = sample_v(rng, m);
    SampleOut& out = outs[static_cast<size_t>(k)];
    out.point = tm_point(TMPoint{x, v});
    out.vals.assign(5, 0.0);

    // jets against central differences, on every expression in the spec
    double jets = 0.0;
    for (const Expr& e : chart.metric) fd_jet_residual(e, x, jets);
    fd_jet_residual(spec.weights.phi1, x, jets);
    fd_jet_residual(spec.weights.phi2, x, jets);
    fd_jet_residual(spec.weights.radius, x, jets);
    out.vals[0] = jets;

    const BasePoint bp = base_point(chart, x);
    const ConnectionCoeffs conn = connection_with_torsion(chart, bp);
    const TorsionAtPoint tors = torsion_at(chart.torsion, bp);

    double metricity = 0.0;
    for (int a = 0; a < m; ++a)
      for (int j = 0; j < m; ++j)
        for (int kk = 0; kk < m; ++kk) {
          double covar = bp.dg(a, j, kk);
          for (int i = 0; i < m; ++i)
            covar -= conn.gamma(i, a, j) * bp.g(i, kk) + conn.gamma(i, a, kk) * bp.g(j, i);
          metricity = std::max(metricity, std::abs(covar));
        }
    out.vals[1] = metricity;

    double realized = 0.0;
    for (int j = 0; j < m; ++j)
      for (int kk = 0; kk < m; ++kk)
        for (int l = 0; l < m; ++l) {
          double t = 0.0;
          for (int i = 0; i < m; ++i)
            t += (conn.gamma(i, j, kk) - conn.gamma(i, kk, j)) * bp.g(i, l);
          realized = std::max(realized, std::abs(t - tors.t(j, kk, l)));
        }
    out.vals[2] = realized;

    // decomposition: reconstruction, mutual orthogonality, vectorial roundtrip
    const TorsionParts parts = torsion_decompose(tors.t, bp.g);
    double decomp = 0.0;
    Ten3 t_frame(m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          double acc = 0.0;
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
              for (int kk = 0; kk < m; ++kk)
                acc += tors.t(i, j, kk) * parts.frame(i, a) * parts.frame(j, b) *
                       parts.frame(kk, c);
          t_frame(a, b, c) = acc;
        }
    double dot_cs = 0.0, dot_cv = 0.0, dot_sv = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          double vec_abc = parts.vectorial[a] * (b == c ? 1.0 : 0.0) -
                           parts.vectorial[b] * (a == c ? 1.0 : 0.0);
          double rebuilt = parts.cartan(a, b, c) + parts.skew3(a, b, c) + vec_abc;
          decomp = std::max(decomp, std::abs(rebuilt - t_frame(a, b, c)));
          dot_cs += parts.cartan(a, b, c) * parts.skew3(a, b, c);
          dot_cv += parts.cartan(a, b, c) * vec_abc;
          dot_sv += parts.skew3(a, b, c) * vec_abc;
        }
    decomp = std::max({decomp, std::abs(dot_cs), std::abs(dot_cv), std::abs(dot_sv)});
    if (const auto* vt = std::get_if<TorsionSpec::Vectorial>(&chart.torsion.v)) {
      const Vec grad = eval_jet2(vt->potential, x).grad;
      for (int a = 0; a < m; ++a)
        decomp = std::max(decomp,
                          std::abs(parts.vectorial[a] - grad.dot(parts.frame.col(a))));
    }
    out.vals[3] = decomp;

    // structure equations of the adapted frame
    const TMScene s = make_scene(chart, TMPoint{x, v});
    double bracket = 0.0;
    for (int kk = 0; kk < m; ++kk) {
      for (int l = kk + 1; l < m; ++l) {
        Vec br = lie_bracket(field_frame_h(s, kk), field_frame_h(s, l));
        Vec expect = Vec::Zero(2 * m);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) expect[m + i] -= v[j] * s.R(i, j, kk, l);
        bracket = std::max(bracket, (br - expect).cwiseAbs().maxCoeff());
      }
      for (int i = 0; i < m; ++i) {
        Vec br = lie_bracket(field_frame_h(s, kk), field_frame_v(s, i));
        Vec expect = Vec::Zero(2 * m);
        for (int a = 0; a < m; ++a) expect[m + a] = s.conn.gamma(a, kk, i);
        bracket = std::max(bracket, (br - expect).cwiseAbs().maxCoeff());
        for (int j = 0; j < m; ++j) {
          Vec vv = lie_bracket(field_frame_v(s, i), field_frame_v(s, j));
          bracket = std::max(bracket, vv.cwiseAbs().maxCoeff());
        }
      }
    }
    out.vals[4] = bracket;
  });

  SuiteResult suite;
  suite.name = "base";
  suite.checks.push_back(
      make_check("jets_fd", CheckMode::MaxLeq, tol_of(cfg, "jets_fd"), outs, 0));
  suite.checks.push_back(
      make_check("metricity_base", CheckMode::MaxLeq, tol_of(cfg, "metricity_base"), outs, 1));
  suite.checks.push_back(make_check("torsion_realized", CheckMode::MaxLeq,
                                    tol_of(cfg, "torsion_realized"), outs, 2));
  suite.checks.push_back(make_check("torsion_decomposition", CheckMode::MaxLeq,
                                    tol_of(cfg, "torsion_decomposition"), outs, 3));
  suite.checks.push_back(make_check("bracket_structure", CheckMode::MaxLeq,
                                    tol_of(cfg, "bracket_structure"), outs, 4));
  return suite;
}

SuiteResult run_connection_suite(const VerifySpec& spec, const RunConfig& cfg) {
  const RiemannianChart& chart = spec.chart;
  const WeightSpec& w = spec.weights;
  std::vector<SampleOut> outs(static_cast<size_t>(spec.samples));

  parallel_for(spec.samples, cfg.threads, [&](int k) {
    std::mt19937_64 rng = sample_rng(spec.seed, 0xC0117u, k);
    const TMPoint p{sample_x(rng, chart.domain), sample_v(rng, chart.dim)};
    SampleOut& out = outs[static_cast<size_t>(k)];
    out.point = tm_point(p);
    out.vals.assign(8, 0.0);
    out.vals[0] = oracle_agreement_residual(chart, w, p);
    out.vals[1] = oplus_torsion_residual(chart, p);
    out.vals[2] = nabla_g_metricity_residual(chart, w, p);
    out.vals[3] = nabla_g_symmetry_residual(chart, w, p);
    out.vals[4] = fibre_defect(chart, w, p);
    out.vals[5] = zero_section_defect(chart, p);
    out.vals[6] = eval_jet2(w.phi2, p.x).grad.cwiseAbs().maxCoeff();
    out.vals[7] = flatness_residual(chart, p);
  });

  double grad_phi2 = 0.0, curv = 0.0;
  for (const SampleOut& s : outs) {
    grad_phi2 = std::max(grad_phi2, s.vals[6]);
    curv = std::max(curv, s.vals[7]);
  }
  const bool phi2_const = grad_phi2 <= 1e-12;
  const bool flat = curv <= 1e-10;

  SuiteResult suite;
  suite.name = "connection";
  suite.checks.push_back(make_check("oracle_agreement", CheckMode::MaxLeq,
                                    tol_of(cfg, "oracle_agreement"), outs, 0));
  suite.checks.push_back(
      make_check("oplus_torsion", CheckMode::MaxLeq, tol_of(cfg, "oplus_torsion"), outs, 1));
  suite.checks.push_back(
      make_check("metricity_G", CheckMode::MaxLeq, tol_of(cfg, "metricity_G"), outs, 2));
  suite.checks.push_back(
      make_check("torsion_free_G", CheckMode::MaxLeq, tol_of(cfg, "torsion_free_G"), outs, 3));
  suite.checks.push_back(
      phi2_const ? make_check("fibre_defect", CheckMode::MaxLeq, tol_of(cfg, "fibre_defect"),
                              outs, 4, "grad phi2 = 0")
                 : make_check("fibre_defect", CheckMode::MaxGeq,
                              tol_of(cfg, "fibre_defect.nonvanish"), outs, 4, "grad phi2 != 0"));
  suite.checks.push_back(
      flat ? make_check("zero_section", CheckMode::MaxLeq, tol_of(cfg, "zero_section"), outs, 5,
                        "connection flat")
           : make_check("zero_section", CheckMode::MaxGeq, tol_of(cfg, "zero_section.nonvanish"),
                        outs, 5, "connection not flat"));
  return suite;
}

SuiteResult run_hermitian_suite(const VerifySpec& spec, const RunConfig& cfg) {
  const RiemannianChart& chart = spec.chart;
  const WeightSpec& w = spec.weights;
  std::vector<SampleOut> outs(static_cast<size_t>(spec.samples));

  parallel_for(spec.samples, cfg.threads, [&](int k) {
    std::mt19937_64 rng = sample_rng(spec.seed, 0x4E12u, k);
    const TMPoint p{sample_x(rng, chart.domain), sample_v(rng, chart.dim)};
    SampleOut& out = outs[static_cast<size_t>(k)];
    out.point = tm_point(p);
    out.vals.assign(9, 0.0);

    const TMScene s = make_scene(chart, p);
    const Jet2 j1 = eval_jet2(w.phi1, p.x), j2 = eval_jet2(w.phi2, p.x);
    const double psibar = j1.val + j2.val;
    const Jet2 jbar(j1.val + j2.val, j1.grad + j2.grad, j1.hess + j2.hess);

    const AltForm omega_s = omega_form(s, w, OmegaKind::Sasaki);
    const AltForm omega_g = omega_form(s, w, OmegaKind::Weighted);
    double conf = 0.0;
    for (size_t i = 0; i < omega_g.c.size(); ++i)
      conf = std::max(conf, std::abs(omega_g.c[i] - std::exp(psibar) * omega_s.c[i]));
    out.vals[0] = conf;

    const AltForm dmu = exterior_d(mu_form(s));
    const AltForm mt = mu_circ_t(s);
    double dmu_res = 0.0;
    for (size_t i = 0; i < dmu.c.size(); ++i)
      dmu_res = std::max(dmu_res, std::abs(dmu.c[i] - omega_s.c[i] - mt.c[i]));
    out.vals[1] = dmu_res;

    const AltForm lhs = exterior_d(omega_g);
    const AltForm rhs = wedge(base_differential(s, jbar), omega_s);
    const AltForm dos = exterior_d(omega_s);
    double dconf = 0.0;
    for (size_t i = 0; i < lhs.c.size(); ++i)
      dconf = std::max(dconf,
                       std::abs(lhs.c[i] - std::exp(psibar) * (rhs.c[i] + dos.c[i])));
    out.vals[2] = dconf;

    const AlmostComplex ac = almost_complex(s, w);
    const Mat G = weighted(s, w).G;
    const Mat i2 = ac.I.v * ac.I.v + Mat::Identity(s.n(), s.n());
    const Mat compat = ac.I.v.transpose() * G * ac.I.v - G;
    out.vals[3] = std::max(i2.cwiseAbs().maxCoeff(), compat.cwiseAbs().maxCoeff());

    out.vals[4] = nijenhuis_max(chart, w, p);
    out.vals[5] = domega_max(chart, w, p, OmegaKind::Weighted);
    out.vals[6] = flatness_residual(chart, p);
    out.vals[7] = torsion_match_residual(s, Vec(j2.grad - j1.grad));
    out.vals[8] = torsion_match_residual(s, Vec(-(j1.grad + j2.grad)));
  });

  double curv = 0.0, match_psi = 0.0, match_bar = 0.0;
  for (const SampleOut& s : outs) {
    curv = std::max(curv, s.vals[6]);
    match_psi = std::max(match_psi, s.vals[7]);
    match_bar = std::max(match_bar, s.vals[8]);
  }
  const bool flat = curv <= 1e-10;
  const bool psi_match = match_psi <= 1e-10;
  const bool bar_match = match_bar <= 1e-10;

  SuiteResult suite;
  suite.name = "hermitian";
  suite.checks.push_back(
      make_check("omega_conformal", CheckMode::MaxLeq, tol_of(cfg, "omega_conformal"), outs, 0));
  suite.checks.push_back(
      make_check("dmu_identity", CheckMode::MaxLeq, tol_of(cfg, "dmu_identity"), outs, 1));
  suite.checks.push_back(make_check("domega_conformal", CheckMode::MaxLeq,
                                    tol_of(cfg, "domega_conformal"), outs, 2));
  suite.checks.push_back(
      make_check("complex_algebra", CheckMode::MaxLeq, tol_of(cfg, "complex_algebra"), outs, 3));

  if (flat && psi_match) {
    suite.checks.push_back(make_check("nijenhuis_iff", CheckMode::MaxLeq,
                                      tol_of(cfg, "nijenhuis_iff"), outs, 4,
                                      "flat and torsion = d(psi) wedge 1"));
  } else {
    std::string note = !flat ? "base not flat" : "torsion differs from d(psi) wedge 1";
    if (!flat && !psi_match) note += "; torsion differs from d(psi) wedge 1";
    suite.checks.push_back(make_check("nijenhuis_iff", CheckMode::MaxGeq,
                                      tol_of(cfg, "nijenhuis_iff.nonvanish"), outs, 4, note));
  }
  suite.checks.push_back(
      bar_match ? make_check("symplectic_iff", CheckMode::MaxLeq, tol_of(cfg, "symplectic_iff"),
                             outs, 5, "torsion = d(psibar) wedge 1")
                : make_check("symplectic_iff", CheckMode::MaxGeq,
                             tol_of(cfg, "symplectic_iff.nonvanish"), outs, 5,
                             "torsion differs from d(psibar) wedge 1"));
  return suite;
}

SuiteResult run_contact_suite(const VerifySpec& spec, const RunConfig& cfg) {
  const RiemannianChart& chart = spec.chart;
  const WeightSpec& w = spec.weights;

  // the Tashiro checks need a constant radius and unit weights
  bool r_const = true, unit = std::abs(w.f3) + std::abs(w.f4) + std::abs(w.f5) + std::abs(w.f6) == 0.0;
  {
    std::mt19937_64 rng = sample_rng(spec.seed, 0xAB17u, 0);
    for (int probe = 0; probe < 8; ++probe) {
      const Vec x = sample_x(rng, chart.domain);
      const Jet2 jr = eval_jet2(w.radius, x);
      if (jr.grad.cwiseAbs().maxCoeff() > 1e-13) r_const = false;
      if (std::abs(eval(w.phi1, x)) > 1e-14 || std::abs(eval(w.phi2, x)) > 1e-14) unit = false;
    }
  }
  const bool tashiro_applies = r_const && unit;

  std::vector<SampleOut> outs(static_cast<size_t>(spec.samples));
  parallel_for(spec.samples, cfg.threads, [&](int k) {
    std::mt19937_64 rng = sample_rng(spec.seed, 0xC077u, k);
    const Vec x = sample_x(rng, chart.domain);
    const SpherePoint sp = sphere_sample(chart, w, x, rng());
    SampleOut& out = outs[static_cast<size_t>(k)];
    out.point = tm_point(sp.p);
    out.vals.assign(4, 0.0);
    out.vals[0] = contact_check(chart, w, sp);
    if (tashiro_applies) {
      const TashiroResiduals res = tashiro_residuals(chart, sp.r, sp);
      out.vals[1] = std::max({res.phi_sq, res.phi_zeta, res.eta_zeta, res.eta_flat,
                              res.metric_compat});
      out.vals[2] = res.deta;
    }
    out.vals[3] = max_abs(make_scene(chart, sp.p).tors.t);
  });

  SuiteResult suite;
  suite.name = "contact";
  suite.checks.push_back(make_check("contact_nondegenerate", CheckMode::MinGeq,
                                    tol_of(cfg, "contact_nondegenerate"), outs, 0));
  if (tashiro_applies) {
    suite.checks.push_back(make_check("tashiro_algebraic", CheckMode::MaxLeq,
                                      tol_of(cfg, "tashiro_algebraic"), outs, 1));
    double torsion_size = 0.0;
    for (const SampleOut& s : outs) torsion_size = std::max(torsion_size, s.vals[3]);
    suite.checks.push_back(
        torsion_size <= 1e-12
            ? make_check("tashiro_deta", CheckMode::MaxLeq, tol_of(cfg, "tashiro_deta"), outs, 2,
                         "torsion free")
            : make_check("tashiro_deta", CheckMode::MaxGeq,
                         tol_of(cfg, "tashiro_deta.nonvanish"), outs, 2, "torsion present"));
  }
  return suite;
}

SuiteResult run_dynamics_suite(const VerifySpec& spec, const RunConfig& cfg) {
  const RiemannianChart& chart = spec.chart;
  const int m = chart.dim;
  const int ntraj = std::max(1, spec.samples / 5);
  const double h = 1e-3;
  const int steps = 1000;

  std::vector<SampleOut> outs(static_cast<size_t>(ntraj));
  parallel_for(ntraj, cfg.threads, [&](int k) {
    std::mt19937_64 rng = sample_rng(spec.seed, 0xD14Au, k);
    const Vec x0 = sample_x(rng, chart.domain, 0.3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec v0(m);
    for (int i = 0; i < m; ++i) {
      const auto& dom = chart.domain[static_cast<size_t>(i)];
      v0[i] = 0.2 * 0.5 * (dom.second - dom.first) * u(rng);
    }
    const Trajectory traj = integrate_geodesic(chart, x0, v0, h, steps);
    SampleOut& out = outs[static_cast<size_t>(k)];
    out.point = tm_point(TMPoint{x0, v0});
    out.vals = {horizontality_residual(chart, traj), energy_drift(chart, traj)};
  });

  SuiteResult suite;
  suite.name = "dynamics";
  suite.checks.push_back(make_check("geodesic_horizontality", CheckMode::MaxLeq,
                                    tol_of(cfg, "geodesic_horizontality"), outs, 0));
  suite.checks.push_back(make_check("energy_conservation", CheckMode::MaxLeq,
                                    tol_of(cfg, "energy_conservation"), outs, 1));

  // measuring-instrument control: the euclidean unit circle is not a geodesic
  RiemannianChart flat = catalog_chart("flat2");
  Trajectory circle;
  circle.h = h;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * h;
    Vec x(2), v(2);
    x << std::cos(t), std::sin(t);
    v << -std::sin(t), std::cos(t);
    circle.x.push_back(x);
    circle.xdot.push_back(v);
  }
  std::vector<SampleOut> control(1);
  control[0].point = Vec();
  control[0].vals = {horizontality_residual(flat, circle)};
  suite.checks.push_back(make_check("control_curve", CheckMode::MinGeq,
                                    tol_of(cfg, "control_curve"), control, 0));
  return suite;
}

} // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tols = {
      {"jets_fd", 1e-6},
      {"metricity_base", 1e-10},
      {"torsion_realized", 1e-12},
      {"torsion_decomposition", 1e-12},
      {"bracket_structure", 1e-10},
      {"oracle_agreement", 1e-8},
      {"oplus_torsion", 1e-10},
      {"metricity_G", 1e-9},
      {"torsion_free_G", 1e-9},
      {"fibre_defect", 1e-10},
      {"fibre_defect.nonvanish", 1e-3},
      {"zero_section", 1e-10},
      {"zero_section.nonvanish", 1e-3},
      {"omega_conformal", 1e-13},
      {"dmu_identity", 1e-10},
      {"domega_conformal", 1e-10},
      {"complex_algebra", 1e-12},
      {"nijenhuis_iff", 1e-8},
      {"nijenhuis_iff.nonvanish", 1e-3},
      {"symplectic_iff", 1e-9},
      {"symplectic_iff.nonvanish", 1e-4},
      {"contact_nondegenerate", 1e-6},
      {"tashiro_algebraic", 1e-10},
      {"tashiro_deta", 1e-9},
      {"tashiro_deta.nonvanish", 1e-4},
      {"geodesic_horizontality", 1e-8},
      {"energy_conservation", 1e-8},
      {"control_curve", 0.9},
  };
  return tols;
}

std::vector<SuiteResult> run_suites(const VerifySpec& spec,
                                    const std::vector<std::string>& suites,
                                    const RunConfig& cfg) {
  for (const auto& [name, value] : cfg.tol) {
    if (!default_tolerances().count(name))
      throw SpecError("unknown tolerance name '" + name + "'", std::string::npos);
    if (!(value > 0.0))
      throw SpecError("tolerance '" + name + "' must be positive", std::string::npos);
  }

  std::vector<std::string> selected = suites.empty() ? suite_names() : suites;
  std::vector<SuiteResult> results;
  std::vector<std::string> seen;
  for (const std::string& name : selected) {
    if (std::find(seen.begin(), seen.end(), name) != seen.end()) continue;
    seen.push_back(name);
    SuiteResult r;
    if (name == "base")
      r = run_base_suite(spec, cfg);
    else if (name == "connection")
      r = run_connection_suite(spec, cfg);
    else if (name == "hermitian")
      r = run_hermitian_suite(spec, cfg);
    else if (name == "contact")
      r = run_contact_suite(spec, cfg);
    else if (name == "dynamics")
      r = run_dynamics_suite(spec, cfg);
    else
      throw SpecError("unknown suite '" + name + "'", std::string::npos);
    r.pass = true;
    for (const CheckResult& c : r.checks) r.pass = r.pass && c.pass;
    results.push_back(std::move(r));
  }
  return results;
}

bool all_pass(const std::vector<SuiteResult>& results) {
  for (const SuiteResult& s : results) {
    if (!s.pass) return false;
  }
  return true;
}

const char* to_string(CheckMode mode) {
  switch (mode) {
    case CheckMode::MaxLeq: return "max_leq";
    case CheckMode::MinGeq: return "min_geq";
    case CheckMode::MaxGeq: return "max_geq";
  }
  return "max_leq";
}

} // namespace tbg
