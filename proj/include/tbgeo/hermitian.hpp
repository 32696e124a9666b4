#pragma once

#include <vector>

#include "tbgeo/metrics_tm.hpp"

namespace tbg {

// Alternating form of fixed degree on the 2m-dimensional total space.
// Coefficients are stored over strictly increasing coordinate multi-indices
// in lexicographic order; nder says how many derivative levels ride along
// (exterior_d consumes one).
struct AltForm {
  int n = 0;
  int deg = 0;
  int nder = 0;
  std::vector<double> c;
  std::vector<std::vector<double>> d;
  std::vector<std::vector<std::vector<double>>> dd;
};

int binom(int n, int k);

AltForm alt_zero(int n, int deg, int nder);

// rank of a strictly increasing tuple among all deg-subsets of {0..n-1}
int alt_rank(int n, const std::vector<int>& idx);

double& alt_coeff(AltForm& f, const std::vector<int>& idx);
double alt_coeff(const AltForm& f, const std::vector<int>& idx);

double alt_eval(const AltForm& f, const std::vector<Vec>& args);

AltForm wedge(const AltForm& a, const AltForm& b);
AltForm exterior_d(const AltForm& f);

// The endomorphism e^psi theta^t - e^{-psi} theta with psi = phi2 - phi1;
// unit weights give the mirror map theta^t - theta.
struct AlmostComplex {
  JetMat I;
};

AlmostComplex almost_complex(const TMScene& s, const WeightSpec& w);
AlmostComplex almost_complex(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);

enum class OmegaKind { Sasaki, Weighted };

// Fundamental 2-form G(I., .) of the chosen metric/structure pair, with
// first derivatives.
AltForm omega_form(const TMScene& s, const WeightSpec& w, OmegaKind kind);
AltForm omega_form(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                   OmegaKind kind);

// Canonical 1-form mu (two derivative levels, so d(d mu) is computable).
AltForm mu_form(const TMScene& s);
AltForm mu_form(const RiemannianChart& chart, const TMPoint& p);

// 2-form pairing mu with the pulled-back torsion of the base connection.
AltForm mu_circ_t(const TMScene& s);
AltForm mu_circ_t(const RiemannianChart& chart, const TMPoint& p);

// Nijenhuis tensor of the weighted almost complex structure, evaluated on
// constant-component coordinate fields.
Vec nijenhuis(const TMScene& s, const WeightSpec& w, const Vec& X, const Vec& Y);
Vec nijenhuis(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p, const Vec& X,
              const Vec& Y);

// Residual helpers for the verification suites.
double nijenhuis_max(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p);
double domega_max(const RiemannianChart& chart, const WeightSpec& w, const TMPoint& p,
                  OmegaKind kind);
double flatness_residual(const RiemannianChart& chart, const TMPoint& p);
// distance of the chart torsion from d(potential) wedge identity, lowered form
double torsion_match_residual(const TMScene& s, const Vec& grad_potential);
double torsion_match_residual(const RiemannianChart& chart, const TMPoint& p,
                              const Vec& grad_potential);

} // namespace tbg
