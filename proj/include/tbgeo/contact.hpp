#pragma once

#include <cstdint>
#include <vector>

#include "tbgeo/hermitian.hpp"

namespace tbg {

// Point of the sphere subbundle S_rM = { (x,v) : |v|_g = r(x) } together with
// an orthonormal basis of its tangent space inside T(TM).
struct SpherePoint {
  TMPoint p;
  double r = 0.0;            // radius value at x
  std::vector<Vec> basis;    // 2m-1 coordinate vectors spanning T_p S_rM
};

// Coordinate components of the 1-form xi^flat - r dr, whose kernel is the
// tangent space of the sphere subbundle.
Vec gamma_covector(const TMScene& s, const Expr& radius);

// Rescales a random fiber direction onto the r(x)-sphere and builds the
// tangent basis as the Householder complement of the defining covector.
SpherePoint sphere_sample(const RiemannianChart& chart, const WeightSpec& w, const Vec& x,
                          std::uint64_t seed);

// |mu ^ (d mu)^(m-1)| on the tangent basis, normalized by the Euclidean Gram
// volume of the basis so the verdict does not depend on the basis choice.
double contact_check(const RiemannianChart& chart, const WeightSpec& w, const SpherePoint& sp);

// Contact-metric quadruple on S_rM for constant radius and unit weights,
// assembled in the induced coordinates at sp.
struct TashiroStructure {
  Mat gt;    // (1/4) g^S
  Vec eta;   // (1/2r) mu, covector
  Mat phi;   // theta - theta^t - (1/r^2) xi (x) mu, endomorphism
  Vec zeta;  // (2/r) theta^t xi
};

TashiroStructure tashiro(const RiemannianChart& chart, double r_const, const SpherePoint& sp);

// Residuals of the structure identities, measured on the tangent basis.
struct TashiroResiduals {
  double phi_sq = 0.0;         // phi^2 + 1 - zeta (x) eta
  double phi_zeta = 0.0;       // phi(zeta)
  double eta_zeta = 0.0;       // eta(zeta) - 1
  double eta_flat = 0.0;       // eta - zeta-contraction of gt
  double metric_compat = 0.0;  // gt(phi.,phi.) - gt + eta (x) eta
  double deta = 0.0;           // d eta - 2 gt(., phi .)
};

TashiroResiduals tashiro_residuals(const RiemannianChart& chart, double r_const,
                                   const SpherePoint& sp);

} // namespace tbg
