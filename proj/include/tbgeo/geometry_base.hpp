#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tbgeo/expr.hpp"
#include "tbgeo/linalg.hpp"

namespace tbg {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prescribed torsion for a metric connection, in lowered components
// T(X,Y,Z) = <T(X,Y),Z>, antisymmetric in the first two slots.
struct TorsionSpec {
  struct None {};
  struct Vectorial {
    Expr potential;  // T(X,Y) = X(psi) Y - Y(psi) X
  };
  struct General {
    std::vector<Expr> comp;  // m^3 entries, index (i*m+j)*m+k
  };
  std::variant<None, Vectorial, General> v;

  bool is_none() const { return std::holds_alternative<None>(v); }
  static TorsionSpec none() { return {None{}}; }
  static TorsionSpec vectorial(Expr psi) { return {Vectorial{std::move(psi)}}; }
  static TorsionSpec general(std::vector<Expr> comp) { return {General{std::move(comp)}}; }
};

struct RiemannianChart {
  int dim = 0;
  std::vector<Expr> metric;  // m^2 entries, symmetric; index i*m+j
  std::vector<std::pair<double, double>> domain;  // per-coordinate box
  TorsionSpec torsion = TorsionSpec::none();
  std::string name;

  const Expr& g(int i, int j) const { return metric[static_cast<size_t>(i) * dim + j]; }
};

// Builds a chart from metric entry sources; validates symmetry of the given
// entries and positive definiteness at sampled domain points.
RiemannianChart load_chart(int dim, const std::vector<std::string>& metric_entries,
                           std::vector<std::pair<double, double>> domain,
                           TorsionSpec torsion = TorsionSpec::none(),
                           std::string name = "inline");

// Pointwise metric data: value, inverse, first and second derivatives.
struct BasePoint {
  int m = 0;
  Vec x;
  Mat g, g_inv;
  Mat chol_lower;      // g = L L^T
  Ten3 dg;             // dg(l,i,j) = d_l g_ij
  Ten3 dg_inv;         // dg_inv(l,i,j) = d_l g^ij
  Ten4 ddg;            // ddg(a,b,i,j) = d_a d_b g_ij
};

BasePoint base_point(const RiemannianChart& chart, const Vec& x);

struct ConnectionCoeffs {
  int m = 0;
  Ten3 gamma;     // gamma(i,j,k) = Gamma^i_{jk}, direction j, argument k
  Ten4 gamma_dx;  // gamma_dx(a,i,j,k) = d_a Gamma^i_{jk}
};

// Levi-Civita connection of the chart metric.
ConnectionCoeffs christoffel_lc(const BasePoint& bp);

// Lowered torsion components and their first derivatives at x.
struct TorsionAtPoint {
  Ten3 t;    // t(i,j,k) = T_ijk
  Ten4 dt;   // dt(a,i,j,k) = d_a T_ijk
};
TorsionAtPoint torsion_at(const TorsionSpec& spec, const BasePoint& bp);

// Unique metric connection with the prescribed torsion:
// <nabla_X Y, Z> = <nabla^LC_X Y, Z> + (T(X,Y,Z) - T(Y,Z,X) + T(Z,X,Y))/2.
ConnectionCoeffs connection_with_torsion(const RiemannianChart& chart, const BasePoint& bp);

// R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y];  R(e_k,e_l)e_j = R^i_{jkl} e_i.
Ten4 curvature(const ConnectionCoeffs& conn);

// C(X,Y) = X(phi) Y + Y(phi) X - <X,Y> grad phi.
Vec conformal_change_tensor(const Expr& phi, const BasePoint& bp, const Vec& X, const Vec& Y);

// Orthogonal decomposition of a torsion tensor in a g-orthonormal frame into
// Cartan type + totally skew + vectorial parts.
struct TorsionParts {
  Mat frame;      // columns = g-orthonormal frame vectors in coordinates
  Ten3 cartan;    // frame components
  Ten3 skew3;     // frame components, fully antisymmetric
  Vec vectorial;  // V_j; vec part is V_i d_jk - V_j d_ik
};
TorsionParts torsion_decompose(const Ten3& t_coord, const Mat& g);
TorsionParts torsion_decompose_in_frame(const Ten3& t_frame, const Mat& frame);

} // namespace tbg
