#pragma once

#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

// Curvature quantities at one point, in coordinate components.
//
// Conventions: R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z, stored as
// riemann(i,j,k,l) = R^l_ijk and riemann_low(i,j,k,l) = <R(d_i,d_j)d_k, d_l>.
// Ric(Y,Z) = tr(X -> R(X,Y)Z). Four-index tensors built from h use
// (h^I)_abcd = h_bc g_ad - h_ac g_bd + g_bc h_ad - g_ac h_bd, which makes
// W = R - h^I totally trace-free. Derivative slots come first:
// nabla_weyl(e,a,b,c,d) = (nabla_e W)_abcd.
struct CurvaturePack {
  int n = 0;
  Point point;
  Matrix g, ginv;
  Tensor gamma;        // "udd" Gamma^k_ij as gamma(k,i,j)
  Tensor riemann;      // "dddu"
  Tensor riemann_low;  // "dddd"
  Tensor ricci, ricci0;
  Scalar scal = 0.0;

  bool has_conformal = false;  // n >= 3
  Tensor h;                    // normalized Ricci tensor
  Tensor h_wedge;              // "dddd"
  Tensor weyl;                 // "dddd"
  Tensor weyl_up;              // "dddu" W^l_ijk as weyl_up(i,j,k,l)

  bool has_derivatives = false;  // metric jets of order >= 3
  Tensor nabla_h;                // "ddd"
  Tensor cotton;                 // "ddd" C_abc = (nabla_a h)_bc - (nabla_b h)_ac
  Tensor nabla_riemann;          // "ddddd"
  Tensor nabla_weyl;             // "ddddd"
  Tensor div_weyl;               // "ddd"
};

// Computes the pack from row-major metric jets (order >= 2; order >= 3 adds
// the derivative quantities). Throws DegenerateMetric.
CurvaturePack curvature_from_jets(const std::vector<Jet>& g, const Point& point);

CurvaturePack curvature(const MetricField& field, const Point& point, int jet_order = 3);

// Gamma^k_ij as gamma(k,i,j) from first derivatives of the metric only.
Tensor christoffel(const MetricField& field, const Point& point);

struct ConnectionJet {
  Tensor gamma;   // "udd"
  Tensor dgamma;  // "dudd": dgamma(m,k,i,j) = d_m Gamma^k_ij
};
ConnectionJet christoffel_with_derivative(const MetricField& field, const Point& point);

// (h^I) built from any symmetric h and metric g.
Tensor wedge_with_identity(const Tensor& h, const Matrix& g);
// sum_d g^{de} (nabla_e T)_abcd / (n - 3), the normalization under which the
// divergence of W equals the Cotton-York tensor (zero when n = 3).
Tensor weyl_divergence(const Tensor& nabla_w, const Matrix& ginv);

// Covariant derivative of a tensor field given by component expressions
// (row-major over the variance), adding one covariant slot in front.
Tensor covariant_derivative(const MetricField& field, const std::vector<Expr>& components,
                            const std::string& variance, const Point& point);

// Contraction of a (0,2) tensor with ginv.
Scalar trace(const Tensor& t, const Matrix& ginv);

}  // namespace confgeo
