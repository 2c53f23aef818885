#pragma once

#include "confgeo/chart.hpp"
#include "confgeo/curvature.hpp"
#include "confgeo/frame.hpp"

namespace confgeo {

// ||R - h^I|| / ||R||, the dimension-three Weyl ratio (0 for flat R).
double weyl_ratio(const CurvaturePack& pack);

// Largest |W^l_ijk| deviation between two packs relative to the larger Weyl
// tensor, the measure used for conformal invariance of W(3,1).
double weyl_deviation(const CurvaturePack& a, const CurvaturePack& b);

struct CyTransform {
  double residual = 0.0;     // ||C' - C - dphi(W)|| / (||C'|| + ||C + dphi(W)|| + 1e-12)
  double cotton_norm = 0.0;  // ||C||
  double rescaled_norm = 0.0;
  double change_norm = 0.0;  // ||C' - C||
};

// Compares C' of exp(2 phi) g against C(X,Y)(Z) + dphi(W(X,Y)Z). The plus
// sign belongs to this library's curvature convention; with the opposite
// sign of R (and hence of W) the formula reads C' = C - dphi(W).
CyTransform check_cy_transform(const MetricChart& chart, const Expr& phi, const Point& point,
                               int jet_order = 3);

struct BianchiResiduals {
  double cyclic = 0.0;  // max over frame triples of |C(X,Y)Z + C(Y,Z)X + C(Z,X)Y|
  double trace = 0.0;   // max over X of |sum_i eps_i C(X,e_i)(e_i)|
  double scale = 0.0;   // ||C|| in the frame
};

BianchiResiduals bianchi_residuals(const Tensor& cotton, const PointFrame& frame);

}  // namespace confgeo
