#include "confgeo/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "confgeo/error.hpp"

namespace confgeo {

double weyl_ratio(const CurvaturePack& pack) {
  if (!pack.has_conformal) fail(ErrorCode::DimensionTooLow, "Weyl tensor needs dimension at least 3");
  const double r = pack.riemann_low.norm();
  const double w = pack.weyl.norm();
  return r > 0.0 ? w / r : w;
}

double weyl_deviation(const CurvaturePack& a, const CurvaturePack& b) {
  if (!a.has_conformal || !b.has_conformal)
    fail(ErrorCode::DimensionTooLow, "Weyl tensor needs dimension at least 3");
  const double diff = (a.weyl_up - b.weyl_up).max_abs();
  return diff / (std::max(a.weyl_up.max_abs(), b.weyl_up.max_abs()) + 1e-12);
}

CyTransform check_cy_transform(const MetricChart& chart, const Expr& phi, const Point& point,
                               int jet_order) {
  if (chart.dim() < 3) fail(ErrorCode::DimensionTooLow, "Cotton-York tensor needs dimension at least 3");
  const MetricField field(chart);
  const MetricField rescaled(rescale(chart, phi));
  const CurvaturePack p = curvature(field, point, std::max(jet_order, 3));
  const CurvaturePack q = curvature(rescaled, point, std::max(jet_order, 3));
  const Jet dphi = CompiledExpr(phi, chart.coordinates, chart.parameters, chart.mode).jet(point, 1);
  const int n = chart.dim();
  Tensor predicted = p.cotton;
  MultiIndex alpha{};
  for (int d = 0; d < n; ++d) {
    alpha.fill(0);
    alpha[d] = 1;
    const Scalar pd = dphi.partial(alpha);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) predicted(a, b, c) += pd * p.weyl_up(a, b, c, d);
  }
  CyTransform r;
  r.residual = relative_residual(q.cotton, predicted);
  r.cotton_norm = p.cotton.norm();
  r.rescaled_norm = q.cotton.norm();
  r.change_norm = (q.cotton - p.cotton).norm();
  return r;
}

BianchiResiduals bianchi_residuals(const Tensor& cotton, const PointFrame& frame) {
  check_orthonormal(frame);
  const Tensor c = in_basis(cotton, frame.basis);
  const int n = c.dim();
  BianchiResiduals r;
  r.scale = c.norm();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        r.cyclic = std::max(r.cyclic, std::abs(c(x, y, z) + c(y, z, x) + c(z, x, y)));
  for (int x = 0; x < n; ++x) {
    Scalar s = 0.0;
    for (int i = 0; i < n; ++i) s += double(frame.eps[i]) * c(x, i, i);
    r.trace = std::max(r.trace, std::abs(s));
  }
  return r;
}

}  // namespace confgeo
