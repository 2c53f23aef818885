#pragma once

#include "confgeo/chart.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

// Quantities recomputable from metric values alone by nested fourth-order
// central differences. Layouts match CurvaturePack.
enum class FdQuantity { Christoffel, Riemann, Ricci, H, Weyl, NablaH, Cotton, NablaWeyl, DivWeyl };

const char* to_string(FdQuantity q);

inline constexpr double kDefaultFdStep = 5e-3;

// Number of nested difference levels used for a quantity; the point must lie
// at least 2 * step * depth inside the chart domain.
int fd_depth(FdQuantity q);

// Throws DomainTooSmall for a nonpositive step or a point too close to the
// domain boundary, DegenerateMetric on the way.
Tensor fd_oracle(const MetricField& field, FdQuantity q, const Point& point, double step = kDefaultFdStep);

}  // namespace confgeo
