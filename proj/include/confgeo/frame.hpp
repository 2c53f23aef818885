#pragma once

#include <vector>

#include "confgeo/tensor.hpp"

namespace confgeo {

struct PointFrame {
  Point point;
  Matrix basis;  // columns are the frame vectors in coordinate components
  Matrix gram;   // g(e_i, e_j)
  std::vector<int> eps;
  bool orthonormal = false;

  int dim() const { return static_cast<int>(basis.cols()); }
  Vector vector(int i) const { return basis.col(i); }
};

Scalar inner(const Matrix& g, const Vector& u, const Vector& v);

PointFrame coordinate_frame(const Matrix& g, const Point& point);

// Gram-Schmidt with the seed vectors first, then the coordinate basis with
// greedy pivoting on |g(v,v)|. Real mode normalizes to g(e,e) = +-1, complex
// mode to g(e,e) = 1. Throws NullSeed, DegenerateFlag, DegenerateMetric.
PointFrame orthonormal_frame(const Matrix& g, Mode mode, const Point& point,
                             const std::vector<Vector>& seeds = {});

// Throws FrameNotOrthonormal if |g(e_i,e_j) - eps_i delta_ij| >= tol or the
// basis is (numerically) dependent.
void check_orthonormal(const PointFrame& frame, double tol = 1e-10);

// +1 or -1: sign of det(basis) in real mode. In complex mode the frame
// determinant of an orthonormal frame is +-1/sqrt(det g); the sign is taken
// against the principal square root.
int frame_orientation(const PointFrame& frame, const Matrix& g);

}  // namespace confgeo
