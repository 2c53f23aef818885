#pragma once

#include <string>
#include <utility>
#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/curvature.hpp"
#include "confgeo/ode.hpp"
#include "confgeo/random_metric.hpp"

namespace confgeo {

// Null vectors of g from the quadric restricted to random 2-planes, each with
// unit coordinate norm and pairwise projectively distinct. Throws
// NoNullVectors for a definite real metric.
std::vector<Vector> sample_isotropy_cone(const Matrix& g, Mode mode, int count, Rng& rng);

struct GeodesicSample {
  double s = 0.0;
  Point x;
  Vector v;
  Scalar norm = 0.0;  // g(v, v)
};

struct Trajectory {
  std::vector<GeodesicSample> samples;
  bool ok = true;
  ErrorCode status = ErrorCode::StepFailure;
  std::string message;
  double max_drift = 0.0;  // max |g(v,v) - g(v0,v0)|
};

// x'' + Gamma(x', x') = 0 on s in [0, s_end], recorded at `count` + 1
// equally spaced parameters. Complex charts integrate along a real
// parameter with complex state.
Trajectory integrate_geodesic(const MetricField& field, const Point& x0, const Vector& v0, double s_end, int count,
                              const OdeOptions& options = {});

struct JacobiSample {
  double s = 0.0;
  Point x;
  Vector v, a;      // velocity and coordinate acceleration
  Vector j;         // J
  Vector dj, ddj;   // dJ/ds, d2J/ds2 in coordinates
  Vector jdot;      // covariant derivative nabla_v J
};

struct JacobiPath {
  std::vector<JacobiSample> samples;
  bool ok = true;
  ErrorCode status = ErrorCode::StepFailure;
  std::string message;
  double error_estimate = 0.0;  // final-state change against a run at 100x tighter tolerances
};

// Geodesic plus its linearization, so J solves the Jacobi equation
// nabla_v nabla_v J = R(v, J) v. jdot0 is the covariant derivative at s = 0.
JacobiPath integrate_jacobi(const MetricField& field, const Point& x0, const Vector& v0, const Vector& j0,
                            const Vector& jdot0, double s_end, int count, const OdeOptions& options = {});

// Position, velocity and acceleration of a curve with a vector field Y
// along it, all as coordinate derivatives in the curve parameter.
struct CurveJet {
  Point x;
  Vector xd, xdd;
  Vector y, yd, ydd;
};

struct JacobiOperator {
  Vector value;            // P(Y; X, X)
  Scalar f = 0.0;          // nabla_X X = f X
  double scale = 0.0;      // largest coordinate norm among the terms of P
  double pregeodesic = 0.0;  // |nabla_X X - f X| / |nabla_X X|
  Vector nabla_y;          // nabla_X Y
};

// P(Y;X,X) = nabla_X nabla_X Y - nabla_{nabla_X X} Y - R(X,Y)X. Throws
// NotPregeodesic when nabla_X X is not parallel to X within `tol`.
JacobiOperator jacobi_operator(const MetricField& field, const CurveJet& c, double tol = 1e-8);

// Euclidean projection of v onto the orthogonal complement of t.
Vector project_off(const Vector& v, const Vector& t);

struct PInvariance {
  double residual = 0.0;    // |proj(P' - P)| / scale
  double tangential = 0.0;  // component of P' - P along the curve, / scale
  double raw = 0.0;         // |P' - P| / scale
  double scale = 0.0;
  double orthogonality = 0.0;  // |g(Y, X)|, relative
  double derivative = 0.0;     // |g(nabla_X Y, X)|, relative
};

// P for g and for the rescaled metric on the same curve and field, compared
// modulo the curve direction. Throws HypothesisViolated unless X is null
// and Y, nabla_X Y are orthogonal to X (relative 1e-8).
PInvariance check_p_invariance(const MetricField& field, const MetricField& rescaled, const CurveJet& c,
                               double tol = 1e-8);

// g(nabla'_X J, X) - g(nabla_X J, X) at one point for the two metrics' connections.
Scalar connection_difference_along(const MetricField& field, const MetricField& rescaled, const Point& x,
                                   const Vector& X, const Vector& j);

struct LineTransport {
  double max_angle = 0.0;         // largest angle between the lines modulo the curve direction
  double max_scale_change = 0.0;  // largest |ratio - 1| of the transported lengths, for the record
  std::vector<double> s;
  std::vector<Vector> line, line_rescaled;
  bool ok = true;
  ErrorCode status = ErrorCode::StepFailure;
  std::string message;
};

// Parallel transport of l0 along the g-geodesic from (x0, v0) under both
// Levi-Civita connections. Throws HypothesisViolated unless v0 and l0 are
// null and orthogonal.
LineTransport parallel_isotropic_line(const MetricField& field, const MetricField& rescaled, const Point& x0,
                                      const Vector& v0, const Vector& l0, double s_end, int count,
                                      const OdeOptions& options = {});

// Max over samples of |x_eps - x_-eps|/(2 eps) - J| relative to max |J|, for
// geodesics started at x0 +- eps J0 with coordinate velocity v0 +- eps dJ0.
double jacobi_variation_residual(const MetricField& field, const Point& x0, const Vector& v0, const Vector& j0,
                                 const Vector& jdot0, double s_end, int count, double eps = 1e-4,
                                 const OdeOptions& options = {});

struct IsotropicSectional {
  Scalar riemann = 0.0;  // <R(X,Y)X, Y>
  Scalar weyl = 0.0;
  Scalar wedge = 0.0;    // (h^I) value
  double gram = 0.0;
};

// Throws NotIsotropic when the plane is not totally isotropic (1e-10).
IsotropicSectional isotropic_sectional(const CurvaturePack& pack, const Vector& x, const Vector& y);

// Random totally isotropic planes from an orthonormal frame. Real metrics
// need at least two positive and two negative directions.
std::vector<std::pair<Vector, Vector>> sample_isotropic_planes(const Matrix& g, Mode mode, const Point& point,
                                                               int count, Rng& rng);

struct IsotropicScan {
  double max_riemann = 0.0;  // max |R^F|
  double max_wedge = 0.0;    // max |(h^I)^F|
  double max_mismatch = 0.0; // max |R^F - W^F|
  // Component norms in the orthonormal frame the planes are sampled from.
  double weyl_norm = 0.0;
  double riemann_norm = 0.0;
  int count = 0;
  bool consistent_with_flat = false;  // max |R^F| < tol
};

IsotropicScan weyl_isotropic_scan(const CurvaturePack& pack, Mode mode, int samples, Rng& rng, double tol,
                                  const std::vector<std::pair<Vector, Vector>>& extra_planes = {});

}  // namespace confgeo
