#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confgeo/chart.hpp"
#include "confgeo/curvature.hpp"
#include "confgeo/frame.hpp"

namespace confgeo {

// An (n-1)-dimensional chart embedded in an ambient chart by n expressions
// in the hypersurface parameters.
struct HypersurfaceSpec {
  std::string name;
  MetricChart ambient;
  std::vector<std::string> parameters;
  std::vector<Expr> embedding;
  std::vector<Interval> domain;
  int normal_sign = 1;
  // Ambient function vanishing on the hypersurface, used to build the
  // totally geodesic gauge phi = kappa * s.
  std::optional<Expr> normal_coordinate;
  // Optional kappa field over ambient coordinates when kappa is not constant.
  std::optional<Expr> gauge_scale;
  std::vector<Point> sample_points;

  int dim() const { return static_cast<int>(parameters.size()); }
};

struct ShapeData {
  Point u;
  Point x;
  Matrix tangents;  // n x (n-1), columns dF/du^a
  Vector normal;    // unit normal, g(nu,nu) = eps_normal
  int eps_normal = 1;
  Matrix induced;        // (n-1) x (n-1)
  Matrix second_form;    // II(T_a, T_b) = g(nabla_{T_a} T_b, nu)
  Scalar lambda = 0.0;   // tr II / (n-1)
  double umbilic_residual = 0.0;  // |II - lambda g_M| in an induced orthonormal frame
  std::vector<Jet> induced_jets;  // row-major, in the parameters
};

// Throws RankDeficient, DegenerateInducedMetric, NullNormal.
ShapeData induced_geometry(const HypersurfaceSpec& spec, const Point& u, int induced_order = 3);

// Curvature of the induced metric at u (uses induced_geometry's jets).
CurvaturePack induced_curvature(const ShapeData& shape);

struct Gauge {
  Expr phi;
  MetricChart rescaled;
  std::vector<Scalar> kappa;  // per sample point
};

// phi = kappa * s with dphi(nu) = lambda on the hypersurface, which removes
// the umbilic second fundamental form. kappa = lambda / ds(nu) must agree
// across samples unless gauge_scale is supplied. Throws NotUmbilic,
// NonConstantGauge, InvalidArgument (no normal coordinate).
Gauge totally_geodesic_gauge(const HypersurfaceSpec& spec, double umbilic_tol = 1e-8);

HypersurfaceSpec with_ambient(const HypersurfaceSpec& spec, MetricChart ambient);

struct Thm1Options {
  int orientation = 1;          // ambient orientation relative to coordinate order
  double self_dual_tol = 1e-6;  // gate: ||W-|| <= tol ||R|| + 1e-12
  double collar_step = 5e-3;    // spacing of gate points along the normal
  int collar_points = 3;        // per side
  double umbilic_tol = 1e-8;
  int jet_order = 3;
};

struct Thm1Sample {
  Point u;
  double riemann_norm = 0.0;
  double weyl_plus_norm = 0.0;   // (i)
  double weyl_minus_gate = 0.0;  // largest ||W-|| / ||R|| over the collar
  double cyw_lhs_norm = 0.0;     // (ii) <nabla_nu W+(A), B>
  double cyw_rhs_norm = 0.0;     //      C^M(A)(*B)
  double cyw_residual = 0.0;
  double cyw_opposite_residual = 0.0;  // same with the other sign, for the record
  double cplus_norm = 0.0;       // (iii)
  double cm_norm = 0.0;
  double cplus_residual = 0.0;
  double tgeod_residual = 0.0;   // R(X,Y)Z vs R^M(X,Y)Z, relative
  double rq_residual = 0.0;      // |<R(X,Y)Z,X> + <R(Z,nu)Y,nu>| / ||R||
  Tensor cotton_m;               // C^M in parameter coordinates
};

// Theorem checks along an umbilic hypersurface of a 4-dimensional
// self-dual ambient, in the totally geodesic gauge. The sign convention in
// (ii) is <nabla_nu W+(A), B> = C^M(A)(*B) for this library's curvature
// sign; orientation of M is the one making (X, Y, Z, nu) positive.
// Throws AmbientNotSelfDual, NotUmbilic, NullNormal.
std::vector<Thm1Sample> thm1_check(const HypersurfaceSpec& spec, const Thm1Options& options);

// Gauss-equation residual alone (no self-duality needed): relative mismatch
// of <R(A,B)C,D> and <R^M(A,B)C,D> over tangent frames, at u.
double tgeod_residual(const HypersurfaceSpec& spec, const Point& u);

}  // namespace confgeo
