#include "confgeo/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "confgeo/conformal.hpp"
#include "confgeo/curvature.hpp"
#include "confgeo/fd_oracle.hpp"
#include "confgeo/fourdim.hpp"
#include "confgeo/frame.hpp"
#include "confgeo/hypersurface.hpp"
#include "confgeo/nullgeo.hpp"
#include "confgeo/random_metric.hpp"

#ifndef CONFGEO_VERSION
#define CONFGEO_VERSION "0.0.0"
#endif

namespace confgeo {

using json = nlohmann::json;

std::string version_string() { return CONFGEO_VERSION; }

namespace {

struct Skip {
  std::string reason;
};

enum class Kind { Chart, Hypersurface, Geodesic };

struct Task {
  const CheckSpec* spec;
  std::string target;
  Kind kind;
};

struct Context {
  const Manifest& manifest;
  const CheckSpec& spec;
  const std::string& target;
  int order;
  bool fd;
  std::uint64_t seed;
  CheckRecord& rec;
  Rng rng;

  double tol(double def) const { return spec.tolerance.value_or(def); }
  double abs_tol(double def) const { return spec.abs_tolerance.value_or(def); }

  const MetricChart& chart() const { return *manifest.find_chart(target); }
  const HypersurfaceSpec& hypersurface() const { return *manifest.find_hypersurface(target); }

  int orientation(const MetricChart& c) const { return manifest.settings.orientation.value_or(c.orientation); }

  void need_derivatives() const {
    if (order < 3) fail(ErrorCode::InvalidArgument, "this check needs jet order 3 or more");
  }

  std::vector<Point> points(const MetricChart& c) {
    std::vector<Point> pts = c.sample_points;
    if (pts.empty()) {
      if (c.domain.empty()) fail(ErrorCode::InvalidArgument, "chart '" + c.name + "' has no sample points and no domain");
      for (int k = 0; k < 5; ++k) {
        Point p(c.dim());
        for (int i = 0; i < c.dim(); ++i) {
          const double w = c.domain[i].hi - c.domain[i].lo;
          p[i] = rng.uniform(c.domain[i].lo + 0.1 * w, c.domain[i].hi - 0.1 * w);
        }
        pts.push_back(p);
      }
    }
    for (const auto& p : pts) rec.samples.push_back(p);
    return pts;
  }

  Expr phi(const MetricChart& c) {
    if (spec.phi) return Expr::parse(*spec.phi);
    return random_potential(rng, c.coordinates);
  }
};

double frobenius(const Matrix& m) { return m.norm(); }

bool has_null_directions(const MetricChart& c, const Point& x) {
  if (c.mode == Mode::Complex) return true;
  if (c.signature) return c.signature->first > 0 && c.signature->second > 0;
  const Matrix g = MetricField(c).value(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.real());
  return es.eigenvalues().minCoeff() < 0.0 && es.eigenvalues().maxCoeff() > 0.0;
}

bool has_isotropic_planes(const MetricChart& c, const Point& x) {
  if (c.dim() < 4) return false;
  if (c.mode == Mode::Complex) return true;
  std::pair<int, int> sig;
  if (c.signature) {
    sig = *c.signature;
  } else {
    const Matrix g = MetricField(c).value(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.real());
    for (int i = 0; i < c.dim(); ++i) (es.eigenvalues()[i] > 0 ? sig.first : sig.second)++;
  }
  return sig.first >= 2 && sig.second >= 2;
}

void require_null(const MetricChart& c, const std::vector<Point>& pts) {
  if (pts.empty() || !has_null_directions(c, pts.front())) throw Skip{"metric has no null directions"};
}

// A random vector g-orthogonal to v.
Vector orthogonal_to(const Matrix& g, const Vector& v, Rng& rng) {
  const int n = static_cast<int>(v.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector r(n), m(n);
    for (int k = 0; k < n; ++k) r[k] = rng.normal();
    for (int k = 0; k < n; ++k) m[k] = rng.normal();
    const Scalar gm = inner(g, m, v);
    if (std::abs(gm) < 1e-3 * m.norm() * v.norm()) continue;
    return r - (inner(g, r, v) / gm) * m;
  }
  fail(ErrorCode::DegenerateMetric, "could not build a vector orthogonal to the curve");
}

Vector random_vector(int n, Rng& rng) {
  Vector r(n);
  for (int k = 0; k < n; ++k) r[k] = rng.normal();
  return r;
}

double rel_with(double diff, double a, double b) { return relative_residual(diff, a, b); }

// ---------------------------------------------------------------------------

void run_weyl3_vanish(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() != 3) throw Skip{"applies to three-dimensional charts"};
  const MetricField field(c);
  auto& r = ctx.rec.residual("weyl_ratio", ctx.tol(1e-8), ctx.abs_tol(1e-12));
  for (const auto& x : ctx.points(c)) {
    const CurvaturePack p = curvature(field, x, 2);
    r.add(weyl_ratio(p), p.weyl.norm());
  }
}

void run_cy_transform(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() < 3) throw Skip{"needs dimension at least 3"};
  ctx.need_derivatives();
  const Expr phi = ctx.phi(c);
  ctx.rec.message = "phi = " + phi.to_string();
  const MetricField field(c);
  const MetricField scaled(rescale(c, phi));
  auto& law = ctx.rec.residual("transform_law", ctx.tol(1e-7), ctx.abs_tol(1e-12));
  auto& weyl = ctx.rec.residual("weyl_invariance", ctx.tol(1e-7), ctx.abs_tol(1e-12));
  double change = 0.0;
  for (const auto& x : ctx.points(c)) {
    const CyTransform t = check_cy_transform(c, phi, x, ctx.order);
    law.add(t.residual, t.residual * (t.cotton_norm + t.rescaled_norm + 1e-12));
    const CurvaturePack a = curvature(field, x, 2), b = curvature(scaled, x, 2);
    const double dev = weyl_deviation(a, b);
    weyl.add(dev, (a.weyl_up - b.weyl_up).max_abs());
    change = std::max(change, t.change_norm);
    if (c.dim() == 3) {
      ctx.rec.residual("exact_invariance_3d", ctx.tol(1e-8), ctx.abs_tol(1e-12))
          .add(rel_with(t.change_norm, t.cotton_norm, t.rescaled_norm), t.change_norm);
    }
  }
  ctx.rec.values["max_cotton_change"] = change;
}

void run_bianchi(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() < 3) throw Skip{"needs dimension at least 3"};
  ctx.need_derivatives();
  const MetricField field(c);
  const double tol = ctx.tol(1e-8), atol = ctx.abs_tol(1e-12);
  double cmax = 0.0;
  for (const auto& x : ctx.points(c)) {
    const CurvaturePack p = curvature(field, x, ctx.order);
    const PointFrame frame = orthonormal_frame(p.g, c.mode, x);
    const BianchiResiduals b = bianchi_residuals(p.cotton, frame);
    auto rel = [](double v, double s) { return s > 0 ? v / s : v; };
    ctx.rec.residual("cyclic", tol, atol).add(rel(b.cyclic, b.scale), b.cyclic);
    ctx.rec.residual("trace", tol, atol).add(rel(b.trace, b.scale), b.trace);
    cmax = std::max(cmax, b.scale);
    if (c.dim() == 4) {
      Lambda2 l2;
      try {
        l2 = lambda2(p.g, ctx.orientation(c), c.mode);
      } catch (const Error&) {
        continue;
      }
      const CottonSplit s = cy_pm(p.cotton, l2);
      for (const auto& [name, part] : {std::pair{"plus", &s.plus}, std::pair{"minus", &s.minus}}) {
        const BianchiResiduals bp = bianchi_residuals(*part, frame);
        ctx.rec.residual(std::string("cyclic_") + name, tol, atol).add(rel(bp.cyclic, b.scale), bp.cyclic);
        ctx.rec.residual(std::string("trace_") + name, tol, atol).add(rel(bp.trace, b.scale), bp.trace);
      }
    }
  }
  ctx.rec.values["max_cotton_norm"] = cmax;
}

void run_div_weyl(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() < 4) throw Skip{"the Weyl tensor vanishes identically below dimension 4"};
  ctx.need_derivatives();
  const MetricField field(c);
  auto& r = ctx.rec.residual("div_weyl_vs_cotton", ctx.tol(1e-6), ctx.abs_tol(1e-10));
  const double fd_tol = ctx.manifest.settings.fd_tolerance;
  const double step = ctx.manifest.settings.fd_step;
  for (const auto& x : ctx.points(c)) {
    const CurvaturePack p = curvature(field, x, ctx.order);
    const double diff = (p.div_weyl - p.cotton).norm();
    r.add(relative_residual(p.div_weyl, p.cotton), diff);
    if (!ctx.fd) continue;
    const std::pair<FdQuantity, const Tensor*> pairs[] = {{FdQuantity::Christoffel, &p.gamma},
                                                          {FdQuantity::Riemann, &p.riemann},
                                                          {FdQuantity::NablaH, &p.nabla_h},
                                                          {FdQuantity::DivWeyl, &p.div_weyl}};
    for (const auto& [q, jet] : pairs) {
      const Tensor fd = fd_oracle(field, q, x, step);
      ctx.rec.residual(std::string("fd_") + to_string(q), fd_tol, 1e-9)
          .add(relative_residual(*jet, fd), (*jet - fd).norm());
    }
  }
}

void run_div_weyl_pm(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() != 4) throw Skip{"applies to four-dimensional charts"};
  ctx.need_derivatives();
  const MetricField field(c);
  const double tol = ctx.tol(1e-6), atol = ctx.abs_tol(1e-10);
  for (const auto& x : ctx.points(c)) {
    const CurvaturePack p = curvature(field, x, ctx.order);
    Lambda2 l2;
    try {
      l2 = lambda2(p.g, ctx.orientation(c), c.mode);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LorentzianUnsupported) throw Skip{"Lorentzian signature has no real self-dual split"};
      throw;
    }
    const DivWeylSplit d = div_weyl_pm(p, l2);
    const CottonSplit s = cy_pm(p.cotton, l2);
    const double cn = p.cotton.norm();
    const double dp = (d.plus - s.plus).norm(), dm = (d.minus - s.minus).norm();
    ctx.rec.residual("plus", tol, atol).add(dp / (cn + 1e-12), dp);
    ctx.rec.residual("minus", tol, atol).add(dm / (cn + 1e-12), dm);
    const double sum = (s.plus + s.minus - p.cotton).norm();
    ctx.rec.residual("split_sum", 1e-12, 1e-14).add(sum / (cn + 1e-12), sum);
  }
}

void run_star_ricci_3d(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() != 3) throw Skip{"applies to three-dimensional charts"};
  const MetricField field(c);
  auto& r = ctx.rec.residual("star_ricci", ctx.tol(1e-7), ctx.abs_tol(1e-12));
  for (const auto& x : ctx.points(c)) {
    const CurvaturePack p = curvature(field, x, 2);
    const StarRicci s = star_ricci_3d(p, ctx.orientation(c), c.mode);
    r.add(s.residual, frobenius(s.lhs - s.rhs));
  }
}

void run_lemma_cminus(Context& ctx) {
  const MetricChart& c = ctx.chart();
  if (c.dim() != 4) throw Skip{"applies to four-dimensional charts"};
  ctx.need_derivatives();
  const MetricField field(c);
  const double gate = ctx.manifest.settings.self_dual_tol;
  auto& r = ctx.rec.residual("cminus", ctx.tol(1e-6), ctx.abs_tol(1e-9));
  int gated = 0, used = 0;
  double worst_gate = 0.0;
  for (const auto& x : ctx.points(c)) {
    const CurvaturePack p = curvature(field, x, ctx.order);
    Lambda2 l2;
    try {
      l2 = lambda2(p.g, ctx.orientation(c), c.mode);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LorentzianUnsupported) throw Skip{"Lorentzian signature has no real self-dual split"};
      throw;
    }
    const WeylSplit w = weyl_pm(p, l2);
    const double rn = p.riemann_low.norm(), wm = w.minus.norm();
    worst_gate = std::max(worst_gate, rn > 0 ? wm / rn : wm);
    if (wm > gate * rn + 1e-12) {
      ++gated;
      continue;
    }
    ++used;
    const CottonSplit s = cy_pm(p.cotton, l2);
    const double cm = s.minus.norm();
    r.add(cm / (p.cotton.norm() + 1e-12), cm);
  }
  ctx.rec.values["points_not_self_dual"] = gated;
  ctx.rec.values["max_weyl_minus_ratio"] = worst_gate;
  if (used == 0) throw Skip{"metric is not self-dual at any sample point"};
}

Thm1Options thm1_options(const Context& ctx, const HypersurfaceSpec& h) {
  Thm1Options o;
  o.orientation = ctx.orientation(h.ambient);
  o.self_dual_tol = ctx.manifest.settings.self_dual_tol;
  o.jet_order = ctx.order;
  return o;
}

void run_thm1(Context& ctx) {
  const HypersurfaceSpec& h = ctx.hypersurface();
  if (h.ambient.dim() != 4) throw Skip{"applies to hypersurfaces of four-dimensional charts"};
  ctx.need_derivatives();
  for (const auto& u : h.sample_points) ctx.rec.samples.push_back(u);
  const auto samples = thm1_check(h, thm1_options(ctx, h));
  const double tol = ctx.tol(1e-5), atol = ctx.abs_tol(1e-9);
  auto& i = ctx.rec.residual("weyl_plus_on_boundary", ctx.tol(1e-6), atol);
  auto& ii = ctx.rec.residual("weyl_derivative_vs_cotton", tol, atol);
  auto& iii = ctx.rec.residual("cotton_plus_vs_boundary", tol, atol);
  double lhs_min = INFINITY, rhs_min = INFINITY, opp = INFINITY, gate = 0.0, tg = 0.0, rq = 0.0;
  for (const auto& s : samples) {
    i.add(s.riemann_norm > 0 ? s.weyl_plus_norm / s.riemann_norm : s.weyl_plus_norm, s.weyl_plus_norm);
    ii.add(s.cyw_residual, s.cyw_residual * (s.cyw_lhs_norm + s.cyw_rhs_norm + 1e-12));
    iii.add(s.cplus_residual, s.cplus_residual * (s.cplus_norm + s.cm_norm + 1e-12));
    lhs_min = std::min(lhs_min, s.cyw_lhs_norm);
    rhs_min = std::min(rhs_min, s.cyw_rhs_norm);
    opp = std::min(opp, s.cyw_opposite_residual);
    gate = std::max(gate, s.weyl_minus_gate);
    tg = std::max(tg, s.tgeod_residual);
    rq = std::max(rq, s.rq_residual);
  }
  ctx.rec.values["min_weyl_derivative_norm"] = lhs_min;
  ctx.rec.values["min_boundary_cotton_norm"] = rhs_min;
  ctx.rec.values["min_opposite_sign_residual"] = opp;
  ctx.rec.values["max_weyl_minus_ratio"] = gate;
  ctx.rec.values["max_gauss_residual"] = tg;
  ctx.rec.values["max_rq_residual"] = rq;
  if (ctx.spec.expect == std::string("nonflat")) {
    ctx.rec.require("weyl_derivative_nonzero", lhs_min > 1e-6, lhs_min, 1e-6);
    ctx.rec.require("boundary_cotton_nonzero", rhs_min > 1e-6, rhs_min, 1e-6);
  }
  if (ctx.spec.intrinsic_chart) {
    const MetricChart* ic = ctx.manifest.find_chart(*ctx.spec.intrinsic_chart);
    if (ic->dim() != 3) fail(ErrorCode::InvalidArgument, "intrinsic chart must be three-dimensional");
    const MetricField field(*ic);
    auto& r = ctx.rec.residual("boundary_cotton_vs_intrinsic_chart", tol, atol);
    for (const auto& s : samples) {
      const CurvaturePack p = curvature(field, s.u, 3);
      r.add(relative_residual(s.cotton_m, p.cotton), (s.cotton_m - p.cotton).norm());
    }
  }
}

void run_eq_rq(Context& ctx) {
  const HypersurfaceSpec& h = ctx.hypersurface();
  if (h.ambient.dim() != 4) throw Skip{"applies to hypersurfaces of four-dimensional charts"};
  ctx.need_derivatives();
  for (const auto& u : h.sample_points) ctx.rec.samples.push_back(u);
  std::vector<Thm1Sample> samples;
  try {
    samples = thm1_check(h, thm1_options(ctx, h));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AmbientNotSelfDual) throw Skip{e.what()};
    throw;
  }
  auto& r = ctx.rec.residual("rq", ctx.tol(1e-8), ctx.abs_tol(1e-10));
  for (const auto& s : samples) r.add(s.rq_residual, s.rq_residual * s.riemann_norm);
}

void run_eq_tgeod(Context& ctx) {
  const HypersurfaceSpec& h = ctx.hypersurface();
  HypersurfaceSpec gauged = h;
  if (h.normal_coordinate) gauged = with_ambient(h, totally_geodesic_gauge(h).rescaled);
  auto& r = ctx.rec.residual("gauss", ctx.tol(1e-8), ctx.abs_tol(1e-12));
  for (const auto& u : h.sample_points) {
    ctx.rec.samples.push_back(u);
    const double v = tgeod_residual(gauged, u);
    r.add(v, v);
  }
  if (h.sample_points.empty()) fail(ErrorCode::InvalidArgument, "hypersurface has no sample points");
}

void run_p_invariance(Context& ctx) {
  const MetricChart& c = ctx.chart();
  const auto pts = ctx.points(c);
  require_null(c, pts);
  const MetricField field(c);
  const Expr phi = ctx.phi(c);
  ctx.rec.message = "phi = " + phi.to_string();
  const MetricField scaled(rescale(c, phi));
  const double s_end = ctx.spec.s_end.value_or(0.2);
  auto& r = ctx.rec.residual("p_modulo_curve", ctx.tol(1e-7), ctx.abs_tol(0.0));
  double tangential = 0.0;
  for (const auto& x : pts) {
    const Matrix g = field.value(x);
    const Vector v = sample_isotropy_cone(g, c.mode, 1, ctx.rng).front();
    const Vector j = orthogonal_to(g, v, ctx.rng), jd = orthogonal_to(g, v, ctx.rng);
    const JacobiPath path = integrate_jacobi(field, x, v, j, jd, s_end, 8);
    if (!path.ok) fail(path.status, path.message);
    for (const auto& s : path.samples) {
      const PInvariance pi = check_p_invariance(field, scaled, {s.x, s.v, s.a, s.j, s.dj, s.ddj});
      r.add(pi.residual, pi.residual * pi.scale);
      tangential = std::max(tangential, pi.tangential);
    }
  }
  ctx.rec.values["max_tangential_difference"] = tangential;
}

void run_lemma3(Context& ctx) {
  const MetricChart& c = ctx.chart();
  const auto pts = ctx.points(c);
  require_null(c, pts);
  const MetricField field(c);
  const Expr phi = ctx.phi(c);
  ctx.rec.message = "phi = " + phi.to_string();
  const MetricField scaled(rescale(c, phi));
  auto& r = ctx.rec.residual("connection_difference", ctx.tol(1e-9), ctx.abs_tol(0.0));
  double contrast = 0.0;
  for (const auto& x : pts) {
    const Matrix g = field.value(x);
    const Vector v = sample_isotropy_cone(g, c.mode, 1, ctx.rng).front();
    const Vector j = random_vector(c.dim(), ctx.rng);
    const double d = std::abs(connection_difference_along(field, scaled, x, v, j));
    r.add(d, d);
    // The same quantity for a non-null direction is dphi(J) g(X,X), generally nonzero.
    const Vector w = random_vector(c.dim(), ctx.rng).normalized();
    contrast = std::max(contrast, std::abs(connection_difference_along(field, scaled, x, w, j)));
  }
  ctx.rec.values["non_null_contrast"] = contrast;
}

void run_lemma4_lines(Context& ctx) {
  const MetricChart& c = ctx.chart();
  const auto pts = ctx.points(c);
  if (pts.empty() || !has_isotropic_planes(c, pts.front())) throw Skip{"metric has no totally isotropic planes"};
  const MetricField field(c);
  const Expr phi = ctx.phi(c);
  ctx.rec.message = "phi = " + phi.to_string();
  const MetricField scaled(rescale(c, phi));
  const double s_end = ctx.spec.s_end.value_or(0.2);
  auto& r = ctx.rec.residual("line_angle", ctx.tol(1e-6), ctx.abs_tol(0.0));
  double scale_change = 0.0;
  for (const auto& x : pts) {
    const auto planes = sample_isotropic_planes(field.value(x), c.mode, x, 1, ctx.rng);
    const Vector v = planes[0].first.normalized(), l = planes[0].second.normalized();
    const LineTransport t = parallel_isotropic_line(field, scaled, x, v, l, s_end, 10);
    if (!t.ok) fail(t.status, t.message);
    r.add(t.max_angle, t.max_angle);
    scale_change = std::max(scale_change, t.max_scale_change);
  }
  ctx.rec.values["max_length_change"] = scale_change;
}

void run_isotropic_scan(Context& ctx) {
  const MetricChart& c = ctx.chart();
  const auto pts = ctx.points(c);
  if (pts.empty() || !has_isotropic_planes(c, pts.front())) throw Skip{"metric has no totally isotropic planes"};
  const MetricField field(c);
  const int count = ctx.spec.samples.value_or(50);
  const double tol = ctx.tol(1e-9);
  auto& wedge = ctx.rec.residual("wedge_value", 1e-10, 0.0);
  auto& mismatch = ctx.rec.residual("riemann_minus_weyl", 1e-9, 0.0);
  double max_rf = 0.0, wn = 0.0, rn = 0.0;
  int total = 0;
  bool first = true;
  for (const auto& x : pts) {
    const CurvaturePack p = curvature(field, x, 2);
    std::vector<std::pair<Vector, Vector>> extra;
    if (first) {
      for (std::size_t k = 0; k < ctx.spec.planes.size(); ++k) {
        const PlaneSpec& ps = ctx.spec.planes[k];
        if (static_cast<int>(ps.x.size()) != c.dim())
          fail(ErrorCode::InvalidArgument, "plane vectors do not match the chart dimension");
        const Vector X = Eigen::Map<const Vector>(ps.x.data(), c.dim());
        const Vector Y = Eigen::Map<const Vector>(ps.y.data(), c.dim());
        const IsotropicSectional v = isotropic_sectional(p, X, Y);
        ctx.rec.values["plane_" + std::to_string(k) + "_value"] = v.riemann.real();
        if (ps.expect_value) {
          const double d = std::abs(v.riemann - *ps.expect_value);
          ctx.rec.residual("plane_" + std::to_string(k) + "_expected", ctx.tol(1e-12), 0.0).add(d, d);
        }
        extra.emplace_back(X, Y);
      }
    }
    first = false;
    const IsotropicScan s = weyl_isotropic_scan(p, c.mode, count, ctx.rng, tol, extra);
    wedge.add(s.max_wedge, s.max_wedge);
    mismatch.add(s.max_mismatch, s.max_mismatch);
    max_rf = std::max(max_rf, s.max_riemann);
    wn = std::max(wn, s.weyl_norm);
    rn = std::max(rn, s.riemann_norm);
    total += s.count;
    if (ctx.spec.expect == std::string("flat")) {
      ctx.rec.residual("max_sectional", tol, 0.0).add(s.max_riemann, s.max_riemann);
      ctx.rec.residual("weyl_norm", tol, 0.0).add(s.weyl_norm, s.weyl_norm);
    } else if (ctx.spec.expect == std::string("nonflat")) {
      ctx.rec.require("sectional_detects_weyl", s.max_riemann > 1e-3 * s.riemann_norm, s.max_riemann,
                      1e-3 * s.riemann_norm);
    }
  }
  ctx.rec.values["max_sectional"] = max_rf;
  ctx.rec.values["weyl_norm"] = wn;
  ctx.rec.values["riemann_norm"] = rn;
  ctx.rec.values["planes"] = total;
  ctx.rec.values["consistent_with_weyl_zero"] = max_rf < tol ? 1.0 : 0.0;
}

void run_null_conservation(Context& ctx) {
  auto drift = [&]() -> Residual& { return ctx.rec.residual("null_drift", ctx.tol(1e-8), ctx.abs_tol(0.0)); };
  if (const GeodesicRun* g = ctx.manifest.find_geodesic(ctx.target)) {
    const MetricChart& c = *ctx.manifest.find_chart(g->chart);
    require_null(c, {g->x0});
    const MetricField field(c);
    const Vector v0 = Eigen::Map<const Vector>(g->v0.data(), c.dim());
    const double start = std::abs(inner(field.value(g->x0), v0, v0));
    if (start > 1e-12 * v0.squaredNorm()) fail(ErrorCode::HypothesisViolated, "initial velocity is not null");
    ctx.rec.samples.push_back(g->x0);
    const Trajectory t = integrate_geodesic(field, g->x0, v0, g->s_end, g->samples);
    if (!t.ok) fail(t.status, t.message);
    drift().add(t.max_drift, t.max_drift);
    return;
  }
  const MetricChart& c = ctx.chart();
  const auto pts = ctx.points(c);
  require_null(c, pts);
  const MetricField field(c);
  const double s_end = ctx.spec.s_end.value_or(0.3);
  auto& r = drift();
  for (const auto& x : pts) {
    const Vector v = sample_isotropy_cone(field.value(x), c.mode, 1, ctx.rng).front();
    const Trajectory t = integrate_geodesic(field, x, v, s_end, 20);
    if (!t.ok) fail(t.status, t.message);
    r.add(t.max_drift, t.max_drift);
  }
}

void run_jacobi_variation(Context& ctx) {
  const MetricChart& c = ctx.chart();
  const auto pts = ctx.points(c);
  require_null(c, pts);
  const MetricField field(c);
  const double s_end = ctx.spec.s_end.value_or(0.3);
  auto& r = ctx.rec.residual("variation", ctx.tol(1e-4), ctx.abs_tol(0.0));
  auto& acc = ctx.rec.residual("integration_error", 1e-8, 0.0);
  for (const auto& x : pts) {
    const Matrix g = field.value(x);
    const Vector v = sample_isotropy_cone(g, c.mode, 1, ctx.rng).front();
    const Vector j = random_vector(c.dim(), ctx.rng), jd = random_vector(c.dim(), ctx.rng);
    const double d = jacobi_variation_residual(field, x, v, j, jd, s_end, 10);
    r.add(d, d);
    const JacobiPath path = integrate_jacobi(field, x, v, j, jd, s_end, 1);
    acc.add(path.error_estimate, path.error_estimate);
  }
}

struct CheckDef {
  const char* name;
  std::vector<Kind> kinds;
  void (*run)(Context&);
};

const std::vector<CheckDef>& definitions() {
  static const std::vector<CheckDef> defs = {
      {"weyl3_vanish", {Kind::Chart}, run_weyl3_vanish},
      {"cy_transform", {Kind::Chart}, run_cy_transform},
      {"bianchi", {Kind::Chart}, run_bianchi},
      {"div_weyl", {Kind::Chart}, run_div_weyl},
      {"div_weyl_pm", {Kind::Chart}, run_div_weyl_pm},
      {"star_ricci_3d", {Kind::Chart}, run_star_ricci_3d},
      {"lemma_cminus", {Kind::Chart}, run_lemma_cminus},
      {"thm1", {Kind::Hypersurface}, run_thm1},
      {"eq_rq", {Kind::Hypersurface}, run_eq_rq},
      {"eq_tgeod", {Kind::Hypersurface}, run_eq_tgeod},
      {"p_invariance", {Kind::Chart}, run_p_invariance},
      {"lemma3", {Kind::Chart}, run_lemma3},
      {"lemma4_lines", {Kind::Chart}, run_lemma4_lines},
      {"isotropic_scan", {Kind::Chart}, run_isotropic_scan},
      {"null_conservation", {Kind::Chart, Kind::Geodesic}, run_null_conservation},
      {"jacobi_variation", {Kind::Chart}, run_jacobi_variation},
  };
  return defs;
}

const CheckDef& definition(const std::string& name) {
  for (const auto& d : definitions())
    if (name == d.name) return d;
  fail(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
}

std::optional<Kind> kind_of(const Manifest& m, const std::string& name) {
  if (m.find_chart(name)) return Kind::Chart;
  if (m.find_hypersurface(name)) return Kind::Hypersurface;
  if (m.find_geodesic(name)) return Kind::Geodesic;
  return std::nullopt;
}

std::vector<std::string> names_of(const Manifest& m, Kind k) {
  std::vector<std::string> out;
  if (k == Kind::Chart)
    for (const auto& c : m.charts) out.push_back(c.name);
  if (k == Kind::Hypersurface)
    for (const auto& h : m.hypersurfaces) out.push_back(h.name);
  if (k == Kind::Geodesic)
    for (const auto& g : m.geodesics) out.push_back(g.name);
  return out;
}

std::vector<Task> expand(const Manifest& m, const CheckSpec& spec) {
  const CheckDef& def = definition(spec.name);
  std::vector<Task> out;
  auto push = [&](const std::string& name) {
    const auto k = kind_of(m, name);
    out.push_back({&spec, name, k.value_or(Kind::Chart)});
  };
  if (spec.targets.empty()) {
    for (Kind k : def.kinds)
      for (const auto& n : names_of(m, k)) push(n);
    return out;
  }
  for (const auto& t : spec.targets) {
    if (!t.empty() && t.back() == '*') {
      const std::string prefix = t.substr(0, t.size() - 1);
      for (Kind k : {Kind::Chart, Kind::Hypersurface, Kind::Geodesic})
        for (const auto& n : names_of(m, k))
          if (n.rfind(prefix, 0) == 0 && std::find(def.kinds.begin(), def.kinds.end(), k) != def.kinds.end())
            push(n);
    } else {
      push(t);
    }
  }
  return out;
}

std::uint64_t inputs_digest(const Manifest& m, const Task& t, int order, bool fd, std::uint64_t seed) {
  std::ostringstream os;
  os.precision(17);
  os << t.spec->name << '|' << t.target << '|' << order << '|' << fd << '|' << seed << '|'
     << t.spec->tolerance.value_or(-1) << '|' << t.spec->abs_tolerance.value_or(-1) << '|'
     << t.spec->phi.value_or("") << '|' << t.spec->samples.value_or(-1) << '|' << t.spec->s_end.value_or(-1) << '|';
  auto chart_text = [&](const MetricChart& c) {
    os << c.name << ':' << to_string(c.mode) << ':' << c.orientation << ':';
    for (const auto& e : c.components) os << e.to_string() << ';';
    for (const auto& [k, v] : c.parameters) os << k << '=' << v << ';';
    for (const auto& p : c.sample_points)
      for (const auto& s : p) os << s << ',';
  };
  if (const auto* c = m.find_chart(t.target)) chart_text(*c);
  if (const auto* h = m.find_hypersurface(t.target)) {
    chart_text(h->ambient);
    for (const auto& e : h->embedding) os << e.to_string() << ';';
    for (const auto& p : h->sample_points)
      for (const auto& s : p) os << s << ',';
  }
  if (const auto* g = m.find_geodesic(t.target)) {
    os << g->chart << ':' << g->s_end << ':' << g->samples << ':';
    for (const auto& s : g->x0) os << s << ',';
    for (const auto& s : g->v0) os << s << ',';
  }
  return fnv1a64(os.str());
}

void execute(const Manifest& m, const Task& t, int order, bool fd, std::uint64_t seed, CheckRecord& rec) {
  const auto start = std::chrono::steady_clock::now();
  rec.check = t.spec->name;
  rec.target = t.target;
  rec.seed = derive_seed(seed, t.spec->name, t.target);
  rec.inputs_digest = inputs_digest(m, t, order, fd, seed);
  const CheckDef& def = definition(t.spec->name);
  Context ctx{m, *t.spec, t.target, order, fd, seed, rec, Rng(rec.seed)};
  try {
    if (std::find(def.kinds.begin(), def.kinds.end(), t.kind) == def.kinds.end())
      fail(ErrorCode::InvalidArgument, "target '" + t.target + "' has the wrong kind for this check");
    def.run(ctx);
    rec.settle();
  } catch (const Skip& s) {
    rec.verdict = Verdict::Skipped;
    rec.message = s.reason;
  } catch (const Error& e) {
    rec.verdict = Verdict::Errored;
    rec.message = e.what();
  } catch (const std::exception& e) {
    rec.verdict = Verdict::Errored;
    rec.message = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json scalar_json(Scalar s) {
  if (s.imag() == 0.0) return s.real();
  return json::array({s.real(), s.imag()});
}

json tensor_json(const Tensor& t) {
  std::function<json(std::size_t&, int)> build = [&](std::size_t& off, int depth) {
    json a = json::array();
    for (int i = 0; i < t.dim(); ++i) {
      if (depth + 1 == t.rank()) a.push_back(scalar_json(t.data()[off++]));
      else a.push_back(build(off, depth + 1));
    }
    return a;
  };
  if (t.rank() == 0) return json();
  std::size_t off = 0;
  return build(off, 0);
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j)));
    a.push_back(row);
  }
  return a;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(scalar_json(v[i]));
  return a;
}

}  // namespace

Report run_suite(const Manifest& manifest, const SuiteOptions& options) {
  for (const auto& name : options.only) definition(name);
  const int order = options.order.value_or(manifest.settings.jet_order);
  if (order < 2 || order > kMaxJetOrder)
    fail(ErrorCode::InvalidArgument, "jet order must be in 2.." + std::to_string(kMaxJetOrder));
  const bool fd = options.fd.value_or(manifest.settings.fd);
  const std::uint64_t seed = options.seed.value_or(manifest.settings.seed.value_or(0));

  std::vector<Task> tasks;
  for (const auto& spec : manifest.checks) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), spec.name) == options.only.end())
      continue;
    for (auto& t : expand(manifest, spec)) tasks.push_back(std::move(t));
  }

  Report rep;
  rep.version = version_string();
  rep.conventions_digest = fnv1a64(conventions_text());
  rep.manifest_digest = manifest.digest;
  rep.seed = seed;
  rep.records.resize(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) execute(manifest, tasks[i], order, fd, seed, rep.records[i]);
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rep;
}

bool trace_geodesic(const Manifest& manifest, const std::string& run, std::ostream& out) {
  const GeodesicRun* g = manifest.find_geodesic(run);
  if (!g) fail(ErrorCode::UnresolvedReference, "no geodesic run named '" + run + "'");
  const MetricChart& c = *manifest.find_chart(g->chart);
  auto sample_json = [](const GeodesicSample& s) {
    json j;
    j["s"] = s.s;
    j["x"] = vector_json(Eigen::Map<const Vector>(s.x.data(), static_cast<Eigen::Index>(s.x.size())));
    j["v"] = vector_json(s.v);
    j["g_vv"] = scalar_json(s.norm);
    return j;
  };
  auto line = [&out](const json& j) {
    std::string s = j.dump();
    out << s << '\n';
  };
  try {
    const MetricField field(c);
    const Vector v0 = Eigen::Map<const Vector>(g->v0.data(), c.dim());
    const Trajectory t = integrate_geodesic(field, g->x0, v0, g->s_end, g->samples);
    for (const auto& s : t.samples) line(sample_json(s));
    json end;
    end["status"] = t.ok ? "ok" : to_string(t.status);
    if (!t.ok) {
      end["message"] = t.message;
      if (!t.samples.empty()) end["last"] = sample_json(t.samples.back());
    }
    end["max_drift"] = t.max_drift;
    line(end);
    return t.ok;
  } catch (const Error& e) {
    line({{"status", to_string(e.code())}, {"message", e.what()}});
    return false;
  }
}

std::string curvature_json(const Manifest& manifest, const std::string& chart, const Point& point) {
  const MetricChart* c = manifest.find_chart(chart);
  if (!c) fail(ErrorCode::UnresolvedReference, "no chart named '" + chart + "'");
  if (static_cast<int>(point.size()) != c->dim())
    fail(ErrorCode::InvalidArgument, "point needs " + std::to_string(c->dim()) + " coordinates");
  const MetricField field(*c);
  const int order = std::max(manifest.settings.jet_order, 3);
  const CurvaturePack p = curvature(field, point, order);
  json j;
  j["chart"] = c->name;
  j["coordinates"] = c->coordinates;
  j["point"] = vector_json(Eigen::Map<const Vector>(point.data(), c->dim()));
  j["metric"] = matrix_json(p.g);
  j["christoffel"] = tensor_json(p.gamma);
  j["riemann"] = tensor_json(p.riemann);
  j["ricci"] = tensor_json(p.ricci);
  j["ricci_trace_free"] = tensor_json(p.ricci0);
  j["scalar_curvature"] = scalar_json(p.scal);
  json norms;
  norms["riemann"] = p.riemann_low.norm();
  if (p.has_conformal) {
    j["normalized_ricci"] = tensor_json(p.h);
    j["weyl"] = tensor_json(p.weyl);
    norms["weyl"] = p.weyl.norm();
  }
  if (p.has_derivatives) {
    j["cotton"] = tensor_json(p.cotton);
    j["div_weyl"] = tensor_json(p.div_weyl);
    norms["cotton"] = p.cotton.norm();
  }
  if (p.n == 4) {
    try {
      const int orientation = manifest.settings.orientation.value_or(c->orientation);
      const Lambda2 l2 = lambda2(p.g, orientation, c->mode);
      const WeylSplit w = weyl_pm(p, l2);
      j["weyl_plus"] = tensor_json(w.plus);
      j["weyl_minus"] = tensor_json(w.minus);
      norms["weyl_plus"] = w.plus.norm();
      norms["weyl_minus"] = w.minus.norm();
      if (p.has_derivatives) {
        const CottonSplit s = cy_pm(p.cotton, l2);
        j["cotton_plus"] = tensor_json(s.plus);
        j["cotton_minus"] = tensor_json(s.minus);
        norms["cotton_plus"] = s.plus.norm();
        norms["cotton_minus"] = s.minus.norm();
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LorentzianUnsupported) throw;
    }
  }
  j["norms"] = norms;
  return j.dump(2);
}

}  // namespace confgeo
