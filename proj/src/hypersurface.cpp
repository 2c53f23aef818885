#include "confgeo/hypersurface.hpp"

#include <cmath>
#include <cstdio>

#include "confgeo/error.hpp"
#include "confgeo/fourdim.hpp"

namespace confgeo {

namespace {

Matrix values_of(const std::vector<Jet>& jets, int m) {
  Matrix out(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out(a, b) = jets[a * m + b].value();
  return out;
}

Expr scalar_literal(Scalar v) {
  Expr re = Expr::number(v.real());
  if (v.imag() == 0.0) return re;
  return re + Expr::number(v.imag()) * Expr::ident("i");
}

}  // namespace

ShapeData induced_geometry(const HypersurfaceSpec& spec, const Point& u, int induced_order) {
  const MetricChart& amb = spec.ambient;
  const int n = amb.dim();
  const int m = spec.dim();
  if (m != n - 1) fail(ErrorCode::InvalidArgument, "hypersurface must have one parameter fewer than the ambient dimension");
  if (static_cast<int>(spec.embedding.size()) != n) fail(ErrorCode::InvalidArgument, "embedding needs one expression per ambient coordinate");
  if (static_cast<int>(u.size()) != m) fail(ErrorCode::InvalidArgument, "parameter point has the wrong dimension");
  const int K = induced_order + 1;
  if (induced_order < 1 || K > kMaxJetOrder) fail(ErrorCode::InvalidArgument, "induced jet order out of range");

  ShapeData s;
  s.u = u;
  std::vector<Jet> F;
  F.reserve(n);
  for (const auto& e : spec.embedding)
    F.push_back(CompiledExpr(e, spec.parameters, amb.parameters, amb.mode).jet(u, K));
  s.x.resize(n);
  s.tangents.resize(n, m);
  for (int i = 0; i < n; ++i) {
    s.x[i] = F[i].value();
    for (int a = 0; a < m; ++a) s.tangents(i, a) = F[i].partial({a});
  }
  Eigen::JacobiSVD<Matrix> svd(s.tangents);
  const auto sv = svd.singularValues();
  if (!(sv[m - 1] > 1e-8 * sv[0])) fail(ErrorCode::RankDeficient, "embedding differential is rank deficient");

  const MetricField field(amb);
  const Matrix g = field.value(s.x);
  check_nondegenerate(g);
  const Matrix ginv = g.inverse();

  // Pullback g_ab = dF^i/du^a dF^j/du^b g_ij(F(u)) as jets in u.
  const std::vector<Jet> gF = field.jets(std::span<const Jet>(F));
  std::vector<std::vector<Jet>> dF(m);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) dF[a].push_back(F[i].derivative(a));
  s.induced_jets.assign(m * m, Jet::constant(m, K - 1, 0.0));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      Jet& o = s.induced_jets[a * m + b];
      for (int i = 0; i < n; ++i) {
        Jet row = Jet::constant(m, K - 1, 0.0);
        for (int j = 0; j < n; ++j) multiply_add(row, gF[i * n + j], dF[b][j]);
        multiply_add(o, dF[a][i], row);
      }
      s.induced_jets[b * m + a] = o;
    }
  s.induced = values_of(s.induced_jets, m);
  try {
    check_nondegenerate(s.induced);
  } catch (const Error&) {
    fail(ErrorCode::DegenerateInducedMetric, "induced metric is degenerate");
  }

  // Conormal by cofactors: n_i = det[T_1 .. T_m | e_i].
  Vector conormal(n);
  for (int i = 0; i < n; ++i) {
    Matrix M(n, n);
    M.leftCols(m) = s.tangents;
    M.col(m) = Vector::Unit(n, i);
    conormal[i] = M.determinant();
  }
  Vector nu = ginv * conormal;
  const Scalar q = conormal.transpose() * ginv * conormal;
  if (std::abs(q) < 1e-10 * nu.squaredNorm() * g.cwiseAbs().maxCoeff())
    fail(ErrorCode::NullNormal, "normal direction is isotropic");
  if (amb.mode == Mode::Real) {
    nu /= std::sqrt(std::abs(q.real()));
    s.eps_normal = q.real() > 0 ? 1 : -1;
  } else {
    nu /= std::sqrt(q);
    s.eps_normal = 1;
  }
  s.normal = nu * double(spec.normal_sign);

  const Tensor gamma = christoffel(field, s.x);
  s.second_form.resize(m, m);
  const Vector nu_low = g * s.normal;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Scalar acc = 0.0;
      for (int k = 0; k < n; ++k) {
        Scalar acc_k = F[k].partial({a, b});
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) acc_k += gamma(k, i, j) * s.tangents(i, a) * s.tangents(j, b);
        acc += acc_k * nu_low[k];
      }
      s.second_form(a, b) = acc;
    }
  s.lambda = (s.induced.inverse() * s.second_form).trace() / double(m);
  const PointFrame frame = orthonormal_frame(s.induced, amb.mode, u);
  const Matrix ii = frame.basis.transpose() * s.second_form * frame.basis;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Scalar target = a == b ? s.lambda * double(frame.eps[a]) : Scalar(0.0);
      s.umbilic_residual = std::max(s.umbilic_residual, std::abs(ii(a, b) - target));
    }
  return s;
}

CurvaturePack induced_curvature(const ShapeData& shape) {
  return curvature_from_jets(shape.induced_jets, shape.u);
}

HypersurfaceSpec with_ambient(const HypersurfaceSpec& spec, MetricChart ambient) {
  HypersurfaceSpec out = spec;
  out.ambient = std::move(ambient);
  return out;
}

namespace {

std::string format_scalar(Scalar v) {
  char buf[64];
  if (v.imag() == 0.0) std::snprintf(buf, sizeof buf, "%.10g", v.real());
  else std::snprintf(buf, sizeof buf, "%.10g%+.10gi", v.real(), v.imag());
  return buf;
}

}  // namespace

Gauge totally_geodesic_gauge(const HypersurfaceSpec& spec, double umbilic_tol) {
  if (!spec.normal_coordinate)
    fail(ErrorCode::InvalidArgument, "hypersurface '" + spec.name + "' has no normal_coordinate for the gauge");
  if (spec.sample_points.empty()) fail(ErrorCode::InvalidArgument, "hypersurface '" + spec.name + "' has no sample points");
  const MetricChart& amb = spec.ambient;
  const CompiledExpr s(*spec.normal_coordinate, amb.coordinates, amb.parameters, amb.mode);
  Gauge out;
  std::vector<Point> xs;
  for (const auto& u : spec.sample_points) {
    const ShapeData shape = induced_geometry(spec, u);
    xs.push_back(shape.x);
    if (shape.umbilic_residual > umbilic_tol)
      fail(ErrorCode::NotUmbilic, "hypersurface '" + spec.name + "' is not umbilic (residual " +
                                      std::to_string(shape.umbilic_residual) + ")");
    const Jet sj = s.jet(shape.x, 1);
    if (std::abs(sj.value()) > 1e-8)
      fail(ErrorCode::InvalidArgument, "normal coordinate does not vanish on the hypersurface");
    Scalar ds_nu = 0.0;
    for (int i = 0; i < amb.dim(); ++i) ds_nu += sj.partial({i}) * shape.normal[i];
    if (std::abs(ds_nu) < 1e-12) fail(ErrorCode::InvalidArgument, "normal coordinate has zero normal derivative");
    out.kappa.push_back(shape.lambda / ds_nu);
  }
  if (spec.gauge_scale) {
    const CompiledExpr k(*spec.gauge_scale, amb.coordinates, amb.parameters, amb.mode);
    for (std::size_t i = 0; i < spec.sample_points.size(); ++i) {
      const Scalar given = k.jet(xs[i], 0).value();
      if (std::abs(given - out.kappa[i]) > 1e-8 * (std::abs(out.kappa[i]) + 1.0))
        fail(ErrorCode::HypothesisViolated, "gauge_scale of '" + spec.name + "' is " + format_scalar(given) +
                                                  " at sample " + std::to_string(i) + " but the umbilic factor needs " +
                                                  format_scalar(out.kappa[i]));
    }
    out.phi = *spec.gauge_scale * *spec.normal_coordinate;
  } else {
    const Scalar k0 = out.kappa.front();
    for (const auto& k : out.kappa)
      if (std::abs(k - k0) > 1e-6 * (std::abs(k0) + 1e-12) && std::abs(k - k0) > 1e-12)
        fail(ErrorCode::NonConstantGauge,
             "umbilic factor varies along '" + spec.name + "'; supply gauge_scale");
    out.phi = scalar_literal(k0) * *spec.normal_coordinate;
  }
  out.rescaled = rescale(amb, out.phi, amb.name + "_gauged");
  return out;
}

namespace {

// Parameter-space components of the first m frame vectors.
Matrix tangent_coefficients(const ShapeData& shape, const Matrix& frame) {
  const int m = static_cast<int>(shape.tangents.cols());
  Matrix c(m, m);
  const auto qr = shape.tangents.colPivHouseholderQr();
  for (int k = 0; k < m; ++k) c.col(k) = qr.solve(Vector(frame.col(k)));
  return c;
}

double gauss_residual(const Tensor& ambient_frame, const Tensor& induced_frame) {
  double diff = 0.0, a = 0.0, b = 0.0;
  const int m = induced_frame.dim();
  for_each_index(m, 4, [&](std::span<const int> i) {
    const Scalar x = ambient_frame(i[0], i[1], i[2], i[3]);
    const Scalar y = induced_frame(i[0], i[1], i[2], i[3]);
    diff += std::norm(x - y);
    a += std::norm(x);
    b += std::norm(y);
  });
  return relative_residual(std::sqrt(diff), std::sqrt(a), std::sqrt(b));
}

PointFrame adapted_frame(const ShapeData& shape, const Matrix& g, Mode mode, int orientation) {
  std::vector<Vector> seeds;
  for (int a = 0; a < shape.tangents.cols(); ++a) seeds.push_back(shape.tangents.col(a));
  seeds.push_back(shape.normal);
  PointFrame f = orthonormal_frame(g, mode, shape.x, seeds);
  if (frame_orientation(f, g) * orientation < 0) {
    f.basis.col(0) = -f.basis.col(0);
    f.gram = f.basis.transpose() * g * f.basis;
  }
  return f;
}

}  // namespace

double tgeod_residual(const HypersurfaceSpec& spec, const Point& u) {
  const ShapeData shape = induced_geometry(spec, u, 2);
  const MetricField field(spec.ambient);
  const CurvaturePack p = curvature(field, shape.x, 2);
  const CurvaturePack mp = induced_curvature(shape);
  const PointFrame frame = adapted_frame(shape, p.g, spec.ambient.mode, 1);
  const Tensor rf = in_basis(p.riemann_low, frame.basis);
  const Tensor rm = in_basis(mp.riemann_low, tangent_coefficients(shape, frame.basis));
  return gauss_residual(rf, rm);
}

std::vector<Thm1Sample> thm1_check(const HypersurfaceSpec& spec, const Thm1Options& opt) {
  const MetricChart& amb = spec.ambient;
  if (amb.dim() != 4) fail(ErrorCode::DimensionTooLow, "the umbilic hypersurface theorem is checked in dimension 4");
  const Gauge gauge = totally_geodesic_gauge(spec, opt.umbilic_tol);
  const HypersurfaceSpec gauged = with_ambient(spec, gauge.rescaled);
  const MetricField field(gauge.rescaled);
  const Mode mode = amb.mode;

  std::vector<Thm1Sample> out;
  for (const auto& u : spec.sample_points) {
    Thm1Sample r;
    r.u = u;
    const ShapeData shape = induced_geometry(gauged, u, 3);

    for (int k = -opt.collar_points; k <= opt.collar_points; ++k) {
      Point y = shape.x;
      for (int i = 0; i < 4; ++i) y[i] += double(k) * opt.collar_step * shape.normal[i];
      const CurvaturePack q = curvature(field, y, 2);
      const WeylSplit w = weyl_pm(q, lambda2(q.g, opt.orientation, mode));
      const double rn = q.riemann_low.norm();
      const double wm = w.minus.norm();
      r.weyl_minus_gate = std::max(r.weyl_minus_gate, rn > 0 ? wm / rn : wm);
      if (wm > opt.self_dual_tol * rn + 1e-12)
        fail(ErrorCode::AmbientNotSelfDual, "ambient is not self-dual near '" + spec.name + "' (||W-||/||R|| = " +
                                                std::to_string(rn > 0 ? wm / rn : wm) + ")");
    }

    const CurvaturePack p = curvature(field, shape.x, std::max(opt.jet_order, 3));
    const Lambda2 l2 = lambda2(p.g, opt.orientation, mode);
    const WeylSplit split = weyl_pm(p, l2);
    const DivWeylSplit dsplit = div_weyl_pm(p, l2);
    const CottonSplit cpm = cy_pm(p.cotton, l2);
    const CurvaturePack mp = induced_curvature(shape);
    r.cotton_m = mp.cotton;

    const PointFrame frame = adapted_frame(shape, p.g, mode, opt.orientation);
    const Matrix& E = frame.basis;
    const Matrix coeff = tangent_coefficients(shape, E);
    const Tensor cm = in_basis(mp.cotton, coeff);

    r.riemann_norm = p.riemann_low.norm();
    r.weyl_plus_norm = split.plus.norm();

    // (ii) over A, B in {X^Y, Y^Z, Z^X}; *^M maps them to Z, X, Y.
    const Tensor nw = in_basis(dsplit.nabla_plus, E);
    const int pa[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    const int star[3] = {2, 0, 1};
    double d_same = 0.0, d_opp = 0.0, ln = 0.0, rn = 0.0;
    for (int A = 0; A < 3; ++A)
      for (int B = 0; B < 3; ++B) {
        const Scalar lhs = nw(3, pa[A][0], pa[A][1], pa[B][0], pa[B][1]);
        const Scalar rhs = cm(pa[A][0], pa[A][1], star[B]);
        d_same += std::norm(lhs - rhs);
        d_opp += std::norm(lhs + rhs);
        ln += std::norm(lhs);
        rn += std::norm(rhs);
      }
    r.cyw_lhs_norm = std::sqrt(ln);
    r.cyw_rhs_norm = std::sqrt(rn);
    r.cyw_residual = relative_residual(std::sqrt(d_same), r.cyw_lhs_norm, r.cyw_rhs_norm);
    r.cyw_opposite_residual = relative_residual(std::sqrt(d_opp), r.cyw_lhs_norm, r.cyw_rhs_norm);

    // (iii) C+ on tangent frames against C^M.
    const Tensor cp = in_basis(cpm.plus, E);
    double diff = 0.0, a = 0.0, b = 0.0;
    for_each_index(3, 3, [&](std::span<const int> i) {
      diff += std::norm(cp(i[0], i[1], i[2]) - cm(i[0], i[1], i[2]));
      a += std::norm(cp(i[0], i[1], i[2]));
      b += std::norm(cm(i[0], i[1], i[2]));
    });
    r.cplus_norm = std::sqrt(a);
    r.cm_norm = std::sqrt(b);
    r.cplus_residual = relative_residual(std::sqrt(diff), r.cplus_norm, r.cm_norm);

    const Tensor rf = in_basis(p.riemann_low, E);
    r.tgeod_residual = gauss_residual(rf, in_basis(mp.riemann_low, coeff));
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    double rq = 0.0;
    for (const auto& pm : perms) {
      const int X = pm[0], Y = pm[1], Z = pm[2];
      rq = std::max(rq, std::abs(rf(X, Y, Z, X) + rf(Z, 3, Y, 3)));
    }
    r.rq_residual = rf.norm() > 0 ? rq / rf.norm() : rq;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace confgeo
