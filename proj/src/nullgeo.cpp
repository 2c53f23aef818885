#include "confgeo/nullgeo.hpp"

#include <algorithm>
#include <cmath>

#include "confgeo/error.hpp"
#include "confgeo/frame.hpp"

namespace confgeo {

namespace {

Vector to_vector(const Point& x) { return Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())); }

Point to_point(const Vector& v) { return Point(v.data(), v.data() + v.size()); }

// Gamma(a, b)^k = Gamma^k_ij a^i b^j.
Vector contract(const Tensor& gamma, const Vector& a, const Vector& b) {
  const int n = gamma.dim();
  Vector out = Vector::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (a[i] == Scalar(0.0)) continue;
      for (int j = 0; j < n; ++j) out[k] += gamma(k, i, j) * a[i] * b[j];
    }
  return out;
}

// dGamma(m)(a, b)^k = d_m Gamma^k_ij m^m a^i b^j.
Vector contract_derivative(const Tensor& dgamma, const Vector& m, const Vector& a, const Vector& b) {
  const int n = dgamma.dim();
  Vector out = Vector::Zero(n);
  for (int c = 0; c < n; ++c) {
    if (m[c] == Scalar(0.0)) continue;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[k] += dgamma(c, k, i, j) * m[c] * a[i] * b[j];
  }
  return out;
}

double metric_scale(const Matrix& g) { return std::max(g.cwiseAbs().maxCoeff(), 1e-300); }

void require_domain(const MetricChart& chart, const Point& x) {
  if (!chart.in_domain(x)) fail(ErrorCode::LeftDomain, "initial point lies outside the chart domain");
}

std::vector<double> grid(double s_end, int count) {
  if (count < 1) fail(ErrorCode::InvalidArgument, "sample count must be positive");
  if (!(s_end > 0.0)) fail(ErrorCode::InvalidArgument, "parameter span must be positive");
  std::vector<double> s(count + 1);
  for (int k = 0; k <= count; ++k) s[k] = s_end * k / count;
  return s;
}

// Orthonormal real columns from a Gaussian matrix.
Eigen::MatrixXd random_orthonormal(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

}  // namespace

std::vector<Vector> sample_isotropy_cone(const Matrix& g, Mode mode, int count, Rng& rng) {
  const int n = static_cast<int>(g.rows());
  if (mode == Mode::Real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.real());
    const auto& ev = es.eigenvalues();
    if (ev.minCoeff() > 0.0 || ev.maxCoeff() < 0.0)
      fail(ErrorCode::NoNullVectors, "a definite real metric has no nonzero null vectors");
  }
  const double scale = metric_scale(g);
  std::vector<Vector> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count; ++attempt) {
    if (attempt > 200 * count + 1000) fail(ErrorCode::NoNullVectors, "null vector sampling did not converge");
    Vector u(n), w(n);
    for (int k = 0; k < n; ++k) u[k] = rng.normal();
    for (int k = 0; k < n; ++k) w[k] = rng.normal();
    const Scalar A = inner(g, u, u), B = inner(g, u, w), C = inner(g, w, w);
    const double size = std::abs(A) + std::abs(B) + std::abs(C);
    if (std::abs(A * C - B * B) < 1e-8 * size * size || std::abs(A) < 1e-8 * size) continue;
    const Scalar disc = B * B - A * C;
    if (mode == Mode::Real && disc.real() <= 0.0) continue;
    const Scalar root = mode == Mode::Real ? Scalar(std::sqrt(disc.real())) : std::sqrt(disc);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    Vector v = ((-B + sign * root) / A) * u + w;
    v /= v.norm();
    if (std::abs(inner(g, v, v)) >= 1e-12 * scale) continue;
    bool distinct = true;
    for (const auto& p : out) {
      const double c = std::abs(p.dot(v));
      if (1.0 - c * c < 1e-8) distinct = false;
    }
    if (distinct) out.push_back(v);
  }
  return out;
}

Trajectory integrate_geodesic(const MetricField& field, const Point& x0, const Vector& v0, double s_end, int count,
                              const OdeOptions& options) {
  const int n = field.dim();
  const auto& chart = field.chart();
  require_domain(chart, x0);
  if (v0.size() != n || v0.norm() == 0.0) fail(ErrorCode::InvalidArgument, "initial velocity must be a nonzero vector");
  Vector y0(2 * n);
  y0 << to_vector(x0), v0;
  auto rhs = [&](double, const Vector& y) {
    const Vector x = y.head(n), v = y.tail(n);
    Vector dy(2 * n);
    dy << v, -contract(christoffel(field, to_point(x)), v, v);
    return dy;
  };
  auto valid = [&](const Vector& y) { return chart.in_domain(to_point(y.head(n))); };
  const OdeResult r = integrate_ode(rhs, 0.0, y0, grid(s_end, count), options, valid);
  Trajectory t;
  t.ok = r.ok;
  t.status = r.status;
  t.message = r.message;
  const Scalar norm0 = inner(field.value(x0), v0, v0);
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    GeodesicSample smp;
    smp.s = r.s[k];
    smp.x = to_point(r.y[k].head(n));
    smp.v = r.y[k].tail(n);
    smp.norm = inner(field.value(smp.x), smp.v, smp.v);
    t.max_drift = std::max(t.max_drift, std::abs(smp.norm - norm0));
    t.samples.push_back(std::move(smp));
  }
  return t;
}

namespace {

Vector jacobi_rhs(const MetricField& field, const Vector& y) {
  const int n = field.dim();
  const Vector x = y.segment(0, n), v = y.segment(n, n), j = y.segment(2 * n, n), k = y.segment(3 * n, n);
  const ConnectionJet cj = christoffel_with_derivative(field, to_point(x));
  Vector dy(4 * n);
  dy << v, -contract(cj.gamma, v, v), k,
      -contract_derivative(cj.dgamma, j, v, v) - 2.0 * contract(cj.gamma, v, k);
  return dy;
}

OdeResult run_jacobi(const MetricField& field, const Vector& y0, const std::vector<double>& outputs,
                     const OdeOptions& options) {
  const int n = field.dim();
  const auto& chart = field.chart();
  auto rhs = [&](double, const Vector& y) { return jacobi_rhs(field, y); };
  auto valid = [&](const Vector& y) { return chart.in_domain(to_point(y.head(n))); };
  return integrate_ode(rhs, 0.0, y0, outputs, options, valid);
}

}  // namespace

JacobiPath integrate_jacobi(const MetricField& field, const Point& x0, const Vector& v0, const Vector& j0,
                            const Vector& jdot0, double s_end, int count, const OdeOptions& options) {
  const int n = field.dim();
  require_domain(field.chart(), x0);
  if (v0.size() != n || j0.size() != n || jdot0.size() != n)
    fail(ErrorCode::InvalidArgument, "Jacobi initial data has the wrong dimension");
  const Tensor gamma0 = christoffel(field, x0);
  Vector y0(4 * n);
  y0 << to_vector(x0), v0, j0, jdot0 - contract(gamma0, v0, j0);
  const auto outputs = grid(s_end, count);
  const OdeResult r = run_jacobi(field, y0, outputs, options);
  JacobiPath path;
  path.ok = r.ok;
  path.status = r.status;
  path.message = r.message;
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    const Vector& y = r.y[k];
    const Vector dy = jacobi_rhs(field, y);
    JacobiSample smp;
    smp.s = r.s[k];
    smp.x = to_point(y.segment(0, n));
    smp.v = y.segment(n, n);
    smp.a = dy.segment(n, n);
    smp.j = y.segment(2 * n, n);
    smp.dj = y.segment(3 * n, n);
    smp.ddj = dy.segment(3 * n, n);
    smp.jdot = smp.dj + contract(christoffel(field, smp.x), smp.v, smp.j);
    path.samples.push_back(std::move(smp));
  }
  if (r.ok) {
    OdeOptions fine = options;
    fine.rtol *= 1e-2;
    fine.atol *= 1e-2;
    const OdeResult rf = run_jacobi(field, y0, {outputs.back()}, fine);
    if (rf.ok) {
      const Vector a = r.y.back().segment(2 * n, 2 * n), b = rf.y.back().segment(2 * n, 2 * n);
      path.error_estimate = (a - b).norm() / std::max(1.0, b.norm());
    }
  }
  return path;
}

JacobiOperator jacobi_operator(const MetricField& field, const CurveJet& c, double tol) {
  const CurvaturePack pack = curvature(field, c.x, 2);
  const ConnectionJet cj = christoffel_with_derivative(field, c.x);
  const int n = field.dim();
  const Vector& X = c.xd;
  JacobiOperator op;
  op.nabla_y = c.yd + contract(cj.gamma, X, c.y);
  const Vector d_nabla_y =
      c.ydd + contract_derivative(cj.dgamma, X, X, c.y) + contract(cj.gamma, c.xdd, c.y) + contract(cj.gamma, X, c.yd);
  const Vector nn_y = d_nabla_y + contract(cj.gamma, X, op.nabla_y);
  const Vector gxx = contract(cj.gamma, X, X);
  const Vector nabla_x = c.xdd + gxx;
  op.f = X.dot(nabla_x) / X.squaredNorm();
  const double ref = c.xdd.norm() + gxx.norm();
  op.pregeodesic = ref > 0.0 ? (nabla_x - op.f * X).norm() / ref : 0.0;
  if (op.pregeodesic > tol)
    fail(ErrorCode::NotPregeodesic, "nabla_X X is not parallel to X (relative deviation " +
                                        std::to_string(op.pregeodesic) + ")");
  Vector rxyx = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Scalar w = X[i] * c.y[j] * X[k];
        if (w == Scalar(0.0)) continue;
        for (int l = 0; l < n; ++l) rxyx[l] += pack.riemann(i, j, k, l) * w;
      }
  const Vector second = op.f * op.nabla_y;
  op.value = nn_y - second - rxyx;
  op.scale = std::max({nn_y.norm(), second.norm(), rxyx.norm()});
  return op;
}

Vector project_off(const Vector& v, const Vector& t) { return v - (t.dot(v) / t.squaredNorm()) * t; }

PInvariance check_p_invariance(const MetricField& field, const MetricField& rescaled, const CurveJet& c, double tol) {
  const Matrix g = field.value(c.x);
  const double gs = metric_scale(g);
  const Vector& X = c.xd;
  PInvariance out;
  const JacobiOperator p = jacobi_operator(field, c);
  const double xx = std::abs(inner(g, X, X)) / (gs * X.squaredNorm());
  out.orthogonality = std::abs(inner(g, c.y, X)) / (gs * X.norm() * std::max(c.y.norm(), 1e-300));
  out.derivative = std::abs(inner(g, p.nabla_y, X)) / (gs * X.norm() * std::max(p.nabla_y.norm(), 1e-300));
  if (xx > tol) fail(ErrorCode::HypothesisViolated, "curve direction is not null");
  if (out.orthogonality > tol) fail(ErrorCode::HypothesisViolated, "g(Y, X) != 0");
  if (out.derivative > tol)
    fail(ErrorCode::HypothesisViolated, "g(nabla_X Y, X) = " + std::to_string(out.derivative) + " (relative) != 0");
  const JacobiOperator q = jacobi_operator(rescaled, c);
  out.scale = std::max({p.scale, q.scale, 1e-300});
  const Vector d = q.value - p.value;
  const Vector perp = project_off(d, X);
  out.residual = perp.norm() / out.scale;
  out.tangential = (d - perp).norm() / out.scale;
  out.raw = d.norm() / out.scale;
  return out;
}

Scalar connection_difference_along(const MetricField& field, const MetricField& rescaled, const Point& x,
                                   const Vector& X, const Vector& j) {
  const Vector d = contract(christoffel(rescaled, x), X, j) - contract(christoffel(field, x), X, j);
  return inner(field.value(x), d, X);
}

LineTransport parallel_isotropic_line(const MetricField& field, const MetricField& rescaled, const Point& x0,
                                      const Vector& v0, const Vector& l0, double s_end, int count,
                                      const OdeOptions& options) {
  const int n = field.dim();
  const auto& chart = field.chart();
  require_domain(chart, x0);
  const Matrix g = field.value(x0);
  const double gs = metric_scale(g);
  const double nv = v0.squaredNorm(), nl = l0.squaredNorm();
  if (std::abs(inner(g, v0, v0)) > 1e-8 * gs * nv || std::abs(inner(g, l0, l0)) > 1e-8 * gs * nl ||
      std::abs(inner(g, v0, l0)) > 1e-8 * gs * std::sqrt(nv * nl))
    fail(ErrorCode::HypothesisViolated, "the curve direction and the line must be null and orthogonal");
  Vector y0(4 * n);
  y0 << to_vector(x0), v0, l0, l0;
  auto rhs = [&](double, const Vector& y) {
    const Point x = to_point(y.segment(0, n));
    const Vector v = y.segment(n, n);
    const Tensor gamma = christoffel(field, x);
    Vector dy(4 * n);
    dy << v, -contract(gamma, v, v), -contract(gamma, v, y.segment(2 * n, n)),
        -contract(christoffel(rescaled, x), v, y.segment(3 * n, n));
    return dy;
  };
  auto valid = [&](const Vector& y) { return chart.in_domain(to_point(y.head(n))); };
  const OdeResult r = integrate_ode(rhs, 0.0, y0, grid(s_end, count), options, valid);
  LineTransport out;
  out.ok = r.ok;
  out.status = r.status;
  out.message = r.message;
  for (std::size_t k = 0; k < r.s.size(); ++k) {
    const Vector v = r.y[k].segment(n, n), a = r.y[k].segment(2 * n, n), b = r.y[k].segment(3 * n, n);
    const Vector pa = project_off(a, v), pb = project_off(b, v);
    const Vector off = pb - (pa.dot(pb) / pa.squaredNorm()) * pa;
    out.max_angle = std::max(out.max_angle, std::asin(std::min(1.0, off.norm() / pb.norm())));
    out.max_scale_change = std::max(out.max_scale_change, std::abs(b.norm() / a.norm() - 1.0));
    out.s.push_back(r.s[k]);
    out.line.push_back(a);
    out.line_rescaled.push_back(b);
  }
  return out;
}

double jacobi_variation_residual(const MetricField& field, const Point& x0, const Vector& v0, const Vector& j0,
                                 const Vector& jdot0, double s_end, int count, double eps,
                                 const OdeOptions& options) {
  const int n = field.dim();
  const JacobiPath path = integrate_jacobi(field, x0, v0, j0, jdot0, s_end, count, options);
  if (!path.ok) fail(path.status, path.message);
  const Vector dj0 = jdot0 - contract(christoffel(field, x0), v0, j0);
  const Vector x = to_vector(x0);
  const Trajectory plus = integrate_geodesic(field, to_point(x + eps * j0), v0 + eps * dj0, s_end, count, options);
  const Trajectory minus = integrate_geodesic(field, to_point(x - eps * j0), v0 - eps * dj0, s_end, count, options);
  if (!plus.ok) fail(plus.status, plus.message);
  if (!minus.ok) fail(minus.status, minus.message);
  double worst = 0.0, jmax = 0.0;
  for (std::size_t k = 0; k < path.samples.size(); ++k) {
    const Vector fd = (to_vector(plus.samples[k].x) - to_vector(minus.samples[k].x)) / (2.0 * eps);
    worst = std::max(worst, (fd - path.samples[k].j).norm());
    jmax = std::max(jmax, path.samples[k].j.norm());
  }
  (void)n;
  return worst / std::max(jmax, 1e-300);
}

IsotropicSectional isotropic_sectional(const CurvaturePack& pack, const Vector& x, const Vector& y) {
  if (!pack.has_conformal) fail(ErrorCode::DimensionTooLow, "isotropic sectional values need n >= 3");
  const int n = pack.n;
  IsotropicSectional out;
  const double g = std::max({std::abs(inner(pack.g, x, x)), std::abs(inner(pack.g, y, y)),
                             std::abs(inner(pack.g, x, y))});
  out.gram = g / (metric_scale(pack.g) * std::max(x.squaredNorm(), y.squaredNorm()));
  if (out.gram >= 1e-10) fail(ErrorCode::NotIsotropic, "plane is not totally isotropic");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Scalar ab = x[a] * y[b];
      if (ab == Scalar(0.0)) continue;
      for (int c = 0; c < n; ++c) {
        const Scalar abc = ab * x[c];
        if (abc == Scalar(0.0)) continue;
        for (int d = 0; d < n; ++d) {
          const Scalar w = abc * y[d];
          out.riemann += pack.riemann_low(a, b, c, d) * w;
          out.weyl += pack.weyl(a, b, c, d) * w;
          out.wedge += pack.h_wedge(a, b, c, d) * w;
        }
      }
    }
  return out;
}

std::vector<std::pair<Vector, Vector>> sample_isotropic_planes(const Matrix& g, Mode mode, const Point& point,
                                                               int count, Rng& rng) {
  const int n = static_cast<int>(g.rows());
  const PointFrame frame = orthonormal_frame(g, mode, point);
  std::vector<std::pair<Vector, Vector>> out;
  if (mode == Mode::Real) {
    std::vector<int> pos, neg;
    for (int i = 0; i < n; ++i) (frame.eps[i] > 0 ? pos : neg).push_back(i);
    if (pos.size() < 2 || neg.size() < 2)
      fail(ErrorCode::NoNullVectors, "totally isotropic planes need two positive and two negative directions");
    Matrix ep(n, pos.size()), en(n, neg.size());
    for (std::size_t i = 0; i < pos.size(); ++i) ep.col(i) = frame.basis.col(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) en.col(i) = frame.basis.col(neg[i]);
    for (int k = 0; k < count; ++k) {
      const Matrix u = ep * random_orthonormal(rng, static_cast<int>(pos.size()), 2).cast<Scalar>();
      const Matrix w = en * random_orthonormal(rng, static_cast<int>(neg.size()), 2).cast<Scalar>();
      // The sign picks the alpha or beta family.
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      out.emplace_back(u.col(0) + w.col(0), u.col(1) + sign * w.col(1));
    }
  } else {
    if (n < 4) fail(ErrorCode::NoNullVectors, "totally isotropic planes need n >= 4");
    const Scalar i(0.0, 1.0);
    for (int k = 0; k < count; ++k) {
      const Matrix q = frame.basis * random_orthonormal(rng, n, 4).cast<Scalar>();
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      out.emplace_back(q.col(0) + i * q.col(2), q.col(1) + sign * i * q.col(3));
    }
  }
  return out;
}

namespace {

// sqrt(sum |T(e_a,e_b,e_c,e_d)|^2) for a covariant 4-tensor.
double frame_norm(const Tensor& t, const Matrix& e) {
  const int n = t.dim();
  std::vector<Scalar> cur(t.data()), next(cur.size());
  // Contract one slot per pass; the contracted slot rotates to the back.
  for (int pass = 0; pass < 4; ++pass) {
    const int inner_size = n * n * n;
    for (int a = 0; a < n; ++a)
      for (int r = 0; r < inner_size; ++r) {
        Scalar acc = 0.0;
        for (int i = 0; i < n; ++i) acc += e(i, a) * cur[i * inner_size + r];
        next[r * n + a] = acc;
      }
    std::swap(cur, next);
  }
  double sum = 0.0;
  for (const auto& v : cur) sum += std::norm(v);
  return std::sqrt(sum);
}

}  // namespace

IsotropicScan weyl_isotropic_scan(const CurvaturePack& pack, Mode mode, int samples, Rng& rng, double tol,
                                  const std::vector<std::pair<Vector, Vector>>& extra_planes) {
  if (pack.n < 4) fail(ErrorCode::DimensionTooLow, "isotropic scans need n >= 4");
  auto planes = sample_isotropic_planes(pack.g, mode, pack.point, samples, rng);
  planes.insert(planes.end(), extra_planes.begin(), extra_planes.end());
  IsotropicScan out;
  for (const auto& [x, y] : planes) {
    const IsotropicSectional v = isotropic_sectional(pack, x, y);
    out.max_riemann = std::max(out.max_riemann, std::abs(v.riemann));
    out.max_wedge = std::max(out.max_wedge, std::abs(v.wedge));
    out.max_mismatch = std::max(out.max_mismatch, std::abs(v.riemann - v.weyl));
    ++out.count;
  }
  const PointFrame frame = orthonormal_frame(pack.g, mode, pack.point);
  out.weyl_norm = frame_norm(pack.weyl, frame.basis);
  out.riemann_norm = frame_norm(pack.riemann_low, frame.basis);
  out.consistent_with_flat = out.max_riemann < tol;
  return out;
}

}  // namespace confgeo
