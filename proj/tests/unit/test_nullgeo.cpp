#include <doctest.h>

#include "confgeo/curvature.hpp"
#include "confgeo/error.hpp"
#include "confgeo/fourdim.hpp"
#include "confgeo/frame.hpp"
#include "confgeo/nullgeo.hpp"
#include "confgeo/random_metric.hpp"
#include "support.hpp"

using namespace confgeo;
using testing::point_of;

namespace {

MetricChart split_random(Rng& rng) {
  RandomMetricOptions o;
  o.signature = {2, 2};
  o.points = 2;
  return random_metric(rng, o, "s");
}

MetricChart split_flat() { return testing::diagonal_chart({"x", "y", "z", "w"}, {"1", "1", "-1", "-1"}); }

// A vector g-orthogonal to v.
Vector orthogonal_to(const Matrix& g, const Vector& v, Rng& rng) {
  Vector r(v.size()), m(v.size());
  for (int k = 0; k < v.size(); ++k) r[k] = rng.normal();
  for (int k = 0; k < v.size(); ++k) m[k] = rng.normal();
  return r - (inner(g, r, v) / inner(g, m, v)) * m;
}

CurveJet curve_of(const JacobiSample& s) { return {s.x, s.v, s.a, s.j, s.dj, s.ddj}; }

}  // namespace

TEST_SUITE("nullgeo") {
  TEST_CASE("isotropy cone sampling") {
    Rng rng(1);
    try {
      sample_isotropy_cone(Matrix::Identity(3, 3), Mode::Real, 3, rng);
      FAIL("expected NoNullVectors");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoNullVectors);
    }
    const MetricChart c = split_random(rng);
    const Matrix g = MetricField(c).value(c.sample_points[0]);
    const auto vs = sample_isotropy_cone(g, Mode::Real, 8, rng);
    CHECK(vs.size() == 8);
    for (const auto& v : vs) {
      CHECK(std::abs(inner(g, v, v)) < 1e-12);
      CHECK(v.norm() == doctest::Approx(1.0));
    }
    const auto cs = sample_isotropy_cone(Matrix::Identity(4, 4), Mode::Complex, 4, rng);
    for (const auto& v : cs) CHECK(std::abs((v.transpose() * v).value()) < 1e-12);
  }

  TEST_CASE("flat geodesics are straight lines") {
    const MetricField f(split_flat());
    Vector v(4);
    v << 0.6, 0.8, 1.0, 0.0;
    const Trajectory t = integrate_geodesic(f, point_of({0, 0, 0, 0}), v, 1.5, 15);
    REQUIRE(t.ok);
    for (const auto& s : t.samples) {
      for (int i = 0; i < 4; ++i) CHECK(std::abs(s.x[i] - s.s * v[i]) < 1e-12);
      CHECK(std::abs(s.norm) < 1e-12);
    }
  }

  TEST_CASE("null geodesics stay null on curved split metrics") {
    Rng rng(2);
    for (int k = 0; k < 4; ++k) {
      const MetricChart c = split_random(rng);
      const MetricField f(c);
      const Vector v = sample_isotropy_cone(f.value(c.sample_points[0]), Mode::Real, 1, rng)[0];
      const Trajectory t = integrate_geodesic(f, c.sample_points[0], v, 0.4, 20);
      REQUIRE(t.ok);
      CHECK(t.max_drift < 1e-8);
      for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].s > t.samples[i - 1].s);
    }
  }

  TEST_CASE("Jacobi fields agree with geodesic variations") {
    Rng rng(3);
    const MetricChart c = split_random(rng);
    const MetricField f(c);
    const Point& x = c.sample_points[0];
    const Vector v = sample_isotropy_cone(f.value(x), Mode::Real, 1, rng)[0];
    Vector j(4), jd(4);
    for (int k = 0; k < 4; ++k) j[k] = rng.normal(), jd[k] = rng.normal();
    CHECK(jacobi_variation_residual(f, x, v, j, jd, 0.5, 10) < 1e-4);
    const JacobiPath p = integrate_jacobi(f, x, v, j, jd, 0.5, 10);
    REQUIRE(p.ok);
    CHECK(p.error_estimate < 1e-8);
  }

  TEST_CASE("flat Jacobi fields are affine") {
    const MetricField f(split_flat());
    Vector v(4), j(4), jd(4);
    v << 1, 0, 1, 0;
    j << 0.1, 0.2, 0.3, 0.4;
    jd << -0.5, 0.25, 0, 1;
    const JacobiPath p = integrate_jacobi(f, point_of({0, 0, 0, 0}), v, j, jd, 1.0, 4);
    REQUIRE(p.ok);
    for (const auto& s : p.samples) {
      CHECK((s.j - (j + s.s * jd)).norm() < 1e-12);
      CHECK(jacobi_operator(f, curve_of(s)).value.norm() < 1e-12);
    }
  }

  TEST_CASE("Jacobi operator vanishes on integrated fields and not on constant ones") {
    Rng rng(4);
    const MetricChart c = split_random(rng);
    const MetricField f(c);
    const Point& x = c.sample_points[0];
    const Vector v = sample_isotropy_cone(f.value(x), Mode::Real, 1, rng)[0];
    Vector j(4), jd(4);
    for (int k = 0; k < 4; ++k) j[k] = rng.normal(), jd[k] = rng.normal();
    const JacobiPath p = integrate_jacobi(f, x, v, j, jd, 0.3, 6);
    REQUIRE(p.ok);
    double constant_field = 0.0;
    for (const auto& s : p.samples) {
      const JacobiOperator op = jacobi_operator(f, curve_of(s));
      CHECK(op.value.norm() < 1e-7 * op.scale);
      CurveJet k = curve_of(s);
      k.y = j;
      k.yd = Vector::Zero(4);
      k.ydd = Vector::Zero(4);
      const JacobiOperator oc = jacobi_operator(f, k);
      constant_field = std::max(constant_field, oc.value.norm() / oc.scale);
    }
    CHECK(constant_field > 1e-6);
  }

  TEST_CASE("P is conformally invariant modulo the curve direction") {
    Rng rng(5);
    for (int trial = 0; trial < 4; ++trial) {
      const MetricChart c = split_random(rng);
      const MetricField f(c);
      const Expr phi = trial == 0 ? Expr() : random_potential(rng, c.coordinates);
      const MetricField r(rescale(c, phi, "r"));
      const Point& x = c.sample_points[0];
      const Matrix g = f.value(x);
      const Vector v = sample_isotropy_cone(g, Mode::Real, 1, rng)[0];
      const JacobiPath p =
          integrate_jacobi(f, x, v, orthogonal_to(g, v, rng), orthogonal_to(g, v, rng), 0.2, 8);
      REQUIRE(p.ok);
      double tangential = 0.0;
      for (const auto& s : p.samples) {
        const PInvariance pi = check_p_invariance(f, r, curve_of(s));
        CHECK(pi.residual < 1e-7);
        if (trial == 0) CHECK(pi.raw < 1e-12);
        tangential = std::max(tangential, pi.tangential);
      }
      if (trial > 0) CHECK(tangential > 1e-6);
    }
  }

  TEST_CASE("connection difference cancels along null directions only") {
    Rng rng(6);
    const MetricChart c = split_random(rng);
    const MetricField f(c);
    const MetricField r(rescale(c, random_potential(rng, c.coordinates), "r"));
    const Point& x = c.sample_points[0];
    const Vector v = sample_isotropy_cone(f.value(x), Mode::Real, 1, rng)[0];
    Vector j(4), w(4);
    for (int k = 0; k < 4; ++k) j[k] = rng.normal(), w[k] = rng.normal();
    CHECK(std::abs(connection_difference_along(f, r, x, v, j)) < 1e-9);
    CHECK(std::abs(connection_difference_along(f, r, x, w, j)) > 1e-6);
  }

  TEST_CASE("isotropic lines are transported projectively invariantly") {
    Rng rng(7);
    const MetricChart flat = split_flat();
    const MetricField f(flat);
    const Point o = point_of({0.1, -0.1, 0.2, 0.0});
    const auto planes = sample_isotropic_planes(f.value(o), Mode::Real, o, 1, rng);
    const Vector v = planes[0].first, l = planes[0].second;

    const LineTransport same = parallel_isotropic_line(f, f, o, v, l, 0.3, 5);
    REQUIRE(same.ok);
    CHECK(same.max_angle < 1e-14);
    CHECK(same.max_scale_change < 1e-12);

    const MetricField r(rescale(flat, random_potential(rng, flat.coordinates), "r"));
    const LineTransport t = parallel_isotropic_line(f, r, o, v, l, 0.3, 5);
    REQUIRE(t.ok);
    CHECK(t.max_angle < 1e-6);
    CHECK(t.max_scale_change > 1e-6);

    const MetricChart c = split_random(rng);
    const MetricField fc(c);
    const Point& x = c.sample_points[0];
    const auto pc = sample_isotropic_planes(fc.value(x), Mode::Real, x, 1, rng);
    const MetricField rc(rescale(c, random_potential(rng, c.coordinates), "r"));
    const LineTransport tc = parallel_isotropic_line(fc, rc, x, pc[0].first, pc[0].second, 0.2, 5);
    REQUIRE(tc.ok);
    CHECK(tc.max_angle < 1e-6);
  }

  TEST_CASE("isotropic sectional values") {
    Rng rng(8);
    // conformally flat split metric: everything vanishes on isotropic planes
    const MetricChart cf = rescale(split_flat(), Expr::parse("0.3*sin(x)+0.2*y*z"), "cf");
    const CurvaturePack pf = curvature(MetricField(cf), point_of({0.1, 0.2, -0.3, 0.25}), 2);
    const IsotropicScan sf = weyl_isotropic_scan(pf, Mode::Real, 60, rng, 1e-9);
    CHECK(sf.count == 60);
    CHECK(sf.max_riemann < 1e-9);
    CHECK(sf.max_wedge < 1e-10);
    CHECK(sf.consistent_with_flat);

    // on alpha-planes only W+ contributes
    const MetricChart c = split_random(rng);
    const Point& x = c.sample_points[0];
    const CurvaturePack p = curvature(MetricField(c), x, 2);
    const Lambda2 l2 = lambda2(p.g, 1, Mode::Real);
    const WeylSplit w = weyl_pm(p, l2);
    int alpha = 0;
    for (const auto& [X, Y] : sample_isotropic_planes(p.g, Mode::Real, x, 40, rng)) {
      const IsotropicSectional v = isotropic_sectional(p, X, Y);
      CHECK(std::abs(v.wedge) < 1e-10 * p.riemann_low.norm());
      CHECK(std::abs(v.riemann - v.weyl) < 1e-9 * p.riemann_low.norm());
      if (classify_isotropic_plane(X, Y, l2).kind != PlaneKind::Alpha) continue;
      ++alpha;
      Scalar wp = 0.0, wm = 0.0;
      for_each_index(4, 4, [&](std::span<const int> i) {
        const Scalar k = X[i[0]] * Y[i[1]] * X[i[2]] * Y[i[3]];
        wp += w.plus.at(i) * k;
        wm += w.minus.at(i) * k;
      });
      CHECK(std::abs(v.riemann - wp) < 1e-9 * p.riemann_low.norm());
      CHECK(std::abs(wm) < 1e-9 * p.riemann_low.norm());
    }
    CHECK(alpha > 0);
    const IsotropicScan s = weyl_isotropic_scan(p, Mode::Real, 50, rng, 1e-9);
    CHECK(s.max_riemann > 1e-3 * s.riemann_norm);

    Vector e1 = Vector::Unit(4, 0), e2 = Vector::Unit(4, 1);
    try {
      isotropic_sectional(p, e1, e2);
      FAIL("expected NotIsotropic");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotIsotropic);
    }
  }
}
