#include <doctest.h>

#include "confgeo/error.hpp"
#include "confgeo/hypersurface.hpp"
#include "support.hpp"

using namespace confgeo;
using testing::point_of;

namespace {

HypersurfaceSpec surface(const MetricChart& ambient, std::vector<std::string> embedding, const char* normal) {
  HypersurfaceSpec h;
  h.name = "m";
  h.ambient = ambient;
  h.parameters = {"a", "b", "c"};
  for (const auto& e : embedding) h.embedding.push_back(Expr::parse(e));
  if (normal) h.normal_coordinate = Expr::parse(normal);
  return h;
}

MetricChart flat4() { return testing::diagonal_chart({"x", "y", "z", "t"}, {"1", "1", "1", "1"}); }

HypersurfaceSpec unit_sphere() {
  return surface(flat4(), {"cos(a)", "sin(a)*cos(b)", "sin(a)*sin(b)*cos(c)", "sin(a)*sin(b)*sin(c)"},
                 "x^2+y^2+z^2+t^2-1");
}

const std::vector<Point> kSpherePoints = {point_of({0.8, 1.1, 0.4}), point_of({1.5, 2.0, -1.2}),
                                          point_of({2.3, 0.6, 2.5}), point_of({1.0, 1.0, 1.0}),
                                          point_of({0.5, 2.5, -2.0})};

}  // namespace

TEST_SUITE("hypersurface") {
  TEST_CASE("hyperplane in flat space is flat and totally geodesic") {
    const HypersurfaceSpec h = surface(flat4(), {"a", "b", "c", "1"}, "t-1");
    const ShapeData s = induced_geometry(h, point_of({0.1, 0.2, 0.3}));
    CHECK((s.induced - Matrix::Identity(3, 3)).norm() < 1e-14);
    CHECK(s.second_form.norm() < 1e-14);
    CHECK(std::abs(s.lambda) < 1e-14);
    CHECK(induced_curvature(s).riemann.max_abs() < 1e-14);
  }

  TEST_CASE("unit three-sphere in flat space is umbilic with lambda -1 for the outward normal") {
    const HypersurfaceSpec h = unit_sphere();
    for (const auto& u : kSpherePoints) {
      const ShapeData s = induced_geometry(h, u);
      Scalar radial = 0.0;
      for (int i = 0; i < 4; ++i) radial += s.normal[i] * s.x[i];
      const double outward = radial.real() > 0 ? 1.0 : -1.0;
      CHECK(s.umbilic_residual < 1e-10);
      CHECK(outward * s.lambda.real() == doctest::Approx(-1.0).epsilon(1e-10));
      CHECK(induced_curvature(s).scal.real() == doctest::Approx(6.0).epsilon(1e-9));
    }
  }

  TEST_CASE("equator of the round four-sphere is totally geodesic") {
    const char* s4 = "4/(1+x^2+y^2+z^2+t^2)^2";
    const MetricChart c = testing::diagonal_chart({"x", "y", "z", "t"}, {s4, s4, s4, s4});
    HypersurfaceSpec h = surface(c, {"a", "b", "c", "0"}, "t");
    h.sample_points = {point_of({0.1, 0.2, 0.3}), point_of({-0.5, 0.4, 0.0})};
    for (const auto& u : h.sample_points) {
      CHECK(induced_geometry(h, u).second_form.norm() < 1e-12);
      CHECK(tgeod_residual(h, u) < 1e-8);
    }
    const Gauge g = totally_geodesic_gauge(h);
    for (const auto& k : g.kappa) CHECK(std::abs(k) < 1e-12);
  }

  TEST_CASE("generic graph is not umbilic and the gauge refuses it") {
    HypersurfaceSpec h = surface(flat4(), {"a", "b", "c", "0.1*a^2+0.3*b*c"}, "t-0.1*x^2-0.3*y*z");
    h.sample_points = {point_of({0.4, 0.3, -0.2})};
    CHECK(induced_geometry(h, h.sample_points[0]).umbilic_residual > 0.01);
    try {
      totally_geodesic_gauge(h);
      FAIL("expected NotUmbilic");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotUmbilic);
    }
  }

  TEST_CASE("totally geodesic gauge for the unit sphere") {
    HypersurfaceSpec h = unit_sphere();
    h.sample_points = kSpherePoints;
    const Gauge g = totally_geodesic_gauge(h);
    const HypersurfaceSpec gauged = with_ambient(h, g.rescaled);
    for (const auto& u : kSpherePoints) {
      const ShapeData s = induced_geometry(gauged, u);
      CHECK(s.second_form.norm() < 1e-6);
      CHECK(tgeod_residual(gauged, u) < 1e-8);
    }
  }

  TEST_CASE("gauge scale must match the umbilic factor") {
    HypersurfaceSpec h = unit_sphere();
    h.sample_points = kSpherePoints;
    h.gauge_scale = Expr::parse("0.123");
    try {
      totally_geodesic_gauge(h);
      FAIL("expected HypothesisViolated");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::HypothesisViolated);
    }
  }

  TEST_CASE("flat ambient hyperplane gives vanishing theorem residuals") {
    HypersurfaceSpec h = surface(flat4(), {"a", "b", "c", "0"}, "t");
    h.sample_points = {point_of({0.1, 0.2, 0.3}), point_of({-0.4, 0.0, 0.5})};
    for (const auto& s : thm1_check(h, Thm1Options{})) {
      CHECK(s.weyl_plus_norm < 1e-10);
      CHECK(s.cyw_lhs_norm < 1e-10);
      CHECK(s.cyw_rhs_norm < 1e-10);
      CHECK(s.cm_norm < 1e-10);
      CHECK(s.cplus_norm < 1e-10);
    }
  }

  TEST_CASE("non-self-dual ambient is rejected") {
    const MetricChart c = testing::diagonal_chart({"r", "t", "th", "ph"}, {"1/(1-2/r)", "1-2/r", "r^2", "r^2*sin(th)^2"});
    HypersurfaceSpec h = surface(c, {"4", "a", "b", "c"}, "r-4");
    h.sample_points = {point_of({0.1, 1.2, 0.3})};
    try {
      thm1_check(h, Thm1Options{});
      FAIL("expected AmbientNotSelfDual or NotUmbilic");
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::AmbientNotSelfDual || e.code() == ErrorCode::NotUmbilic));
    }
  }
}
