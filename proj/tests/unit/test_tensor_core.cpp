#include <doctest.h>

#include "confgeo/curvature.hpp"
#include "confgeo/error.hpp"
#include "confgeo/fd_oracle.hpp"
#include "confgeo/frame.hpp"
#include "confgeo/random_metric.hpp"
#include "support.hpp"

using namespace confgeo;
using testing::point_of;

namespace {

const char* kS3 = "4/(1+x^2+y^2+z^2)^2";
const char* kSchwR = "1/(1-2*m/r)";

MetricChart schwarzschild() {
  return testing::diagonal_chart({"r", "t", "th", "ph"}, {kSchwR, "1-2*m/r", "r^2", "r^2*sin(th)^2"}, Mode::Real,
                                 {{"m", Scalar(1.0)}});
}

}  // namespace

TEST_SUITE("tensor_core") {
  TEST_CASE("flat metrics have vanishing connection and curvature") {
    for (Mode mode : {Mode::Real, Mode::Complex}) {
      const MetricChart c = testing::diagonal_chart({"z", "w"}, {"1", "1"}, mode);
      const CurvaturePack p = curvature(MetricField(c), point_of({0.3, -0.2}), 3);
      CHECK(p.gamma.max_abs() == 0.0);
      CHECK(p.riemann.max_abs() == 0.0);
    }
  }

  TEST_CASE("upper half-plane Christoffel symbols") {
    const MetricChart c = testing::diagonal_chart({"x", "t"}, {"1/t^2", "1/t^2"});
    const MetricField f(c);
    const Point x = point_of({0, 1});
    const Tensor g = christoffel(f, x);
    CHECK(g(1, 0, 0).real() == doctest::Approx(1));
    CHECK(g(0, 0, 1).real() == doctest::Approx(-1));
    CHECK(g(0, 1, 0).real() == doctest::Approx(-1));
    CHECK(g(1, 1, 1).real() == doctest::Approx(-1));
    CHECK(testing::max_abs_diff(g, testing::christoffel_by_differences(f, x)) < 1e-9);
  }

  TEST_CASE("jet Christoffel symbols agree with value differences on random metrics") {
    Rng rng(101);
    for (int k = 0; k < 5; ++k) {
      RandomMetricOptions o;
      o.dim = 3 + k % 2;
      o.signature = {o.dim, 0};
      const MetricChart c = random_metric(rng, o, "r");
      const MetricField f(c);
      for (const auto& x : c.sample_points)
        CHECK(testing::max_abs_diff(christoffel(f, x), testing::christoffel_by_differences(f, x)) < 1e-8);
    }
  }

  TEST_CASE("round three-sphere has constant curvature one") {
    const MetricChart c = testing::diagonal_chart({"x", "y", "z"}, {kS3, kS3, kS3});
    const MetricField f(c);
    Rng rng(5);
    for (int k = 0; k < 5; ++k) {
      const Point x = random_point(rng, 3, 1.0, Mode::Real);
      const CurvaturePack p = curvature(f, x, 3);
      CHECK(p.scal.real() == doctest::Approx(6.0).epsilon(1e-10));
      CHECK(p.ricci0.max_abs() < 1e-10);
      CHECK(testing::max_abs_diff(p.riemann_low, testing::constant_curvature(p.g, 1.0)) < 1e-10);
      // h = g/2 in dimension 3
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(p.h(i, j) - 0.5 * p.g(i, j)) < 1e-10);
      CHECK(p.cotton.max_abs() < 1e-10);
    }
  }

  TEST_CASE("hyperbolic four-space is Einstein with Ric = -3g and conformally flat") {
    const MetricChart c = testing::diagonal_chart({"x", "y", "z", "t"}, {"1/t^2", "1/t^2", "1/t^2", "1/t^2"});
    const CurvaturePack p = curvature(MetricField(c), point_of({0.2, -0.1, 0.4, 1.7}), 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(std::abs(p.ricci(i, j) + 3.0 * p.g(i, j)) < 1e-8);
    CHECK(testing::max_abs_diff(p.riemann_low, testing::constant_curvature(p.g, -1.0)) < 1e-10);
    CHECK(p.weyl.max_abs() < 1e-8 * p.riemann_low.norm());
  }

  TEST_CASE("Riemannian Schwarzschild is Ricci flat but not conformally flat") {
    const CurvaturePack p = curvature(MetricField(schwarzschild()), point_of({4, 0, 1.1, 0.3}), 3);
    CHECK(p.ricci.max_abs() < 1e-12);
    CHECK(p.h.max_abs() < 1e-12);
    CHECK(p.cotton.max_abs() < 1e-12);
    CHECK(p.div_weyl.max_abs() < 1e-8);
    CHECK(p.weyl.norm() > 0.01 * p.riemann_low.norm());
  }

  TEST_CASE("Riemann symmetries and Weyl trace-freeness on random metrics") {
    Rng rng(202);
    for (int trial = 0; trial < 6; ++trial) {
      RandomMetricOptions o;
      o.dim = 4;
      if (trial % 3 == 1) o.signature = {2, 2};
      if (trial % 3 == 2) o.mode = Mode::Complex;
      const MetricChart c = random_metric(rng, o, "r");
      const CurvaturePack p = curvature(MetricField(c), c.sample_points.front(), 3);
      const Tensor& R = p.riemann_low;
      const double scale = R.norm();
      double worst = 0.0, trace = 0.0;
      for_each_index(4, 4, [&](std::span<const int> i) {
        const int a = i[0], b = i[1], cc = i[2], d = i[3];
        worst = std::max(worst, std::abs(R(a, b, cc, d) + R(b, a, cc, d)));
        worst = std::max(worst, std::abs(R(a, b, cc, d) + R(a, b, d, cc)));
        worst = std::max(worst, std::abs(R(a, b, cc, d) - R(cc, d, a, b)));
        worst = std::max(worst, std::abs(R(a, b, cc, d) + R(b, cc, a, d) + R(cc, a, b, d)));
      });
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          Scalar t = 0.0;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) t += p.ginv(k, l) * p.weyl(k, a, b, l);
          trace = std::max(trace, std::abs(t));
        }
      CHECK(worst < 1e-12 * scale);
      CHECK(trace < 1e-12 * scale);
    }
  }

  TEST_CASE("sign convention: sectional curvature of the sphere is positive") {
    const MetricChart c = testing::diagonal_chart({"th", "ph"}, {"1", "sin(th)^2"});
    const CurvaturePack p = curvature(MetricField(c), point_of({1.0, 0.0}), 2);
    // <R(d_th, d_ph) d_ph, d_th> = K |d_th|^2 |d_ph|^2
    CHECK(p.riemann_low(0, 1, 1, 0).real() == doctest::Approx(std::sin(1.0) * std::sin(1.0)));
    CHECK(p.scal.real() == doctest::Approx(2.0));
  }

  TEST_CASE("orthonormal frames") {
    const MetricChart split = testing::diagonal_chart({"x", "y", "z", "w"}, {"1", "1", "-1", "-1"});
    const MetricField fs(split);
    const Point o = point_of({0, 0, 0, 0});
    const PointFrame f = orthonormal_frame(fs.value(o), Mode::Real, o);
    CHECK(f.eps == std::vector<int>{1, 1, -1, -1});
    CHECK((f.basis - Matrix::Identity(4, 4)).norm() < 1e-14);

    const MetricChart h4 = testing::diagonal_chart({"x", "y", "z", "t"}, {"1/t^2", "1/t^2", "1/t^2", "1/t^2"});
    const Point q = point_of({0, 0, 0, 2});
    const PointFrame fh = orthonormal_frame(MetricField(h4).value(q), Mode::Real, q);
    CHECK((fh.basis - 2.0 * Matrix::Identity(4, 4)).norm() < 1e-14);

    Vector seed = Vector::Zero(4);
    seed[0] = 1.0;
    seed[2] = 1.0;
    try {
      orthonormal_frame(fs.value(o), Mode::Real, o, {seed});
      FAIL("expected NullSeed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NullSeed);
    }
  }

  TEST_CASE("finite-difference oracle") {
    const MetricChart flat = testing::diagonal_chart({"x", "y", "z", "w"}, {"1", "1", "1", "1"});
    const MetricField ff(flat);
    const Point o = point_of({0.1, 0.2, 0.3, 0.4});
    for (FdQuantity q : {FdQuantity::Christoffel, FdQuantity::Riemann, FdQuantity::Cotton, FdQuantity::DivWeyl})
      CHECK(fd_oracle(ff, q, o).max_abs() < 1e-11);

    // delta + 0.01 Q with Q quadratic
    const MetricChart c = testing::chart_of(
        {"x", "y", "z", "w"},
        {"1+0.01*(x^2+y*z)", "0.01*x*w", "0.01*y^2", "0", "", "1+0.01*z*w", "0.01*x*y", "0.01*w^2", "", "",
         "1+0.01*(x*z-w^2)", "0.01*y*z", "", "", "", "1+0.01*x^2"});
    const MetricField f(c);
    const CurvaturePack p = curvature(f, o, 3);
    CHECK(relative_residual(fd_oracle(f, FdQuantity::Riemann, o), p.riemann) < 1e-6);
    // nabla h is O(1e-4) here, so a wider stencil keeps roundoff below the truncation error.
    CHECK(relative_residual(fd_oracle(f, FdQuantity::NablaH, o, 2e-2), p.nabla_h) < 1e-6);
    CHECK(relative_residual(fd_oracle(f, FdQuantity::DivWeyl, o, 2e-2), p.div_weyl) < 1e-6);

    try {
      fd_oracle(f, FdQuantity::Riemann, o, 0.0);
      FAIL("expected DomainTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainTooSmall);
    }
  }

  TEST_CASE("degenerate and mis-signed metrics are rejected") {
    const MetricChart c = testing::diagonal_chart({"x", "y"}, {"x", "1"});
    try {
      curvature(MetricField(c), point_of({0, 0}), 2);
      FAIL("expected DegenerateMetric");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateMetric);
    }
    MetricChart s = testing::diagonal_chart({"x", "y"}, {"1", "-1"});
    s.signature = std::make_pair(2, 0);
    try {
      MetricField(s).checked_value(point_of({0, 0}));
      FAIL("expected SignatureMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SignatureMismatch);
    }
  }
}
