#include <doctest.h>

#include <array>

#include "confgeo/curvature.hpp"
#include "confgeo/error.hpp"
#include "confgeo/fourdim.hpp"
#include "confgeo/frame.hpp"
#include "confgeo/random_metric.hpp"
#include "support.hpp"

using namespace confgeo;
using testing::point_of;

namespace {

MetricChart schwarzschild() {
  return testing::diagonal_chart({"r", "t", "th", "ph"}, {"1/(1-2*m/r)", "1-2*m/r", "r^2", "r^2*sin(th)^2"},
                                 Mode::Real, {{"m", Scalar(1.0)}});
}

MetricChart pedersen() {
  const std::string grr = "(1+m2*rho^2)/(1+m2*rho^4)", B = "rho^2*(1+m2*rho^2)/4",
                    C = "rho^2*(1+m2*rho^4)/(1+m2*rho^2)/4";
  MetricChart c = testing::chart_of({"rho", "th", "ph", "ps"},
                                    {grr, "0", "0", "0", "", B, "0", "0", "", "", B + "*sin(th)^2+" + C + "*cos(th)^2",
                                     C + "*cos(th)", "", "", "", C},
                                    Mode::Real, {{"m2", Scalar(-0.75)}});
  c.orientation = -1;
  return c;
}

int levi_civita(std::array<int, 4> p) {
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

// Hodge star of a 2-form in a constant diagonal metric, written out directly.
Tensor star_diagonal(const Tensor& a, const std::array<double, 4>& diag) {
  const double vol = std::sqrt(std::abs(diag[0] * diag[1] * diag[2] * diag[3]));
  Tensor out(4, "dd");
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      Scalar s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += 0.5 * a(i, j) / (diag[i] * diag[j]) * double(levi_civita({i, j, c, d}));
      out(c, d) = s * vol;
    }
  return out;
}

}  // namespace

TEST_SUITE("fourdim") {
  TEST_CASE("Hodge star on two-forms matches the Levi-Civita formula") {
    for (const auto& diag : {std::array<double, 4>{1, 1, 1, 1}, std::array<double, 4>{1, 1, -1, -1},
                             std::array<double, 4>{2, 0.5, 3, 1.5}}) {
      Matrix g = Matrix::Zero(4, 4);
      for (int i = 0; i < 4; ++i) g(i, i) = diag[i];
      Rng rng(9);
      Tensor a(4, "dd");
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          a(i, j) = rng.normal();
          a(j, i) = -a(i, j);
        }
      CHECK(testing::max_abs_diff(hodge_star(a, g, 1, Mode::Real), star_diagonal(a, diag)) < 1e-13);
      const Lambda2 l2 = lambda2(g, 1, Mode::Real);
      CHECK((l2.star * l2.star - Matrix::Identity(6, 6)).norm() < 1e-12);
    }
  }

  TEST_CASE("Lorentzian signature has no real self-dual split") {
    Matrix g = Matrix::Identity(4, 4);
    g(0, 0) = -1.0;
    try {
      lambda2(g, 1, Mode::Real);
      FAIL("expected LorentzianUnsupported");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LorentzianUnsupported);
    }
  }

  TEST_CASE("conformally flat metrics have W+ = W- = 0") {
    const MetricChart c = testing::diagonal_chart({"x", "y", "z", "t"}, {"1/t^2", "1/t^2", "1/t^2", "1/t^2"});
    const CurvaturePack p = curvature(MetricField(c), point_of({0.1, 0.2, 0.3, 1.2}), 3);
    const WeylSplit w = weyl_pm(p, lambda2(p.g, 1, Mode::Real));
    CHECK(w.plus.max_abs() < 1e-8);
    CHECK(w.minus.max_abs() < 1e-8);
  }

  TEST_CASE("Schwarzschild is not half flat and orientation swaps the halves") {
    const CurvaturePack p = curvature(MetricField(schwarzschild()), point_of({4, 0, 1.1, 0.3}), 3);
    const WeylSplit a = weyl_pm(p, lambda2(p.g, 1, Mode::Real));
    const WeylSplit b = weyl_pm(p, lambda2(p.g, -1, Mode::Real));
    CHECK(a.plus.norm() > 1e-3);
    CHECK(a.minus.norm() > 1e-3);
    CHECK(std::abs(a.plus.norm() - a.minus.norm()) < 1e-6 * a.plus.norm());
    CHECK(testing::max_abs_diff(a.plus, b.minus) < 1e-12);
    CHECK(testing::max_abs_diff(a.plus + a.minus, p.weyl) < 1e-12);
  }

  TEST_CASE("Pedersen metric is self-dual with its orientation") {
    const MetricChart c = pedersen();
    const MetricField f(c);
    for (const Point& x : {point_of({0.7, 1.0, 0.3, 0.2}), point_of({0.95, 0.6, -1.0, 2.0})}) {
      const CurvaturePack p = curvature(f, x, 3);
      const WeylSplit w = weyl_pm(p, lambda2(p.g, c.orientation, Mode::Real));
      CHECK(w.plus.norm() > 1.0);
      CHECK(w.minus.norm() < 1e-6 * w.plus.norm());
      const CottonSplit s = cy_pm(p.cotton, lambda2(p.g, c.orientation, Mode::Real));
      CHECK(s.minus.norm() < 1e-6 * (p.cotton.norm() + 1e-12));
    }
  }

  TEST_CASE("frame formula for W+- and the scalar curvature trace on random metrics") {
    Rng rng(606);
    RandomMetricOptions o;
    o.dim = 4;
    for (int i = 0; i < 10; ++i) {
      if (i >= 5) o.signature = {2, 2};
      const MetricChart c = random_metric(rng, o, "r");
      const Point& x = c.sample_points.front();
      const CurvaturePack p = curvature(MetricField(c), x, 3);
      const Lambda2 l2 = lambda2(p.g, 1, Mode::Real);
      const WeylSplit w = weyl_pm(p, l2);
      const ArwCheck a = check_arw(p, w, orthonormal_frame(p.g, Mode::Real, x), 1);
      // The frame formula assumes g(e, e) = +1 for every frame vector.
      if (i < 5) {
        CHECK(a.max_plus < 1e-9 * a.scale);
        CHECK(a.max_minus < 1e-9 * a.scale);
      }
      CHECK(std::abs(p.scal - 4.0 * w.trace_plus) < 1e-8 * (std::abs(p.scal) + 1.0));
      CHECK(w.projector_check < 1e-12);

      const CottonSplit s = cy_pm(p.cotton, l2);
      CHECK(testing::max_abs_diff(s.plus + s.minus, p.cotton) < 1e-12 * (p.cotton.max_abs() + 1.0));
      const DivWeylSplit d = div_weyl_pm(p, l2);
      CHECK((d.plus - s.plus).norm() < 1e-6 * (p.cotton.norm() + 1e-12));
      CHECK((d.minus - s.minus).norm() < 1e-6 * (p.cotton.norm() + 1e-12));
    }
  }

  TEST_CASE("star Ricci identity in dimension three") {
    const char* s3 = "4/(1+x^2+y^2+z^2)^2";
    const MetricChart c = testing::diagonal_chart({"x", "y", "z"}, {s3, s3, s3});
    const Point x = point_of({0.3, -0.2, 0.5});
    const StarRicci s = star_ricci_3d(curvature(MetricField(c), x, 2), 1, Mode::Real);
    CHECK(s.residual < 1e-10);
    CHECK((s.rhs - Matrix::Identity(3, 3)).norm() < 1e-10);

    Rng rng(707);
    RandomMetricOptions o;
    o.dim = 3;
    o.signature = {3, 0};
    for (int i = 0; i < 5; ++i) {
      const MetricChart r = random_metric(rng, o, "r");
      CHECK(star_ricci_3d(curvature(MetricField(r), r.sample_points.front(), 2), 1, Mode::Real).residual < 1e-7);
    }
  }

  TEST_CASE("isotropic plane classification") {
    Matrix eta = Matrix::Identity(4, 4);
    eta(2, 2) = eta(3, 3) = -1.0;
    const Lambda2 l2 = lambda2(eta, 1, Mode::Real);
    Vector x = Vector::Zero(4), y = Vector::Zero(4);
    x[0] = x[2] = 1.0;
    y[1] = y[3] = 1.0;
    const PlaneClass pc = classify_isotropic_plane(x, y, l2);
    CHECK(pc.kind != PlaneKind::NotIsotropic);
    // direct star evaluation of the bivector decides the class
    Tensor form(4, "dd");
    const Vector b = bivector_form(x, y, eta);
    const auto& pairs = pair_basis(4);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      form(pairs[k].first, pairs[k].second) = b[k];
      form(pairs[k].second, pairs[k].first) = -b[k];
    }
    const Tensor st = star_diagonal(form, {1, 1, -1, -1});
    const int sign = testing::max_abs_diff(st, form) < 1e-12 ? 1 : (testing::max_abs_diff(st, -1.0 * form) < 1e-12 ? -1 : 0);
    CHECK(sign != 0);
    CHECK(pc.star_eigenvalue == sign);
    CHECK(pc.kind == (sign == 1 ? PlaneKind::Alpha : PlaneKind::Beta));

    const Lambda2 e = lambda2(Matrix::Identity(4, 4), 1, Mode::Real);
    CHECK(classify_isotropic_plane(Vector::Unit(4, 0), Vector::Unit(4, 1), e).kind == PlaneKind::NotIsotropic);

    const Lambda2 c = lambda2(Matrix::Identity(4, 4), 1, Mode::Complex);
    Vector u = Vector::Zero(4), v = Vector::Zero(4);
    u[0] = 1.0;
    u[1] = Scalar(0, 1);
    v[2] = 1.0;
    v[3] = Scalar(0, 1);
    CHECK(classify_isotropic_plane(u, v, c).kind != PlaneKind::NotIsotropic);
  }
}
