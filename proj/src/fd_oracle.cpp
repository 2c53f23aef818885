#include "confgeo/fd_oracle.hpp"

#include <cmath>
#include <functional>

#include "confgeo/chart.hpp"
#include "confgeo/curvature.hpp"
#include "confgeo/error.hpp"

namespace confgeo {

const char* to_string(FdQuantity q) {
  switch (q) {
    case FdQuantity::Christoffel: return "christoffel";
    case FdQuantity::Riemann: return "riemann";
    case FdQuantity::Ricci: return "ricci";
    case FdQuantity::H: return "h";
    case FdQuantity::Weyl: return "weyl";
    case FdQuantity::NablaH: return "nabla_h";
    case FdQuantity::Cotton: return "cotton";
    case FdQuantity::NablaWeyl: return "nabla_weyl";
    case FdQuantity::DivWeyl: return "div_weyl";
  }
  return "?";
}

int fd_depth(FdQuantity q) {
  switch (q) {
    case FdQuantity::Christoffel: return 1;
    case FdQuantity::Riemann:
    case FdQuantity::Ricci:
    case FdQuantity::H:
    case FdQuantity::Weyl: return 2;
    default: return 3;
  }
}

namespace {

using Field = std::function<Tensor(const Point&)>;

// d_a F for every component with the derivative slot first:
// (-F(x+2h) + 8F(x+h) - 8F(x-h) + F(x-2h)) / 12h.
Tensor central_gradient(const Field& f, const Point& x, double h) {
  const int n = static_cast<int>(x.size());
  Tensor out;
  for (int a = 0; a < n; ++a) {
    auto shifted = [&](double k) {
      Point y = x;
      y[a] += k * h;
      return f(y);
    };
    Tensor d = (shifted(-2.0) - shifted(2.0) + (shifted(1.0) - shifted(-1.0)) * 8.0) * (1.0 / (12.0 * h));
    if (a == 0) out = Tensor(n, "d" + d.variance());
    const std::size_t m = d.size();
    for (std::size_t i = 0; i < m; ++i) out.data()[a * m + i] = d.data()[i];
  }
  return out;
}

struct Oracle {
  const MetricField& field;
  double h;
  int n;

  Tensor metric(const Point& x) const {
    Matrix g = field.value(x);
    Tensor t(n, "dd");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = g(i, j);
    return t;
  }

  Matrix inverse(const Point& x) const {
    Matrix g = field.value(x);
    check_nondegenerate(g);
    return g.inverse();
  }

  Tensor gamma(const Point& x) const {
    const Tensor dg = central_gradient([this](const Point& y) { return metric(y); }, x, h);
    const Matrix ginv = inverse(x);
    Tensor out(n, "udd");
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Scalar acc = 0.0;
          for (int k = 0; k < n; ++k) acc += ginv(l, k) * (dg(i, j, k) + dg(j, i, k) - dg(k, i, j));
          out(l, i, j) = 0.5 * acc;
        }
    return out;
  }

  // R^l_ijk stored as (i,j,k,l).
  Tensor riemann(const Point& x) const {
    const Tensor G = gamma(x);
    const Tensor dG = central_gradient([this](const Point& y) { return gamma(y); }, x, h);
    Tensor out(n, "dddu");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Scalar acc = dG(i, l, j, k) - dG(j, l, i, k);
            for (int m = 0; m < n; ++m) acc += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
            out(i, j, k, l) = acc;
          }
    return out;
  }

  Tensor ricci(const Point& x) const {
    const Tensor R = riemann(x);
    Tensor out(n, "dd");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) out(j, k) += R(i, j, k, i);
    return out;
  }

  Tensor schouten(const Point& x, const Tensor& ric) const {
    const Matrix g = field.value(x);
    const Matrix ginv = g.inverse();
    const Scalar scal = trace(ric, ginv);
    Tensor out(n, "dd");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Scalar r0 = ric(j, k) - scal * g(j, k) / double(n);
        out(j, k) = scal * g(j, k) / (2.0 * n * (n - 1)) + r0 / double(n - 2);
      }
    return out;
  }

  Tensor h_tensor(const Point& x) const { return schouten(x, ricci(x)); }

  Tensor weyl(const Point& x) const {
    const Tensor R = riemann(x);
    const Matrix g = field.value(x);
    Tensor ric(n, "dd");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) ric(j, k) += R(i, j, k, i);
    return lower_index(R, 3, g) - wedge_with_identity(schouten(x, ric), g);
  }

  // Covariant derivative of a covariant tensor field.
  Tensor nabla(const Field& f, const Point& x) const {
    const Tensor t = f(x);
    Tensor out = central_gradient(f, x, h);
    const Tensor G = gamma(x);
    const int r = t.rank();
    std::vector<int> src(r);
    for_each_index(n, r + 1, [&](std::span<const int> idx) {
      Scalar acc = 0.0;
      for (int s = 0; s < r; ++s) {
        for (int q = 0; q < r; ++q) src[q] = idx[q + 1];
        for (int m = 0; m < n; ++m) {
          src[s] = m;
          acc -= G(m, idx[0], idx[s + 1]) * t.at(src);
        }
      }
      out.at(idx) += acc;
    });
    return out;
  }

  Tensor nabla_h(const Point& x) const {
    return nabla([this](const Point& y) { return h_tensor(y); }, x);
  }

  Tensor nabla_weyl(const Point& x) const {
    return nabla([this](const Point& y) { return weyl(y); }, x);
  }
};

}  // namespace

Tensor fd_oracle(const MetricField& field, FdQuantity q, const Point& point, double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    fail(ErrorCode::DomainTooSmall, "finite-difference step must be positive");
  const int n = field.dim();
  if (static_cast<int>(point.size()) != n) fail(ErrorCode::InvalidArgument, "point has the wrong dimension");
  const double margin = 2.0 * step * fd_depth(q);
  if (!field.chart().in_domain(point, margin))
    fail(ErrorCode::DomainTooSmall, "point is closer than " + std::to_string(margin) +
                                        " to the domain boundary of chart '" + field.chart().name + "'");
  if (n < 3 && q != FdQuantity::Christoffel && q != FdQuantity::Riemann && q != FdQuantity::Ricci)
    fail(ErrorCode::DimensionTooLow, "conformal quantities need dimension at least 3");

  Oracle o{field, step, n};
  switch (q) {
    case FdQuantity::Christoffel: return o.gamma(point);
    case FdQuantity::Riemann: return o.riemann(point);
    case FdQuantity::Ricci: return o.ricci(point);
    case FdQuantity::H: return o.h_tensor(point);
    case FdQuantity::Weyl: return o.weyl(point);
    case FdQuantity::NablaH: return o.nabla_h(point);
    case FdQuantity::Cotton: {
      const Tensor nh = o.nabla_h(point);
      Tensor c(n, "ddd");
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int cc = 0; cc < n; ++cc) c(a, b, cc) = nh(a, b, cc) - nh(b, a, cc);
      return c;
    }
    case FdQuantity::NablaWeyl: return o.nabla_weyl(point);
    case FdQuantity::DivWeyl: return weyl_divergence(o.nabla_weyl(point), o.inverse(point));
  }
  return {};
}

}  // namespace confgeo
